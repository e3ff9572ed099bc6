/*
   Copyright 2026 the authsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace authsim::digest {

using Digest = std::array<uint8_t, 32>;

/// Hash selection by name; "sha256" is the only algorithm currently wired.
struct HashConfig {
    std::string name = "sha256";
};

Digest hash_bytes(std::span<const uint8_t> data, const HashConfig& config = {});

std::string to_hex(const Digest& d);

/// First `bits` bits of the digest, most significant bit of each byte first.
std::vector<bool> truncate_bits(const Digest& d, int bits);

} // namespace authsim::digest
