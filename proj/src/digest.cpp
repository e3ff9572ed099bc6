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
#include "authsim/digest.hpp"

#include <openssl/sha.h>
#include <stdexcept>

#include "authsim/errors.hpp"

namespace authsim::digest {

Digest hash_bytes(std::span<const uint8_t> data, const HashConfig& config) {
    if (config.name != "sha256")
        throw ConfigError("hash: unknown algorithm '" + config.name + "' (expected sha256)");
    Digest out{};
    SHA256(data.data(), data.size(), out.data());
    return out;
}

std::string to_hex(const Digest& d) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (uint8_t b : d) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

std::vector<bool> truncate_bits(const Digest& d, int bits) {
    if (bits < 0 || bits > 256) throw std::invalid_argument("truncate_bits: bits must lie in [0,256]");
    std::vector<bool> out;
    out.reserve(bits);
    for (int i = 0; i < bits; ++i) out.push_back((d[i / 8] >> (7 - i % 8)) & 1);
    return out;
}

} // namespace authsim::digest
