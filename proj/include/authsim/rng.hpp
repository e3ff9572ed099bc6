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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace authsim {

// Counter-based generator (Philox 4x32-10, Salmon et al. 2011). One root seed
// spawns an independent stream per (trial, purpose) pair, so any trial can be
// regenerated in isolation and workers never share generator state.
class Philox4x32 {
  public:
    Philox4x32(uint32_t key0, uint32_t key1) : key0_(key0), key1_(key1) {
        ctr_[0] = ctr_[1] = ctr_[2] = ctr_[3] = 0;
    }

    // Next 4x32 block.
    void next_block(uint32_t out[4]) {
        uint32_t c[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
        uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = uint64_t{0xD2511F53u} * c[0];
            const uint64_t p1 = uint64_t{0xCD9E8D57u} * c[2];
            const uint32_t lo0 = static_cast<uint32_t>(p0), hi0 = static_cast<uint32_t>(p0 >> 32);
            const uint32_t lo1 = static_cast<uint32_t>(p1), hi1 = static_cast<uint32_t>(p1 >> 32);
            const uint32_t n0 = hi1 ^ c[1] ^ k0;
            const uint32_t n1 = lo1;
            const uint32_t n2 = hi0 ^ c[3] ^ k1;
            const uint32_t n3 = lo0;
            c[0] = n0; c[1] = n1; c[2] = n2; c[3] = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out[0] = c[0]; out[1] = c[1]; out[2] = c[2]; out[3] = c[3];
        if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
    }

  private:
    uint32_t key0_, key1_;
    uint32_t ctr_[4];
};

namespace purpose {
// Stream purposes used by trace generation and the trial runners.
inline constexpr uint32_t kChannel = 0;     // h(1) init and AR innovations
inline constexpr uint32_t kEveAlice = 1;    // z1 innovations of g1
inline constexpr uint32_t kEveBob = 2;      // z2 innovations of g2
inline constexpr uint32_t kAliceNoise = 3;  // w_A estimation noise
inline constexpr uint32_t kBobNoise = 4;    // w_B estimation noise
inline constexpr uint32_t kEveNoise = 5;    // w_E estimation noise
inline constexpr uint32_t kAttack = 6;      // residual noise of the forged packet
inline constexpr uint32_t kCodebook = 7;    // codebook construction
inline constexpr uint32_t kOracle = 100;    // test-side sampling oracles
} // namespace purpose

/// Deterministic random stream identified by (seed, trial, purpose).
class RngStream {
  public:
    RngStream(uint64_t seed, uint64_t trial, uint32_t purpose)
        : engine_(derive_key(seed, trial, purpose)) {}

    /// Uniform on [0, 1) with 53-bit resolution. Each engine block yields two
    /// values; the second is cached.
    double uniform() {
        if (have_next_) {
            have_next_ = false;
            return next_;
        }
        uint32_t b[4];
        engine_.next_block(b);
        next_ = to_unit(b[2], b[3]);
        have_next_ = true;
        return to_unit(b[0], b[1]);
    }

    /// Standard normal via Box-Muller (second value of each pair is cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Circularly-symmetric complex normal CN(0,1): Re, Im ~ N(0, 1/2).
    std::complex<double> cnormal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1)); // sqrt(-2 ln u) * sqrt(1/2)
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    static uint64_t mix64(uint64_t x) {
        // splitmix64 finalizer
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    static Philox4x32 derive_key(uint64_t seed, uint64_t trial, uint32_t purpose) {
        uint64_t k = mix64(seed);
        k = mix64(k ^ trial);
        k = mix64(k ^ purpose);
        return Philox4x32(static_cast<uint32_t>(k), static_cast<uint32_t>(k >> 32));
    }

    static double to_unit(uint64_t hi, uint64_t lo) {
        const uint64_t bits = ((hi << 32) | lo) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

    Philox4x32 engine_;
    double next_ = 0.0;
    bool have_next_ = false;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace authsim
