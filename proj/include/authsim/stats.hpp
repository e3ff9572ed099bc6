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
#include <cstdint>
#include <stdexcept>

namespace authsim {

struct WilsonInterval {
    double estimate;
    double lo;
    double hi;
};

/// Wilson score interval for a binomial proportion; stable near 0 and 1.
/// Default z is the two-sided 95% normal quantile.
inline WilsonInterval wilson_interval(uint64_t successes, uint64_t trials, double z = 1.959963985) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be >= 1");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Binomial Monte Carlo estimate with its Wilson 95% interval.
struct McEstimate {
    double estimate;
    double lo;
    double hi;
    uint64_t events;
    uint64_t trials;
};

inline McEstimate make_mc_estimate(uint64_t events, uint64_t trials) {
    const WilsonInterval w = wilson_interval(events, trials);
    return {w.estimate, w.lo, w.hi, events, trials};
}

} // namespace authsim
