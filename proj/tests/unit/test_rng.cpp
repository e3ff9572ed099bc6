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
#include <doctest.h>

#include <cmath>

#include "authsim/rng.hpp"

using namespace authsim;

TEST_CASE("streams are reproducible and purpose-separated") {
    RngStream a(42, 7, purpose::kChannel);
    RngStream b(42, 7, purpose::kChannel);
    RngStream c(42, 7, purpose::kEveAlice);
    RngStream d(42, 8, purpose::kChannel);
    bool purpose_differs = false, trial_differs = false;
    for (int i = 0; i < 64; ++i) {
        const double va = a.uniform();
        CHECK(va == b.uniform());
        if (va != c.uniform()) purpose_differs = true;
        if (va != d.uniform()) trial_differs = true;
    }
    CHECK(purpose_differs);
    CHECK(trial_differs);
}

TEST_CASE("uniform moments") {
    RngStream rng(1, 0, purpose::kOracle);
    const long n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (long i = 0; i < n; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sum2 += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
    CHECK(sum2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.005));
}

TEST_CASE("complex normal moments") {
    RngStream rng(2, 0, purpose::kOracle);
    const long n = 1'000'000;
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0, cross = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto z = rng.cnormal();
        re += z.real();
        im += z.imag();
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
        cross += z.real() * z.imag();
    }
    CHECK(std::abs(re / n) < 3.0 / std::sqrt(2.0 * n));
    CHECK(std::abs(im / n) < 3.0 / std::sqrt(2.0 * n));
    CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(cross / n) < 0.005);
}
