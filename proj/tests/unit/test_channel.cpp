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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "authsim/channel.hpp"

using namespace authsim;
using namespace authsim::channel;

namespace {

ScenarioParams base_params() {
    ScenarioParams p;
    p.antennas = 1;
    p.alpha = 0.9;
    p.beta1 = 0.6;
    p.beta2 = 0.7;
    p.sigma_a = 0.1;
    p.sigma_b = 0.2;
    p.sigma_e = 0.3;
    p.schedule = PilotSchedule::pla_default(3);
    p.seed = 11;
    return p;
}

} // namespace

TEST_CASE("init_channel sample moments") {
    RngStream rng(3, 0, purpose::kOracle);
    const long n = 1'000'000;
    double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0, norm = 0.0;
    for (long i = 0; i < n / 4; ++i) {
        const CVector h = init_channel(4, rng);
        for (const Complex& v : h) {
            re += v.real();
            im += v.imag();
            re2 += v.real() * v.real();
            im2 += v.imag() * v.imag();
            norm += std::norm(v);
        }
    }
    CHECK(norm / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(re / n) < 3.0 / std::sqrt(2.0 * n));
    CHECK(std::abs(im / n) < 3.0 / std::sqrt(2.0 * n));
}

TEST_CASE("evolve keeps the marginal and the AR correlation") {
    RngStream rng(4, 0, purpose::kOracle);

    // alpha = 1: degenerate AR, output identical
    const CVector h0 = init_channel(8, rng);
    CHECK(evolve(h0, 1.0, rng) == h0);
    CHECK_THROWS_AS(evolve(h0, 1.5, rng), std::domain_error);

    const long n = 1'000'000;
    for (double alpha : {0.0, 0.8}) {
        Complex corr1{0.0}; // lag-1
        Complex corr3{0.0}; // lag-3
        double var = 0.0;
        for (long i = 0; i < n; ++i) {
            CVector h = init_channel(1, rng);
            const Complex first = h[0];
            h = evolve(h, alpha, rng);
            corr1 += h[0] * std::conj(first);
            h = evolve(h, alpha, rng);
            h = evolve(h, alpha, rng);
            corr3 += h[0] * std::conj(first);
            var += std::norm(h[0]);
        }
        CHECK(std::abs(corr1 / static_cast<double>(n) - Complex{alpha}) < 0.01);
        CHECK(std::abs(corr3 / static_cast<double>(n) - Complex{std::pow(alpha, 3)}) < 0.01);
        CHECK(var / n == doctest::Approx(1.0).epsilon(0.01)); // stationarity
    }
}

TEST_CASE("derive_eve_channel correlation") {
    RngStream rng(5, 0, purpose::kOracle);
    const CVector h = init_channel(4, rng);
    CHECK(derive_eve_channel(h, 1.0, rng) == h);

    const long n = 500'000;
    for (double beta : {0.0, 0.4, 0.9}) {
        Complex corr{0.0};
        double var = 0.0;
        for (long i = 0; i < n; ++i) {
            const CVector hh = init_channel(1, rng);
            const CVector g = derive_eve_channel(hh, beta, rng);
            corr += g[0] * std::conj(hh[0]);
            var += std::norm(g[0]);
        }
        CHECK(std::abs(corr / static_cast<double>(n) - Complex{beta}) < 0.01);
        CHECK(var / n == doctest::Approx(1.0).epsilon(0.012));
    }
}

TEST_CASE("observe noise moments and independence") {
    RngStream rng(6, 0, purpose::kOracle);
    const CVector h = init_channel(4, rng);
    CHECK(observe(h, 0.0, rng) == h);

    const long n = 500'000;
    const double sigma = 0.35;
    double err2 = 0.0;
    Complex cross{0.0};
    for (long i = 0; i < n; ++i) {
        const CVector truth = init_channel(1, rng);
        const CVector y1 = observe(truth, sigma, rng);
        const CVector y2 = observe(truth, sigma, rng);
        err2 += std::norm(y1[0] - truth[0]);
        cross += (y1[0] - truth[0]) * std::conj(y2[0] - truth[0]);
    }
    CHECK(err2 / n == doctest::Approx(sigma * sigma).epsilon(0.01));
    CHECK(std::abs(cross / static_cast<double>(n)) < 0.01 * sigma * sigma);
}

TEST_CASE("generate_trace collapses when all randomness is removed") {
    ScenarioParams p = base_params();
    p.alpha = 1.0;
    p.beta1 = 1.0;
    p.beta2 = 1.0;
    p.sigma_a = p.sigma_b = p.sigma_e = 0.0;
    const ChannelTrace t = generate_trace(p);
    const CVector& h1 = t.h(1);
    for (int slot = 1; slot <= 3; ++slot) {
        CHECK(t.h(slot) == h1);
        CHECK(t.g1(slot) == h1);
        CHECK(t.g2(slot) == h1);
        CHECK(t.eve_estimate(slot) == h1);
    }
    CHECK(t.alice_estimate(1) == h1);
    CHECK(t.bob_estimate(2) == h1);
}

TEST_CASE("generate_trace is deterministic and fills estimates per schedule") {
    const ScenarioParams p = base_params();
    const ChannelTrace a = generate_trace(p, 3);
    const ChannelTrace b = generate_trace(p, 3);
    CHECK(a.h(2) == b.h(2));
    CHECK(a.eve_estimate(3) == b.eve_estimate(3));
    CHECK(a.alice_estimate(3) == b.alice_estimate(3));

    // PLA schedule over 3 slots: Alice estimates at 1 and 3, Bob at 2, Eve everywhere
    CHECK(a.has_alice_estimate(1));
    CHECK(!a.has_bob_estimate(1));
    CHECK(a.has_bob_estimate(2));
    CHECK(!a.has_alice_estimate(2));
    CHECK(a.has_alice_estimate(3));
    CHECK_THROWS_AS(a.bob_estimate(3), std::invalid_argument);

    // distinct trials differ
    const ChannelTrace c = generate_trace(p, 4);
    CHECK(a.h(1) != c.h(1));
}

TEST_CASE("generate_trace validates its configuration") {
    ScenarioParams p = base_params();
    p.schedule.tx.clear();
    CHECK_THROWS_AS(generate_trace(p), ConfigError);
    p = base_params();
    p.alpha = 1.5;
    CHECK_THROWS_AS(generate_trace(p), ConfigError);
}

TEST_CASE("eve estimate follows the transmitter of each slot") {
    ScenarioParams p = base_params();
    p.sigma_e = 0.0;
    p.schedule = PilotSchedule::akba_default(2);
    const ChannelTrace t = generate_trace(p, 1);
    CHECK(t.eve_estimate(1) == t.g1(1)); // Alice transmits at slot 1
    CHECK(t.eve_estimate(2) == t.g2(2)); // Bob transmits at slot 2
}

TEST_CASE("hold_first_pair freezes only the first step") {
    ScenarioParams p = base_params();
    p.schedule = PilotSchedule::akba_default(3);
    TraceOptions opt;
    opt.hold_first_pair = true;
    const ChannelTrace t = generate_trace(p, 0, opt);
    CHECK(t.h(2) == t.h(1));
    CHECK(t.h(3) != t.h(2));
}

TEST_CASE("trace CSV has one row per slot and entry") {
    ScenarioParams p = base_params();
    p.antennas = 2;
    std::ostringstream out;
    write_trace_csv(generate_trace(p), out);
    const std::string csv = out.str();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 4);
    CHECK(csv.find("slot,n,") == 0);
    CHECK(csv.find(",,") != std::string::npos); // absent estimates stay empty
}
