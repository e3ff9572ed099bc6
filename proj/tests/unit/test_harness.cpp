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
#include <sstream>

#include "authsim/harness.hpp"
#include "support/oracles.hpp"

using namespace authsim;
using namespace authsim::harness;

namespace {

std::string pla_text(uint64_t trials, uint64_t seed) {
    std::ostringstream s;
    s << "scheme = pla\ntrials = " << trials << "\nseed = " << seed << "\n"
      << "[scenario]\nantennas = 2\nalpha = 0.9\nbeta1 = 0.7\nbeta2 = 0.7\n"
      << "sigma_a = 0.1\nsigma_b = 0.1\nsigma_e = 0.3\n"
      << "[pla]\nslot = 3\ntheta = 1.1\nvariance_mode = exact\n";
    return s.str();
}

bool mentions(const ConfigError& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("minimal config parses with defaults") {
    const ExperimentConfig cfg = load_config("scheme = pla\n");
    CHECK(cfg.scheme == Scheme::Pla);
    CHECK(cfg.trials == 10000);
    CHECK(cfg.workers == 1);
    CHECK(cfg.pla.slot == 3);
    CHECK(cfg.pla.theta == doctest::Approx(1.0));
    CHECK(cfg.pla.mode == pla::VarianceMode::Exact);
    CHECK(cfg.scenario.schedule.length() == 3);
    CHECK(cfg.scenario.schedule.tx_at(1) == channel::Transmitter::Bob);
    CHECK(!cfg.sweep.has_value());

    const ExperimentConfig akba = load_config("scheme = akba\n");
    CHECK(akba.scenario.schedule.tx_at(1) == channel::Transmitter::Alice);
    CHECK(akba.scenario.schedule.length() == 2);
}

TEST_CASE("validation errors name the offending key") {
    try {
        load_config("scheme = pla\n[scenario]\nalpha = 1.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "alpha"));
    }
    try {
        load_config("scheme = pla\n[pla]\ntheta = 1.0\n[skba]\nstep = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "scheme"));
    }
    try {
        load_config("scheme = pla\nbogus_key = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "bogus_key"));
    }
    try {
        load_config("scheme = pla\ntrials = 0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "trials"));
    }
    try {
        load_config("scheme = pla\n[sweep]\nparam = theta\ngrid = 2:1:5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "grid"));
    }
    try {
        load_config("scheme = pla\n[sweep]\nparam = nonsense\ngrid = 1:2:3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(mentions(e, "nonsense"));
    }
    CHECK_THROWS_AS(load_config("scheme = pla\nscheme = akba\n"), ConfigError); // duplicate
    CHECK_THROWS_AS(load_config(""), ConfigError);                             // no scheme
}

TEST_CASE("grid parsing") {
    const auto g = parse_grid("0.5:1.5:5");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(0.5));
    CHECK(g.back() == doctest::Approx(1.5));
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK(parse_grid("2:2:1") == std::vector<double>{2.0});
    CHECK_THROWS_AS(parse_grid("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_grid("1:2:0"), ConfigError);
    CHECK_THROWS_AS(parse_grid("a:b:c"), ConfigError);
}

TEST_CASE("single-trial experiment yields a sane degenerate row") {
    ExperimentConfig cfg = load_config(pla_text(1, 5));
    const ResultTable t = run_experiment(cfg);
    REQUIRE(t.rows.size() == 1);
    const ResultRow& r = t.rows[0];
    CHECK(r.trials == 1);
    CHECK(r.fa_lo <= r.fa);
    CHECK(r.fa <= r.fa_hi);
    CHECK(r.md_lo <= r.md);
    CHECK(r.md <= r.md_hi);
    CHECK(r.fa_hi <= 1.0);
    CHECK(r.md_hi <= 1.0);
}

TEST_CASE("experiments are deterministic across reruns and worker counts") {
    ExperimentConfig cfg = load_config(pla_text(3000, 99));
    const std::string once = csv_string(run_experiment(cfg));
    const std::string twice = csv_string(run_experiment(cfg));
    CHECK(once == twice);
    cfg.workers = 4;
    CHECK(csv_string(run_experiment(cfg)) == once);

    ExperimentConfig skba = load_config(
        "scheme = skba\ntrials = 2000\nseed = 4\n[skba]\ncodebook = random-gaussian\nsize = 32\n");
    const std::string s1 = csv_string(run_experiment(skba));
    skba.workers = 8;
    CHECK(csv_string(run_experiment(skba)) == s1);
}

TEST_CASE("threshold sweep is monotone by construction and tracks the analytics") {
    ExperimentConfig cfg = load_config(pla_text(20'000, 17));
    const auto grid = parse_grid("0.5:1.6:6");
    const ResultTable t = sweep_threshold(cfg, grid);
    REQUIRE(t.rows.size() == grid.size());
    for (size_t i = 1; i < t.rows.size(); ++i) {
        CHECK(t.rows[i].fa <= t.rows[i - 1].fa);
        CHECK(t.rows[i].md >= t.rows[i - 1].md);
    }
    for (const ResultRow& r : t.rows) {
        REQUIRE(r.fa_analytic.has_value());
        REQUIRE(r.md_analytic.has_value());
        const auto fa_events = static_cast<uint64_t>(std::llround(r.fa * r.trials));
        const auto md_events = static_cast<uint64_t>(std::llround(r.md * r.trials));
        CHECK(oracles::within_3sigma(fa_events, r.trials, *r.fa_analytic));
        CHECK(oracles::within_3sigma(md_events, r.trials, *r.md_analytic));
    }
    CHECK_THROWS_AS(sweep_threshold(cfg, std::vector<double>{2.0, 1.0}), ConfigError);
    ExperimentConfig akba = load_config("scheme = akba\n");
    CHECK_THROWS_AS(sweep_threshold(akba, grid), ConfigError);
}

TEST_CASE("akba rows report a structurally zero false alarm") {
    ExperimentConfig cfg =
        load_config("scheme = akba\ntrials = 400\nseed = 3\n[akba]\nlevels = 2\nv_sat = 1\n");
    const ResultTable t = run_experiment(cfg);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].fa == 0.0);
    CHECK(t.rows[0].fa_hi == 0.0);
    REQUIRE(t.rows[0].fa_analytic.has_value());
    CHECK(*t.rows[0].fa_analytic == 0.0);
    CHECK(!t.rows[0].md_analytic.has_value());
}

TEST_CASE("generic sweeps reuse trial seeds per point") {
    ExperimentConfig cfg = load_config(
        "scheme = skba\ntrials = 4000\nseed = 21\n[skba]\ncodebook = lattice\nstep = 1.0\n"
        "[sweep]\nparam = sigma_b\ngrid = 0.05:0.45:3\n");
    const ResultTable t = run_experiment(cfg);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0].param == doctest::Approx(0.05));
    CHECK(t.rows[2].param == doctest::Approx(0.45));
    // common random numbers: false alarms only accumulate as sigma_b grows
    CHECK(t.rows[0].fa <= t.rows[1].fa);
    CHECK(t.rows[1].fa <= t.rows[2].fa);
}

TEST_CASE("csv emission and round trip") {
    ResultTable empty;
    CHECK(csv_string(empty) == "param,fa,fa_lo,fa_hi,md,md_lo,md_hi,fa_analytic,md_analytic,trials,seed\n");

    ExperimentConfig cfg = load_config(pla_text(500, 123));
    cfg.sweep = SweepSpec{"theta", parse_grid("0.8:1.2:3")};
    const ResultTable t = run_experiment(cfg);
    const std::string csv = csv_string(t);
    CHECK(csv.find(',') != std::string::npos);
    CHECK(csv.find(';') == std::string::npos); // '.' decimal separator, ',' delimiter only

    std::istringstream in(csv);
    const ResultTable parsed = parse_csv(in);
    CHECK(csv_string(parsed) == csv);
}

TEST_CASE("wilson coverage on a rigged bernoulli scheme") {
    RngStream rng(23, 0, purpose::kOracle);
    const double p = 0.3;
    int covered = 0;
    const int experiments = 1000;
    for (int e = 0; e < experiments; ++e) {
        uint64_t hits = 0;
        const uint64_t n = 1000;
        for (uint64_t i = 0; i < n; ++i)
            if (rng.uniform() < p) ++hits;
        const WilsonInterval w = wilson_interval(hits, n);
        if (w.lo <= p && p <= w.hi) ++covered;
    }
    CHECK(covered / double(experiments) == doctest::Approx(0.95).epsilon(0.032));
}

TEST_CASE("apply_param rejects unknown names") {
    ExperimentConfig cfg = load_config("scheme = pla\n");
    CHECK_THROWS_AS(apply_param(cfg, "does_not_exist", 1.0), ConfigError);
    apply_param(cfg, "sigma_e", 0.4);
    CHECK(cfg.scenario.sigma_e == doctest::Approx(0.4));
}
