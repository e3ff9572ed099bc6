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
#include "authsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "authsim/format.hpp"
#include "authsim/stats.hpp"

namespace authsim::harness {

namespace {

// ---------------------------------------------------------------------------
// Config parsing: '#' comments, [section] headers, key = value lines.

struct RawConfig {
    // (section, key) -> value; "" is the top-level section
    std::map<std::pair<std::string, std::string>, std::string> values;
    std::vector<std::string> sections_seen;
    std::vector<std::string> errors;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                raw.errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            raw.sections_seen.push_back(section);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            raw.errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            raw.errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (!raw.values.emplace(std::make_pair(section, key), value).second)
            raw.errors.push_back("duplicate key '" + (section.empty() ? key : section + "." + key) + "'");
    }
    return raw;
}

class ConfigReader {
  public:
    explicit ConfigReader(RawConfig raw) : raw_(std::move(raw)) {
        errors_ = raw_.errors;
    }

    std::optional<std::string> take(const std::string& section, const std::string& key) {
        const auto it = raw_.values.find({section, key});
        if (it == raw_.values.end()) return std::nullopt;
        consumed_.insert(it->first);
        return it->second;
    }

    template <typename T, typename Parse>
    std::optional<T> take_as(const std::string& section, const std::string& key, Parse parse) {
        const auto v = take(section, key);
        if (!v) return std::nullopt;
        try {
            return parse(*v);
        } catch (const std::exception&) {
            fail(qualify(section, key) + ": cannot parse value '" + *v + "'");
            return std::nullopt;
        }
    }

    std::optional<double> take_double(const std::string& s, const std::string& k) {
        return take_as<double>(s, k, [](const std::string& v) {
            size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        });
    }

    std::optional<int64_t> take_int(const std::string& s, const std::string& k) {
        return take_as<int64_t>(s, k, [](const std::string& v) {
            size_t pos = 0;
            const int64_t i = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return i;
        });
    }

    std::optional<uint64_t> take_uint(const std::string& s, const std::string& k) {
        return take_as<uint64_t>(s, k, [](const std::string& v) {
            size_t pos = 0;
            const uint64_t u = std::stoull(v, &pos);
            if (pos != v.size() || v.front() == '-') throw std::invalid_argument(v);
            return u;
        });
    }

    std::optional<bool> take_bool(const std::string& s, const std::string& k) {
        return take_as<bool>(s, k, [](const std::string& v) {
            if (v == "true" || v == "1" || v == "yes") return true;
            if (v == "false" || v == "0" || v == "no") return false;
            throw std::invalid_argument(v);
        });
    }

    void fail(const std::string& message) { errors_.push_back(message); }

    bool section_seen(const std::string& name) const {
        return std::find(raw_.sections_seen.begin(), raw_.sections_seen.end(), name) !=
               raw_.sections_seen.end();
    }

    void finish() {
        for (const auto& s : raw_.sections_seen) {
            static const char* known[] = {"scenario", "pla", "akba", "skba", "sweep"};
            if (std::find(std::begin(known), std::end(known), s) == std::end(known))
                errors_.push_back("unknown section [" + s + "]");
        }
        for (const auto& [sk, value] : raw_.values) {
            if (!consumed_.contains(sk))
                errors_.push_back("unknown key '" + qualify(sk.first, sk.second) + "'");
        }
        if (!errors_.empty()) {
            std::string joined = "invalid configuration:";
            for (const auto& e : errors_) joined += "\n  - " + e;
            throw ConfigError(joined);
        }
    }

    static std::string qualify(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

  private:
    RawConfig raw_;
    std::set<std::pair<std::string, std::string>> consumed_;
    std::vector<std::string> errors_;
};

} // namespace

std::vector<double> parse_grid(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("grid: expected format a:b:steps, got '" + spec + "'");
    double a = 0, b = 0;
    long steps = 0;
    try {
        size_t p = 0;
        a = std::stod(spec.substr(0, c1), &p);
        b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1), &p);
        steps = std::stol(spec.substr(c2 + 1), &p);
    } catch (const std::exception&) {
        throw ConfigError("grid: cannot parse '" + spec + "'");
    }
    if (steps < 1) throw ConfigError("grid: steps must be >= 1");
    if (b < a) throw ConfigError("grid: endpoints must be ascending");
    std::vector<double> grid;
    grid.reserve(steps);
    if (steps == 1) {
        grid.push_back(a);
    } else {
        for (long i = 0; i < steps; ++i)
            grid.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    return grid;
}

ExperimentConfig load_config(const std::string& text) {
    ConfigReader r(parse_raw(text));
    ExperimentConfig cfg;

    const auto scheme_name = r.take("", "scheme");
    if (!scheme_name) {
        r.fail("scheme: required (pla, akba or skba)");
    } else if (*scheme_name == "pla") {
        cfg.scheme = Scheme::Pla;
    } else if (*scheme_name == "akba") {
        cfg.scheme = Scheme::Akba;
    } else if (*scheme_name == "skba") {
        cfg.scheme = Scheme::Skba;
    } else {
        r.fail("scheme: unknown value '" + *scheme_name + "'");
    }

    int scheme_sections = 0;
    for (const char* s : {"pla", "akba", "skba"})
        if (r.section_seen(s)) ++scheme_sections;
    if (scheme_sections > 1) r.fail("exactly one scheme section may be present");
    if (scheme_name) {
        for (const char* s : {"pla", "akba", "skba"})
            if (r.section_seen(s) && *scheme_name != s)
                r.fail(std::string("section [") + s + "] does not match scheme = " + *scheme_name);
    }

    if (const auto v = r.take_uint("", "trials")) cfg.trials = *v;
    if (cfg.trials < 1) r.fail("trials: must be >= 1");
    if (const auto v = r.take_int("", "workers")) cfg.workers = static_cast<int>(*v);
    if (cfg.workers < 1) r.fail("workers: must be >= 1");
    if (const auto v = r.take_uint("", "seed")) cfg.scenario.seed = *v;
    if (const auto v = r.take("", "out")) cfg.out_path = *v;

    if (const auto v = r.take_int("scenario", "antennas")) cfg.scenario.antennas = static_cast<int>(*v);
    if (const auto v = r.take_double("scenario", "alpha")) cfg.scenario.alpha = *v;
    if (const auto v = r.take_double("scenario", "beta1")) cfg.scenario.beta1 = *v;
    if (const auto v = r.take_double("scenario", "beta2")) cfg.scenario.beta2 = *v;
    if (const auto v = r.take_double("scenario", "sigma_a")) cfg.scenario.sigma_a = *v;
    if (const auto v = r.take_double("scenario", "sigma_b")) cfg.scenario.sigma_b = *v;
    if (const auto v = r.take_double("scenario", "sigma_e")) cfg.scenario.sigma_e = *v;

    // Scheme block.
    if (const auto v = r.take_int("pla", "slot")) cfg.pla.slot = static_cast<int>(*v);
    if (const auto v = r.take_double("pla", "theta")) cfg.pla.theta = *v;
    if (const auto v = r.take("pla", "variance_mode")) {
        try {
            cfg.pla.mode = pla::variance_mode_by_name(*v);
        } catch (const ConfigError& e) {
            r.fail(e.what());
        }
    }

    if (const auto v = r.take_int("akba", "levels")) cfg.akba.quantizer.levels = static_cast<int>(*v);
    if (const auto v = r.take_double("akba", "v_sat")) cfg.akba.quantizer.v_sat = *v;
    if (const auto v = r.take("akba", "hash")) cfg.akba.hash.name = *v;
    if (const auto v = r.take_int("akba", "attack_depth")) cfg.akba.attack_depth = static_cast<int>(*v);

    if (const auto v = r.take("skba", "codebook")) {
        if (*v == "random-gaussian")
            cfg.skba.codebook.kind = skba::CodebookKind::RandomGaussian;
        else if (*v == "lattice")
            cfg.skba.codebook.kind = skba::CodebookKind::Lattice;
        else
            r.fail("skba.codebook: unknown kind '" + *v + "' (expected random-gaussian or lattice)");
    }
    if (const auto v = r.take_uint("skba", "size")) cfg.skba.codebook.size = *v;
    if (const auto v = r.take_double("skba", "scale")) cfg.skba.codebook.scale = *v;
    if (const auto v = r.take_double("skba", "step")) cfg.skba.codebook.step = *v;
    if (const auto v = r.take_uint("skba", "codebook_seed")) cfg.skba.codebook.seed = *v;
    if (const auto v = r.take_int("skba", "key_bits")) cfg.skba.key_bits = static_cast<int>(*v);
    if (const auto v = r.take_double("skba", "lambda")) cfg.skba.lambda = *v;
    if (const auto v = r.take_bool("skba", "static_handshake")) cfg.skba.static_handshake = *v;
    if (const auto v = r.take_int("skba", "attack_depth")) cfg.skba.attack_depth = static_cast<int>(*v);

    // Schedule: default preset and length depend on the scheme.
    std::string schedule_name =
        cfg.scheme == Scheme::Pla ? "pla-default" : "akba-default";
    if (const auto v = r.take("scenario", "schedule")) schedule_name = *v;
    int slots = cfg.scheme == Scheme::Pla ? std::max(cfg.pla.slot, 1) : 2;
    if (const auto v = r.take_int("scenario", "slots")) slots = static_cast<int>(*v);
    if (slots < 1) {
        r.fail("slots: must be >= 1");
        slots = 1;
    }
    try {
        cfg.scenario.schedule = channel::PilotSchedule::by_name(schedule_name, slots);
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }

    if (r.section_seen("sweep") || r.take("sweep", "param") || r.take("sweep", "grid")) {
        SweepSpec sweep;
        if (const auto v = r.take("sweep", "param"))
            sweep.param = *v;
        else
            r.fail("sweep.param: required when a sweep is configured");
        if (const auto v = r.take("sweep", "grid")) {
            try {
                sweep.grid = parse_grid(*v);
            } catch (const ConfigError& e) {
                r.fail(e.what());
            }
        } else {
            r.fail("sweep.grid: required when a sweep is configured");
        }
        if (!sweep.param.empty() && !sweep.grid.empty()) cfg.sweep = std::move(sweep);
    }

    // Range validation, each violation named after its key.
    try {
        cfg.scenario.validate();
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }
    try {
        if (cfg.scheme == Scheme::Pla) cfg.pla.validate(cfg.scenario);
        if (cfg.scheme == Scheme::Akba) cfg.akba.quantizer.validate();
        if (cfg.scheme == Scheme::Skba) cfg.skba.codebook.validate();
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }
    if (cfg.scheme == Scheme::Akba && cfg.akba.attack_depth < 1) r.fail("akba.attack_depth: must be >= 1");
    if (cfg.scheme == Scheme::Skba) {
        if (cfg.skba.attack_depth < 1) r.fail("skba.attack_depth: must be >= 1");
        if (cfg.skba.key_bits < 0 || cfg.skba.key_bits > 256) r.fail("skba.key_bits: must lie in [0,256]");
    }
    if (cfg.sweep) {
        ExperimentConfig probe = cfg;
        probe.sweep.reset();
        try {
            apply_param(probe, cfg.sweep->param, cfg.sweep->grid.front());
        } catch (const ConfigError& e) {
            r.fail(e.what());
        }
    }

    r.finish();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

void apply_param(ExperimentConfig& cfg, const std::string& name, double value) {
    if (name == "alpha") cfg.scenario.alpha = value;
    else if (name == "beta1") cfg.scenario.beta1 = value;
    else if (name == "beta2") cfg.scenario.beta2 = value;
    else if (name == "sigma_a") cfg.scenario.sigma_a = value;
    else if (name == "sigma_b") cfg.scenario.sigma_b = value;
    else if (name == "sigma_e") cfg.scenario.sigma_e = value;
    else if (name == "theta") cfg.pla.theta = value;
    else if (name == "v_sat") cfg.akba.quantizer.v_sat = value;
    else if (name == "step") cfg.skba.codebook.step = value;
    else if (name == "scale") cfg.skba.codebook.scale = value;
    else if (name == "lambda") cfg.skba.lambda = value;
    else throw ConfigError("sweep param: unknown parameter '" + name + "'");
    cfg.scenario.validate();
}

namespace {

// Deterministic trial-parallel map: trial i always lands in results[i], and
// all aggregation downstream walks results in index order.
template <typename T, typename Fn>
std::vector<T> run_trials(uint64_t trials, int workers, Fn&& fn) {
    std::vector<T> results(trials);
    const int n_threads = static_cast<int>(std::min<uint64_t>(workers, trials));
    if (n_threads <= 1) {
        for (uint64_t i = 0; i < trials; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const uint64_t chunk = (trials + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
        const uint64_t begin = t * chunk;
        const uint64_t end = std::min(trials, begin + chunk);
        pool.emplace_back([&, begin, end] {
            try {
                for (uint64_t i = begin; i < end; ++i) results[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

struct PlaTrialStats {
    double psi_h0 = 0;
    double psi_h1 = 0;
    double beta_norm = 0;
};

PlaTrialStats pla_trial(const ExperimentConfig& cfg, uint64_t trial) {
    const auto& sp = cfg.scenario;
    const int slot = cfg.pla.slot;
    const channel::ChannelTrace trace = channel::generate_trace(sp, trial);
    PlaTrialStats out;
    out.psi_h0 =
        pla::test_statistic(trace.alice_estimate(slot), trace.alice_estimate(1), slot, sp, cfg.pla.mode)
            .value;

    const pla::EveObservationStack stack = pla::build_observation_stack(trace, sp, slot - 1);
    const CVector forged = pla::forge_channel(stack, slot);
    // The forged packet looks to Alice like the forged channel plus the same
    // residual noise scale as a legitimate packet.
    const double gamma = std::sqrt(pla::residual_variance(slot, sp, cfg.pla.mode));
    RngStream att(sp.seed, trial, purpose::kAttack);
    CVector h_att(forged.size());
    for (size_t i = 0; i < forged.size(); ++i) h_att[i] = forged[i] + gamma * att.cnormal();
    out.psi_h1 =
        pla::test_statistic(h_att, trace.alice_estimate(1), slot, sp, cfg.pla.mode).value;
    out.beta_norm =
        pla::noncentrality(forged, trace.alice_estimate(1), slot, sp, cfg.pla.mode).normalized;
    return out;
}

ResultRow pla_row(const ExperimentConfig& cfg, const std::vector<PlaTrialStats>& stats,
                  std::optional<double> param_value, double theta) {
    const int n = cfg.scenario.entries();
    uint64_t fa_events = 0, md_events = 0;
    for (const auto& s : stats) {
        if (!(s.psi_h0 < theta)) ++fa_events;
        if (s.psi_h1 < theta) ++md_events;
    }
    ResultRow row;
    row.param = param_value;
    const WilsonInterval fa = wilson_interval(fa_events, stats.size());
    const WilsonInterval md = wilson_interval(md_events, stats.size());
    row.fa = fa.estimate;
    row.fa_lo = fa.lo;
    row.fa_hi = fa.hi;
    row.md = md.estimate;
    row.md_lo = md.lo;
    row.md_hi = md.hi;
    row.trials = stats.size();
    row.seed = cfg.scenario.seed;
    if (cfg.pla.mode == pla::VarianceMode::Exact) {
        row.fa_analytic = pla::fa_probability(theta, n);
        double acc = 0.0;
        for (const auto& s : stats) acc += pla::md_probability(theta, s.beta_norm, n);
        row.md_analytic = acc / static_cast<double>(stats.size());
    }
    return row;
}

ResultRow akba_row(const ExperimentConfig& cfg, std::optional<double> param_value) {
    const auto ranks = run_trials<int>(cfg.trials, cfg.workers, [&](uint64_t trial) {
        const channel::ChannelTrace trace = channel::generate_trace(cfg.scenario, trial);
        const akba::QuantizedWord bob = akba::bits_from_estimate(trace.bob_estimate(1), cfg.akba.quantizer);
        const pla::EveObservationStack stack = pla::build_observation_stack(trace, cfg.scenario, 2);
        if (cfg.akba.attack_depth == 1)
            return akba::optimal_attack(stack, cfg.akba.quantizer) == bob ? 1 : 0;
        const auto guesses = akba::enumerate_attacks(stack, cfg.akba.quantizer, cfg.akba.attack_depth);
        for (size_t j = 0; j < guesses.size(); ++j)
            if (guesses[j].word == bob) return static_cast<int>(j) + 1;
        return 0;
    });
    uint64_t md_events = 0;
    for (int r : ranks)
        if (r >= 1) ++md_events;

    ResultRow row;
    row.param = param_value;
    // The public key broadcast is error-free and authenticated: no false
    // alarms, structurally.
    row.fa = row.fa_lo = row.fa_hi = 0.0;
    row.fa_analytic = 0.0;
    const WilsonInterval md = wilson_interval(md_events, cfg.trials);
    row.md = md.estimate;
    row.md_lo = md.lo;
    row.md_hi = md.hi;
    row.trials = cfg.trials;
    row.seed = cfg.scenario.seed;
    return row;
}

ResultRow skba_row(const ExperimentConfig& cfg, std::optional<double> param_value) {
    const skba::Codebook cb = skba::Codebook::make(cfg.scenario.entries(), cfg.skba.codebook);
    skba::SkbaOptions opts;
    opts.static_handshake = cfg.skba.static_handshake;
    opts.attack_depth = cfg.skba.attack_depth;
    const auto outcomes = run_trials<skba::TrialOutcome>(
        cfg.trials, cfg.workers,
        [&](uint64_t trial) { return skba::run_trial(cfg.scenario, cb, trial, opts); });
    uint64_t fa_events = 0, md_events = 0;
    for (const auto& o : outcomes) {
        if (!o.bob_ok) ++fa_events;
        if (o.eve_rank >= 1) ++md_events;
    }
    ResultRow row;
    row.param = param_value;
    const WilsonInterval fa = wilson_interval(fa_events, cfg.trials);
    const WilsonInterval md = wilson_interval(md_events, cfg.trials);
    row.fa = fa.estimate;
    row.fa_lo = fa.lo;
    row.fa_hi = fa.hi;
    row.md = md.estimate;
    row.md_lo = md.lo;
    row.md_hi = md.hi;
    row.trials = cfg.trials;
    row.seed = cfg.scenario.seed;

    // Closed forms exist for the lattice codebook when the handshake happens
    // on a frozen channel: per-component errors are iid Gaussian and decoding
    // is componentwise rounding.
    const bool frozen = cfg.scenario.alpha == 1.0 || cfg.skba.static_handshake;
    if (cfg.skba.codebook.kind == skba::CodebookKind::Lattice && frozen) {
        const double s = cfg.skba.codebook.step;
        const double bob_var = cfg.scenario.sigma_a * cfg.scenario.sigma_a +
                               cfg.scenario.sigma_b * cfg.scenario.sigma_b;
        const int comps = 2 * cfg.scenario.entries();
        const double p_bob = bob_var > 0.0 ? std::erfc(0.5 * s / std::sqrt(bob_var)) : 0.0;
        row.fa_analytic = 1.0 - std::pow(1.0 - p_bob, comps);
        if (cfg.skba.attack_depth == 1) {
            try {
                const channel::Transmitter handshake[2] = {channel::Transmitter::Alice,
                                                           channel::Transmitter::Bob};
                const double mse = numerics::gls_mse(pla::build_regression(handshake, cfg.scenario));
                const double eve_var = mse + cfg.scenario.sigma_a * cfg.scenario.sigma_a;
                const double p_eve = eve_var > 0.0 ? std::erfc(0.5 * s / std::sqrt(eve_var)) : 0.0;
                row.md_analytic = std::pow(1.0 - p_eve, comps);
            } catch (const std::exception&) {
                // no usable Eve observation model (e.g. beta1 = beta2 = 0)
            }
        }
    }
    return row;
}

ResultRow error_row(const ExperimentConfig& cfg, std::optional<double> param_value,
                    const std::string& message) {
    ResultRow row;
    row.param = param_value;
    row.trials = cfg.trials;
    row.seed = cfg.scenario.seed;
    row.error = message;
    return row;
}

} // namespace

bool ResultTable::has_errors() const {
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.error.has_value(); });
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    ResultTable table;

    const bool theta_sweep =
        cfg.scheme == Scheme::Pla && cfg.sweep && cfg.sweep->param == "theta";
    if (cfg.scheme == Scheme::Pla && (theta_sweep || !cfg.sweep)) {
        // Common random numbers: one set of per-trial statistics serves every
        // threshold in the grid.
        try {
            const auto stats = run_trials<PlaTrialStats>(
                cfg.trials, cfg.workers, [&](uint64_t trial) { return pla_trial(cfg, trial); });
            if (theta_sweep) {
                for (double theta : cfg.sweep->grid) table.rows.push_back(pla_row(cfg, stats, theta, theta));
            } else {
                table.rows.push_back(pla_row(cfg, stats, std::nullopt, cfg.pla.theta));
            }
        } catch (const NumericalError& e) {
            table.rows.push_back(error_row(cfg, std::nullopt, e.what()));
        }
        return table;
    }

    const std::vector<std::optional<double>> points = [&] {
        std::vector<std::optional<double>> p;
        if (cfg.sweep)
            for (double v : cfg.sweep->grid) p.emplace_back(v);
        else
            p.emplace_back(std::nullopt);
        return p;
    }();

    for (const auto& point : points) {
        ExperimentConfig local = cfg;
        local.sweep.reset();
        if (point) apply_param(local, cfg.sweep->param, *point);
        try {
            switch (cfg.scheme) {
                case Scheme::Pla: {
                    const auto stats = run_trials<PlaTrialStats>(
                        local.trials, local.workers, [&](uint64_t trial) { return pla_trial(local, trial); });
                    table.rows.push_back(pla_row(local, stats, point, local.pla.theta));
                    break;
                }
                case Scheme::Akba:
                    table.rows.push_back(akba_row(local, point));
                    break;
                case Scheme::Skba:
                    table.rows.push_back(skba_row(local, point));
                    break;
            }
        } catch (const NumericalError& e) {
            table.rows.push_back(error_row(local, point, e.what()));
        }
    }
    return table;
}

ResultTable sweep_threshold(const ExperimentConfig& cfg, const std::vector<double>& grid) {
    if (cfg.scheme != Scheme::Pla)
        throw ConfigError("sweep_threshold: threshold sweeps apply to the pla scheme");
    if (grid.empty()) throw ConfigError("sweep_threshold: grid must be nonempty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw ConfigError("sweep_threshold: grid must be sorted ascending");
    ExperimentConfig local = cfg;
    local.sweep = SweepSpec{"theta", grid};
    return run_experiment(local);
}

namespace {

std::string csv_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

} // namespace

void write_csv(const ResultTable& table, std::ostream& out) {
    out << "param,fa,fa_lo,fa_hi,md,md_lo,md_hi,fa_analytic,md_analytic,trials,seed\n";
    for (const ResultRow& r : table.rows) {
        out << csv_cell(r.param) << ',';
        if (r.error) {
            out << ",,,,,,,,";
        } else {
            out << format_double(r.fa) << ',' << format_double(r.fa_lo) << ',' << format_double(r.fa_hi)
                << ',' << format_double(r.md) << ',' << format_double(r.md_lo) << ','
                << format_double(r.md_hi) << ',' << csv_cell(r.fa_analytic) << ','
                << csv_cell(r.md_analytic) << ',';
        }
        out << r.trials << ',' << r.seed << '\n';
    }
}

std::string csv_string(const ResultTable& table) {
    std::ostringstream out;
    write_csv(table, out);
    return out.str();
}

ResultTable parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("parse_csv: missing header");
    ResultTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        while (cells.size() < 11) cells.emplace_back();
        ResultRow r;
        auto opt = [](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return std::stod(s);
        };
        r.param = opt(cells[0]);
        if (cells[1].empty()) {
            r.error = "";
        } else {
            r.fa = std::stod(cells[1]);
            r.fa_lo = std::stod(cells[2]);
            r.fa_hi = std::stod(cells[3]);
            r.md = std::stod(cells[4]);
            r.md_lo = std::stod(cells[5]);
            r.md_hi = std::stod(cells[6]);
            r.fa_analytic = opt(cells[7]);
            r.md_analytic = opt(cells[8]);
        }
        r.trials = std::stoull(cells[9]);
        r.seed = std::stoull(cells[10]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

} // namespace authsim::harness
