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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "authsim/akba.hpp"
#include "authsim/channel.hpp"
#include "authsim/pla.hpp"
#include "authsim/skba.hpp"

namespace authsim::harness {

enum class Scheme { Pla, Akba, Skba };

struct SweepSpec {
    std::string param;
    std::vector<double> grid; // ascending
};

struct AkbaConfig {
    akba::QuantizerConfig quantizer;
    digest::HashConfig hash;
    int attack_depth = 1;
};

struct SkbaConfig {
    skba::CodebookConfig codebook;
    int key_bits = 128;
    std::optional<double> lambda;
    bool static_handshake = false;
    int attack_depth = 1;
};

struct ExperimentConfig {
    Scheme scheme = Scheme::Pla;
    channel::ScenarioParams scenario;
    pla::PlaConfig pla;
    AkbaConfig akba;
    SkbaConfig skba;
    uint64_t trials = 10000;
    int workers = 1;
    std::optional<SweepSpec> sweep;
    std::string out_path;
};

/// Parses and fully validates the key-value config format documented in the
/// README. Throws ConfigError listing every violation with the offending key.
ExperimentConfig load_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// "a:b:steps" -> `steps` evenly spaced values from a to b.
std::vector<double> parse_grid(const std::string& spec);

/// Overrides one named scalar parameter (the sweep mechanism).
void apply_param(ExperimentConfig& cfg, const std::string& name, double value);

struct ResultRow {
    std::optional<double> param;
    double fa = 0, fa_lo = 0, fa_hi = 0;
    double md = 0, md_lo = 0, md_hi = 0;
    std::optional<double> fa_analytic;
    std::optional<double> md_analytic;
    uint64_t trials = 0;
    uint64_t seed = 0;
    std::optional<std::string> error; // numerical failure at this sweep point
};

struct ResultTable {
    std::vector<ResultRow> rows;
    bool has_errors() const;
};

/// Runs `trials` paired trials per sweep point: each trial evaluates the
/// legitimate packet (H0) and the attack (H1) on the same channel
/// realization. Deterministic for a fixed (config, seed) at any worker count.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// Threshold sweep with common random numbers: every grid point reuses the
/// same per-trial draws, so the empirical ROC is monotone by construction.
ResultTable sweep_threshold(const ExperimentConfig& cfg, const std::vector<double>& grid);

/// Columns: param,fa,fa_lo,fa_hi,md,md_lo,md_hi,fa_analytic,md_analytic,
/// trials,seed. Ten significant digits, '.' decimal point, empty string where
/// a value is undefined.
void write_csv(const ResultTable& table, std::ostream& out);
std::string csv_string(const ResultTable& table);
ResultTable parse_csv(std::istream& in);

} // namespace authsim::harness
