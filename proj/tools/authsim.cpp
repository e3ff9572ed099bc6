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
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "authsim/channel.hpp"
#include "authsim/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
    std::string config_path;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> workers;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "experiment config file")->required();
    cmd->add_option("--trials", args.trials, "override trial count");
    cmd->add_option("--seed", args.seed, "override the root seed");
    cmd->add_option("--out", args.out, "output CSV path (default: stdout)");
    cmd->add_option("--workers", args.workers, "worker thread count");
}

authsim::harness::ExperimentConfig load_with_overrides(const CommonArgs& args) {
    auto cfg = authsim::harness::load_config_file(args.config_path);
    if (args.trials) {
        if (*args.trials < 1) throw authsim::ConfigError("trials: must be >= 1");
        cfg.trials = *args.trials;
    }
    if (args.seed) cfg.scenario.seed = *args.seed;
    if (args.out) cfg.out_path = *args.out;
    if (args.workers) {
        if (*args.workers < 1) throw authsim::ConfigError("workers: must be >= 1");
        cfg.workers = *args.workers;
    }
    return cfg;
}

int emit(const authsim::harness::ResultTable& table, const std::string& out_path) {
    if (out_path.empty()) {
        authsim::harness::write_csv(table, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw authsim::ConfigError("cannot open output file '" + out_path + "'");
        authsim::harness::write_csv(table, out);
    }
    return table.has_errors() ? kExitNumerical : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator for channel-based authentication schemes"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
    add_common(run, run_args);

    CommonArgs sweep_args;
    std::string sweep_param;
    std::string sweep_grid;
    CLI::App* sweep = app.add_subcommand("sweep", "sweep one scalar parameter over a grid");
    add_common(sweep, sweep_args);
    sweep->add_option("--param", sweep_param, "parameter to sweep (e.g. theta, sigma_e)")->required();
    sweep->add_option("--grid", sweep_grid, "grid as a:b:steps")->required();

    CommonArgs trace_args;
    CLI::App* trace = app.add_subcommand("trace", "dump one simulated channel trace as CSV");
    add_common(trace, trace_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            const auto cfg = load_with_overrides(run_args);
            return emit(authsim::harness::run_experiment(cfg), cfg.out_path);
        }
        if (sweep->parsed()) {
            auto cfg = load_with_overrides(sweep_args);
            cfg.sweep = authsim::harness::SweepSpec{sweep_param, authsim::harness::parse_grid(sweep_grid)};
            {
                // Reject unknown parameters before spending time on trials.
                auto probe = cfg;
                probe.sweep.reset();
                authsim::harness::apply_param(probe, sweep_param, cfg.sweep->grid.front());
            }
            return emit(authsim::harness::run_experiment(cfg), cfg.out_path);
        }
        if (trace->parsed()) {
            const auto cfg = load_with_overrides(trace_args);
            const auto tr = authsim::channel::generate_trace(cfg.scenario);
            if (cfg.out_path.empty()) {
                authsim::channel::write_trace_csv(tr, std::cout);
            } else {
                std::ofstream out(cfg.out_path, std::ios::binary);
                if (!out) throw authsim::ConfigError("cannot open output file '" + cfg.out_path + "'");
                authsim::channel::write_trace_csv(tr, out);
            }
            return kExitOk;
        }
    } catch (const authsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const authsim::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
