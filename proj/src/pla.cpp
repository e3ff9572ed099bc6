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
#include "authsim/pla.hpp"

#include <cmath>

namespace authsim::pla {

VarianceMode variance_mode_by_name(const std::string& name) {
    if (name == "exact") return VarianceMode::Exact;
    if (name == "approximate") return VarianceMode::Approximate;
    throw ConfigError("unknown variance_mode '" + name + "' (expected exact or approximate)");
}

void PlaConfig::validate(const channel::ScenarioParams& params) const {
    if (!(theta > 0.0)) throw ConfigError("theta: threshold must be > 0");
    if (slot < 3 || slot % 2 == 0)
        throw ConfigError("slot: tested slot must be odd and >= 3 (t = 2 nu + 1)");
    if (slot > params.schedule.length())
        throw ConfigError("slot: tested slot exceeds the schedule length");
    if (params.schedule.tx_at(slot) != channel::Transmitter::Bob ||
        params.schedule.tx_at(1) != channel::Transmitter::Bob)
        throw ConfigError("schedule: slots 1 and `slot` must be Bob-transmitting for the PLA test");
}

double residual_variance(int slot, const channel::ScenarioParams& params, VarianceMode mode) {
    if (slot < 2) throw std::domain_error("residual_variance: slot must be >= 2");
    const double a = params.alpha;
    const double s2 = params.sigma_a * params.sigma_a;
    if (mode == VarianceMode::Approximate)
        return s2 + (1.0 - a * a) * std::pow(a, slot - 1);
    const double a2t = std::pow(a, 2 * (slot - 1));
    return s2 * (1.0 + a2t) + 1.0 - a2t;
}

Statistic test_statistic(std::span<const Complex> h_hat_t, std::span<const Complex> h_hat_1,
                         int slot, const channel::ScenarioParams& params, VarianceMode mode) {
    const int n = params.entries();
    if (static_cast<int>(h_hat_t.size()) != n || static_cast<int>(h_hat_1.size()) != n)
        throw std::invalid_argument("test_statistic: estimate length differs from N");
    const double gamma2 = residual_variance(slot, params, mode);
    if (!(gamma2 > 0.0))
        throw NumericalError("test_statistic: degenerate zero residual variance (alpha = 1, sigma_a = 0)");
    const double scale = std::pow(params.alpha, slot - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::norm(h_hat_t[i] - scale * h_hat_1[i]);
    const double psi = acc / (n * gamma2);
    return {psi, 2.0 * n * psi};
}

Decision decide(double psi, double theta) {
    return psi < theta ? Decision::Authentic : Decision::Rejected;
}

numerics::GaussianLinearModel build_regression(std::span<const channel::Transmitter> observed,
                                               const channel::ScenarioParams& params) {
    const int len = static_cast<int>(observed.size());
    if (len < 1) throw std::invalid_argument("build_regression: at least one observed slot required");
    const double a = params.alpha;
    const double se2 = params.sigma_e * params.sigma_e;

    CVector w(len);
    for (int t = 1; t <= len; ++t)
        w[t - 1] = params.beta_of(observed[t - 1]) * std::pow(a, t - 1);

    // Covariance of the stacked noise u. Off-diagonal terms carry the AR
    // correlation alpha^|t1-t2| of the shared innovation history; the
    // per-slot decorrelation and estimation noises are diagonal only.
    CMatrix k(len);
    for (int t1 = 1; t1 <= len; ++t1) {
        const double b1 = params.beta_of(observed[t1 - 1]);
        for (int t2 = 1; t2 <= t1; ++t2) {
            const double b2 = params.beta_of(observed[t2 - 1]);
            const double shared = 1.0 - std::pow(a, 2 * (std::min(t1, t2) - 1));
            double v = b1 * b2 * std::pow(a, std::abs(t1 - t2)) * shared;
            if (t1 == t2) {
                v += se2 + 1.0 - b1 * b1;
                v = std::max(v, 1e-9); // keep degenerate noiseless scenarios factorable
            }
            k(t1 - 1, t2 - 1) = v;
            k(t2 - 1, t1 - 1) = v;
        }
    }
    return {std::move(w), numerics::HermitianCovariance(std::move(k))};
}

EveObservationStack build_observation_stack(const channel::ChannelTrace& trace,
                                            const channel::ScenarioParams& params, int slots) {
    if (slots < 1 || slots > trace.length())
        throw std::invalid_argument("build_observation_stack: slot range outside trace");
    const int n = trace.entries();
    std::vector<CVector> per_entry(n, CVector(slots));
    for (int t = 1; t <= slots; ++t) {
        const CVector& g = trace.eve_estimate(t);
        for (int i = 0; i < n; ++i) per_entry[i][t - 1] = g[i];
    }
    auto model = build_regression(std::span(params.schedule.tx).first(slots), params);
    return {std::move(per_entry), std::move(model), params.alpha};
}

CVector forge_channel(const EveObservationStack& stack, int target_slot) {
    if (stack.per_entry.empty()) throw std::invalid_argument("forge_channel: empty stack");
    const numerics::GlsSolver solver(stack.model);
    const double scale = std::pow(stack.alpha, target_slot - 1);
    CVector forged(stack.per_entry.size());
    for (size_t i = 0; i < stack.per_entry.size(); ++i)
        forged[i] = scale * solver.estimate(stack.per_entry[i]);
    return forged;
}

Statistic noncentrality(std::span<const Complex> forged, std::span<const Complex> h_hat_1,
                        int slot, const channel::ScenarioParams& params, VarianceMode mode) {
    return test_statistic(forged, h_hat_1, slot, params, mode);
}

double fa_probability(double theta, int entries) {
    if (entries < 1) throw std::domain_error("fa_probability: entries must be >= 1");
    if (!(theta >= 0.0)) throw std::domain_error("fa_probability: theta must be >= 0");
    return 1.0 - numerics::noncentral_chi2_cdf(2.0 * entries * theta, 2 * entries, 0.0);
}

double md_probability(double theta, double noncentrality_norm, int entries) {
    if (entries < 1) throw std::domain_error("md_probability: entries must be >= 1");
    if (!(theta >= 0.0)) throw std::domain_error("md_probability: theta must be >= 0");
    return numerics::noncentral_chi2_cdf(2.0 * entries * theta, 2 * entries, noncentrality_norm);
}

} // namespace authsim::pla
