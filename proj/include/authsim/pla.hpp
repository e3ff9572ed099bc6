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

#include <span>

#include "authsim/channel.hpp"
#include "authsim/numerics.hpp"

namespace authsim::pla {

/// Which expression to use for the residual variance gamma_A^2(t).
/// Exact is the variance of h_hat_A(t) - alpha^(t-1) h_hat_A(1) under the
/// generative model, and is the mode under which the chi-square laws hold.
/// Approximate is the simpler form sigma_a^2 + (1 - alpha^2) alpha^(t-1),
/// kept for side-by-side comparison.
enum class VarianceMode { Exact, Approximate };

VarianceMode variance_mode_by_name(const std::string& name);

struct PlaConfig {
    int slot = 3;       // slot of the tested packet, t = 2 nu + 1
    double theta = 1.0; // acceptance threshold on psi
    VarianceMode mode = VarianceMode::Exact;

    void validate(const channel::ScenarioParams& params) const;
};

/// gamma_A^2(t) for t >= 2. May return 0 for the degenerate alpha = 1,
/// sigma_a = 0 corner; consumers of the statistic reject that as an error.
double residual_variance(int slot, const channel::ScenarioParams& params, VarianceMode mode);

struct Statistic {
    double value;      // psi(t), the threshold-test statistic
    double normalized; // 2 N psi(t); chi-square with 2N dof under H0 (Exact mode)
};

/// psi(t) = 1/(N gamma^2) sum_n |h_hat_t[n] - alpha^(t-1) h_hat_1[n]|^2.
Statistic test_statistic(std::span<const Complex> h_hat_t, std::span<const Complex> h_hat_1,
                         int slot, const channel::ScenarioParams& params, VarianceMode mode);

enum class Decision { Authentic, Rejected };

/// Authentic iff psi < theta; the tie psi = theta rejects.
Decision decide(double psi, double theta);

/// Observation model of Eve's stacked estimates for one channel entry:
/// g_hat(t) = beta_tx(t) alpha^(t-1) h(1) + u(t). The returned covariance is
/// the covariance of u implied by the channel model, with a 1e-12 diagonal
/// floor so degenerate noiseless scenarios stay factorable.
numerics::GaussianLinearModel build_regression(std::span<const channel::Transmitter> observed,
                                               const channel::ScenarioParams& params);

/// Eve's estimates of slots 1..2nu, stacked per channel entry, plus the
/// linear model they obey.
struct EveObservationStack {
    std::vector<CVector> per_entry; // [entry][slot]
    numerics::GaussianLinearModel model;
    double alpha;
};

EveObservationStack build_observation_stack(const channel::ChannelTrace& trace,
                                            const channel::ScenarioParams& params, int slots);

/// Eve's channel forgery for `target_slot`: alpha^(t-1) times the per-entry
/// GLS estimate of h(1).
CVector forge_channel(const EveObservationStack& stack, int target_slot);

/// Noncentrality beta(t) of the test statistic given the forged channel and
/// Alice's reference estimate, plus its 2N-normalized form.
Statistic noncentrality(std::span<const Complex> forged, std::span<const Complex> h_hat_1,
                        int slot, const channel::ScenarioParams& params, VarianceMode mode);

/// P[reject | H0] = 1 - F_{2N,0}(2N theta). Valid in Exact variance mode.
double fa_probability(double theta, int entries);

/// P[accept | H1, forged channel, reference estimate]
/// = F_{2N, beta_norm}(2N theta), with beta_norm the normalized noncentrality.
double md_probability(double theta, double noncentrality_norm, int entries);

} // namespace authsim::pla
