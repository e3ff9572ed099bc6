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

// Test-side oracles, independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "authsim/akba.hpp"
#include "authsim/channel.hpp"
#include "authsim/linalg.hpp"
#include "authsim/rng.hpp"

namespace oracles {

using authsim::CMatrix;
using authsim::Complex;
using authsim::CVector;
using authsim::RngStream;

/// Fraction of `draws` noncentral chi-square samples that are <= x. Samples
/// are sums of dof squared normals with the noncentrality spread equally:
/// each mean is sqrt(mu/dof).
inline double sample_noncentral_chi2_le(double x, int dof, double mu, long draws, RngStream& rng) {
    const double delta = std::sqrt(mu / dof);
    long hits = 0;
    for (long i = 0; i < draws; ++i) {
        double acc = 0.0;
        for (int k = 0; k < dof; ++k) {
            const double v = rng.normal() + delta;
            acc += v * v;
        }
        if (acc <= x) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(draws);
}

/// Counts of samples <= each x in one pass (shared draws across the grid).
inline std::vector<double> sample_noncentral_chi2_le_grid(const std::vector<double>& xs, int dof,
                                                          double mu, long draws, RngStream& rng) {
    const double delta = std::sqrt(mu / dof);
    std::vector<long> hits(xs.size(), 0);
    for (long i = 0; i < draws; ++i) {
        double acc = 0.0;
        for (int k = 0; k < dof; ++k) {
            const double v = rng.normal() + delta;
            acc += v * v;
        }
        for (size_t j = 0; j < xs.size(); ++j)
            if (acc <= xs[j]) ++hits[j];
    }
    std::vector<double> out(xs.size());
    for (size_t j = 0; j < xs.size(); ++j) out[j] = static_cast<double>(hits[j]) / draws;
    return out;
}

/// Simpson integration of f over [a, b] with n panels (n even).
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Scalar conditional Gaussian for the component posterior, derived through
/// joint-covariance algebra rather than the quadratic-exponent route used by
/// the implementation: with r ~ N(0, 1/2), x = w r + u, u ~ N(0, K/2),
/// r | x ~ N(S_rx S_xx^-1 x, 1/2 - S_rx S_xx^-1 S_xr).
struct ConditionalGaussian {
    double mean;
    double variance;
};

inline ConditionalGaussian conditional_component_gaussian(const CVector& w, const CMatrix& k,
                                                          const std::vector<double>& x) {
    const int n = k.dim();
    CMatrix sxx(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sxx(i, j) = 0.5 * (w[i].real() * w[j].real() + k(i, j).real());
    const authsim::CholeskyFactor chol(sxx);
    CVector srx(n);
    for (int i = 0; i < n; ++i) srx[i] = 0.5 * w[i].real();
    const CVector solved = chol.solve(srx);
    double mean = 0.0, reduction = 0.0;
    for (int i = 0; i < n; ++i) {
        mean += solved[i].real() * x[i];
        reduction += solved[i].real() * srx[i].real();
    }
    return {mean, 0.5 - reduction};
}

/// Log probability of each quantizer cell under N(mean, variance), by Simpson
/// quadrature on the density with the exponent rescaled for stability.
inline std::vector<double> cell_log_probs_by_quadrature(const ConditionalGaussian& g,
                                                        const authsim::akba::QuantizerConfig& q,
                                                        int panels = 10000) {
    const double sd = std::sqrt(g.variance);
    const std::vector<double> ts = q.interior_thresholds();
    std::vector<double> out;
    out.reserve(q.levels);
    for (int cell = 1; cell <= q.levels; ++cell) {
        double lo = cell == 1 ? g.mean - 14.0 * sd : ts[cell - 2];
        double hi = cell == q.levels ? g.mean + 14.0 * sd : ts[cell - 1];
        lo = std::min(lo, hi);
        // shift by the largest exponent inside the cell
        const double closest = std::clamp(g.mean, lo, hi);
        const double shift = -(closest - g.mean) * (closest - g.mean) / (2.0 * g.variance);
        auto f = [&](double r) {
            const double e = -(r - g.mean) * (r - g.mean) / (2.0 * g.variance);
            return std::exp(e - shift);
        };
        const double integral = simpson(f, lo, hi, panels) / std::sqrt(2.0 * std::numbers::pi * g.variance);
        out.push_back(shift + std::log(integral));
    }
    return out;
}

inline std::vector<double> normalized_from_logs(const std::vector<double>& logs) {
    const double m = *std::max_element(logs.begin(), logs.end());
    double z = 0.0;
    for (double l : logs) z += std::exp(l - m);
    std::vector<double> out;
    out.reserve(logs.size());
    for (double l : logs) out.push_back(std::exp(l - m) / z);
    return out;
}

/// Monte Carlo covariance of Eve's stacked noise u(t) = g_hat(t) -
/// beta_tx(t) alpha^(t-1) h(1), straight from the defining expectation.
inline CMatrix empirical_eve_covariance(const authsim::channel::ScenarioParams& params, int slots,
                                        long traces) {
    CMatrix acc(slots);
    for (long trial = 0; trial < traces; ++trial) {
        const auto trace = authsim::channel::generate_trace(params, static_cast<uint64_t>(trial));
        for (int entry = 0; entry < params.entries(); ++entry) {
            CVector u(slots);
            for (int t = 1; t <= slots; ++t) {
                const double coef =
                    params.beta_of(params.schedule.tx_at(t)) * std::pow(params.alpha, t - 1);
                u[t - 1] = trace.eve_estimate(t)[entry] - coef * trace.h(1)[entry];
            }
            for (int i = 0; i < slots; ++i)
                for (int j = 0; j < slots; ++j) acc(i, j) += u[i] * std::conj(u[j]);
        }
    }
    const double scale = 1.0 / (static_cast<double>(traces) * params.entries());
    for (int i = 0; i < slots; ++i)
        for (int j = 0; j < slots; ++j) acc(i, j) *= scale;
    return acc;
}

/// Kolmogorov-Smirnov distance between samples and a CDF.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

/// Brute-force minimization of the GLS quadratic form over a refining complex
/// grid centered on the best point so far.
inline Complex grid_search_gls(const CVector& w, const CMatrix& k, const CVector& y,
                               double initial_half_width = 4.0) {
    const authsim::CholeskyFactor chol(k);
    const CVector kiy = chol.solve(y);
    const CVector kiw = chol.solve(w);
    const double quad = authsim::hermitian_dot(w, kiw).real();
    const Complex cross = authsim::hermitian_dot(w, kiy);
    auto objective = [&](Complex h) {
        // (y - w h)^H K^-1 (y - w h) up to the constant y^H K^-1 y
        return quad * std::norm(h) - 2.0 * (std::conj(h) * cross).real();
    };
    Complex center{0.0, 0.0};
    double half = initial_half_width;
    for (int pass = 0; pass < 12; ++pass) {
        Complex best = center;
        double best_val = objective(center);
        const int steps = 20;
        for (int i = -steps; i <= steps; ++i) {
            for (int j = -steps; j <= steps; ++j) {
                const Complex h = center + Complex(half * i / steps, half * j / steps);
                const double v = objective(h);
                if (v < best_val) {
                    best_val = v;
                    best = h;
                }
            }
        }
        center = best;
        half /= 8.0;
    }
    return center;
}

/// z=3 Wilson interval containment: the binomial 3-sigma acceptance test that
/// stays valid at extreme probabilities.
inline bool within_3sigma(uint64_t events, uint64_t trials, double expected) {
    const auto w = authsim::wilson_interval(events, trials, 3.0);
    return expected >= w.lo && expected <= w.hi;
}

} // namespace oracles
