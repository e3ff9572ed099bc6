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
#include "authsim/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace authsim::numerics {

namespace {

constexpr int kMaxGammaIter = 2000;
constexpr int kMaxSeriesTerms = 10000;
constexpr double kTailBound = 1e-13;

double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxGammaIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericalError("incomplete gamma series did not converge");
}

double gamma_q_contfrac(double a, double x) {
    // Modified Lentz continued fraction for Q(a, x), x >= a + 1.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxGammaIter; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw NumericalError("incomplete gamma continued fraction did not converge");
}

// z^a e^-z / Gamma(a+1): the step between successive regularized gammas,
// P(a+1, z) = P(a, z) - gamma_step(a, z).
double gamma_step(double a, double z) {
    return std::exp(a * std::log(z) - z - std::lgamma(a + 1.0));
}

enum class Tail { Lower, Upper };

// Poisson-weighted mixture of regularized gamma tails: the standard series
// for the noncentral chi-square CDF (Tail::Lower) and Marcum Q (Tail::Upper).
// Weights are expanded in both directions from the bulk of the Poisson mass.
double poisson_gamma_mixture(int half_dof, double z, double lambda, Tail tail) {
    auto base = [&](double a) { return tail == Tail::Lower ? gamma_p(a, z) : gamma_q(a, z); };

    const long k0 = static_cast<long>(lambda);
    const double log_p0 = -lambda + (k0 > 0 ? k0 * std::log(lambda) : 0.0) - std::lgamma(static_cast<double>(k0) + 1.0);
    const double p0 = std::exp(log_p0);
    const double g0 = base(static_cast<double>(half_dof + k0));
    const double t0 = gamma_step(static_cast<double>(half_dof + k0), z);

    double sum = p0 * g0;
    double weight_seen = p0;
    int terms = 1;

    // Downward toward k = 0 first, so the upward stop can use the full
    // already-seen Poisson mass. Below the mode the weights decay
    // monotonically and individual terms below 1e-17 are negligible.
    {
        double p = p0, g = g0, t = t0;
        for (long k = k0 - 1; k >= 0; --k) {
            const double a = static_cast<double>(half_dof + k);
            p *= static_cast<double>(k + 1) / lambda;
            t *= (a + 1.0) / z;
            if (tail == Tail::Lower) g += t; else g -= t;
            g = std::clamp(g, 0.0, 1.0);
            sum += p * g;
            weight_seen += p;
            if (++terms > kMaxSeriesTerms)
                throw NumericalError("noncentral series did not converge within 1e4 terms");
            if (p < 1e-17) break;
        }
    }
    // Upward: P(n+k, z) decreases in k, Q increases toward 1, so the
    // remainder is below (1 - weight_seen) * g (Lower) or 1 - weight_seen
    // (Upper).
    {
        double p = p0, g = g0, t = t0;
        for (long k = k0 + 1;; ++k) {
            const double a_prev = static_cast<double>(half_dof + k - 1);
            p *= lambda / static_cast<double>(k);
            if (tail == Tail::Lower) g -= t; else g += t;
            t *= z / (a_prev + 1.0);
            g = std::clamp(g, 0.0, 1.0);
            sum += p * g;
            weight_seen += p;
            if (++terms > kMaxSeriesTerms)
                throw NumericalError("noncentral series did not converge within 1e4 terms");
            const double bound = (1.0 - weight_seen) * (tail == Tail::Lower ? g : 1.0);
            if (bound < kTailBound && k > static_cast<long>(lambda)) break;
        }
    }
    return std::clamp(sum, 0.0, 1.0);
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_p: a > 0 and x >= 0 required");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: a > 0 and x >= 0 required");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_contfrac(a, x);
}

double noncentral_chi2_cdf(double x, int dof, double mu) {
    if (x < 0.0 || std::isnan(x)) throw std::domain_error("noncentral_chi2_cdf: x must be >= 0");
    if (dof <= 0 || dof % 2 != 0) throw std::domain_error("noncentral_chi2_cdf: dof must be a positive even integer");
    if (mu < 0.0 || std::isnan(mu)) throw std::domain_error("noncentral_chi2_cdf: mu must be >= 0");

    const int n = dof / 2;
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double z = 0.5 * x;
    if (mu == 0.0) return gamma_p(static_cast<double>(n), z);
    return poisson_gamma_mixture(n, z, 0.5 * mu, Tail::Lower);
}

double marcum_q(int order, double a, double b) {
    if (order <= 0) throw std::domain_error("marcum_q: order must be a positive integer");
    if (a < 0.0 || b < 0.0) throw std::domain_error("marcum_q: a and b must be >= 0");

    if (b == 0.0) return 1.0;
    const double z = 0.5 * b * b;
    if (a == 0.0) return gamma_q(static_cast<double>(order), z);
    return poisson_gamma_mixture(order, z, 0.5 * a * a, Tail::Upper);
}

double erf_real(double x) { return std::erf(x); }

HermitianCovariance::HermitianCovariance(CMatrix entries) : entries_(std::move(entries)) {
    const int n = entries_.dim();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            if (entries_(i, j) != std::conj(entries_(j, i)))
                throw std::invalid_argument("HermitianCovariance: matrix is not Hermitian");
        }
    }
}

GaussianLinearModel::GaussianLinearModel(CVector w_, HermitianCovariance k_)
    : w(std::move(w_)), k(std::move(k_)) {
    if (static_cast<int>(w.size()) != k.dim())
        throw std::invalid_argument("GaussianLinearModel: w and K dimensions differ");
    if (w.empty()) throw std::invalid_argument("GaussianLinearModel: empty model");
}

GlsSolver::GlsSolver(const GaussianLinearModel& model) : chol_(model.k.entries()) {
    bool all_zero = true;
    for (const Complex& c : model.w)
        if (c != Complex{0.0, 0.0}) { all_zero = false; break; }
    if (all_zero) throw std::domain_error("GlsSolver: regression vector is zero");
    kinv_w_ = chol_.solve(model.w);
    quad_ = hermitian_dot(model.w, kinv_w_).real();
    if (!(quad_ > 0.0)) throw NumericalError("GlsSolver: nonpositive w^H K^-1 w");
}

Complex GlsSolver::estimate(std::span<const Complex> y) const {
    if (static_cast<int>(y.size()) != chol_.dim())
        throw std::invalid_argument("gls_estimate: observation dimension mismatch");
    return hermitian_dot(kinv_w_, y) / quad_;
}

Complex gls_estimate(const GaussianLinearModel& model, std::span<const Complex> y) {
    return GlsSolver(model).estimate(y);
}

double gls_mse(const GaussianLinearModel& model) { return GlsSolver(model).mse(); }

} // namespace authsim::numerics
