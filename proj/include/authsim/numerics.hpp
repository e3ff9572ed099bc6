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

#include "authsim/linalg.hpp"

namespace authsim::numerics {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// CDF of a noncentral chi-square variable with an even number of degrees of
/// freedom `dof` and noncentrality `mu`, evaluated at x. Absolute error is
/// below 1e-10; a series that fails to converge in 1e4 terms raises
/// NumericalError.
double noncentral_chi2_cdf(double x, int dof, double mu);

/// Generalized Marcum Q-function Q_order(a, b) for positive integer order,
/// computed through its own upper-tail series so that
/// marcum_q(n, a, b) + noncentral_chi2_cdf(b^2, 2n, a^2) = 1 is a genuine
/// cross-check of two routes.
double marcum_q(int order, double a, double b);

/// Error function (odd, monotone, |err| <= 1e-12).
double erf_real(double x);

/// Hermitian positive-definite covariance matrix. Hermitian symmetry is
/// checked exactly on construction; positive definiteness is established by
/// the Cholesky factorization of whoever consumes it.
class HermitianCovariance {
  public:
    explicit HermitianCovariance(CMatrix entries);

    int dim() const { return entries_.dim(); }
    const CMatrix& entries() const { return entries_; }

  private:
    CMatrix entries_;
};

/// Scalar-parameter Gaussian observation model y = w h + u, u ~ CN(0, K).
struct GaussianLinearModel {
    CVector w;
    HermitianCovariance k;

    GaussianLinearModel(CVector w_, HermitianCovariance k_);
    int dim() const { return static_cast<int>(w.size()); }
};

/// Factors K once and serves repeated estimates against the same model.
/// Requires a nonzero regression vector; a covariance that is singular to
/// working precision raises NumericalError from the factorization.
class GlsSolver {
  public:
    explicit GlsSolver(const GaussianLinearModel& model);

    Complex estimate(std::span<const Complex> y) const;
    double mse() const { return 1.0 / quad_; }

  private:
    CholeskyFactor chol_;
    CVector kinv_w_;
    double quad_; // Re(w^H K^-1 w)
};

/// Minimizer over h of (y - w h)^H K^-1 (y - w h).
Complex gls_estimate(const GaussianLinearModel& model, std::span<const Complex> y);

/// Error variance (w^H K^-1 w)^-1 of the estimator above.
double gls_mse(const GaussianLinearModel& model);

} // namespace authsim::numerics
