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

#include <complex>
#include <span>
#include <vector>

#include "authsim/errors.hpp"

namespace authsim {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense square complex matrix, row major.
class CMatrix {
  public:
    CMatrix() = default;
    explicit CMatrix(int dim) : dim_(dim), data_(static_cast<size_t>(dim) * dim) {}

    int dim() const { return dim_; }
    Complex& operator()(int i, int j) { return data_[static_cast<size_t>(i) * dim_ + j]; }
    const Complex& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * dim_ + j]; }

  private:
    int dim_ = 0;
    CVector data_;
};

inline Complex hermitian_dot(std::span<const Complex> a, std::span<const Complex> b) {
    Complex acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
/// Pivots below 1e-12 relative to the largest diagonal entry are treated as
/// singular and raise NumericalError.
class CholeskyFactor {
  public:
    explicit CholeskyFactor(const CMatrix& a) : l_(a.dim()) {
        const int n = a.dim();
        double max_diag = 0.0;
        for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i).real()));
        const double floor = 1e-12 * std::max(max_diag, 1e-300);
        for (int j = 0; j < n; ++j) {
            double d = a(j, j).real();
            for (int k = 0; k < j; ++k) d -= std::norm(l_(j, k));
            if (!(d > floor)) throw NumericalError("covariance matrix is singular to working precision");
            const double diag = std::sqrt(d);
            l_(j, j) = diag;
            for (int i = j + 1; i < n; ++i) {
                Complex s = a(i, j);
                for (int k = 0; k < j; ++k) s -= l_(i, k) * std::conj(l_(j, k));
                l_(i, j) = s / diag;
            }
        }
    }

    int dim() const { return l_.dim(); }

    /// Solves A x = b with A = L L^H.
    CVector solve(std::span<const Complex> b) const {
        const int n = l_.dim();
        if (static_cast<int>(b.size()) != n) throw std::invalid_argument("solve: dimension mismatch");
        CVector x(b.begin(), b.end());
        for (int i = 0; i < n; ++i) { // forward L y = b
            Complex s = x[i];
            for (int k = 0; k < i; ++k) s -= l_(i, k) * x[k];
            x[i] = s / l_(i, i).real();
        }
        for (int i = n - 1; i >= 0; --i) { // backward L^H x = y
            Complex s = x[i];
            for (int k = i + 1; k < n; ++k) s -= std::conj(l_(k, i)) * x[k];
            x[i] = s / l_(i, i).real();
        }
        return x;
    }

  private:
    CMatrix l_;
};

} // namespace authsim
