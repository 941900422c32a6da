// Copyright 2026 The stochprod Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>

#include "stochprod/operator.hpp"

namespace testutil {

using stochprod::Complex;
using stochprod::Matrix;

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline Matrix ket_bra(const Eigen::VectorXcd& v) { return v * v.adjoint(); }

// Independent state check: Hermitian part eigenvalues via a fresh solver.
inline double state_violation(const Matrix& m) {
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
    return std::max({herm, -es.eigenvalues().minCoeff(), std::abs(m.trace() - 1.0), 0.0});
}

// Nuclear norm straight from an SVD.
inline double svd_trace_norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
}

}  // namespace testutil
