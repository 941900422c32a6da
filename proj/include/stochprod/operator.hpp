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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include "json.hpp"

namespace stochprod {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

/// Raised when an eigen- or singular-value solver does not converge.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

struct Tolerances {
    double herm = 1e-9;
    double pos = 1e-9;
    double trace = 1e-9;
};

/// A finite-dimensional trace-class operator: a dense d x d complex matrix with
/// d >= 2 and finite entries.
class TraceClassOperator {
   public:
    TraceClassOperator() = default;
    explicit TraceClassOperator(Matrix m);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

   private:
    Matrix m_;
};

/// Residuals of a candidate density operator against the three state conditions.
struct StateResiduals {
    double hermiticity = 0.0;   // max |A - A*| entrywise
    double min_eigenvalue = 0.0;
    double trace_error = 0.0;   // |tr A - 1|

    bool ok(const Tolerances& tol = {}) const {
        return hermiticity <= tol.herm && min_eigenvalue >= -tol.pos && trace_error <= tol.trace;
    }
};

StateResiduals state_residuals(const Matrix& a);

/// Hermitian, positive semidefinite, unit trace (within the given tolerances).
class DensityOperator {
   public:
    DensityOperator() = default;
    /// Throws std::invalid_argument if `m` is not a state within `tol`.
    explicit DensityOperator(Matrix m, const Tolerances& tol = {});

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    operator const Matrix&() const { return m_; }

    static DensityOperator maximally_mixed(int dim);
    static DensityOperator basis_projector(int dim, int k);

   private:
    Matrix m_;
};

/// A = a1 + i a2 with a1 = a1p b1p - a1m b1m and a2 = a2p b2p - a2m b2m, where the
/// b's are states (or zero) and the positive parts are mutually orthogonal.
struct OperatorDecomposition {
    Matrix a1, a2;
    double a1p = 0, a1m = 0, a2p = 0, a2m = 0;
    Matrix b1p, b1m, b2p, b2m;

    Matrix reconstruct() const;
};

OperatorDecomposition decompose(const Matrix& a, double zero_tol = 1e-9);

double trace_norm(const Matrix& a);
bool is_hermitian(const Matrix& a, double tol);
bool is_positive(const Matrix& a, double tol);
double min_eigenvalue_hermitian(const Matrix& a);
double purity(const Matrix& rho);

// Column-major vectorization: vec(A)[i + d*j] = A(i, j).
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, int rows, int cols);
inline Matrix unvec(const Vector& v, int dim) { return unvec(v, dim, dim); }

Matrix kron(const Matrix& a, const Matrix& b);
Matrix partial_trace_second(const Matrix& joint, int dim_first, int dim_second);
Matrix partial_trace_first(const Matrix& joint, int dim_first, int dim_second);

// Seeded random generators used by samplers and tests.
Matrix random_ginibre(int rows, int cols, Rng& rng);
Matrix random_operator(int dim, Rng& rng);        // complex Gaussian entries
Matrix random_hermitian(int dim, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);         // Haar, via QR with phase fix
Vector random_unit_vector(int dim, Rng& rng);
Matrix random_pure_state(int dim, Rng& rng);
Matrix random_mixed_state(int dim, Rng& rng);     // G G* / tr, full rank a.s.

/// Per-sample seed derivation (splitmix64) so that sampled sweeps do not depend on
/// execution order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// JSON: {"dim": n, "re": [[...]], "im": [[...]]}, rows outermost.
nlohmann::json operator_to_json(const Matrix& a);
Matrix operator_from_json(const nlohmann::json& j);

}  // namespace stochprod
