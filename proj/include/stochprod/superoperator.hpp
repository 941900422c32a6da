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

#include <optional>
#include <string>
#include <vector>

#include "stochprod/operator.hpp"

namespace stochprod {

/// Linear map from dim_in x dim_in operators to dim_out x dim_out operators, stored
/// as a (dim_out^2 x dim_in^2) matrix acting on column-vectorized operators.
///
/// When `antilinear` is set the matrix acts on vec(conj(A)) instead of vec(A). Such
/// maps are only meaningful on Hermitian inputs; `linearized()` returns the unique
/// complex-linear map that agrees with them there.
class Superoperator {
   public:
    Superoperator() = default;
    Superoperator(int dim_in, int dim_out, Matrix matrix, bool antilinear = false);
    Superoperator(int dim, Matrix matrix, bool antilinear = false) : Superoperator(dim, dim, std::move(matrix), antilinear) {}

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    int dim() const { return dim_in_; }
    bool is_square() const { return dim_in_ == dim_out_; }
    bool antilinear() const { return antilinear_; }
    const Matrix& matrix() const { return m_; }

    Matrix apply(const Matrix& a) const;
    Matrix operator()(const Matrix& a) const { return apply(a); }

    Superoperator linearized() const;
    /// Banach-space adjoint under the pairing tr(A B): tr(Phi(A) B) = tr(A Phi'(B)).
    Matrix adjoint_apply(const Matrix& b) const;
    /// Choi matrix sum_ij E_ij (x) Phi(E_ij) of the linearized map.
    Matrix choi() const;

    static Superoperator identity(int dim);
    /// A -> A^T; the linear extension of entrywise conjugation on Hermitian operators.
    static Superoperator transpose(int dim);
    /// Builds the matrix from the action on the operator basis E_ij.
    template <class F>
    static Superoperator from_function(int dim_in, int dim_out, F&& f) {
        Matrix m(static_cast<Eigen::Index>(dim_out) * dim_out, static_cast<Eigen::Index>(dim_in) * dim_in);
        Matrix e = Matrix::Zero(dim_in, dim_in);
        for (int j = 0; j < dim_in; ++j)
            for (int i = 0; i < dim_in; ++i) {
                e(i, j) = 1.0;
                m.col(i + dim_in * j) = vec(f(static_cast<const Matrix&>(e)));
                e(i, j) = 0.0;
            }
        return Superoperator(dim_in, dim_out, std::move(m));
    }

   private:
    int dim_in_ = 0;
    int dim_out_ = 0;
    Matrix m_;
    bool antilinear_ = false;
};

Superoperator compose(const Superoperator& outer, const Superoperator& inner);
Superoperator combine(Complex a, const Superoperator& x, Complex b, const Superoperator& y);

bool is_unitary(const Matrix& u, double tol = 1e-10);
bool is_isometry(const Matrix& t, double tol = 1e-10);

/// A -> U A U*.
Superoperator conjugation_channel(const Matrix& u);
/// A -> W conj(A) W* on Hermitian A, stored as the linear map A -> W A^T W*.
Superoperator antiunitary_channel(const Matrix& w);
/// A -> tr(A) rho0.
Superoperator collapse_channel(const Matrix& rho0);
/// Twirling operator A -> sum_k weights[k] U_k A U_k*.
Superoperator twirling_channel(const std::vector<Matrix>& unitaries, const std::vector<Complex>& weights);

struct Isometry {
    Matrix matrix;          // dim_out x dim_in with T* T = I
    bool antilinear = false;
};

/// A -> sum_k p_k T_k A~ T_k* where A~ = A for linear T_k and the conjugate for
/// antilinear ones (again stored through the transpose). Ranges must be pairwise
/// orthogonal and probabilities strictly positive.
Superoperator isometry_mixture_channel(const std::vector<Isometry>& isometries, const std::vector<double>& probs);

enum class SymmetryKind { none, unitary, antiunitary };

struct MapClassification {
    bool is_trace_preserving = false;
    bool is_positive_sampled = false;
    bool is_completely_positive = false;
    bool is_pureness_preserving_sampled = false;
    bool is_symmetry = false;
    bool is_collapse = false;
    bool is_trace_reversing = false;  // tr(Phi(I)) < 0 branch, detected only
    SymmetryKind symmetry_kind = SymmetryKind::none;
    std::optional<Matrix> symmetry_operator;   // U (or W) up to a phase
    std::optional<Matrix> collapse_target;
    std::optional<Matrix> positivity_witness;  // pure state with non-positive image
    std::optional<Matrix> contraction_witness; // Hermitian, unit trace norm, strictly contracted

    // margins
    double trace_preservation_residual = 0;
    double min_output_eigenvalue = 0;
    double min_output_purity = 0;
    double choi_min_eigenvalue = 0;
    double choi_rank_ratio = 0;   // second-largest / largest Choi eigenvalue
    double collapse_residual = 0;
    double min_contraction_ratio = 1;  // min ||Phi(A)||_1 over sampled witnesses
    int samples = 0;
};

struct ClassifyOptions {
    int samples = 200;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    double rank_cutoff = 1e-8;
    double contraction_gap = 1e-6;
};

MapClassification classify(const Superoperator& phi, const ClassifyOptions& opts = {});

nlohmann::json superoperator_to_json(const Superoperator& s);
Superoperator superoperator_from_json(const nlohmann::json& j);
nlohmann::json classification_to_json(const MapClassification& c);
std::string to_string(SymmetryKind k);

}  // namespace stochprod
