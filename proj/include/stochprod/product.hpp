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

#include <functional>
#include <string>
#include <vector>

#include "stochprod/group.hpp"
#include "stochprod/superoperator.hpp"

namespace stochprod {

using BilinearFn = std::function<Matrix(const Matrix&, const Matrix&)>;

/// Bilinear map on d x d operators that sends pairs of states to states.
///
/// Held as an evaluator plus a tagged JSON descriptor. The explicit tensor, a
/// d^2 x d^4 matrix M with vec(A.B) = M (vec(B) (x) vec(A)), is built on request
/// and only for d <= 6.
class StochasticProduct {
   public:
    static constexpr int kMaxTensorDim = 6;

    StochasticProduct() = default;
    StochasticProduct(int dim, BilinearFn f, nlohmann::json descriptor)
        : dim_(dim), f_(std::move(f)), descriptor_(std::move(descriptor)) {}

    int dim() const { return dim_; }
    Matrix operator()(const Matrix& a, const Matrix& b) const;
    const nlohmann::json& descriptor() const { return descriptor_; }
    Matrix tensor() const;

   private:
    int dim_ = 0;
    BilinearFn f_;
    nlohmann::json descriptor_;
};

/// Raised when a candidate product fails state preservation; carries the witness pair.
class ProductRejected : public std::invalid_argument {
   public:
    ProductRejected(const std::string& what, Matrix rho, Matrix sigma, StateResiduals r)
        : std::invalid_argument(what), rho(std::move(rho)), sigma(std::move(sigma)), residuals(r) {}
    Matrix rho, sigma;
    StateResiduals residuals;
};

struct ProductValidation {
    int samples = 100;
    std::uint64_t seed = 0;
    Tolerances tol{};
};

/// Sampled state-preservation check on random pure and mixed pairs; throws
/// ProductRejected with the first failing pair.
void validate_product(const StochasticProduct& p, const ProductValidation& v = {});

StochasticProduct from_bilinear(const Matrix& tensor, const ProductValidation& v = {});
/// Canonical extension of a map on pairs of states: both arguments are split into
/// their four positive parts and the map is applied bilinearly.
StochasticProduct from_state_map(int dim, BilinearFn on_states, nlohmann::json descriptor, const ProductValidation& v = {});

/// rho.sigma = alpha Phi(rho) + (1 - alpha) Psi(sigma) on states, extended bilinearly
/// as alpha tr(B) Phi(A) + (1 - alpha) tr(A) Psi(B).
StochasticProduct mixture_product(const Superoperator& phi, const Superoperator& psi, double alpha);
/// rho.sigma = sum_k tr(rho E_k) Phi_k(sigma).
StochasticProduct povm_product(const std::vector<Matrix>& effects, const std::vector<Superoperator>& channels);
/// rho.sigma = tr_aux Theta(rho (x) sigma), Theta from H (x) H to H (x) H_aux.
StochasticProduct partial_trace_product(const Superoperator& joint_channel, int dim, int dim_aux);

Superoperator left_map(const StochasticProduct& p, const Matrix& rho);   // sigma -> rho.sigma
Superoperator right_map(const StochasticProduct& p, const Matrix& sigma); // rho -> rho.sigma

struct PartialMaps {
    std::function<Superoperator(const Matrix&)> left;
    std::function<Superoperator(const Matrix&)> right;
};
PartialMaps partial_maps(const StochasticProduct& p);

enum class PointKind { bijective, injective_pureness_preserving, collapsing, generic };
std::string to_string(PointKind k);

struct PointClassification {
    PointKind kind = PointKind::generic;
    Side side = Side::left;
    MapClassification evidence;
};

PointClassification classify_point(const StochasticProduct& p, const Matrix& rho, Side side, const ClassifyOptions& opts = {});

struct CovarianceCheck {
    double max_residual = 0;
    bool passed = false;
};

/// max over group elements and sampled pairs of
/// ||(U_g rho U_g*).sigma - V_g (rho.sigma) V_g*||_1 (left), or with U_g acting on sigma (right).
CovarianceCheck check_covariance(const StochasticProduct& p, const ProjectiveRep& u, const ProjectiveRep& v, Side side,
                                 int pairs = 10, std::uint64_t seed = 0, double tol = 1e-10);

/// Pairwise level-set test: the partial maps at rho and sigma agree on the operator basis.
bool same_level_set(const StochasticProduct& p, const Matrix& rho, const Matrix& sigma, Side side, double tol = 1e-10);

nlohmann::json point_classification_to_json(const PointClassification& c);

}  // namespace stochprod
