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

#include <memory>
#include <optional>
#include <vector>

#include "stochprod/group.hpp"
#include "stochprod/product.hpp"

namespace stochprod {

/// The data (U, V; T, nu) of a twirled product
///   <A,T,B> = sum_g sum_h haar(g) nu(h) tr(A U_g T U_g*) V_gh B V_gh*.
class TwirledContext {
   public:
    TwirledContext(ProjectiveRep u, Matrix fiducial, GroupMeasure nu);
    TwirledContext(ProjectiveRep u, ProjectiveRep v, Matrix fiducial, GroupMeasure nu);

    const ProjectiveRep& rep_u() const { return *u_; }
    const ProjectiveRep& rep_v() const { return v_ ? *v_ : *u_; }
    const Matrix& fiducial() const { return t_; }
    const GroupMeasure& nu() const { return nu_; }
    bool same_rep() const { return !v_; }
    /// Fiducial is a density operator and nu a probability measure.
    bool stochastic() const { return stochastic_; }
    int dim() const { return u_->dim; }

   private:
    std::shared_ptr<const ProjectiveRep> u_, v_;
    Matrix t_;
    GroupMeasure nu_;
    bool stochastic_ = false;
};

/// Core evaluation with explicit ingredients. Finite groups use the convolution
/// form sum_k (w * nu)(k) V_k B V_k*; SU(2) node sets use the factorized form
/// sum_g w(g) V_g (sum_h nu(h) V_h B V_h*) V_g*.
Matrix twirled_product(const ProjectiveRep& u, const ProjectiveRep& v, const Matrix& t, const GroupMeasure& nu,
                       const Matrix& a, const Matrix& b);
Matrix triple_product(const TwirledContext& ctx, const Matrix& a, const Matrix& b);

double verify_associativity(const TwirledContext& ctx, int triples, std::uint64_t seed = 0);
double verify_commutativity(const TwirledContext& ctx, int pairs, std::uint64_t seed = 0);

struct TraceNormReport {
    double max_trace_residual = 0;  // |tr<A,T,B> - nu(G) tr A tr T tr B|
    double max_norm_excess = 0;     // max(||<A,T,B>||_1 - ||nu|| ||A|| ||T|| ||B||), may be negative
    double max_norm_ratio = 0;      // ||<A,T,B>||_1 / (||nu|| ||A|| ||T|| ||B||)
    int samples = 0;
};
/// Random complex A, T, B (T replaces the context fiducial per sample).
TraceNormReport verify_trace_and_norm(const TwirledContext& ctx, int samples, std::uint64_t seed = 0);

struct CovarianceReport {
    double left_covariance = 0;     // V_g<A,T,B>V_g* vs <U_g A U_g*, T, B>
    double fiducial_translate = 0;  // <A, U_{g^-1} T U_{g^-1}*, B>_nu vs <A,T,B>_{nu^g}
    double right_translate = 0;     // <A, T, V_{g^-1} B V_{g^-1}*>_nu vs <A,T,B>_{nu_g}
    double exchange = 0;            // nu = delta: <A, U_g T U_g*, B> vs <A, T, V_{g^-1} B V_{g^-1}*>
    double invariance = 0;          // <A,T,B>_nu vs <A, U_g T U_g*, B>_{nu^g}
    std::optional<double> abelian;  // abelian groups: the further symmetry relations
    int pairs = 0;
    double max() const;
};
/// Every group element, `pairs` random state pairs. Finite groups only.
CovarianceReport verify_covariance(const TwirledContext& ctx, int pairs, std::uint64_t seed = 0);

/// Requires the stochastic flag and V = U.
StochasticProduct as_stochastic_product(const TwirledContext& ctx);

/// A -> sum_k (mu_{rho,T} * nu)(k) V_k A V_k*  (finite groups).
Superoperator twirling_operator(const TwirledContext& ctx, const Matrix& rho);
/// sum_{g in subset} haar(g) U_g T U_g*.
Matrix covariant_povm(const ProjectiveRep& rep, const Matrix& fiducial, const std::vector<bool>& subset);
/// rho -> sum_{g in subset} haar(g) tr(rho U_g T U_g*) V_g sigma_nu V_g*, sigma_nu = sum_h nu(h) V_h sigma V_h*.
Superoperator covariant_instrument(const TwirledContext& ctx, const Matrix& sigma, const std::vector<bool>& subset);

/// {"rep": "weyl"|"su2"|"table", ...rep fields, "fiducial": operator JSON or one of
///  "maximally_mixed" | "basis0" | "random_pure" | "random_mixed",
///  "nu": measure JSON or one of "delta" | "uniform" | "random", "v": "same" | "conjugate"}
TwirledContext context_from_json(const nlohmann::json& j, std::uint64_t seed);
nlohmann::json context_to_json(const TwirledContext& ctx);
nlohmann::json covariance_report_to_json(const CovarianceReport& r);
nlohmann::json trace_norm_report_to_json(const TraceNormReport& r);

}  // namespace stochprod
