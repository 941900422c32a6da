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

/// Finite group given by its Cayley table: cayley[g][h] = index of gh.
class FiniteGroup {
   public:
    FiniteGroup() = default;
    /// Validates the Latin-square property, identity, inverses and associativity
    /// (all triples up to order 64, a seeded sample of 20000 triples above).
    explicit FiniteGroup(std::vector<std::vector<int>> cayley);

    int order() const { return static_cast<int>(cayley_.size()); }
    int mul(int g, int h) const { return cayley_[g][h]; }
    int inv(int g) const { return inverse_[g]; }
    int identity() const { return identity_; }
    bool is_abelian() const { return abelian_; }
    const std::vector<std::vector<int>>& cayley() const { return cayley_; }

    static FiniteGroup trivial();
    /// Z_d x Z_d with (q, p) stored at index q*d + p.
    static FiniteGroup cyclic_square(int d);

   private:
    std::vector<std::vector<int>> cayley_;
    std::vector<int> inverse_;
    int identity_ = 0;
    bool abelian_ = true;
};

/// SU(2) Euler-angle quadrature (z-y-z convention).
struct QuadratureGroup {
    struct Node {
        double alpha, beta, gamma;
    };
    std::vector<Node> nodes;
    std::vector<double> weights;  // probability Haar weights, sum 1
    int two_j = 1;
    int n_beta = 0;
    int n_alpha = 0;
};

/// Projective unitary representation on a finite group or on an SU(2) node set.
///
/// Elements are indexed 0..size()-1. `haar` holds the measure already scaled so that
/// the orthogonality constant is 1; `c_u_probability` is the constant for the
/// probability-normalized Haar measure. For SU(2) the last element is the group
/// identity with Haar weight 0, so Dirac measures at e are representable.
class ProjectiveRep {
   public:
    std::string name;
    int dim = 0;
    std::vector<Matrix> matrices;
    std::vector<double> haar;
    double c_u_probability = 1.0;
    bool irreducible = true;
    std::optional<FiniteGroup> group;              // finite case
    std::optional<QuadratureGroup> quadrature;     // SU(2) case
    std::vector<std::vector<Complex>> multiplier;  // finite case only

    int size() const { return static_cast<int>(matrices.size()); }
    bool is_finite() const { return group.has_value(); }
    bool is_abelian() const { return group && group->is_abelian(); }
    int identity() const { return group ? group->identity() : size() - 1; }
    /// U_g A U_g*
    Matrix act(int g, const Matrix& a) const { return matrices[g] * a * matrices[g].adjoint(); }
};

ProjectiveRep weyl_heisenberg_rep(int d);
/// j is a positive half-integer with 2j+1 <= 8; zero node counts select the defaults
/// n_beta = 2*ceil(2j)+2, n_alpha = 4j+2 (n_gamma = n_alpha).
ProjectiveRep su2_quadrature_rep(double j, int n_beta = 0, int n_alpha = 0);
/// Wigner small-d matrix element d^j_{m'm}(beta), indices given as 2m', 2m.
double wigner_small_d(int two_j, int two_mp, int two_m, double beta);
/// Verifies (not constructs) a user-supplied rep: unitarity, scalar multiplier with
/// unit modulus, cocycle identity. Irreducibility is computed from the character
/// norm; irreducible reps get Haar weights dim/|G| (c_u = 1), reducible ones 1/|G|.
ProjectiveRep rep_from_table(const FiniteGroup& g, const std::vector<Matrix>& matrices, std::string name = "table");
/// g -> conj(U_g), a projective rep with the conjugate multiplier.
ProjectiveRep conjugate_rep(const ProjectiveRep& u);
/// U_g (+) U_g, reducible.
ProjectiveRep direct_sum_rep(const ProjectiveRep& a, const ProjectiveRep& b);
ProjectiveRep trivial_rep(int dim);

struct RepCheck {
    double unitarity = 0;
    double multiplier_relation = 0;  // max |U(gh) - m U(g)U(h)|
    double multiplier_modulus = 0;   // max ||m| - 1|
    double cocycle = 0;
    double adjoint_relation = 0;     // max |U(g)* - m(g,g^-1) U(g^-1)|
    double character_norm = 0;       // sum_g |tr U_g|^2 / |G|, 1 iff irreducible
};
RepCheck check_rep(const ProjectiveRep& rep);

/// max over trials of |sum_g haar(g) <eta,U_g phi><U_g psi,chi> - <eta,chi><psi,phi>|.
double verify_orthogonality(const ProjectiveRep& rep, int trials, std::uint64_t seed = 0);

enum class MeasureKind { probability, complex };

struct GroupMeasure {
    std::vector<Complex> weights;
    MeasureKind kind = MeasureKind::complex;

    int size() const { return static_cast<int>(weights.size()); }
    Complex total() const;
    double total_variation() const;
    /// Probability kind: real, nonnegative, sum 1 within 1e-12.
    bool is_probability(double tol = 1e-12) const;
};

GroupMeasure dirac(const ProjectiveRep& rep, int g);
inline GroupMeasure dirac(const ProjectiveRep& rep) { return dirac(rep, rep.identity()); }
/// Normalized Haar measure as a probability measure.
GroupMeasure uniform(const ProjectiveRep& rep);
GroupMeasure random_probability(const ProjectiveRep& rep, Rng& rng);
/// Complex measure with prescribed total variation.
GroupMeasure random_complex_measure(const ProjectiveRep& rep, double total_variation, Rng& rng);
GroupMeasure zero_measure(const ProjectiveRep& rep);

/// g -> haar(g) tr(A U_g T U_g*).
GroupMeasure measure_of_state_pair(const ProjectiveRep& rep, const Matrix& a, const Matrix& t);

/// (mu * nu)(k) = sum_{gh=k} mu(g) nu(h).
GroupMeasure convolve(const GroupMeasure& mu, const GroupMeasure& nu, const FiniteGroup& g);

enum class Side { left, right };
/// left: nu^g({k}) = nu(g^-1 k); right: nu_g({k}) = nu(k g).
GroupMeasure translate(const GroupMeasure& nu, int g, Side side, const FiniteGroup& grp);

std::string to_string(Side s);
Side side_from_string(const std::string& s);

nlohmann::json measure_to_json(const GroupMeasure& m);
GroupMeasure measure_from_json(const nlohmann::json& j);
nlohmann::json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const nlohmann::json& j);
/// {"rep": "weyl", "d": n} | {"rep": "su2", "j": x, "n_beta": .., "n_alpha": ..} |
/// {"rep": "table", "group": {...}, "matrices": [operator JSON, ...]}
ProjectiveRep rep_from_json(const nlohmann::json& j);
nlohmann::json rep_to_json(const ProjectiveRep& rep);

}  // namespace stochprod
