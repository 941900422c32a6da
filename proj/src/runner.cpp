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

#include "stochprod/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "stochprod/group.hpp"
#include "stochprod/operator.hpp"
#include "stochprod/phase_space.hpp"
#include "stochprod/product.hpp"
#include "stochprod/superoperator.hpp"
#include "stochprod/twirled.hpp"

namespace stochprod {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// running maxima of signed excesses start here
constexpr double kNoSample = -std::numeric_limits<double>::infinity();

class Checks {
   public:
    void at_most(const std::string& name, double value, double threshold) {
        add(name, value, threshold, "<=", value <= threshold);
    }
    void at_least(const std::string& name, double value, double threshold) {
        add(name, value, threshold, ">=", value >= threshold);
    }
    void holds(const std::string& name, bool value) {
        items_.push_back({{"name", name}, {"value", value}, {"passed", value}});
        ok_ = ok_ && value;
    }
    void record(const std::string& name, json value) { items_.push_back({{"name", name}, {"value", std::move(value)}}); }
    void error(const std::string& name, const std::string& what) {
        items_.push_back({{"name", name}, {"error", what}, {"passed", false}});
        ok_ = false;
    }
    /// Runs f, turning any exception into a failed check.
    void guard(const std::string& name, const std::function<void()>& f) {
        try {
            f();
        } catch (const std::exception& e) {
            error(name, e.what());
        }
    }
    bool ok() const { return ok_; }
    json items() const { return items_; }

   private:
    void add(const std::string& name, double value, double threshold, const char* rel, bool passed) {
        json v = std::isfinite(value) ? json(value) : json(std::to_string(value));
        items_.push_back({{"name", name}, {"value", v}, {"threshold", threshold}, {"relation", rel}, {"passed", passed}});
        ok_ = ok_ && passed;
    }
    json items_ = json::array();
    bool ok_ = true;
};

double tol(const RunConfig& cfg, const char* key, double dflt) {
    if (cfg.tolerances.contains(key)) return cfg.tolerances.at(key).get<double>();
    return dflt;
}

Rng rng_for(const RunConfig& cfg, std::uint64_t stream) { return Rng(derive_seed(cfg.seed, stream)); }

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Matrix pauli_x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return m;
}

Matrix pauli_z() {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = -1.0;
    return m;
}

Matrix hadamard() {
    Matrix m(2, 2);
    m << 1.0, 1.0, 1.0, -1.0;
    return m / std::sqrt(2.0);
}

Matrix ket_plus() {
    Matrix m = Matrix::Constant(2, 2, 0.5);
    return m;
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

double state_violation(const Matrix& m) {
    const auto r = state_residuals(m);
    return std::max({r.hermiticity, -r.min_eigenvalue, r.trace_error, 0.0});
}

std::string ctx_label(const json& d) {
    std::ostringstream os;
    os << d.at("rep").get<std::string>();
    if (d.contains("d")) os << d.at("d").get<int>();
    if (d.contains("j")) os << "_j" << d.at("j").get<double>();
    if (d.contains("fiducial") && d.at("fiducial").is_string()) os << "/" << d.at("fiducial").get<std::string>();
    if (d.contains("nu") && d.at("nu").is_string()) os << "/" << d.at("nu").get<std::string>();
    return os.str();
}

// ---------------------------------------------------------------- operator-core

json suite_operator_core(const RunConfig& cfg, Checks& c) {
    const double rec_tol = tol(cfg, "reconstruction", 1e-10);
    double rec = 0, ortho = 0, tr_excess = kNoSample, state_norm = 0;
    for (int d = 2; d <= 8; ++d)
        for (int s = 0; s < 100; ++s) {
            Rng rng = rng_for(cfg, 1000 * d + s);
            const Matrix a = random_operator(d, rng);
            const auto dec = decompose(a);
            rec = std::max(rec, max_abs(dec.reconstruct() - a));
            ortho = std::max({ortho, trace_norm(dec.b1p * dec.b1m), trace_norm(dec.b2p * dec.b2m)});
            tr_excess = std::max(tr_excess, std::abs(a.trace()) - trace_norm(a));
            const Matrix rho = random_mixed_state(d, rng);
            state_norm = std::max(state_norm, std::abs(trace_norm(rho) - 1.0));
        }
    c.at_most("decompose_reconstruction", rec, rec_tol);
    c.at_most("decompose_orthogonality", ortho, 1e-10);
    c.at_most("trace_bounded_by_trace_norm", tr_excess, 1e-12);
    c.at_most("state_trace_norm_is_one", state_norm, 1e-12);

    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    const auto dec = decompose(nil);
    const double w = std::max({std::abs(dec.a1p - 0.5), std::abs(dec.a1m - 0.5), std::abs(dec.a2p - 0.5), std::abs(dec.a2m - 0.5)});
    c.at_most("nilpotent_decomposition_weights", w, 1e-12);
    Matrix two = Matrix::Zero(2, 2);
    two(0, 1) = 2.0;
    c.at_most("trace_norm_of_rank_one_nilpotent", std::abs(trace_norm(two) - 2.0), 1e-12);
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.75;
    diag(1, 1) = 0.25;
    c.at_most("purity_of_diag_075_025", std::abs(purity(diag) - 0.625), 1e-15);
    Matrix nearly = Matrix::Identity(2, 2);
    nearly(1, 1) = -1e-3;
    c.holds("negative_diagonal_not_positive", !is_positive(nearly, 1e-10));
    return json::object();
}

// ---------------------------------------------------------------- stochastic-maps

json suite_stochastic_maps(const RunConfig& cfg, Checks& c) {
    const double t9 = 1e-9;
    ClassifyOptions opts;
    opts.seed = derive_seed(cfg.seed, 77);

    // symmetries
    int sym_ok = 0, phase_ok = 0;
    for (int k = 0; k < 20; ++k) {
        const int d = 2 + k % 5;
        Rng rng = rng_for(cfg, 2000 + k);
        const Matrix u = random_unitary(d, rng);
        const auto cl = classify(conjugation_channel(u), opts);
        if (cl.is_symmetry && cl.symmetry_kind == SymmetryKind::unitary && !cl.is_collapse) ++sym_ok;
        if (cl.symmetry_operator && std::abs(std::abs((cl.symmetry_operator->adjoint() * u).trace()) - d) <= 1e-8) ++phase_ok;
    }
    c.at_least("conjugation_channels_classified_symmetric", sym_ok, 20);
    c.at_least("recovered_unitary_matches_up_to_phase", phase_ok, 20);

    {
        Rng rng = rng_for(cfg, 2100);
        const Matrix w = random_unitary(3, rng);
        const auto cl = classify(antiunitary_channel(w), opts);
        c.holds("antiunitary_channel_classified_antiunitary", cl.is_symmetry && cl.symmetry_kind == SymmetryKind::antiunitary);
        c.holds("antiunitary_channel_not_cp", !cl.is_completely_positive);
        Matrix a = Matrix::Zero(2, 2);
        a(0, 1) = Complex(0, 1);
        a(1, 0) = Complex(0, -1);
        c.at_most("antiunitary_identity_conjugates_entries", max_abs(antiunitary_channel(Matrix::Identity(2, 2))(a) - a.conjugate()), 1e-15);
    }

    // collapse channel on a pure target
    {
        Rng rng = rng_for(cfg, 2200);
        const Matrix p = random_pure_state(3, rng);
        const auto cl = classify(collapse_channel(p), opts);
        c.holds("collapse_detected", cl.is_collapse && cl.collapse_target.has_value());
        c.holds("collapse_pure_is_pureness_preserving", cl.is_pureness_preserving_sampled);
        c.holds("collapse_not_symmetry", !cl.is_symmetry);
        c.at_most("collapse_contraction_witness_ratio", cl.min_contraction_ratio, 1.0 - 1e-6);
        c.holds("collapse_witness_present", cl.contraction_witness.has_value());
    }

    // isometric stochastic map that is not a symmetry (two blocks, d = 2 -> 4)
    {
        Matrix t1 = Matrix::Zero(4, 2), t2 = Matrix::Zero(4, 2);
        t1(0, 0) = t1(1, 1) = 1.0;
        t2(2, 0) = t2(3, 1) = 1.0;
        const Superoperator phi = isometry_mixture_channel({{t1, false}, {t2, true}}, {0.5, 0.5});
        const auto cl = classify(phi, opts);
        c.holds("isometry_mixture_trace_preserving", cl.is_trace_preserving);
        c.holds("isometry_mixture_not_pureness_preserving", !cl.is_pureness_preserving_sampled);
        double iso = 0;
        for (int s = 0; s < 50; ++s) {
            Rng rng = rng_for(cfg, 2300 + s);
            const Matrix a = random_hermitian(2, rng);
            iso = std::max(iso, std::abs(trace_norm(phi(a)) - trace_norm(a)));
        }
        c.at_most("isometry_mixture_isometric_on_hermitian", iso, t9);
        Rng rng = rng_for(cfg, 2399);
        const Matrix out = phi(random_pure_state(2, rng));
        Eigen::SelfAdjointEigenSolver<Matrix> es(out);
        int rank = 0;
        for (int k = 0; k < 4; ++k) rank += es.eigenvalues()(k) > 1e-9;
        c.at_least("isometry_mixture_pure_input_rank", rank, 2);
    }

    // stochastic maps: contraction on Hermitians, states to states, attained norm on states
    {
        Rng rng = rng_for(cfg, 2400);
        const int d = 3;
        const Matrix u = random_unitary(d, rng);
        const Matrix rho0 = random_mixed_state(d, rng);
        std::vector<Superoperator> maps = {conjugation_channel(u), collapse_channel(rho0),
                                           combine(0.4, conjugation_channel(u), 0.6, collapse_channel(rho0)),
                                           antiunitary_channel(u)};
        double excess = kNoSample, validity = 0, norm_dev = 0;
        for (const auto& m : maps)
            for (int s = 0; s < 50; ++s) {
                const Matrix a = random_hermitian(d, rng);
                excess = std::max(excess, trace_norm(m(a)) - trace_norm(a));
                const Matrix rho = random_mixed_state(d, rng);
                validity = std::max(validity, state_violation(m(rho)));
                norm_dev = std::max(norm_dev, std::abs(trace_norm(m(rho)) - 1.0));
            }
        c.at_most("stochastic_maps_contract_hermitian", excess, t9);
        c.at_most("stochastic_maps_preserve_states", validity, t9);
        c.at_most("stochastic_maps_norm_attained_on_states", norm_dev, t9);

        // pureness preserving maps do not decrease purity
        double drop = kNoSample;
        const Matrix target = random_pure_state(d, rng);
        for (const auto& m : {conjugation_channel(u), collapse_channel(target)})
            for (int s = 0; s < 50; ++s) {
                const Matrix rho = random_mixed_state(d, rng);
                drop = std::max(drop, purity(rho) - purity(m(rho)));
            }
        c.at_most("pureness_preserving_purity_nondecreasing", drop, t9);

        // dichotomy: symmetry has no strict contraction, collapse has one
        const auto sym = classify(conjugation_channel(u), opts);
        c.at_least("symmetry_is_trace_norm_isometric", sym.min_contraction_ratio, 1.0 - t9);
        const auto mixed = classify(maps[2], opts);
        c.holds("convex_mix_not_pureness_preserving", !mixed.is_pureness_preserving_sampled);
    }

    {
        const Superoperator neg = combine(-1.0, Superoperator::identity(2), 0.0, Superoperator::identity(2));
        c.holds("trace_reversing_branch_detected", classify(neg, opts).is_trace_reversing);
    }
    return json::object();
}

// ---------------------------------------------------------------- stochastic-products

struct ProductProperties {
    double trace_mult = 0, herm_excess = kNoSample, complex_ratio = 0, lipschitz_excess = kNoSample, consistency = 0, validity = 0;
};

ProductProperties product_properties(const StochasticProduct& p, const RunConfig& cfg, std::uint64_t stream, int samples) {
    ProductProperties r;
    const int d = p.dim();
    for (int s = 0; s < samples; ++s) {
        Rng rng = rng_for(cfg, stream + s);
        const Matrix a = random_operator(d, rng), b = random_operator(d, rng);
        const Matrix ab = p(a, b);
        r.trace_mult = std::max(r.trace_mult, std::abs(ab.trace() - a.trace() * b.trace()));
        r.complex_ratio = std::max(r.complex_ratio, trace_norm(ab) / (trace_norm(a) * trace_norm(b)));
        const Matrix ha = random_hermitian(d, rng), hb = random_hermitian(d, rng);
        r.herm_excess = std::max(r.herm_excess, trace_norm(p(ha, hb)) - trace_norm(ha) * trace_norm(hb));
        const Matrix r1 = random_mixed_state(d, rng), r2 = random_mixed_state(d, rng);
        const Matrix s1 = random_mixed_state(d, rng), s2 = random_mixed_state(d, rng);
        const Matrix o = p(r1, s1);
        r.validity = std::max(r.validity, state_violation(o));
        r.lipschitz_excess = std::max(r.lipschitz_excess,
                                      trace_norm(o - p(r2, s2)) - 2 * (trace_norm(r1 - r2) + trace_norm(s1 - s2)));
        if (s < 5) {
            const Matrix l = left_map(p, r1)(s1);
            const Matrix rr = right_map(p, s1)(r1);
            r.consistency = std::max(r.consistency, max_abs(l - rr));
        }
    }
    return r;
}

json suite_stochastic_products(const RunConfig& cfg, Checks& c) {
    const int d = 3;
    Rng rng = rng_for(cfg, 3000);
    const Matrix u = random_unitary(d, rng), v = random_unitary(d, rng);
    const Matrix rho0 = random_mixed_state(d, rng);

    std::vector<std::pair<std::string, StochasticProduct>> products;
    c.guard("construct_products", [&] {
        products.emplace_back("mixture", mixture_product(conjugation_channel(u), collapse_channel(rho0), 0.3));
        Matrix e = Matrix::Zero(d, d);
        e(0, 0) = 1.0;
        products.emplace_back("povm", povm_product({e, Matrix::Identity(d, d) - e}, {conjugation_channel(u), conjugation_channel(v)}));
        Matrix swap = Matrix::Zero(d * d, d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) swap(j * d + i, i * d + j) = 1.0;
        products.emplace_back("partial_trace_swap", partial_trace_product(conjugation_channel(swap), d, d));
        ProjectiveRep wh = weyl_heisenberg_rep(d);
        const GroupMeasure delta = dirac(wh);
        products.emplace_back("twirled", as_stochastic_product(TwirledContext(std::move(wh), random_pure_state(d, rng), delta)));
        Matrix lc = Matrix::Zero(d * d, d * d * d * d);  // (rho, sigma) -> sigma, extended as tr(A) B
        for (int ia = 0; ia < d; ++ia)
            for (int ib = 0; ib < d * d; ++ib) lc(ib, static_cast<Eigen::Index>(ib) * d * d + ia * (d + 1)) = 1.0;
        products.emplace_back("left_constant_tensor", from_bilinear(lc));
    });

    std::uint64_t stream = 3100;
    for (const auto& [name, p] : products) {
        const auto pr = product_properties(p, cfg, stream, 30);
        stream += 100;
        c.at_most(name + ".trace_multiplicative", pr.trace_mult, 1e-10);
        c.at_most(name + ".hermitian_contractive", pr.herm_excess, 1e-9);
        c.at_most(name + ".complex_bound_ratio", pr.complex_ratio, 2.0 + 1e-9);
        c.at_most(name + ".lipschitz_excess", pr.lipschitz_excess, 1e-9);
        c.at_most(name + ".partial_map_consistency", pr.consistency, 1e-12);
        c.at_most(name + ".state_preserving", pr.validity, 1e-9);
    }

    // operator composition is not a stochastic product
    {
        Matrix comp = Matrix::Zero(4, 16);
        for (int ia = 0; ia < 4; ++ia)
            for (int ib = 0; ib < 4; ++ib) {
                Matrix ea = Matrix::Zero(2, 2), eb = Matrix::Zero(2, 2);
                ea(ia % 2, ia / 2) = 1.0;
                eb(ib % 2, ib / 2) = 1.0;
                comp.col(ib * 4 + ia) = vec(ea * eb);
            }
        bool rejected = false;
        try {
            from_bilinear(comp);
        } catch (const ProductRejected&) {
            rejected = true;
        }
        c.holds("composition_product_rejected", rejected);
    }

    // CNOT partial-trace product
    c.guard("cnot_partial_trace", [&] {
        const auto p = partial_trace_product(conjugation_channel(cnot()), 2, 2);
        c.at_most("cnot_partial_trace_plus_plus", max_abs(p(ket_plus(), ket_plus()) - ket_plus()), 1e-12);
    });

    // two-effect product: point classification and informational incompleteness
    c.guard("two_effect_points", [&] {
        Rng r2 = rng_for(cfg, 3900);
        const Matrix uu = random_unitary(2, r2), vv = random_unitary(2, r2);
        Matrix e = Matrix::Zero(2, 2);
        e(0, 0) = 1.0;
        const auto p = povm_product({e, Matrix::Identity(2, 2) - e}, {conjugation_channel(uu), conjugation_channel(vv)});
        ClassifyOptions o;
        o.seed = derive_seed(cfg.seed, 3901);
        c.holds("two_effect_bijective_point", classify_point(p, e, Side::left, o).kind == PointKind::bijective);
        const Matrix generic = random_mixed_state(2, r2);
        c.holds("two_effect_generic_point", classify_point(p, generic, Side::left, o).kind == PointKind::generic);
        Eigen::JacobiSVD<Matrix> svd(right_map(p, generic).matrix());
        int rank = 0;
        for (int k = 0; k < svd.singularValues().size(); ++k) rank += svd.singularValues()(k) > 1e-10;
        c.at_most("two_effect_right_map_rank", rank, 2);
    });

    // covariance: twirled passes, a non-commuting mixture fails
    c.guard("covariance", [&] {
        const ProjectiveRep wh = weyl_heisenberg_rep(2);
        Rng r3 = rng_for(cfg, 3950);
        const auto tw = as_stochastic_product(TwirledContext(wh, random_pure_state(2, r3), dirac(wh)));
        c.at_most("twirled_left_covariant", check_covariance(tw, wh, wh, Side::left, 5, cfg.seed).max_residual, 1e-10);
        const auto mix = mixture_product(conjugation_channel(hadamard()), Superoperator::identity(2), 0.5);
        c.at_least("noncommuting_mixture_covariance_margin", check_covariance(mix, wh, wh, Side::left, 5, cfg.seed).max_residual, 1e-3);
        const auto trivial = trivial_rep(2);
        c.at_most("trivial_group_covariance", check_covariance(mix, trivial, trivial, Side::left, 5, cfg.seed).max_residual, 1e-12);
    });

    c.guard("level_sets", [&] {
        const auto lc = mixture_product(Superoperator::identity(d), Superoperator::identity(d), 0.0);
        Rng r4 = rng_for(cfg, 3990);
        c.holds("right_constant_same_level_set",
                same_level_set(lc, random_mixed_state(d, r4), random_mixed_state(d, r4), Side::left));
    });
    return json::object();
}

// ---------------------------------------------------------------- group-harmonics

json suite_group_harmonics(const RunConfig& cfg, Checks& c) {
    const double ortho_finite = tol(cfg, "orthogonality_finite", 1e-12);
    const double ortho_su2 = tol(cfg, "orthogonality_su2", 1e-8);
    json info = json::object();
    for (int d = 2; d <= 6; ++d) {
        const auto rep = weyl_heisenberg_rep(d);
        const auto chk = check_rep(rep);
        const std::string p = "weyl" + std::to_string(d);
        c.at_most(p + ".multiplier_relation", chk.multiplier_relation, 1e-12);
        c.at_most(p + ".cocycle", chk.cocycle, 1e-12);
        c.at_most(p + ".adjoint_relation", chk.adjoint_relation, 1e-12);
        c.at_most(p + ".character_norm_deviation", std::abs(chk.character_norm - 1.0), 1e-12);
        c.at_most(p + ".orthogonality", verify_orthogonality(rep, 20, derive_seed(cfg.seed, 4000 + d)), ortho_finite);
        c.holds(p + ".abelian", rep.is_abelian());
        Rng rng = rng_for(cfg, 4100 + d);
        const Matrix a = random_operator(d, rng);
        Matrix tw = Matrix::Zero(d, d);
        for (int g = 0; g < rep.size(); ++g) tw += rep.haar[g] * rep.act(g, a);
        c.at_most(p + ".twirl_is_trace", max_abs(tw - a.trace() * Matrix::Identity(d, d)), 1e-12);
    }
    {
        const auto rep = weyl_heisenberg_rep(2);
        auto prop = [](const Matrix& x, const Matrix& y) { return std::abs(std::abs((x.adjoint() * y).trace()) - 2.0); };
        const double dev = std::max({prop(rep.matrices[1], pauli_z()), prop(rep.matrices[2], pauli_x()),
                                     prop(rep.matrices[3], pauli_x() * pauli_z()), prop(rep.matrices[0], Matrix::Identity(2, 2))});
        c.at_most("weyl2.phased_paulis", dev, 1e-12);
    }
    for (const auto& [j, nb, na] : {std::tuple{0.5, 4, 0}, std::tuple{1.0, 8, 8}, std::tuple{1.5, 0, 0}}) {
        const auto rep = su2_quadrature_rep(j, nb, na);
        std::ostringstream p;
        p << "su2_j" << j;
        c.at_most(p.str() + ".orthogonality", verify_orthogonality(rep, 20, derive_seed(cfg.seed, 4200)), ortho_su2);
        c.at_most(p.str() + ".unitarity", check_rep(rep).unitarity, 1e-12);
        // D-matrix entry orthogonality with the probability weights
        const int n = rep.dim;
        double worst = 0;
        const auto& w = rep.quadrature->weights;
        for (int m = 0; m < n; ++m)
            for (int k = 0; k < n; ++k)
                for (int m2 = 0; m2 < n; ++m2)
                    for (int k2 = 0; k2 < n; ++k2) {
                        Complex s = 0;
                        for (int g = 0; g < rep.size(); ++g) s += w[g] * rep.matrices[g](m, k) * std::conj(rep.matrices[g](m2, k2));
                        const double expect = (m == m2 && k == k2) ? 1.0 / n : 0.0;
                        worst = std::max(worst, std::abs(s - expect));
                    }
        c.at_most(p.str() + ".entry_orthogonality", worst, 1e-8);
    }
    {
        bool rejected = false;
        try {
            su2_quadrature_rep(0.0);
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        c.holds("su2_j0_rejected", rejected);
    }
    {
        const auto w2 = weyl_heisenberg_rep(2);
        const auto red = direct_sum_rep(w2, w2);
        c.holds("direct_sum_flagged_reducible", !red.irreducible);
        c.at_least("direct_sum_orthogonality_residual", verify_orthogonality(red, 20, derive_seed(cfg.seed, 4300)), 1e-2);
    }
    {
        const int d = 3;
        const auto rep = weyl_heisenberg_rep(d);
        const FiniteGroup& grp = *rep.group;
        double state_sum = 0, general_sum = 0, tv_excess = kNoSample;
        for (int s = 0; s < 20; ++s) {
            Rng rng = rng_for(cfg, 4400 + s);
            const Matrix rho = random_mixed_state(d, rng), t = random_pure_state(d, rng);
            state_sum = std::max(state_sum, std::abs(measure_of_state_pair(rep, rho, t).total() - 1.0));
            const Matrix a = random_operator(d, rng), tt = random_operator(d, rng);
            const auto mu = measure_of_state_pair(rep, a, tt);
            general_sum = std::max(general_sum, std::abs(mu.total() - a.trace() * tt.trace()));
            tv_excess = std::max(tv_excess, mu.total_variation() - trace_norm(a) * trace_norm(tt));
        }
        c.at_most("state_pair_measure_is_probability", state_sum, 1e-12);
        c.at_most("state_pair_measure_total", general_sum, 1e-10);
        c.at_most("state_pair_measure_total_variation", tv_excess, 1e-9);
        const Matrix mm = Matrix::Identity(d, d) / static_cast<double>(d);
        const auto mu_mm = measure_of_state_pair(rep, mm, mm);
        double unif = 0;
        for (const auto& x : mu_mm.weights) unif = std::max(unif, std::abs(x - 1.0 / (d * d)));
        c.at_most("maximally_mixed_pair_uniform", unif, 1e-15);

        Rng rng = rng_for(cfg, 4500);
        const auto nu = random_probability(rep, rng), mu = random_probability(rep, rng);
        auto dist = [](const GroupMeasure& a, const GroupMeasure& b) {
            double m = 0;
            for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.weights[k] - b.weights[k]));
            return m;
        };
        c.at_most("convolve_with_delta", dist(convolve(mu, dirac(rep), grp), mu), 1e-15);
        c.at_most("uniform_absorbs", dist(convolve(uniform(rep), nu, grp), uniform(rep)), 1e-15);
        double act = 0, unif_inv = 0, delta_move = 0, haar = 0;
        for (int g = 0; g < grp.order(); ++g) {
            delta_move = std::max(delta_move, dist(translate(dirac(rep), g, Side::left, grp), dirac(rep, g)));
            unif_inv = std::max({unif_inv, dist(translate(uniform(rep), g, Side::left, grp), uniform(rep)),
                                 dist(translate(uniform(rep), g, Side::right, grp), uniform(rep))});
            for (int h = 0; h < grp.order(); ++h)
                act = std::max(act, dist(translate(translate(nu, h, Side::left, grp), g, Side::left, grp),
                                         translate(nu, grp.mul(g, h), Side::left, grp)));
            Complex s1 = 0, s2 = 0;
            for (int k = 0; k < grp.order(); ++k) {
                s1 += rep.haar[k] * nu.weights[grp.mul(g, k)];
                s2 += rep.haar[k] * nu.weights[k];
            }
            haar = std::max(haar, std::abs(s1 - s2));
        }
        c.at_most("translate_dirac", delta_move, 0.0);
        c.at_most("translate_uniform_invariant", unif_inv, 1e-15);
        c.at_most("translate_is_group_action", act, 0.0);
        c.at_most("haar_invariance", haar, 1e-15);
        const auto z2 = weyl_heisenberg_rep(2);
        c.at_most("z2xz2_point_masses",
                  dist(convolve(dirac(z2, 2), dirac(z2, 1), *z2.group), dirac(z2, 3)), 0.0);
    }
    return info;
}

// ---------------------------------------------------------------- twirled

json default_contexts(bool su2) {
    if (su2)
        return json::array({{{"rep", "su2"}, {"j", 0.5}, {"fiducial", "random_pure"}, {"nu", "delta"}},
                            {{"rep", "su2"}, {"j", 1.0}, {"fiducial", "random_mixed"}, {"nu", "delta"}}});
    return json::array({{{"rep", "weyl"}, {"d", 3}, {"fiducial", "random_pure"}, {"nu", "delta"}},
                        {{"rep", "weyl"}, {"d", 2}, {"fiducial", "random_mixed"}, {"nu", "random"}},
                        {{"rep", "weyl"}, {"d", 5}, {"fiducial", "basis0"}, {"nu", "uniform"}},
                        {{"rep", "weyl"}, {"d", 3}, {"fiducial", "random_pure"}, {"nu", "delta"}, {"v", "conjugate"}}});
}

void twirled_context_checks(const RunConfig& cfg, const TwirledContext& ctx, const std::string& p, Checks& c,
                            std::uint64_t stream) {
    const bool finite = ctx.rep_u().is_finite();
    const double t = finite ? tol(cfg, "finite", 1e-10) : tol(cfg, "quadrature", 1e-6);
    const double state_tol = finite ? tol(cfg, "state", 1e-9) : tol(cfg, "state_quadrature", 1e-6);
    const int d = ctx.dim();
    const Matrix mm = Matrix::Identity(d, d) / static_cast<double>(d);

    if (ctx.stochastic()) {
        double worst = 0;
        for (int s = 0; s < 200; ++s) {
            Rng rng = rng_for(cfg, stream + s);
            const bool pure = s % 2 == 0;
            const Matrix a = pure ? random_pure_state(d, rng) : random_mixed_state(d, rng);
            const Matrix b = pure ? random_pure_state(d, rng) : random_mixed_state(d, rng);
            worst = std::max(worst, state_violation(triple_product(ctx, a, b)));
        }
        c.at_most(p + ".stochasticity", worst, state_tol);
    }
    if (d == ctx.rep_v().dim) {
        const double assoc = verify_associativity(ctx, 50, derive_seed(cfg.seed, stream + 1000));
        if (ctx.same_rep())
            c.at_most(p + ".associativity", assoc, t);
        else
            c.record(p + ".associativity_residual_v_differs", assoc);
        const double comm = verify_commutativity(ctx, 50, derive_seed(cfg.seed, stream + 1100));
        if (ctx.rep_u().is_abelian() && ctx.same_rep())
            c.at_most(p + ".commutativity", comm, t);
        else
            c.record(p + ".commutativity_residual", comm);
    }
    const auto tn = verify_trace_and_norm(ctx, 100, derive_seed(cfg.seed, stream + 1200));
    c.at_most(p + ".trace_law", tn.max_trace_residual, 1e-10);
    c.at_most(p + ".norm_law_excess", tn.max_norm_excess, 1e-9);
    {
        Rng rng = rng_for(cfg, stream + 1300);
        const TwirledContext cx(ctx.rep_u(), ctx.fiducial(), random_complex_measure(ctx.rep_u(), 2.0, rng));
        const auto tc = verify_trace_and_norm(cx, 100, derive_seed(cfg.seed, stream + 1301));
        c.at_most(p + ".trace_law_complex_nu", tc.max_trace_residual, 1e-10);
        c.at_most(p + ".norm_law_excess_complex_nu", tc.max_norm_excess, 1e-9);
        c.at_most(p + ".norm_ratio_complex_nu", tc.max_norm_ratio, 1.0 + 1e-9);
    }
    if (finite && d == ctx.rep_v().dim) {
        const auto cov = verify_covariance(ctx, 10, derive_seed(cfg.seed, stream + 1400));
        c.at_most(p + ".left_covariance", cov.left_covariance, t);
        c.at_most(p + ".fiducial_translate", cov.fiducial_translate, t);
        c.at_most(p + ".right_translate", cov.right_translate, t);
        c.at_most(p + ".exchange", cov.exchange, t);
        c.at_most(p + ".invariance", cov.invariance, t);
        if (cov.abelian) c.at_most(p + ".abelian_relations", *cov.abelian, t);
    }
    if (ctx.same_rep()) {
        const ProjectiveRep& u = ctx.rep_u();
        double coll = 0, unif = 0, sat = 0, banach = kNoSample;
        const TwirledContext mm_fid(u, mm, ctx.nu());
        for (int s = 0; s < 20; ++s) {
            Rng rng = rng_for(cfg, stream + 1500 + s);
            const Matrix a = random_mixed_state(d, rng), b = random_mixed_state(d, rng);
            coll = std::max({coll, max_abs(triple_product(mm_fid, a, b) - mm), max_abs(triple_product(ctx, mm, b) - mm),
                             max_abs(triple_product(ctx, a, mm) - mm)});
            if (finite) {
                const TwirledContext uc(u, ctx.fiducial(), uniform(u));
                unif = std::max(unif, max_abs(triple_product(uc, a, b) - mm));
            }
            sat = std::max(sat, std::abs(trace_norm(triple_product(ctx, a, b)) - 1.0));
            const Matrix ha = random_hermitian(d, rng), hb = random_hermitian(d, rng);
            banach = std::max(banach, trace_norm(triple_product(ctx, ha, hb)) - trace_norm(ha) * trace_norm(hb));
        }
        c.at_most(p + ".collapse_relations", coll, t);
        if (finite) c.at_most(p + ".uniform_nu_collapse", unif, t);
        c.at_most(p + ".banach_inequality_excess", banach, 1e-9);
        c.at_most(p + ".saturation_on_states", sat, t);
    }
    if (ctx.stochastic() && ctx.same_rep()) {
        const auto prod = as_stochastic_product(ctx);
        ClassifyOptions o;
        o.samples = 50;
        o.seed = derive_seed(cfg.seed, stream + 1600);
        o.tol = finite ? 1e-9 : 1e-6;
        for (Side side : {Side::left, Side::right}) {
            const auto pc = classify_point(prod, mm, side, o);
            const bool target = pc.evidence.collapse_target && max_abs(*pc.evidence.collapse_target - mm) <= t;
            c.holds(p + ".maximally_mixed_" + to_string(side) + "_collapsing", pc.kind == PointKind::collapsing && target);
        }
        if (finite) {
            Rng rng = rng_for(cfg, stream + 1700);
            const Matrix rho = random_mixed_state(d, rng), sigma = random_mixed_state(d, rng), x = random_mixed_state(d, rng);
            c.at_most(p + ".left_map_is_twirling_operator",
                      max_abs(left_map(prod, rho).matrix() - twirling_operator(ctx, rho).matrix()), 1e-12);
            const std::vector<bool> all(ctx.rep_u().size(), true);
            c.at_most(p + ".right_map_is_instrument_total",
                      max_abs(right_map(prod, sigma).matrix() - covariant_instrument(ctx, sigma, all).matrix()), 1e-12);
            const Matrix tau = prod(rho, sigma);
            const Matrix lhs = covariant_instrument(ctx, sigma, all)(covariant_instrument(ctx, rho, all)(x));
            c.at_most(p + ".instrument_composition", max_abs(lhs - covariant_instrument(ctx, tau, all)(x)), t);
            c.at_most(p + ".povm_full_is_identity",
                      max_abs(covariant_povm(ctx.rep_u(), ctx.fiducial(), all) - Matrix::Identity(d, d)), 1e-10);
            std::vector<bool> subset(ctx.rep_u().size());
            std::bernoulli_distribution coin(0.5);
            for (std::size_t k = 0; k < subset.size(); ++k) subset[k] = coin(rng);
            const auto mu = measure_of_state_pair(ctx.rep_u(), rho, ctx.fiducial());
            Complex mass = 0;
            for (std::size_t k = 0; k < subset.size(); ++k)
                if (subset[k]) mass += mu.weights[k];
            c.at_most(p + ".povm_probabilities",
                      std::abs((rho * covariant_povm(ctx.rep_u(), ctx.fiducial(), subset)).trace() - mass), 1e-12);
            c.at_most(p + ".product_covariance",
                      check_covariance(prod, ctx.rep_u(), ctx.rep_u(), Side::left, 3, cfg.seed).max_residual, t);
        }
    }
}

json run_twirled(const RunConfig& cfg, Checks& c, bool su2) {
    json descs = json::array();
    for (const auto& d : cfg.contexts) {
        const bool is_su2 = d.value("rep", "") == "su2";
        if (is_su2 == su2) descs.push_back(d);
    }
    if (descs.empty()) descs = default_contexts(su2);
    json used = json::array();
    std::uint64_t stream = su2 ? 60000 : 50000;
    for (const auto& d : descs) {
        const std::string label = ctx_label(d);
        c.guard(label, [&] {
            const TwirledContext ctx = context_from_json(d, derive_seed(cfg.seed, stream));
            used.push_back(context_to_json(ctx));
            twirled_context_checks(cfg, ctx, label, c, stream);
            if (su2) {
                c.at_most(label + ".orthogonality", verify_orthogonality(ctx.rep_u(), 20, derive_seed(cfg.seed, stream)),
                          tol(cfg, "orthogonality_su2", 1e-8));
                // a fiducial proportional to I collapses the product, which is then commutative
                const Matrix& t = ctx.fiducial();
                const Matrix scalar_part = t.trace() / static_cast<double>(t.rows()) * Matrix::Identity(t.rows(), t.cols());
                if (max_abs(t - scalar_part) > 1e-12) {
                    const double comm = verify_commutativity(ctx, 20, derive_seed(cfg.seed, stream + 1));
                    c.at_least(label + ".noncommutative_counterexample", comm, 1e-3);
                }
            }
        });
        stream += 5000;
    }
    return {{"contexts", used}};
}

// ---------------------------------------------------------------- phase-space

// |<m|D(alpha)|n>|^2 for m >= n, alpha = (q + i p)/sqrt 2
double displaced_fock_overlap(int m, int n, double q, double p) {
    if (m < n) std::swap(m, n);
    const double a2 = 0.5 * (q * q + p * p);
    double ratio = 1.0;
    for (int k = n + 1; k <= m; ++k) ratio /= k;
    const double lag = std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(m - n), a2);
    return ratio * std::pow(a2, m - n) * std::exp(-a2) * lag * lag;
}

GaussianState random_gaussian(Rng& rng, double mean_span) {
    std::uniform_real_distribution<double> mean(-mean_span, mean_span), theta(0, std::numbers::pi), sq(-0.3, 0.3),
        thermal(0.5, 0.6);
    GaussianState g;
    g.mean << mean(rng), mean(rng);
    const double th = theta(rng), r = sq(rng), nu = thermal(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    g.cov = nu * rot * Eigen::Vector2d(std::exp(2 * r), std::exp(-2 * r)).asDiagonal() * rot.transpose();
    return g;
}

json suite_phase_space(const RunConfig& cfg, Checks& c) {
    const int n = cfg.phase_space.value("points", 256);
    const double l = cfg.phase_space.value("extent", 12.0);
    const int triples = cfg.phase_space.value("triples", 20);
    const double rel_tol = tol(cfg, "phase_space_relative", 1e-6);
    const PhaseSpaceGrid g(n, l);
    const auto vac = from_gaussian(g, GaussianState::vacuum());

    {
        const ComplexGrid chi = symplectic_fourier(vac.wigner.cast<Complex>(), g, FourierDirection::forward);
        double dev = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) dev = std::max(dev, std::abs(chi(a, b) - std::exp(-(g.k(a) * g.k(a) + g.k(b) * g.k(b)) / 4)));
        c.at_most("vacuum_characteristic", dev, 1e-10);
        c.at_most("characteristic_at_origin", std::abs(chi(n / 2, n / 2) - 1.0), 1e-10);
        const ComplexGrid back = symplectic_fourier(chi, g, FourierDirection::inverse);
        c.at_most("fourier_round_trip_relative", (back.real() - vac.wigner).cwiseAbs().maxCoeff() / vac.wigner.cwiseAbs().maxCoeff(), 1e-10);
    }

    double cross = 0, mean_err = 0, cov_err = 0, marg = 0, comm = 0, norm = 0;
    for (int s = 0; s < triples; ++s) {
        Rng rng = rng_for(cfg, 7000 + s);
        const GaussianState gr = random_gaussian(rng, 0.5), gt = random_gaussian(rng, 0.3), gs = random_gaussian(rng, 0.5);
        const auto r = from_gaussian(g, gr), t = from_gaussian(g, gt), sg = from_gaussian(g, gs);
        const auto viac = quantum_convolution_char(delta_characteristic(g), r, t, sg);
        const auto viaw = quantum_convolution_wigner(r, t, sg);
        const double scale = viac.wigner.cwiseAbs().maxCoeff();
        cross = std::max(cross, (viac.wigner - viaw.wigner).cwiseAbs().maxCoeff() / scale);
        const auto oracle = gaussian_oracle(gr, gt, gs);
        const Moments m = moments(g, viaw.wigner);
        mean_err = std::max(mean_err, (m.mean - oracle.mean).cwiseAbs().maxCoeff());
        cov_err = std::max(cov_err, (m.cov - oracle.cov).cwiseAbs().maxCoeff());
        marg = std::min(marg, marginal_q(g, viaw.wigner).minCoeff());
        comm = std::max(comm, (quantum_convolution_wigner(sg, t, r).wigner - viaw.wigner).cwiseAbs().maxCoeff());
        norm = std::max(norm, std::abs(viac.normalization() - 1.0));
    }
    c.at_most("char_vs_wigner_relative", cross, rel_tol);
    c.at_most("oracle_mean", mean_err, 1e-6 * l);
    c.at_most("oracle_covariance", cov_err, 1e-5);
    c.at_least("marginal_positivity", marg, -1e-8);
    c.at_most("wigner_form_commutativity", comm, 1e-8);
    c.at_most("output_normalization", norm, 1e-8);

    {
        // classical Gaussian noise adds its covariance
        Eigen::Matrix2d noise = Eigen::Matrix2d::Identity() * 0.25;
        const auto out = quantum_convolution_char(gaussian_characteristic(g, Eigen::Vector2d::Zero(), noise), vac, vac, vac);
        const Moments m = moments(g, out.wigner);
        c.at_most("gaussian_noise_covariance", (m.cov - (1.5 * Eigen::Matrix2d::Identity() + noise)).cwiseAbs().maxCoeff(), 1e-5);
        // associativity with a fourth state
        const auto left = quantum_convolution_wigner(quantum_convolution_wigner(vac, vac, vac), vac, vac);
        const auto right = quantum_convolution_wigner(vac, vac, quantum_convolution_wigner(vac, vac, vac));
        c.at_most("wigner_form_associativity", (left.wigner - right.wigner).cwiseAbs().maxCoeff(), 1e-8);
    }

    {
        const RealGrid hk_vac = husimi_kano(vac);
        const RealGrid closed = gaussian_density(g, Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
        c.at_most("husimi_kano_vacuum_closed_form", (hk_vac - closed).cwiseAbs().maxCoeff(), 1e-10);
        const auto f1 = fock_state(g, 1);
        c.at_most("fock1_wigner_negative_at_origin", f1.wigner(n / 2, n / 2), -0.3);
        const RealGrid hk = husimi_kano(f1);
        c.at_least("husimi_kano_fock1_min", hk.minCoeff(), -1e-9);
        c.at_most("husimi_kano_normalization", std::abs(hk.sum() * g.spacing() * g.spacing() - 1.0), 1e-8);
        // tr(rho U_g T U_g*)/(2 pi) against the convolution of Wigner functions
        const auto f2 = fock_state(g, 2);
        const RealGrid conv = convolve_grid(g, f2.wigner, reflect(f1.wigner));
        double dev = 0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                dev = std::max(dev, std::abs(conv(a, b) - displaced_fock_overlap(2, 1, g.x(a), g.x(b)) / (2 * std::numbers::pi)));
        c.at_most("fock_overlap_is_convolution", dev, 1e-6);
    }
    {
        GaussianState wide;
        wide.cov = Eigen::Matrix2d::Identity() * 9.0;
        bool rejected = false;
        try {
            quantum_convolution_wigner(from_gaussian(g, wide), vac, vac);
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        c.holds("periodization_guard_rejects_wide_state", rejected);
    }
    return {{"points", n}, {"extent", l}, {"triples", triples}};
}

using SuiteFn = json (*)(const RunConfig&, Checks&);

json suite_twirled_core(const RunConfig& cfg, Checks& c) { return run_twirled(cfg, c, false); }
json suite_twirled_su2(const RunConfig& cfg, Checks& c) { return run_twirled(cfg, c, true); }

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> r = {
        {"operator-core", suite_operator_core},   {"stochastic-maps", suite_stochastic_maps},
        {"stochastic-products", suite_stochastic_products}, {"group-harmonics", suite_group_harmonics},
        {"twirled-core", suite_twirled_core},      {"twirled-su2", suite_twirled_su2},
        {"phase-space", suite_phase_space}};
    return r;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
    if (!f) throw std::runtime_error("write failed for " + p.string());
}

std::string csv_number(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"operator-core", "stochastic-maps", "stochastic-products",
                                                   "group-harmonics", "twirled-core", "twirled-su2", "phase-space"};
    return names;
}

RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    if (!j.contains("seed")) throw ConfigError("config is missing the mandatory \"seed\"");
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0))
        throw ConfigError("\"seed\" must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("suites")) {
        if (!j.at("suites").is_array()) throw ConfigError("\"suites\" must be an array of suite names");
        for (const auto& s : j.at("suites")) {
            if (!s.is_string()) throw ConfigError("suite names must be strings");
            const auto name = s.get<std::string>();
            if (!registry().count(name)) throw ConfigError("unknown suite \"" + name + "\"");
            cfg.suites.push_back(name);
        }
    } else {
        cfg.suites = suite_names();
    }
    if (j.contains("contexts")) {
        if (!j.at("contexts").is_array()) throw ConfigError("\"contexts\" must be an array");
        for (const auto& c : j.at("contexts"))
            if (!c.is_object() || !c.contains("rep")) throw ConfigError("each context needs a \"rep\" field");
        cfg.contexts = j.at("contexts");
    }
    if (j.contains("tolerances")) {
        if (!j.at("tolerances").is_object()) throw ConfigError("\"tolerances\" must be an object");
        for (const auto& [k, v] : j.at("tolerances").items())
            if (!v.is_number()) throw ConfigError("tolerance \"" + k + "\" must be a number");
        cfg.tolerances = j.at("tolerances");
    }
    if (j.contains("phase_space")) cfg.phase_space = j.at("phase_space");
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    try {
        return parse_config(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

SuiteOutcome run_suite(const std::string& name, const RunConfig& cfg) {
    const auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("unknown suite \"" + name + "\"");
    Checks c;
    json extra;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        extra = it->second(cfg, c);
    } catch (const std::exception& e) {
        c.error("suite", e.what());
    }
    const auto t1 = std::chrono::steady_clock::now();
    SuiteOutcome out;
    out.passed = c.ok();
    out.seconds = std::chrono::duration<double>(t1 - t0).count();
    out.report = {{"schema", 1}, {"suite", name}, {"seed", cfg.seed}, {"passed", out.passed}, {"checks", c.items()}};
    if (!extra.is_null() && !extra.empty()) out.report["details"] = extra;
    return out;
}

std::string resolve_output_dir(const RunConfig& cfg, const std::optional<std::string>& override_dir) {
    if (override_dir && !override_dir->empty()) return *override_dir;
    if (const char* env = std::getenv("STOCHPROD_OUT_DIR"); env && *env) return env;
    return cfg.output_dir;
}

int run(const std::string& config_path, const std::optional<std::string>& out_dir,
        const std::optional<std::uint64_t>& seed, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    if (seed) cfg.seed = *seed;
    const fs::path dir = resolve_output_dir(cfg, out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        log << "config error: cannot create output directory " << dir.string() << ": " << ec.message() << '\n';
        return kExitConfigError;
    }
    bool all = true;
    for (const auto& name : cfg.suites) {
        const SuiteOutcome o = run_suite(name, cfg);
        all = all && o.passed;
        write_file(dir / (name + ".json"), o.report.dump(2) + "\n");
        const json timing = {{"schema", 1}, {"suite", name}, {"seconds", o.seconds}};
        write_file(dir / (name + ".timing.json"), timing.dump(2) + "\n");
        log << (o.passed ? "PASS " : "FAIL ") << name << " (" << std::fixed << std::setprecision(2) << o.seconds << " s)\n";
        if (!o.passed)
            for (const auto& item : o.report.at("checks"))
                if (item.contains("passed") && !item.at("passed").get<bool>()) log << "  failed: " << item.dump() << '\n';
    }
    return all ? kExitOk : kExitSuiteFailed;
}

int demo(const std::string& config_path, std::ostream& log) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    const fs::path dir = resolve_output_dir(cfg, std::nullopt);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        log << "config error: cannot create output directory " << dir.string() << '\n';
        return kExitConfigError;
    }
    try {
        bool ok = true;
        std::ostringstream assoc, coll, pur;
        assoc << "d,associativity_residual,passed\n";
        coll << "d,collapse_residual,passed\n";
        pur << "sample,purity_rho,purity_sigma,purity_product\n";
        for (int d = 2; d <= 6; ++d) {
            Rng rng(derive_seed(cfg.seed, 9000 + d));
            ProjectiveRep rep = weyl_heisenberg_rep(d);
            const GroupMeasure delta = dirac(rep);
            const TwirledContext ctx(rep, random_pure_state(d, rng), delta);
            const double r = verify_associativity(ctx, 50, derive_seed(cfg.seed, 9100 + d));
            assoc << d << ',' << csv_number(r) << ',' << (r <= 1e-10 ? "true" : "false") << '\n';
            ok = ok && r <= 1e-10;
            const Matrix mm = Matrix::Identity(d, d) / static_cast<double>(d);
            const TwirledContext mctx(rep, mm, delta);
            double worst = 0;
            for (int s = 0; s < 20; ++s) {
                const Matrix a = random_mixed_state(d, rng), b = random_mixed_state(d, rng);
                worst = std::max(worst, max_abs(triple_product(mctx, a, b) - mm));
            }
            coll << d << ',' << csv_number(worst) << ',' << (worst <= 1e-10 ? "true" : "false") << '\n';
            ok = ok && worst <= 1e-10;
        }
        {
            ProjectiveRep rep = weyl_heisenberg_rep(3);
            Rng rng(derive_seed(cfg.seed, 9200));
            const GroupMeasure delta = dirac(rep);
            const TwirledContext ctx(rep, random_pure_state(3, rng), delta);
            for (int s = 0; s < 10; ++s) {
                const Matrix a = random_mixed_state(3, rng), b = random_mixed_state(3, rng);
                pur << s << ',' << csv_number(purity(a)) << ',' << csv_number(purity(b)) << ','
                    << csv_number(purity(triple_product(ctx, a, b))) << '\n';
            }
        }
        write_file(dir / "associativity_vs_dim.csv", assoc.str());
        write_file(dir / "collapse_maximally_mixed.csv", coll.str());
        write_file(dir / "purity_before_after.csv", pur.str());

        const PhaseSpaceGrid g(cfg.phase_space.value("points", 256), cfg.phase_space.value("extent", 12.0));
        const RealGrid hk = husimi_kano(fock_state(g, 1));
        std::ostringstream slice;
        slice << "r,husimi_kano\n";
        const int mid = g.points() / 2;
        double min_hk = 0;
        for (int a = mid; a < g.points(); ++a) {
            slice << csv_number(g.x(a)) << ',' << csv_number(hk(a, mid)) << '\n';
            min_hk = std::min(min_hk, hk(a, mid));
        }
        ok = ok && min_hk >= -1e-9;
        write_file(dir / "husimi_kano_fock1_radial.csv", slice.str());
        PhaseSpaceState hk_state{g, hk, std::nullopt};
        write_state_binary((dir / "husimi_kano_fock1.bin").string(), hk_state);
        write_csv_slice((dir / "fock1_wigner_q_slice.csv").string(), g, fock_state(g, 1).wigner, mid);
        log << "demo tables written to " << dir.string() << '\n';
        return ok ? kExitOk : kExitSuiteFailed;
    } catch (const std::exception& e) {
        log << "demo failed: " << e.what() << '\n';
        return kExitSuiteFailed;
    }
}

}  // namespace stochprod
