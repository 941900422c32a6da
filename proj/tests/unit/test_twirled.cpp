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

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "stochprod/twirled.hpp"

using namespace stochprod;
using namespace testutil;

namespace {

// Double sum straight from the definition, finite groups.
Matrix brute_force(const ProjectiveRep& u, const ProjectiveRep& v, const Matrix& t, const GroupMeasure& nu, const Matrix& a,
                   const Matrix& b) {
    Matrix out = Matrix::Zero(v.dim, v.dim);
    for (int g = 0; g < u.size(); ++g)
        for (int h = 0; h < u.size(); ++h) {
            const Complex w = u.haar[g] * nu.weights[h] * (a * u.matrices[g] * t * u.matrices[g].adjoint()).trace();
            const Matrix& vgh = v.matrices[u.group->mul(g, h)];
            out += w * vgh * b * vgh.adjoint();
        }
    return out;
}

// Node sums for SU(2): V_g V_h B (V_g V_h)*.
Matrix brute_force_nodes(const ProjectiveRep& u, const Matrix& t, const GroupMeasure& nu, const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(u.dim, u.dim);
    for (int g = 0; g < u.size(); ++g)
        for (int h = 0; h < u.size(); ++h) {
            const Complex w = u.haar[g] * nu.weights[h] * (a * u.matrices[g] * t * u.matrices[g].adjoint()).trace();
            const Matrix vv = u.matrices[g] * u.matrices[h];
            out += w * vv * b * vv.adjoint();
        }
    return out;
}

}  // namespace

TEST_CASE("Weyl d=2 example against the four-term sum") {
    const auto rep = weyl_heisenberg_rep(2);
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    const TwirledContext ctx(rep, p0, dirac(rep));
    CHECK(max_abs(triple_product(ctx, p0, p0) - p0) < 1e-15);
    Rng rng(1);
    const Matrix r = random_mixed_state(2, rng), s = random_mixed_state(2, rng);
    const Matrix x = mat2(0, 1, 1, 0), z = mat2(1, 0, 0, -1), xz = x * z;
    const Matrix expect = 0.5 * (r(0, 0) * (s + z * s * z) + r(1, 1) * (x * s * x + xz * s * xz.adjoint()));
    CHECK(max_abs(triple_product(ctx, r, s) - expect) < 1e-14);
}

TEST_CASE("convolution route agrees with the double sum") {
    for (int d = 2; d <= 5; ++d) {
        const auto rep = weyl_heisenberg_rep(d);
        Rng rng(derive_seed(2, d));
        const Matrix t = random_operator(d, rng), a = random_operator(d, rng), b = random_operator(d, rng);
        const auto nu = random_complex_measure(rep, 1.7, rng);
        CHECK(max_abs(twirled_product(rep, rep, t, nu, a, b) - brute_force(rep, rep, t, nu, a, b)) < 1e-12);
        const auto conj = conjugate_rep(rep);
        CHECK(max_abs(twirled_product(rep, conj, t, nu, a, b) - brute_force(rep, conj, t, nu, a, b)) < 1e-12);
    }
}

TEST_CASE("SU(2) factorized route agrees with the node double sum") {
    for (double j : {0.5, 1.0}) {
        const auto rep = su2_quadrature_rep(j);
        Rng rng(3);
        const Matrix t = random_mixed_state(rep.dim, rng), a = random_operator(rep.dim, rng), b = random_operator(rep.dim, rng);
        const auto nu = random_probability(rep, rng);
        CHECK(max_abs(twirled_product(rep, rep, t, nu, a, b) - brute_force_nodes(rep, t, nu, a, b)) < 1e-12);
    }
}

TEST_CASE("stochastic contexts produce states; zero measure gives zero") {
    const auto rep = weyl_heisenberg_rep(4);
    Rng rng(4);
    const TwirledContext ctx(rep, random_mixed_state(4, rng), random_probability(rep, rng));
    CHECK(ctx.stochastic());
    for (int s = 0; s < 50; ++s) CHECK(state_violation(triple_product(ctx, random_pure_state(4, rng), random_mixed_state(4, rng))) <= 1e-9);
    const TwirledContext zero(rep, random_operator(4, rng), zero_measure(rep));
    CHECK_FALSE(zero.stochastic());
    CHECK(max_abs(triple_product(zero, random_operator(4, rng), random_operator(4, rng))) == 0.0);
    CHECK_THROWS(TwirledContext(direct_sum_rep(weyl_heisenberg_rep(2), weyl_heisenberg_rep(2)), Matrix::Identity(4, 4) / 4.0,
                                dirac(direct_sum_rep(weyl_heisenberg_rep(2), weyl_heisenberg_rep(2)))));
    CHECK_THROWS(TwirledContext(rep, Matrix::Identity(3, 3) / 3.0, dirac(rep)));
}

TEST_CASE("associativity, commutativity and their failures") {
    Rng rng(5);
    for (int d = 2; d <= 5; ++d) {
        const auto rep = weyl_heisenberg_rep(d);
        const TwirledContext ctx(rep, random_pure_state(d, rng), dirac(rep));
        CHECK(verify_associativity(ctx, 20, d) <= 1e-10);
        CHECK(verify_commutativity(ctx, 20, d) <= 1e-10);
        const TwirledContext uni(rep, random_pure_state(d, rng), uniform(rep));
        CHECK(verify_associativity(uni, 20, d) <= 1e-10);
    }
    const auto su2 = su2_quadrature_rep(0.5);
    const TwirledContext nonab(su2, random_pure_state(2, rng), dirac(su2));
    CHECK(verify_associativity(nonab, 20, 1) <= 1e-6);
    CHECK(verify_commutativity(nonab, 20, 1) > 1e-3);
    const Matrix a = random_mixed_state(2, rng);
    CHECK(max_abs(triple_product(nonab, a, a) - triple_product(nonab, a, a)) == 0.0);
}

TEST_CASE("trace and norm laws with complex measures") {
    const auto rep = weyl_heisenberg_rep(3);
    Rng rng(6);
    const TwirledContext ctx(rep, random_operator(3, rng), random_complex_measure(rep, 2.0, rng));
    const auto r = verify_trace_and_norm(ctx, 100, 7);
    CHECK(r.max_trace_residual <= 1e-10);
    CHECK(r.max_norm_excess <= 1e-9);
    CHECK(r.max_norm_ratio <= 1.0 + 1e-9);
    const Matrix a = random_operator(3, rng), b = random_operator(3, rng);
    const Matrix out = triple_product(ctx, a, b);
    CHECK(std::abs(out.trace() - ctx.nu().total() * a.trace() * ctx.fiducial().trace() * b.trace()) < 1e-10);
}

TEST_CASE("covariance identities on Weyl and S3-free contexts") {
    Rng rng(7);
    for (int d : {2, 3}) {
        const auto rep = weyl_heisenberg_rep(d);
        const TwirledContext ctx(rep, random_mixed_state(d, rng), random_probability(rep, rng));
        const auto cov = verify_covariance(ctx, 10, 3);
        CHECK(cov.left_covariance <= 1e-10);
        CHECK(cov.fiducial_translate <= 1e-10);
        CHECK(cov.right_translate <= 1e-10);
        CHECK(cov.exchange <= 1e-10);
        CHECK(cov.invariance <= 1e-10);
        REQUIRE(cov.abelian);
        CHECK(*cov.abelian <= 1e-10);
    }
    // explicit left covariance for one element
    const auto rep = weyl_heisenberg_rep(3);
    const TwirledContext ctx(rep, random_pure_state(3, rng), dirac(rep));
    const Matrix a = random_mixed_state(3, rng), b = random_mixed_state(3, rng);
    CHECK(max_abs(rep.act(4, triple_product(ctx, a, b)) - triple_product(ctx, rep.act(4, a), b)) < 1e-12);
    CHECK_THROWS(verify_covariance(TwirledContext(su2_quadrature_rep(0.5), Matrix::Identity(2, 2) / 2.0,
                                                  dirac(su2_quadrature_rep(0.5))), 2, 1));
}

TEST_CASE("maximally mixed collapse and the stochastic-product view") {
    const int d = 3;
    const auto rep = weyl_heisenberg_rep(d);
    Rng rng(8);
    const Matrix mm = Matrix::Identity(d, d) / 3.0;
    const TwirledContext ctx(rep, random_pure_state(d, rng), random_probability(rep, rng));
    const TwirledContext mctx(rep, mm, ctx.nu());
    const Matrix a = random_mixed_state(d, rng), b = random_mixed_state(d, rng);
    CHECK(max_abs(triple_product(mctx, a, b) - mm) < 1e-14);
    CHECK(max_abs(triple_product(ctx, mm, b) - mm) < 1e-14);
    CHECK(max_abs(triple_product(ctx, a, mm) - mm) < 1e-14);
    const auto p = as_stochastic_product(ctx);
    ClassifyOptions o;
    o.seed = 2;
    const auto pc = classify_point(p, mm, Side::left, o);
    CHECK(pc.kind == PointKind::collapsing);
    REQUIRE(pc.evidence.collapse_target);
    CHECK(max_abs(*pc.evidence.collapse_target - mm) < 1e-12);
    CHECK(max_abs(left_map(p, a).matrix() - twirling_operator(ctx, a).matrix()) < 1e-12);
    const std::vector<bool> all(rep.size(), true);
    CHECK(max_abs(covariant_povm(rep, ctx.fiducial(), all) - Matrix::Identity(d, d)) < 1e-12);
    CHECK(max_abs(right_map(p, b).matrix() - covariant_instrument(ctx, b, all).matrix()) < 1e-12);
    CHECK_THROWS(as_stochastic_product(TwirledContext(rep, random_operator(d, rng), dirac(rep))));
}

TEST_CASE("context json") {
    const auto ctx = context_from_json({{"rep", "weyl"}, {"d", 3}, {"fiducial", "random_mixed"}, {"nu", "random"}, {"v", "conjugate"}}, 11);
    CHECK_FALSE(ctx.same_rep());
    const auto j = context_to_json(ctx);
    CHECK(j.at("v") == "conjugate");
    const auto again = context_from_json(j, 99);
    CHECK(max_abs(again.fiducial() - ctx.fiducial()) == 0.0);
    const auto same = context_from_json({{"rep", "weyl"}, {"d", 3}, {"fiducial", "random_mixed"}, {"nu", "random"}}, 11);
    const auto same2 = context_from_json({{"rep", "weyl"}, {"d", 3}, {"fiducial", "random_mixed"}, {"nu", "random"}}, 11);
    CHECK(max_abs(same.fiducial() - same2.fiducial()) == 0.0);
    CHECK_THROWS(context_from_json({{"rep", "weyl"}, {"d", 3}, {"fiducial", "bogus"}}, 1));
}
