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
#include "stochprod/product.hpp"
#include "stochprod/twirled.hpp"

using namespace stochprod;
using namespace testutil;

namespace {

// tensor columns indexed ib * d^2 + ia: M kron(vec b, vec a)
Matrix tensor_of(int d, const std::function<Matrix(const Matrix&, const Matrix&)>& f) {
    Matrix t(d * d, d * d * d * d);
    for (int ia = 0; ia < d * d; ++ia)
        for (int ib = 0; ib < d * d; ++ib) {
            Matrix ea = Matrix::Zero(d, d), eb = Matrix::Zero(d, d);
            ea(ia % d, ia / d) = 1.0;
            eb(ib % d, ib / d) = 1.0;
            t.col(ib * d * d + ia) = vec(f(ea, eb));
        }
    return t;
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("from_bilinear accepts the left-constant and convex products") {
    const int d = 2;
    const auto lc = from_bilinear(tensor_of(d, [](const Matrix& a, const Matrix& b) -> Matrix { return a.trace() * b; }));
    const auto avg = from_bilinear(tensor_of(d, [](const Matrix& a, const Matrix& b) -> Matrix { return (b.trace() * a + a.trace() * b) / 2.0; }));
    Rng rng(1);
    const Matrix r = random_mixed_state(d, rng), s = random_mixed_state(d, rng);
    CHECK(max_abs(lc(r, s) - s) < 1e-14);
    CHECK(max_abs(avg(r, s) - (r + s) / 2.0) < 1e-14);
}

TEST_CASE("operator composition is rejected with a witness") {
    bool caught = false;
    try {
        from_bilinear(tensor_of(2, [](const Matrix& a, const Matrix& b) -> Matrix { return a * b; }));
    } catch (const ProductRejected& e) {
        caught = true;
        const auto r = state_residuals(e.rho * e.sigma);
        CHECK_FALSE(r.ok());
    }
    CHECK(caught);
}

TEST_CASE("mixture product") {
    Rng rng(2);
    const Matrix u = random_unitary(3, rng);
    const auto id = Superoperator::identity(3);
    const Matrix r = random_mixed_state(3, rng), s = random_mixed_state(3, rng);
    const auto half = mixture_product(id, id, 0.5);
    CHECK(max_abs(half(r, s) - (r + s) / 2.0) < 1e-14);
    const auto left_only = mixture_product(conjugation_channel(u), id, 1.0);
    CHECK(max_abs(left_only(r, s) - u * r * u.adjoint()) < 1e-12);
    // left(rho)(A) = (tr(A) rho + A)/2 on the operator basis
    const Superoperator lm = left_map(half, r);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Matrix e = Matrix::Zero(3, 3);
            e(i, j) = 1.0;
            CHECK(max_abs(lm(e) - (e.trace() * r + e) / 2.0) < 1e-14);
        }
    for (int k = 0; k < 100; ++k) {
        const Matrix a = random_operator(3, rng), b = random_operator(3, rng);
        CHECK(trace_norm(half(a, b)) <= trace_norm(a) * trace_norm(b) + 1e-9);
    }
    CHECK_THROWS(mixture_product(id, id, 1.5));
    CHECK_THROWS(mixture_product(combine(2.0, id, -1.0, collapse_channel(Matrix::Identity(3, 3) / 3.0)), id, 0.5));
}

TEST_CASE("two-effect product") {
    Rng rng(3);
    const Matrix u = random_unitary(2, rng), v = random_unitary(2, rng);
    Matrix e = Matrix::Zero(2, 2);
    e(0, 0) = 1.0;
    const auto p = povm_product({e, Matrix::Identity(2, 2) - e}, {conjugation_channel(u), conjugation_channel(v)});
    const Matrix r = random_mixed_state(2, rng), s = random_mixed_state(2, rng);
    const double w = r(0, 0).real();
    CHECK(max_abs(p(r, s) - (w * u * s * u.adjoint() + (1 - w) * v * s * v.adjoint())) < 1e-14);
    ClassifyOptions o;
    o.seed = 5;
    CHECK(classify_point(p, e, Side::left, o).kind == PointKind::bijective);
    CHECK(classify_point(p, r, Side::left, o).kind == PointKind::generic);
    // two effects cannot determine a qubit state: right map has a kernel
    Eigen::JacobiSVD<Matrix> svd(right_map(p, s).matrix());
    CHECK(svd.singularValues()(2) < 1e-12);
    const auto single = povm_product({Matrix::Identity(2, 2)}, {conjugation_channel(u)});
    CHECK(max_abs(single(r, s) - u * s * u.adjoint()) < 1e-14);
    CHECK_THROWS(povm_product({e}, {conjugation_channel(u)}));
}

TEST_CASE("partial trace products") {
    const auto cn = partial_trace_product(conjugation_channel(cnot()), 2, 2);
    const Matrix plus = Matrix::Constant(2, 2, 0.5);
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    // CNOT|+>|+> = |+>|+>; CNOT|+>|0> is a Bell state, so the first factor is I/2
    CHECK(max_abs(cn(plus, plus) - plus) < 1e-14);
    CHECK(max_abs(cn(plus, zero) - Matrix::Identity(2, 2) / 2.0) < 1e-14);
    Rng rng(6);
    const Matrix r = random_mixed_state(3, rng), s = random_mixed_state(3, rng);
    CHECK(max_abs(partial_trace_product(Superoperator::identity(9), 3, 3)(r, s) - r) < 1e-14);
    Matrix swap = Matrix::Zero(9, 9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) swap(j * 3 + i, i * 3 + j) = 1.0;
    CHECK(max_abs(partial_trace_product(conjugation_channel(swap), 3, 3)(r, s) - s) < 1e-14);
    CHECK_THROWS(partial_trace_product(Superoperator::identity(4), 3, 3));
}

TEST_CASE("product laws on random operators") {
    Rng rng(7);
    const Matrix u = random_unitary(3, rng);
    const Matrix rho0 = random_mixed_state(3, rng);
    const auto p = mixture_product(conjugation_channel(u), collapse_channel(rho0), 0.3);
    for (int k = 0; k < 50; ++k) {
        const Matrix a = random_operator(3, rng), b = random_operator(3, rng);
        CHECK(std::abs(p(a, b).trace() - a.trace() * b.trace()) < 1e-10);
        CHECK(trace_norm(p(a, b)) <= 2 * trace_norm(a) * trace_norm(b) + 1e-9);
        const Matrix r1 = random_mixed_state(3, rng), r2 = random_mixed_state(3, rng);
        const Matrix s1 = random_mixed_state(3, rng), s2 = random_mixed_state(3, rng);
        CHECK(trace_norm(p(r1, s1) - p(r2, s2)) <= 2 * (trace_norm(r1 - r2) + trace_norm(s1 - s2)) + 1e-9);
        CHECK(max_abs(left_map(p, r1)(s1) - right_map(p, s1)(r1)) < 1e-12);
    }
    const auto pm = partial_maps(p);
    CHECK(max_abs(pm.left(rho0)(u) - left_map(p, rho0)(u)) < 1e-14);
}

TEST_CASE("covariance checks") {
    const auto wh = weyl_heisenberg_rep(2);
    Rng rng(8);
    const auto tw = as_stochastic_product(TwirledContext(wh, random_pure_state(2, rng), dirac(wh)));
    CHECK(check_covariance(tw, wh, wh, Side::left, 5, 1).passed);
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    const auto mix = mixture_product(conjugation_channel(h), Superoperator::identity(2), 0.5);
    const auto bad = check_covariance(mix, wh, wh, Side::left, 5, 1);
    CHECK_FALSE(bad.passed);
    CHECK(bad.max_residual > 1e-3);
    CHECK(check_covariance(mix, trivial_rep(2), trivial_rep(2), Side::right, 5, 1).passed);
}

TEST_CASE("level sets") {
    const auto id = Superoperator::identity(2);
    const auto p = mixture_product(id, id, 0.0);  // rho . sigma = sigma
    Rng rng(9);
    CHECK(same_level_set(p, random_mixed_state(2, rng), random_mixed_state(2, rng), Side::left));
    CHECK_FALSE(same_level_set(p, random_mixed_state(2, rng), random_mixed_state(2, rng), Side::right));
}
