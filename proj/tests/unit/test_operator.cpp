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
#include "stochprod/operator.hpp"

using namespace stochprod;
using namespace testutil;

TEST_CASE("decompose positive and signed inputs") {
    const auto half = decompose(Matrix::Identity(2, 2) / 2.0);
    CHECK(half.a1p == doctest::Approx(1.0));
    CHECK(half.a1m == 0.0);
    CHECK(half.a2p == 0.0);
    CHECK(half.a2m == 0.0);
    CHECK(max_abs(half.b1p - Matrix::Identity(2, 2) / 2.0) < 1e-14);

    const auto sgn = decompose(mat2(1, 0, 0, -1));
    CHECK(sgn.a1p == doctest::Approx(1.0));
    CHECK(sgn.a1m == doctest::Approx(1.0));
    CHECK(max_abs(sgn.b1p - mat2(1, 0, 0, 0)) < 1e-14);
    CHECK(max_abs(sgn.b1m - mat2(0, 0, 0, 1)) < 1e-14);
}

TEST_CASE("decompose nilpotent against a hand eigendecomposition") {
    const Matrix a = mat2(0, 1, 0, 0);
    const auto dec = decompose(a);
    // a1 = sigma_x / 2, a2 = -sigma_y / 2: eigenvalues +-1/2 each
    CHECK(max_abs(dec.a1 - mat2(0, 0.5, 0.5, 0)) < 1e-15);
    CHECK(max_abs(dec.a2 - mat2(0, Complex(0, -0.5), Complex(0, 0.5), 0)) < 1e-15);
    for (double w : {dec.a1p, dec.a1m, dec.a2p, dec.a2m}) CHECK(w == doctest::Approx(0.5).epsilon(1e-14));
    // b1p = |+><+|, b1m = |-><-|
    CHECK(max_abs(dec.b1p - Matrix::Constant(2, 2, 0.5)) < 1e-14);
    CHECK(max_abs(dec.b1m - mat2(0.5, -0.5, -0.5, 0.5)) < 1e-14);
    CHECK(max_abs(dec.reconstruct() - a) < 1e-14);
}

TEST_CASE("decompose reconstructs random operators with orthogonal parts") {
    for (int d = 2; d <= 8; ++d) {
        Rng rng(derive_seed(11, d));
        for (int s = 0; s < 100; ++s) {
            const Matrix a = random_operator(d, rng);
            const auto dec = decompose(a);
            REQUIRE(max_abs(dec.reconstruct() - a) <= 1e-10);
            CHECK(max_abs(dec.b1p * dec.b1m) <= 1e-10);
            CHECK(max_abs(dec.b2p * dec.b2m) <= 1e-10);
        }
    }
}

TEST_CASE("trace norm values") {
    CHECK(trace_norm(Matrix::Identity(3, 3)) == doctest::Approx(3.0));
    CHECK(trace_norm(mat2(0, 2, 0, 0)) == doctest::Approx(2.0).epsilon(1e-14));
    Rng rng(5);
    for (int s = 0; s < 50; ++s) {
        const Matrix a = random_operator(4, rng);
        CHECK(std::abs(trace_norm(a) - svd_trace_norm(a)) < 1e-10);
        CHECK(std::abs(a.trace()) <= trace_norm(a) + 1e-12);
        CHECK(std::abs(trace_norm(random_mixed_state(4, rng)) - 1.0) <= 1e-12);
    }
}

TEST_CASE("positivity and purity") {
    CHECK(is_positive(mat2(0.3, 0, 0, 0.7), 1e-12));
    CHECK_FALSE(is_positive(mat2(1, 0, 0, -1e-3), 1e-10));
    CHECK_FALSE(is_positive(mat2(1, 1, 0, 1), 1e-10));
    Rng rng(9);
    const Matrix g = random_operator(5, rng);
    CHECK(is_positive(g * g.adjoint(), 1e-10));
    CHECK(purity(mat2(1, 0, 0, 0)) == doctest::Approx(1.0));
    CHECK(purity(Matrix::Identity(4, 4) / 4.0) == doctest::Approx(0.25));
    CHECK(purity(mat2(0.75, 0, 0, 0.25)) == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("validated operator types") {
    CHECK_THROWS_AS(TraceClassOperator(Matrix::Identity(1, 1)), std::invalid_argument);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS(TraceClassOperator(bad));
    CHECK_THROWS_AS(DensityOperator(mat2(1, 0, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(DensityOperator(mat2(1.5, 0, 0, -0.5)), std::invalid_argument);
    CHECK(DensityOperator::maximally_mixed(3).matrix().trace().real() == doctest::Approx(1.0));
    CHECK(DensityOperator::basis_projector(3, 2).matrix()(2, 2) == Complex(1.0));
}

TEST_CASE("vec, kron and partial traces") {
    Rng rng(3);
    const Matrix a = random_operator(3, rng), b = random_operator(2, rng);
    const Vector v = vec(a);
    CHECK(v(1 + 3 * 2) == a(1, 2));
    CHECK(max_abs(unvec(v, 3) - a) == 0.0);
    const Matrix k = kron(a, b);
    CHECK(k(1 * 2 + 0, 2 * 2 + 1) == a(1, 2) * b(0, 1));
    CHECK(max_abs(partial_trace_second(k, 3, 2) - a * b.trace()) < 1e-12);
    CHECK(max_abs(partial_trace_first(k, 3, 2) - b * a.trace()) < 1e-12);
}

TEST_CASE("random generators are seeded and valid") {
    Rng r1(42), r2(42);
    CHECK(max_abs(random_mixed_state(4, r1) - random_mixed_state(4, r2)) == 0.0);
    Rng rng(1);
    const Matrix u = random_unitary(5, rng);
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(5, 5)) < 1e-12);
    CHECK(state_violation(random_pure_state(4, rng)) < 1e-12);
    CHECK(purity(random_pure_state(4, rng)) == doctest::Approx(1.0));
    CHECK(derive_seed(7, 1) != derive_seed(7, 2));
    CHECK(derive_seed(7, 1) == derive_seed(7, 1));
}

TEST_CASE("operator json round trip") {
    Rng rng(8);
    const Matrix a = random_operator(3, rng);
    const auto j = operator_to_json(a);
    CHECK(j.at("dim") == 3);
    CHECK(max_abs(operator_from_json(j) - a) == 0.0);
}
