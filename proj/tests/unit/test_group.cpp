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
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "stochprod/group.hpp"

using namespace stochprod;
using namespace testutil;

namespace {

double dist(const GroupMeasure& a, const GroupMeasure& b) {
    double m = 0;
    for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.weights[k] - b.weights[k]));
    return m;
}

// S3 as symmetries of a triangle: elements r^a s^b at index 2a + b.
std::pair<FiniteGroup, std::vector<Matrix>> s3_with_irrep() {
    const double c = std::cos(2 * std::numbers::pi / 3), s = std::sin(2 * std::numbers::pi / 3);
    Matrix r(2, 2), f(2, 2);
    r << c, -s, s, c;
    f << 1, 0, 0, -1;
    std::vector<Matrix> mats;
    Matrix ra = Matrix::Identity(2, 2);
    for (int a = 0; a < 3; ++a, ra = ra * r) {
        mats.push_back(ra);
        mats.push_back(ra * f);
    }
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h)
            for (int k = 0; k < 6; ++k)
                if (max_abs(mats[g] * mats[h] - mats[k]) < 1e-12) table[g][h] = k;
    return {FiniteGroup(table), mats};
}

}  // namespace

TEST_CASE("finite group validation") {
    CHECK_THROWS(FiniteGroup(std::vector<std::vector<int>>{{0, 1}, {0, 1}}));
    CHECK_THROWS(FiniteGroup(std::vector<std::vector<int>>{{1, 0}, {0, 0}}));
    const auto z = FiniteGroup::cyclic_square(3);
    CHECK(z.order() == 9);
    CHECK(z.is_abelian());
    CHECK(z.mul(1 * 3 + 2, 2 * 3 + 2) == 0 * 3 + 1);
    CHECK(z.inv(1 * 3 + 2) == 2 * 3 + 1);
    CHECK(FiniteGroup::trivial().order() == 1);
    CHECK_FALSE(s3_with_irrep().first.is_abelian());
}

TEST_CASE("Weyl-Heisenberg d=2 is the phased Pauli group") {
    const auto rep = weyl_heisenberg_rep(2);
    const Matrix x = mat2(0, 1, 1, 0), z = mat2(1, 0, 0, -1);
    auto proportional = [](const Matrix& a, const Matrix& b) { return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < 1e-12; };
    CHECK(proportional(rep.matrices[0], Matrix::Identity(2, 2)));
    CHECK(proportional(rep.matrices[1], z));
    CHECK(proportional(rep.matrices[2], x));
    CHECK(proportional(rep.matrices[3], x * z));
    for (int g = 0; g < 4; ++g)
        for (int h = 0; h < 4; ++h) {
            const Complex m = rep.multiplier[g][h];
            CHECK(std::abs(std::abs(m) - 1.0) < 1e-14);
            CHECK(max_abs(rep.matrices[rep.group->mul(g, h)] - m * rep.matrices[g] * rep.matrices[h]) < 1e-14);
        }
    CHECK(rep.haar[0] == doctest::Approx(0.5));
}

TEST_CASE("Weyl-Heisenberg reps for d = 2..6") {
    for (int d = 2; d <= 6; ++d) {
        const auto rep = weyl_heisenberg_rep(d);
        const auto chk = check_rep(rep);
        CHECK(chk.unitarity < 1e-13);
        CHECK(chk.multiplier_relation < 1e-12);
        CHECK(chk.cocycle < 1e-12);
        CHECK(chk.adjoint_relation < 1e-12);
        CHECK(chk.character_norm == doctest::Approx(1.0));
        CHECK(rep.is_abelian());
        CHECK(verify_orthogonality(rep, 20, d) <= 1e-12);
        Rng rng(d);
        const Matrix a = random_operator(d, rng);
        Matrix tw = Matrix::Zero(d, d);
        for (int g = 0; g < rep.size(); ++g) tw += (1.0 / d) * rep.act(g, a);
        CHECK(max_abs(tw - a.trace() * Matrix::Identity(d, d)) < 1e-12);
    }
}

TEST_CASE("orthogonality relations by explicit vectors") {
    const auto rep = weyl_heisenberg_rep(3);
    Rng rng(4);
    const Vector eta = random_unit_vector(3, rng), chi = random_unit_vector(3, rng), psi = random_unit_vector(3, rng),
                 phi = random_unit_vector(3, rng);
    Complex s = 0;
    for (int g = 0; g < rep.size(); ++g) s += rep.haar[g] * eta.dot(rep.matrices[g] * phi) * (rep.matrices[g] * psi).dot(chi);
    CHECK(std::abs(s - eta.dot(chi) * psi.dot(phi)) < 1e-12);
}

TEST_CASE("SU(2) quadrature reps") {
    CHECK_THROWS(su2_quadrature_rep(0.0));
    CHECK_THROWS(su2_quadrature_rep(4.0));
    CHECK_THROWS(su2_quadrature_rep(0.7));
    // d^{1/2}_{1/2,1/2}(b) = cos(b/2), d^{1/2}_{1/2,-1/2}(b) = -sin(b/2), d^1_{00}(b) = cos b
    CHECK(wigner_small_d(1, 1, 1, 0.8) == doctest::Approx(std::cos(0.4)));
    CHECK(wigner_small_d(1, 1, -1, 0.8) == doctest::Approx(-std::sin(0.4)));
    CHECK(wigner_small_d(2, 0, 0, 0.8) == doctest::Approx(std::cos(0.8)));
    CHECK(wigner_small_d(2, 2, 0, 0.8) == doctest::Approx(-std::sin(0.8) / std::sqrt(2.0)));
    const auto half = su2_quadrature_rep(0.5, 4);
    for (const auto& m : half.matrices) {
        CHECK(max_abs(m.adjoint() * m - Matrix::Identity(2, 2)) < 1e-13);
        CHECK(std::abs(m.determinant() - 1.0) < 1e-13);
    }
    CHECK(verify_orthogonality(half, 20, 1) <= 1e-10);
    const auto one = su2_quadrature_rep(1.0, 8, 8);
    CHECK(verify_orthogonality(one, 20, 2) <= 1e-8);
    CHECK(one.haar.back() == 0.0);
    CHECK(max_abs(one.matrices.back() - Matrix::Identity(3, 3)) < 1e-15);
    double total = 0;
    for (double w : one.quadrature->weights) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    Rng rng(3);
    const Matrix a = random_operator(3, rng);
    Matrix tw = Matrix::Zero(3, 3);
    for (int g = 0; g < one.size(); ++g) tw += one.quadrature->weights[g] * one.act(g, a);
    CHECK(max_abs(tw - a.trace() * Matrix::Identity(3, 3) / 3.0) < 1e-10);
}

TEST_CASE("user supplied table reps: S3 irrep and a reducible sum") {
    auto [grp, mats] = s3_with_irrep();
    const auto rep = rep_from_table(grp, mats, "s3");
    CHECK(rep.irreducible);
    CHECK(rep.haar[0] == doctest::Approx(2.0 / 6.0));
    CHECK(verify_orthogonality(rep, 20, 1) <= 1e-12);
    const auto red = direct_sum_rep(weyl_heisenberg_rep(2), weyl_heisenberg_rep(2));
    CHECK_FALSE(red.irreducible);
    CHECK(verify_orthogonality(red, 20, 1) > 1e-2);
    std::vector<Matrix> broken = mats;
    broken[1] = broken[1] * 2.0;
    CHECK_THROWS(rep_from_table(grp, broken));
    const auto j = rep_to_json(rep);
    const auto back = rep_from_json(j);
    CHECK(back.size() == 6);
    CHECK(max_abs(back.matrices[3] - rep.matrices[3]) < 1e-15);
}

TEST_CASE("measures of state pairs") {
    const auto rep = weyl_heisenberg_rep(3);
    Rng rng(5);
    for (int s = 0; s < 20; ++s) {
        const auto mu = measure_of_state_pair(rep, random_mixed_state(3, rng), random_pure_state(3, rng));
        CHECK(std::abs(mu.total() - 1.0) <= 1e-12);
        const Matrix a = random_operator(3, rng), t = random_operator(3, rng);
        const auto nu = measure_of_state_pair(rep, a, t);
        CHECK(std::abs(nu.total() - a.trace() * t.trace()) <= 1e-10);
        CHECK(nu.total_variation() <= trace_norm(a) * trace_norm(t) + 1e-9);
    }
    const Matrix mm = Matrix::Identity(3, 3) / 3.0;
    CHECK(dist(measure_of_state_pair(rep, mm, mm), uniform(rep)) < 1e-15);
    const auto cm = random_complex_measure(rep, 2.0, rng);
    CHECK(cm.total_variation() == doctest::Approx(2.0));
    CHECK_FALSE(cm.is_probability());
    CHECK(random_probability(rep, rng).is_probability());
}

TEST_CASE("convolution and translation") {
    const auto rep = weyl_heisenberg_rep(2);
    const FiniteGroup& g = *rep.group;
    CHECK(dist(convolve(dirac(rep, 2), dirac(rep, 1), g), dirac(rep, 3)) == 0.0);
    Rng rng(6);
    const auto w3 = weyl_heisenberg_rep(3);
    const auto mu = random_probability(w3, rng), nu = random_probability(w3, rng);
    CHECK(dist(convolve(mu, dirac(w3), *w3.group), mu) < 1e-15);
    CHECK(dist(convolve(uniform(w3), nu, *w3.group), uniform(w3)) < 1e-15);
    auto [s3, mats] = s3_with_irrep();
    const auto srep = rep_from_table(s3, mats);
    const auto sn = random_probability(srep, rng);
    for (int a = 0; a < 6; ++a) {
        CHECK(dist(translate(dirac(srep), a, Side::left, s3), dirac(srep, a)) == 0.0);
        CHECK(dist(translate(uniform(srep), a, Side::right, s3), uniform(srep)) < 1e-15);
        for (int b = 0; b < 6; ++b) {
            CHECK(dist(translate(translate(sn, b, Side::left, s3), a, Side::left, s3), translate(sn, s3.mul(a, b), Side::left, s3)) == 0.0);
            // nu^a(k) = nu(a^-1 k), nu_a(k) = nu(k a)
            CHECK(translate(sn, a, Side::left, s3).weights[b] == sn.weights[s3.mul(s3.inv(a), b)]);
            CHECK(translate(sn, a, Side::right, s3).weights[b] == sn.weights[s3.mul(b, a)]);
        }
    }
    CHECK(side_from_string("right") == Side::right);
    CHECK_THROWS(side_from_string("up"));
    const auto back = measure_from_json(measure_to_json(sn));
    CHECK(dist(back, sn) == 0.0);
}
