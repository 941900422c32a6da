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

#include "stochprod/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stochprod {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const auto un = static_cast<unsigned>(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double p = std::legendre(un, z);
            const double pm = std::legendre(un - 1, z);
            dp = n * (z * p - pm) / (z * z - 1.0);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double p = std::legendre(un, z);
        const double pm = std::legendre(un - 1, z);
        dp = n * (z * p - pm) / (z * z - 1.0);
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

Matrix su2_matrix(int two_j, double alpha, double beta, double gamma) {
    const int n = two_j + 1;
    Matrix d(n, n);
    for (int a = 0; a < n; ++a) {
        const int two_mp = two_j - 2 * a;
        for (int b = 0; b < n; ++b) {
            const int two_m = two_j - 2 * b;
            const double phase = -(0.5 * two_mp * alpha + 0.5 * two_m * gamma);
            d(a, b) = std::polar(wigner_small_d(two_j, two_mp, two_m, beta), phase);
        }
    }
    return d;
}

void compute_multiplier(ProjectiveRep& rep) {
    const FiniteGroup& g = *rep.group;
    const int n = g.order();
    rep.multiplier.assign(n, std::vector<Complex>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Matrix prod = rep.matrices[a] * rep.matrices[b];
            rep.multiplier[a][b] = (rep.matrices[g.mul(a, b)] * prod.adjoint()).trace() / static_cast<double>(rep.dim);
        }
}

double character_norm(const ProjectiveRep& rep) {
    double s = 0;
    if (rep.quadrature) {
        const auto& w = rep.quadrature->weights;
        for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * std::norm(rep.matrices[k].trace());
        return s;
    }
    for (const auto& m : rep.matrices) s += std::norm(m.trace());
    return s / rep.size();
}

std::vector<double> real_vector(const nlohmann::json& j) { return j.get<std::vector<double>>(); }

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> cayley) : cayley_(std::move(cayley)) {
    const int n = static_cast<int>(cayley_.size());
    if (n < 1) throw std::invalid_argument("group table is empty");
    for (const auto& row : cayley_) {
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("group table is not square");
        std::vector<char> seen(n, 0);
        for (int v : row) {
            if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("group table is not a Latin square");
            seen[v] = 1;
        }
    }
    for (int c = 0; c < n; ++c) {
        std::vector<char> seen(n, 0);
        for (int r = 0; r < n; ++r) {
            if (seen[cayley_[r][c]]) throw std::invalid_argument("group table is not a Latin square");
            seen[cayley_[r][c]] = 1;
        }
    }
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
        bool ok = true;
        for (int g = 0; g < n && ok; ++g) ok = cayley_[e][g] == g && cayley_[g][e] == g;
        if (ok) identity_ = e;
    }
    if (identity_ < 0) throw std::invalid_argument("group table has no identity");
    inverse_.assign(n, -1);
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (cayley_[g][h] == identity_) inverse_[g] = h;
    for (int g = 0; g < n; ++g)
        if (inverse_[g] < 0 || cayley_[inverse_[g]][g] != identity_)
            throw std::invalid_argument("group table: element without two-sided inverse");

    auto assoc = [&](int a, int b, int c) {
        if (cayley_[cayley_[a][b]][c] != cayley_[a][cayley_[b][c]]) {
            std::ostringstream os;
            os << "group table is not associative at (" << a << ", " << b << ", " << c << ")";
            throw std::invalid_argument(os.str());
        }
    };
    if (n <= 64) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) assoc(a, b, c);
    } else {
        Rng rng(0x6a09e667f3bcc908ULL);
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int s = 0; s < 20000; ++s) assoc(pick(rng), pick(rng), pick(rng));
    }
    abelian_ = true;
    for (int a = 0; a < n && abelian_; ++a)
        for (int b = 0; b < a && abelian_; ++b) abelian_ = cayley_[a][b] == cayley_[b][a];
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup(std::vector<std::vector<int>>{{0}}); }

FiniteGroup FiniteGroup::cyclic_square(int d) {
    if (d < 1) throw std::invalid_argument("cyclic_square: d must be positive");
    const int n = d * d;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = ((a / d + b / d) % d) * d + (a % d + b % d) % d;
    return FiniteGroup(std::move(t));
}

double wigner_small_d(int two_j, int two_mp, int two_m, double beta) {
    // integer combinations j+m etc.
    const int jpm = (two_j + two_m) / 2, jmm = (two_j - two_m) / 2;
    const int jpmp = (two_j + two_mp) / 2, jmmp = (two_j - two_mp) / 2;
    const int mmmp = (two_m - two_mp) / 2;  // m - m'
    const double pre = std::sqrt(factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm));
    const double c = std::cos(beta / 2), s = std::sin(beta / 2);
    double sum = 0;
    for (int k = std::max(0, mmmp); k <= std::min(jpm, jmmp); ++k) {
        const double den = factorial(jpm - k) * factorial(k) * factorial(jmmp - k) * factorial(k - mmmp);
        const double sign = ((k - mmmp) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * std::pow(c, two_j + mmmp - 2 * k) * std::pow(s, 2 * k - mmmp) / den;
    }
    return pre * sum;
}

ProjectiveRep weyl_heisenberg_rep(int d) {
    if (d < 2) throw std::invalid_argument("weyl_heisenberg_rep: d must be >= 2");
    ProjectiveRep rep;
    rep.name = "weyl";
    rep.dim = d;
    rep.group = FiniteGroup::cyclic_square(d);
    Matrix x = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        x((k + 1) % d, k) = 1.0;
        z(k, k) = std::polar(1.0, 2 * kPi * k / d);
    }
    // tau = exp(i pi (d+1)/d): tau^2 = omega and tau^(d^2) = 1 for every d
    std::vector<Matrix> xp(d, Matrix::Identity(d, d)), zp(d, Matrix::Identity(d, d));
    for (int k = 1; k < d; ++k) {
        xp[k] = x * xp[k - 1];
        zp[k] = z * zp[k - 1];
    }
    for (int q = 0; q < d; ++q)
        for (int p = 0; p < d; ++p) {
            const long long qp = static_cast<long long>(q) * p % (2LL * d);
            const Complex tau = std::polar(1.0, kPi * (d + 1) * static_cast<double>(qp) / d);
            rep.matrices.push_back(tau * xp[q] * zp[p]);
        }
    rep.haar.assign(d * d, 1.0 / d);
    rep.c_u_probability = 1.0 / d;
    compute_multiplier(rep);
    rep.irreducible = std::abs(character_norm(rep) - 1.0) <= 1e-9;
    return rep;
}

ProjectiveRep su2_quadrature_rep(double j, int n_beta, int n_alpha) {
    const double tj = 2.0 * j;
    const int two_j = static_cast<int>(std::lround(tj));
    if (std::abs(tj - two_j) > 1e-12 || two_j < 0) throw std::invalid_argument("su2: j must be a half-integer");
    if (two_j == 0) throw std::invalid_argument("su2: j = 0 gives a one-dimensional representation");
    if (two_j + 1 > 8) throw std::invalid_argument("su2: 2j+1 must be at most 8");
    const int n = two_j + 1;
    if (n_beta == 0) n_beta = 2 * two_j + 2;
    if (n_alpha == 0) n_alpha = 2 * two_j + 2;
    if (n_beta < n || n_alpha < n) {
        std::ostringstream os;
        os << "su2: insufficient quadrature order (need n_beta, n_alpha >= " << n << ")";
        throw std::invalid_argument(os.str());
    }
    const int n_gamma = n_alpha;
    std::vector<double> xs, ws;
    gauss_legendre(n_beta, xs, ws);

    ProjectiveRep rep;
    rep.name = "su2";
    rep.dim = n;
    QuadratureGroup quad;
    quad.two_j = two_j;
    quad.n_beta = n_beta;
    quad.n_alpha = n_alpha;
    for (int b = 0; b < n_beta; ++b) {
        const double beta = std::acos(xs[b]);
        for (int a = 0; a < n_alpha; ++a)
            for (int c = 0; c < n_gamma; ++c) {
                const double alpha = 2 * kPi * a / n_alpha;
                const double gamma = 2 * kPi * c / n_gamma;
                quad.nodes.push_back({alpha, beta, gamma});
                const double w = ws[b] / 2.0 / (static_cast<double>(n_alpha) * n_gamma);
                quad.weights.push_back(w);
                rep.matrices.push_back(su2_matrix(two_j, alpha, beta, gamma));
                rep.haar.push_back(w * n);
            }
    }
    // appended identity element, zero Haar weight
    rep.matrices.push_back(Matrix::Identity(n, n));
    rep.haar.push_back(0.0);
    quad.nodes.push_back({0.0, 0.0, 0.0});
    quad.weights.push_back(0.0);
    rep.c_u_probability = 1.0 / n;
    rep.quadrature = std::move(quad);
    rep.irreducible = std::abs(character_norm(rep) - 1.0) <= 1e-8;
    return rep;
}

ProjectiveRep rep_from_table(const FiniteGroup& g, const std::vector<Matrix>& matrices, std::string name) {
    if (static_cast<int>(matrices.size()) != g.order()) throw DimensionError("rep table: one matrix per group element required");
    const auto dim = matrices.front().rows();
    ProjectiveRep rep;
    rep.name = std::move(name);
    rep.dim = static_cast<int>(dim);
    rep.group = g;
    rep.matrices = matrices;
    for (const auto& m : matrices) {
        if (m.rows() != dim || m.cols() != dim) throw DimensionError("rep table: matrices must share one square shape");
        const double u = (m.adjoint() * m - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
        if (!(u <= 1e-10)) throw std::invalid_argument("rep table: matrix is not unitary");
    }
    compute_multiplier(rep);
    const RepCheck chk = check_rep(rep);
    if (!(chk.multiplier_relation <= 1e-10 && chk.multiplier_modulus <= 1e-10)) {
        std::ostringstream os;
        os << "rep table: not a projective representation (multiplier residual " << chk.multiplier_relation << ")";
        throw std::invalid_argument(os.str());
    }
    rep.irreducible = std::abs(chk.character_norm - 1.0) <= 1e-9;
    const double w = rep.irreducible ? static_cast<double>(rep.dim) / g.order() : 1.0 / g.order();
    rep.haar.assign(g.order(), w);
    rep.c_u_probability = 1.0 / rep.dim;
    return rep;
}

ProjectiveRep conjugate_rep(const ProjectiveRep& u) {
    ProjectiveRep v = u;
    v.name = u.name + "*";
    for (auto& m : v.matrices) m = m.conjugate().eval();
    for (auto& row : v.multiplier)
        for (auto& x : row) x = std::conj(x);
    return v;
}

ProjectiveRep direct_sum_rep(const ProjectiveRep& a, const ProjectiveRep& b) {
    if (!a.is_finite() || !b.is_finite() || a.size() != b.size())
        throw std::invalid_argument("direct_sum_rep: both reps must live on the same finite group");
    std::vector<Matrix> ms;
    for (int g = 0; g < a.size(); ++g) {
        Matrix m = Matrix::Zero(a.dim + b.dim, a.dim + b.dim);
        m.topLeftCorner(a.dim, a.dim) = a.matrices[g];
        m.bottomRightCorner(b.dim, b.dim) = b.matrices[g];
        ms.push_back(std::move(m));
    }
    return rep_from_table(*a.group, ms, a.name + "+" + b.name);
}

ProjectiveRep trivial_rep(int dim) {
    return rep_from_table(FiniteGroup::trivial(), {Matrix::Identity(dim, dim)}, "trivial");
}

RepCheck check_rep(const ProjectiveRep& rep) {
    RepCheck c;
    const auto id = Matrix::Identity(rep.dim, rep.dim);
    for (const auto& m : rep.matrices) c.unitarity = std::max(c.unitarity, (m.adjoint() * m - id).cwiseAbs().maxCoeff());
    c.character_norm = character_norm(rep);
    if (!rep.group) return c;
    const FiniteGroup& g = *rep.group;
    const int n = g.order();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const Complex m = rep.multiplier[a][b];
            c.multiplier_modulus = std::max(c.multiplier_modulus, std::abs(std::abs(m) - 1.0));
            const Matrix r = rep.matrices[g.mul(a, b)] - m * rep.matrices[a] * rep.matrices[b];
            c.multiplier_relation = std::max(c.multiplier_relation, r.cwiseAbs().maxCoeff());
        }
        const Matrix adj = rep.matrices[a].adjoint() - rep.multiplier[a][g.inv(a)] * rep.matrices[g.inv(a)];
        c.adjoint_relation = std::max(c.adjoint_relation, adj.cwiseAbs().maxCoeff());
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int k = 0; k < n; ++k) {
                const Complex lhs = rep.multiplier[a][b] * rep.multiplier[g.mul(a, b)][k];
                const Complex rhs = rep.multiplier[a][g.mul(b, k)] * rep.multiplier[b][k];
                c.cocycle = std::max(c.cocycle, std::abs(lhs - rhs));
            }
    return c;
}

double verify_orthogonality(const ProjectiveRep& rep, int trials, std::uint64_t seed) {
    double worst = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        const Vector eta = random_unit_vector(rep.dim, rng);
        const Vector chi = random_unit_vector(rep.dim, rng);
        const Vector psi = random_unit_vector(rep.dim, rng);
        const Vector phi = random_unit_vector(rep.dim, rng);
        Complex s = 0;
        for (int g = 0; g < rep.size(); ++g) {
            if (rep.haar[g] == 0.0) continue;
            const Complex a = eta.dot(rep.matrices[g] * phi);  // dot conjugates the left operand
            const Complex b = (rep.matrices[g] * psi).dot(chi);
            s += rep.haar[g] * a * b;
        }
        worst = std::max(worst, std::abs(s - eta.dot(chi) * psi.dot(phi)));
    }
    return worst;
}

Complex GroupMeasure::total() const {
    Complex s = 0;
    for (const auto& w : weights) s += w;
    return s;
}

double GroupMeasure::total_variation() const {
    double s = 0;
    for (const auto& w : weights) s += std::abs(w);
    return s;
}

bool GroupMeasure::is_probability(double tol) const {
    double s = 0;
    for (const auto& w : weights) {
        if (std::abs(w.imag()) > tol || w.real() < -tol) return false;
        s += w.real();
    }
    return std::abs(s - 1.0) <= tol;
}

GroupMeasure dirac(const ProjectiveRep& rep, int g) {
    if (g < 0 || g >= rep.size()) throw std::out_of_range("dirac: element out of range");
    GroupMeasure m{std::vector<Complex>(rep.size(), 0.0), MeasureKind::probability};
    m.weights[g] = 1.0;
    return m;
}

GroupMeasure uniform(const ProjectiveRep& rep) {
    double s = 0;
    for (double w : rep.haar) s += w;
    GroupMeasure m{std::vector<Complex>(rep.size()), MeasureKind::probability};
    for (int g = 0; g < rep.size(); ++g) m.weights[g] = rep.haar[g] / s;
    return m;
}

GroupMeasure random_probability(const ProjectiveRep& rep, Rng& rng) {
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> w(rep.size());
    double s = 0;
    for (auto& x : w) s += (x = ex(rng));
    GroupMeasure m{std::vector<Complex>(rep.size()), MeasureKind::probability};
    for (int g = 0; g < rep.size(); ++g) m.weights[g] = w[g] / s;
    return m;
}

GroupMeasure random_complex_measure(const ProjectiveRep& rep, double total_variation, Rng& rng) {
    const Matrix g = random_ginibre(rep.size(), 1, rng);
    GroupMeasure m{std::vector<Complex>(rep.size()), MeasureKind::complex};
    double s = 0;
    for (int k = 0; k < rep.size(); ++k) s += std::abs(g(k, 0));
    for (int k = 0; k < rep.size(); ++k) m.weights[k] = g(k, 0) * (total_variation / s);
    return m;
}

GroupMeasure zero_measure(const ProjectiveRep& rep) {
    return GroupMeasure{std::vector<Complex>(rep.size(), 0.0), MeasureKind::complex};
}

GroupMeasure measure_of_state_pair(const ProjectiveRep& rep, const Matrix& a, const Matrix& t) {
    if (a.rows() != rep.dim || t.rows() != rep.dim) throw DimensionError("measure_of_state_pair: dimension mismatch");
    GroupMeasure m{std::vector<Complex>(rep.size()), MeasureKind::complex};
    for (int g = 0; g < rep.size(); ++g) {
        if (rep.haar[g] == 0.0) {
            m.weights[g] = 0.0;
            continue;
        }
        m.weights[g] = rep.haar[g] * (a * rep.act(g, t)).trace();
    }
    if (m.is_probability(1e-10)) m.kind = MeasureKind::probability;
    return m;
}

GroupMeasure convolve(const GroupMeasure& mu, const GroupMeasure& nu, const FiniteGroup& g) {
    if (mu.size() != g.order() || nu.size() != g.order()) throw DimensionError("convolve: measure size differs from group order");
    GroupMeasure out{std::vector<Complex>(g.order(), 0.0), MeasureKind::complex};
    for (int a = 0; a < g.order(); ++a) {
        if (mu.weights[a] == Complex(0.0)) continue;
        for (int b = 0; b < g.order(); ++b) out.weights[g.mul(a, b)] += mu.weights[a] * nu.weights[b];
    }
    if (mu.kind == MeasureKind::probability && nu.kind == MeasureKind::probability) out.kind = MeasureKind::probability;
    return out;
}

GroupMeasure translate(const GroupMeasure& nu, int g, Side side, const FiniteGroup& grp) {
    if (nu.size() != grp.order()) throw DimensionError("translate: measure size differs from group order");
    if (g < 0 || g >= grp.order()) throw std::out_of_range("translate: element out of range");
    GroupMeasure out{std::vector<Complex>(grp.order()), nu.kind};
    for (int k = 0; k < grp.order(); ++k)
        out.weights[k] = side == Side::left ? nu.weights[grp.mul(grp.inv(g), k)] : nu.weights[grp.mul(k, g)];
    return out;
}

std::string to_string(Side s) { return s == Side::left ? "left" : "right"; }

Side side_from_string(const std::string& s) {
    if (s == "left") return Side::left;
    if (s == "right") return Side::right;
    throw std::invalid_argument("side must be \"left\" or \"right\"");
}

nlohmann::json measure_to_json(const GroupMeasure& m) {
    std::vector<double> re, im;
    for (const auto& w : m.weights) {
        re.push_back(w.real());
        im.push_back(w.imag());
    }
    return {{"kind", m.kind == MeasureKind::probability ? "probability" : "complex"}, {"re", re}, {"im", im}};
}

GroupMeasure measure_from_json(const nlohmann::json& j) {
    const auto re = real_vector(j.at("re"));
    const auto im = j.contains("im") ? real_vector(j.at("im")) : std::vector<double>(re.size(), 0.0);
    if (im.size() != re.size()) throw DimensionError("measure JSON: re/im length mismatch");
    GroupMeasure m;
    for (std::size_t k = 0; k < re.size(); ++k) m.weights.emplace_back(re[k], im[k]);
    const std::string kind = j.value("kind", "complex");
    if (kind == "probability") {
        if (!m.is_probability()) throw std::invalid_argument("measure JSON: weights do not form a probability measure");
        m.kind = MeasureKind::probability;
    } else if (kind != "complex") {
        throw std::invalid_argument("measure JSON: kind must be probability or complex");
    }
    return m;
}

nlohmann::json group_to_json(const FiniteGroup& g) { return {{"order", g.order()}, {"cayley", g.cayley()}}; }

FiniteGroup group_from_json(const nlohmann::json& j) {
    return FiniteGroup(j.at("cayley").get<std::vector<std::vector<int>>>());
}

ProjectiveRep rep_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("rep").get<std::string>();
    if (kind == "weyl") return weyl_heisenberg_rep(j.at("d").get<int>());
    if (kind == "su2") return su2_quadrature_rep(j.at("j").get<double>(), j.value("n_beta", 0), j.value("n_alpha", 0));
    if (kind == "table") {
        std::vector<Matrix> ms;
        for (const auto& m : j.at("matrices")) ms.push_back(operator_from_json(m));
        return rep_from_table(group_from_json(j.at("group")), ms, j.value("name", "table"));
    }
    throw std::invalid_argument("unknown rep kind \"" + kind + "\" (expected weyl, su2 or table)");
}

nlohmann::json rep_to_json(const ProjectiveRep& rep) {
    if (rep.quadrature)
        return {{"rep", "su2"},
                {"j", rep.quadrature->two_j / 2.0},
                {"n_beta", rep.quadrature->n_beta},
                {"n_alpha", rep.quadrature->n_alpha}};
    if (rep.name == "weyl") return {{"rep", "weyl"}, {"d", rep.dim}};
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& m : rep.matrices) ms.push_back(operator_to_json(m));
    return {{"rep", "table"}, {"name", rep.name}, {"group", group_to_json(*rep.group)}, {"matrices", ms}};
}

}  // namespace stochprod
