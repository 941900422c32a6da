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

#include "stochprod/superoperator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace stochprod {

namespace {

// P vec(A) = vec(A^T).
Matrix transpose_permutation(int d) {
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    Matrix p = Matrix::Zero(n, n);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p(i + d * j, j + d * i) = 1.0;
    return p;
}

Matrix sandwich_matrix(const Matrix& t) { return kron(t.conjugate(), t); }

nlohmann::json real_rows(const Matrix& m, bool imag) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(imag ? m(i, j).imag() : m(i, j).real());
        rows.push_back(std::move(r));
    }
    return rows;
}

// Rank-one Kraus operator recovered from a Choi matrix, if the Choi matrix is PSD
// and numerically rank one.
struct RankOneChoi {
    double min_eig = 0;
    double rank_ratio = 1;
    std::optional<Matrix> kraus;
};

RankOneChoi rank_one_kraus(const Matrix& choi, int dim_in, int dim_out, double tol, double cutoff) {
    const Matrix h = (choi + choi.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw NumericalError("Choi eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    const Eigen::Index n = ev.size();
    RankOneChoi out;
    out.min_eig = ev(0);
    const double top = ev(n - 1);
    const double second = n >= 2 ? ev(n - 2) : 0.0;
    out.rank_ratio = top > 0 ? std::abs(second) / top : 1.0;
    const double scale = std::max(1.0, std::abs(top));
    if (top > 0 && out.min_eig >= -tol * scale && out.rank_ratio <= cutoff) {
        const Vector v = es.eigenvectors().col(n - 1) * std::sqrt(top);
        Matrix k(dim_out, dim_in);
        for (int i = 0; i < dim_in; ++i)
            for (int a = 0; a < dim_out; ++a) k(a, i) = v(static_cast<Eigen::Index>(i) * dim_out + a);
        out.kraus = k;
    }
    return out;
}

}  // namespace

Superoperator::Superoperator(int dim_in, int dim_out, Matrix matrix, bool antilinear)
    : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(matrix)), antilinear_(antilinear) {
    if (dim_in < 1 || dim_out < 1) throw std::invalid_argument("superoperator dimensions must be positive");
    if (m_.rows() != static_cast<Eigen::Index>(dim_out) * dim_out ||
        m_.cols() != static_cast<Eigen::Index>(dim_in) * dim_in) {
        std::ostringstream os;
        os << "superoperator matrix must be " << dim_out * dim_out << "x" << dim_in * dim_in << ", got " << m_.rows()
           << "x" << m_.cols();
        throw DimensionError(os.str());
    }
    if (!m_.allFinite()) throw std::invalid_argument("superoperator has non-finite entries");
}

Matrix Superoperator::apply(const Matrix& a) const {
    if (a.rows() != dim_in_ || a.cols() != dim_in_) {
        std::ostringstream os;
        os << "superoperator expects " << dim_in_ << "x" << dim_in_ << " input, got " << a.rows() << "x" << a.cols();
        throw DimensionError(os.str());
    }
    const Vector v = antilinear_ ? vec(a.conjugate()) : vec(a);
    return unvec(m_ * v, dim_out_);
}

Superoperator Superoperator::linearized() const {
    if (!antilinear_) return *this;
    return Superoperator(dim_in_, dim_out_, m_ * transpose_permutation(dim_in_), false);
}

Matrix Superoperator::adjoint_apply(const Matrix& b) const {
    if (b.rows() != dim_out_ || b.cols() != dim_out_) throw DimensionError("adjoint_apply: dimension mismatch");
    const Matrix& m = antilinear_ ? linearized().matrix() : m_;
    const Vector y = m.transpose() * vec(b.transpose());
    return unvec(y, dim_in_).transpose();
}

Matrix Superoperator::choi() const {
    const Superoperator lin = linearized();
    const int n = dim_in_;
    const int k = dim_out_;
    Matrix j(static_cast<Eigen::Index>(n) * k, static_cast<Eigen::Index>(n) * k);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            j.block(static_cast<Eigen::Index>(r) * k, static_cast<Eigen::Index>(c) * k, k, k) =
                unvec(lin.matrix().col(r + n * c), k);
    return j;
}

Superoperator Superoperator::identity(int dim) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    return Superoperator(dim, Matrix::Identity(n, n));
}

Superoperator Superoperator::transpose(int dim) { return Superoperator(dim, transpose_permutation(dim)); }

Superoperator compose(const Superoperator& outer, const Superoperator& inner) {
    if (outer.dim_in() != inner.dim_out()) throw DimensionError("compose: inner output does not match outer input");
    const Superoperator o = outer.linearized();
    const Superoperator i = inner.linearized();
    return Superoperator(inner.dim_in(), outer.dim_out(), o.matrix() * i.matrix());
}

Superoperator combine(Complex a, const Superoperator& x, Complex b, const Superoperator& y) {
    if (x.dim_in() != y.dim_in() || x.dim_out() != y.dim_out()) throw DimensionError("combine: dimension mismatch");
    return Superoperator(x.dim_in(), x.dim_out(), a * x.linearized().matrix() + b * y.linearized().matrix());
}

bool is_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    const Matrix id = Matrix::Identity(u.rows(), u.cols());
    return (u.adjoint() * u - id).cwiseAbs().maxCoeff() <= tol && (u * u.adjoint() - id).cwiseAbs().maxCoeff() <= tol;
}

bool is_isometry(const Matrix& t, double tol) {
    if (t.rows() < t.cols()) return false;
    return (t.adjoint() * t - Matrix::Identity(t.cols(), t.cols())).cwiseAbs().maxCoeff() <= tol;
}

Superoperator conjugation_channel(const Matrix& u) {
    if (!is_unitary(u)) throw std::invalid_argument("conjugation_channel: matrix is not unitary");
    const int d = static_cast<int>(u.rows());
    return Superoperator(d, sandwich_matrix(u));
}

Superoperator antiunitary_channel(const Matrix& w) {
    if (!is_unitary(w)) throw std::invalid_argument("antiunitary_channel: matrix is not unitary");
    const int d = static_cast<int>(w.rows());
    return Superoperator(d, sandwich_matrix(w) * transpose_permutation(d));
}

Superoperator collapse_channel(const Matrix& rho0) {
    const DensityOperator state(rho0);
    const int d = state.dim();
    const Vector target = vec(state.matrix());
    const Vector tr = vec(Matrix::Identity(d, d));
    return Superoperator(d, target * tr.transpose());
}

Superoperator twirling_channel(const std::vector<Matrix>& unitaries, const std::vector<Complex>& weights) {
    if (unitaries.empty() || unitaries.size() != weights.size())
        throw std::invalid_argument("twirling_channel: need one weight per unitary");
    const int d = static_cast<int>(unitaries.front().rows());
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < unitaries.size(); ++k) {
        if (weights[k] == Complex(0.0, 0.0)) continue;
        m += weights[k] * sandwich_matrix(unitaries[k]);
    }
    return Superoperator(d, std::move(m));
}

Superoperator isometry_mixture_channel(const std::vector<Isometry>& isometries, const std::vector<double>& probs) {
    if (isometries.empty() || isometries.size() != probs.size())
        throw std::invalid_argument("isometry_mixture_channel: need one probability per isometry");
    const auto d_out = isometries.front().matrix.rows();
    const auto d_in = isometries.front().matrix.cols();
    double total = 0;
    for (std::size_t k = 0; k < isometries.size(); ++k) {
        const Matrix& t = isometries[k].matrix;
        if (t.rows() != d_out || t.cols() != d_in) throw DimensionError("isometry_mixture_channel: shape mismatch");
        if (!is_isometry(t)) throw std::invalid_argument("isometry_mixture_channel: T*T != I");
        if (!(probs[k] > 0)) throw std::invalid_argument("isometry_mixture_channel: probabilities must be strictly positive");
        total += probs[k];
        for (std::size_t l = 0; l < k; ++l) {
            const double overlap = (isometries[l].matrix.adjoint() * t).cwiseAbs().maxCoeff();
            if (overlap > 1e-10) {
                std::ostringstream os;
                os << "isometry_mixture_channel: ranges of isometries " << l << " and " << k
                   << " are not orthogonal (overlap " << overlap << ")";
                throw std::invalid_argument(os.str());
            }
        }
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("isometry_mixture_channel: probabilities must sum to 1");
    const int n_in = static_cast<int>(d_in);
    Matrix m = Matrix::Zero(d_out * d_out, d_in * d_in);
    const Matrix p = transpose_permutation(n_in);
    for (std::size_t k = 0; k < isometries.size(); ++k) {
        Matrix term = sandwich_matrix(isometries[k].matrix);
        if (isometries[k].antilinear) term = term * p;
        m += probs[k] * term;
    }
    return Superoperator(n_in, static_cast<int>(d_out), std::move(m));
}

MapClassification classify(const Superoperator& phi_in, const ClassifyOptions& opts) {
    if (opts.samples < 1) throw std::invalid_argument("classify: samples must be >= 1");
    const Superoperator phi = phi_in.linearized();
    const int n = phi.dim_in();
    const int k = phi.dim_out();
    const double tol = opts.tol;
    MapClassification c;
    c.samples = opts.samples;

    // trace preservation via the adjoint: Phi'(I) = I
    const Matrix unit_pullback = phi.adjoint_apply(Matrix::Identity(k, k));
    c.trace_preservation_residual = (unit_pullback - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    c.is_trace_preserving = c.trace_preservation_residual <= tol;
    c.is_trace_reversing = phi.apply(Matrix::Identity(n, n)).trace().real() < 0;

    // sampled positivity / pureness on random pure states
    c.min_output_eigenvalue = std::numeric_limits<double>::infinity();
    c.min_output_purity = std::numeric_limits<double>::infinity();
    double max_herm = 0;
    for (int s = 0; s < opts.samples; ++s) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(s)));
        const Matrix p = random_pure_state(n, rng);
        const Matrix out = phi.apply(p);
        const double herm = (out - out.adjoint()).cwiseAbs().maxCoeff();
        max_herm = std::max(max_herm, herm);
        const double lam = min_eigenvalue_hermitian(out);
        if (lam < c.min_output_eigenvalue) {
            c.min_output_eigenvalue = lam;
            if (lam < -tol || herm > tol) c.positivity_witness = p;
        }
        const Complex tr = out.trace();
        const double pur = std::abs(tr) > 0 ? purity(out) / std::norm(tr) : 0.0;
        c.min_output_purity = std::min(c.min_output_purity, pur);
    }
    c.is_positive_sampled = max_herm <= tol && c.min_output_eigenvalue >= -tol;
    c.is_pureness_preserving_sampled = c.is_positive_sampled && c.min_output_purity >= 1.0 - tol;

    // complete positivity and rank-one (symmetry) structure from the Choi matrix
    const RankOneChoi lin = rank_one_kraus(phi.choi(), n, k, tol, opts.rank_cutoff);
    c.choi_min_eigenvalue = lin.min_eig;
    c.choi_rank_ratio = lin.rank_ratio;
    c.is_completely_positive = lin.min_eig >= -tol * std::max(1.0, static_cast<double>(n));

    if (phi.is_square() && c.is_trace_preserving && c.is_pureness_preserving_sampled) {
        if (lin.kraus && is_unitary(*lin.kraus, 1e-8)) {
            c.is_symmetry = true;
            c.symmetry_kind = SymmetryKind::unitary;
            c.symmetry_operator = *lin.kraus;
        } else {
            const Superoperator flipped = compose(phi, Superoperator::transpose(n));
            const RankOneChoi anti = rank_one_kraus(flipped.choi(), n, k, tol, opts.rank_cutoff);
            if (anti.kraus && is_unitary(*anti.kraus, 1e-8)) {
                c.is_symmetry = true;
                c.symmetry_kind = SymmetryKind::antiunitary;
                c.symmetry_operator = *anti.kraus;
            }
        }
    }

    // collapse: Phi = vec(rho0) vec(I)^T
    const Matrix rho0 = phi.apply(Matrix::Identity(n, n)) / static_cast<double>(n);
    const Matrix expected = vec(rho0) * vec(Matrix::Identity(n, n)).transpose();
    c.collapse_residual = (phi.matrix() - expected).cwiseAbs().maxCoeff();
    if (c.collapse_residual <= tol && c.is_trace_preserving && state_residuals(rho0).ok({tol, tol, tol})) {
        c.is_collapse = true;
        c.collapse_target = rho0;
    }

    // strict contraction witness over differences of random pure states
    c.min_contraction_ratio = std::numeric_limits<double>::infinity();
    for (int s = 0; s < opts.samples; ++s) {
        Rng rng(derive_seed(opts.seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(s)));
        const Matrix p1 = random_pure_state(n, rng);
        const Matrix p2 = random_pure_state(n, rng);
        const Matrix diff = p1 - p2;
        const double nrm = trace_norm(diff);
        if (nrm < 1e-12) continue;
        const Matrix a = diff / nrm;
        const double ratio = trace_norm(phi.apply(a));
        if (ratio < c.min_contraction_ratio) {
            c.min_contraction_ratio = ratio;
            if (ratio < 1.0 - opts.contraction_gap) c.contraction_witness = a;
        }
    }
    return c;
}

std::string to_string(SymmetryKind k) {
    switch (k) {
        case SymmetryKind::unitary: return "unitary";
        case SymmetryKind::antiunitary: return "antiunitary";
        default: return "none";
    }
}

nlohmann::json superoperator_to_json(const Superoperator& s) {
    nlohmann::json j = {{"dim", s.dim_in()},
                        {"matrix_re", real_rows(s.matrix(), false)},
                        {"matrix_im", real_rows(s.matrix(), true)},
                        {"antilinear", s.antilinear()}};
    if (!s.is_square()) j["dim_out"] = s.dim_out();
    return j;
}

Superoperator superoperator_from_json(const nlohmann::json& j) {
    const int n = j.at("dim").get<int>();
    const int k = j.value("dim_out", n);
    const auto& re = j.at("matrix_re");
    const bool has_im = j.contains("matrix_im");
    const Eigen::Index rows = static_cast<Eigen::Index>(k) * k;
    const Eigen::Index cols = static_cast<Eigen::Index>(n) * n;
    if (static_cast<Eigen::Index>(re.size()) != rows) throw DimensionError("superoperator JSON: wrong row count");
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(re[r].size()) != cols) throw DimensionError("superoperator JSON: ragged row");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = Complex(re[r][c].get<double>(), has_im ? j.at("matrix_im")[r][c].get<double>() : 0.0);
    }
    return Superoperator(n, k, std::move(m), j.value("antilinear", false));
}

nlohmann::json classification_to_json(const MapClassification& c) {
    nlohmann::json j = {
        {"is_trace_preserving", c.is_trace_preserving},
        {"is_positive_sampled", c.is_positive_sampled},
        {"is_completely_positive", c.is_completely_positive},
        {"is_pureness_preserving_sampled", c.is_pureness_preserving_sampled},
        {"is_symmetry", c.is_symmetry},
        {"is_collapse", c.is_collapse},
        {"is_trace_reversing", c.is_trace_reversing},
        {"symmetry_kind", to_string(c.symmetry_kind)},
        {"samples", c.samples},
        {"margins",
         {{"trace_preservation_residual", c.trace_preservation_residual},
          {"min_output_eigenvalue", c.min_output_eigenvalue},
          {"min_output_purity", c.min_output_purity},
          {"choi_min_eigenvalue", c.choi_min_eigenvalue},
          {"choi_rank_ratio", c.choi_rank_ratio},
          {"collapse_residual", c.collapse_residual},
          {"min_contraction_ratio", c.min_contraction_ratio}}}};
    if (c.collapse_target) j["collapse_target"] = operator_to_json(*c.collapse_target);
    if (c.symmetry_operator) j["symmetry_operator"] = operator_to_json(*c.symmetry_operator);
    if (c.positivity_witness) j["positivity_witness"] = operator_to_json(*c.positivity_witness);
    if (c.contraction_witness) j["contraction_witness"] = operator_to_json(*c.contraction_witness);
    return j;
}

}  // namespace stochprod
