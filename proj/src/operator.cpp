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

#include "stochprod/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace stochprod {

namespace {

void require_finite(const Matrix& m) {
    if (!m.allFinite()) throw std::invalid_argument("operator has non-finite entries");
}

void require_square(const Matrix& m) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << "operator must be square, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
}

Eigen::SelfAdjointEigenSolver<Matrix> hermitian_eigen(const Matrix& h, bool vectors) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Hermitian eigendecomposition failed (dim " << h.rows() << ", max |entry| " << h.cwiseAbs().maxCoeff()
           << ")";
        throw NumericalError(os.str());
    }
    return es;
}

// Splits a Hermitian matrix into weights/states of its positive and negative parts.
void split_hermitian(const Matrix& h, double zero_tol, double& wp, Matrix& bp, double& wm, Matrix& bm) {
    const auto n = h.rows();
    auto es = hermitian_eigen(h, true);
    Matrix pos = Matrix::Zero(n, n);
    Matrix neg = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double lam = es.eigenvalues()(k);
        if (std::abs(lam) <= zero_tol) continue;
        const Vector v = es.eigenvectors().col(k);
        if (lam > 0)
            pos += lam * v * v.adjoint();
        else
            neg += (-lam) * v * v.adjoint();
    }
    wp = pos.trace().real();
    wm = neg.trace().real();
    bp = wp > 0 ? Matrix(pos / wp) : Matrix(Matrix::Zero(n, n));
    bm = wm > 0 ? Matrix(neg / wm) : Matrix(Matrix::Zero(n, n));
}

}  // namespace

TraceClassOperator::TraceClassOperator(Matrix m) : m_(std::move(m)) {
    require_square(m_);
    if (m_.rows() < 2) throw std::invalid_argument("operator dimension must be at least 2");
    require_finite(m_);
}

StateResiduals state_residuals(const Matrix& a) {
    require_square(a);
    StateResiduals r;
    r.hermiticity = (a - a.adjoint()).cwiseAbs().maxCoeff();
    const Matrix h = (a + a.adjoint()) / 2.0;
    r.min_eigenvalue = min_eigenvalue_hermitian(h);
    r.trace_error = std::abs(a.trace() - Complex(1.0, 0.0));
    return r;
}

DensityOperator::DensityOperator(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
    require_square(m_);
    if (m_.rows() < 2) throw std::invalid_argument("state dimension must be at least 2");
    require_finite(m_);
    const auto r = state_residuals(m_);
    if (!r.ok(tol)) {
        std::ostringstream os;
        os << "not a density operator: hermiticity residual " << r.hermiticity << ", min eigenvalue "
           << r.min_eigenvalue << ", trace error " << r.trace_error;
        throw std::invalid_argument(os.str());
    }
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
    return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::basis_projector(int dim, int k) {
    if (k < 0 || k >= dim) throw std::out_of_range("basis index out of range");
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return DensityOperator(std::move(m));
}

Matrix OperatorDecomposition::reconstruct() const {
    const Complex i(0.0, 1.0);
    return (a1p * b1p - a1m * b1m) + i * (a2p * b2p - a2m * b2m);
}

OperatorDecomposition decompose(const Matrix& a, double zero_tol) {
    require_square(a);
    require_finite(a);
    const Complex i(0.0, 1.0);
    OperatorDecomposition d;
    d.a1 = (a + a.adjoint()) / 2.0;
    d.a2 = -i * (a - a.adjoint()) / 2.0;
    split_hermitian(d.a1, zero_tol, d.a1p, d.b1p, d.a1m, d.b1m);
    split_hermitian(d.a2, zero_tol, d.a2p, d.b2p, d.a2m, d.b2m);
    return d;
}

double trace_norm(const Matrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (!s.allFinite()) throw NumericalError("SVD produced non-finite singular values");
    return s.sum();
}

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue_hermitian(const Matrix& a) {
    const Matrix h = (a + a.adjoint()) / 2.0;
    return hermitian_eigen(h, false).eigenvalues().minCoeff();
}

bool is_positive(const Matrix& a, double tol) {
    if (!is_hermitian(a, tol)) return false;
    return min_eigenvalue_hermitian(a) >= -tol;
}

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

Matrix unvec(const Vector& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols) throw DimensionError("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix partial_trace_second(const Matrix& joint, int dim_first, int dim_second) {
    if (joint.rows() != dim_first * dim_second || joint.cols() != joint.rows())
        throw DimensionError("partial trace: joint operator has wrong shape");
    Matrix out = Matrix::Zero(dim_first, dim_first);
    for (int i = 0; i < dim_first; ++i)
        for (int j = 0; j < dim_first; ++j)
            for (int k = 0; k < dim_second; ++k) out(i, j) += joint(i * dim_second + k, j * dim_second + k);
    return out;
}

Matrix partial_trace_first(const Matrix& joint, int dim_first, int dim_second) {
    if (joint.rows() != dim_first * dim_second || joint.cols() != joint.rows())
        throw DimensionError("partial trace: joint operator has wrong shape");
    Matrix out = Matrix::Zero(dim_second, dim_second);
    for (int a = 0; a < dim_second; ++a)
        for (int b = 0; b < dim_second; ++b)
            for (int k = 0; k < dim_first; ++k) out(a, b) += joint(k * dim_second + a, k * dim_second + b);
    return out;
}

Matrix random_ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Matrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = n01(rng);
            const double im = n01(rng);
            g(i, j) = Complex(re, im) / std::sqrt(2.0);
        }
    return g;
}

Matrix random_operator(int dim, Rng& rng) { return random_ginibre(dim, dim, rng); }

Matrix random_hermitian(int dim, Rng& rng) {
    const Matrix g = random_ginibre(dim, dim, rng);
    return (g + g.adjoint()) / 2.0;
}

Matrix random_unitary(int dim, Rng& rng) {
    const Matrix g = random_ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; ++k) {
        const Complex rk = r(k, k);
        const double mag = std::abs(rk);
        if (mag > 0) q.col(k) *= rk / mag;
    }
    return q;
}

Vector random_unit_vector(int dim, Rng& rng) {
    Vector v = random_ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

Matrix random_pure_state(int dim, Rng& rng) {
    const Vector v = random_unit_vector(dim, rng);
    return v * v.adjoint();
}

Matrix random_mixed_state(int dim, Rng& rng) {
    const Matrix g = random_ginibre(dim, dim, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return (rho + rho.adjoint()) / 2.0;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

nlohmann::json operator_to_json(const Matrix& a) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        nlohmann::json rr = nlohmann::json::array();
        nlohmann::json ri = nlohmann::json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            rr.push_back(a(i, j).real());
            ri.push_back(a(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return {{"dim", a.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix operator_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re"))
        throw std::invalid_argument("operator JSON needs \"dim\" and \"re\"");
    const int n = j.at("dim").get<int>();
    if (n < 1) throw std::invalid_argument("operator JSON: dim must be positive");
    const auto& re = j.at("re");
    const bool has_im = j.contains("im");
    if (!re.is_array() || static_cast<int>(re.size()) != n) throw DimensionError("operator JSON: \"re\" must have dim rows");
    if (has_im && (!j.at("im").is_array() || static_cast<int>(j.at("im").size()) != n))
        throw DimensionError("operator JSON: \"im\" must have dim rows");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(re[r].size()) != n) throw DimensionError("operator JSON: ragged \"re\" row");
        for (int c = 0; c < n; ++c) {
            const double x = re[r][c].get<double>();
            double y = 0.0;
            if (has_im) {
                const auto& row = j.at("im")[r];
                if (static_cast<int>(row.size()) != n) throw DimensionError("operator JSON: ragged \"im\" row");
                y = row[c].get<double>();
            }
            m(r, c) = Complex(x, y);
        }
    }
    return m;
}

}  // namespace stochprod
