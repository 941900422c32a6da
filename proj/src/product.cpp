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

#include "stochprod/product.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stochprod {

namespace {

void require_stochastic(const Superoperator& phi, const char* what) {
    ClassifyOptions o;
    o.samples = 50;
    const auto c = classify(phi, o);
    if (!c.is_trace_preserving || !c.is_positive_sampled) {
        std::ostringstream os;
        os << what << ": map is not stochastic (trace residual " << c.trace_preservation_residual
           << ", min output eigenvalue " << c.min_output_eigenvalue << ")";
        throw std::invalid_argument(os.str());
    }
}

// Terms c_k * state_k of the four-part decomposition, zero parts dropped.
std::vector<std::pair<Complex, Matrix>> positive_parts(const Matrix& a) {
    const auto d = decompose(a);
    const Complex i(0.0, 1.0);
    std::vector<std::pair<Complex, Matrix>> out;
    if (d.a1p > 0) out.emplace_back(d.a1p, d.b1p);
    if (d.a1m > 0) out.emplace_back(-d.a1m, d.b1m);
    if (d.a2p > 0) out.emplace_back(i * d.a2p, d.b2p);
    if (d.a2m > 0) out.emplace_back(-i * d.a2m, d.b2m);
    return out;
}

}  // namespace

Matrix StochasticProduct::operator()(const Matrix& a, const Matrix& b) const {
    if (a.rows() != dim_ || a.cols() != dim_ || b.rows() != dim_ || b.cols() != dim_) {
        std::ostringstream os;
        os << "product expects " << dim_ << "x" << dim_ << " operands";
        throw DimensionError(os.str());
    }
    return f_(a, b);
}

Matrix StochasticProduct::tensor() const {
    if (dim_ > kMaxTensorDim) throw std::invalid_argument("product tensor is only materialized for dim <= 6");
    const int d2 = dim_ * dim_;
    Matrix m(d2, static_cast<Eigen::Index>(d2) * d2);
    Matrix ea = Matrix::Zero(dim_, dim_), eb = Matrix::Zero(dim_, dim_);
    for (int ib = 0; ib < d2; ++ib) {
        eb(ib % dim_, ib / dim_) = 1.0;
        for (int ia = 0; ia < d2; ++ia) {
            ea(ia % dim_, ia / dim_) = 1.0;
            m.col(static_cast<Eigen::Index>(ib) * d2 + ia) = vec((*this)(ea, eb));
            ea(ia % dim_, ia / dim_) = 0.0;
        }
        eb(ib % dim_, ib / dim_) = 0.0;
    }
    return m;
}

void validate_product(const StochasticProduct& p, const ProductValidation& v) {
    for (int s = 0; s < v.samples; ++s) {
        Rng rng(derive_seed(v.seed, static_cast<std::uint64_t>(s)));
        // alternate pure and full-rank pairs
        const bool pure = s % 2 == 0;
        const Matrix rho = pure ? random_pure_state(p.dim(), rng) : random_mixed_state(p.dim(), rng);
        const Matrix sigma = pure ? random_pure_state(p.dim(), rng) : random_mixed_state(p.dim(), rng);
        const Matrix out = p(rho, sigma);
        const auto r = state_residuals(out);
        if (!r.ok(v.tol)) {
            std::ostringstream os;
            os << "product is not state-preserving on sample " << s << ": hermiticity " << r.hermiticity
               << ", min eigenvalue " << r.min_eigenvalue << ", trace error " << r.trace_error;
            throw ProductRejected(os.str(), rho, sigma, r);
        }
    }
}

StochasticProduct from_bilinear(const Matrix& tensor, const ProductValidation& v) {
    const auto d2 = tensor.rows();
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
    if (d < 2 || static_cast<Eigen::Index>(d) * d != d2 || tensor.cols() != d2 * d2)
        throw DimensionError("from_bilinear: tensor must be d^2 x d^4 with d >= 2");
    if (!tensor.allFinite()) throw std::invalid_argument("from_bilinear: tensor has non-finite entries");
    StochasticProduct p(
        d, [tensor, d](const Matrix& a, const Matrix& b) { return unvec(tensor * kron(vec(b), vec(a)), d); },
        {{"kind", "tensor"}, {"dim", d}});
    validate_product(p, v);
    return p;
}

StochasticProduct from_state_map(int dim, BilinearFn on_states, nlohmann::json descriptor, const ProductValidation& v) {
    auto f = [on_states = std::move(on_states), dim](const Matrix& a, const Matrix& b) {
        Matrix out = Matrix::Zero(dim, dim);
        const auto pa = positive_parts(a);
        const auto pb = positive_parts(b);
        for (const auto& [ca, ra] : pa)
            for (const auto& [cb, rb] : pb) out += ca * cb * on_states(ra, rb);
        return out;
    };
    StochasticProduct p(dim, std::move(f), std::move(descriptor));
    validate_product(p, v);
    return p;
}

StochasticProduct mixture_product(const Superoperator& phi, const Superoperator& psi, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("mixture_product: alpha must lie in [0, 1]");
    if (!phi.is_square() || !psi.is_square() || phi.dim() != psi.dim())
        throw DimensionError("mixture_product: maps must act on one common space");
    require_stochastic(phi, "mixture_product");
    require_stochastic(psi, "mixture_product");
    const Superoperator lp = phi.linearized(), ls = psi.linearized();
    return StochasticProduct(
        phi.dim(),
        [lp, ls, alpha](const Matrix& a, const Matrix& b) -> Matrix {
            return (alpha * b.trace()) * lp.apply(a) + ((1.0 - alpha) * a.trace()) * ls.apply(b);
        },
        {{"kind", "mixture"},
         {"alpha", alpha},
         {"phi", superoperator_to_json(phi)},
         {"psi", superoperator_to_json(psi)}});
}

StochasticProduct povm_product(const std::vector<Matrix>& effects, const std::vector<Superoperator>& channels) {
    if (effects.empty() || effects.size() != channels.size())
        throw std::invalid_argument("povm_product: need one channel per effect");
    const auto d = effects.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& e : effects) {
        if (e.rows() != d || e.cols() != d) throw DimensionError("povm_product: effects must share one shape");
        if (!is_positive(e, 1e-10)) throw std::invalid_argument("povm_product: effect is not positive semidefinite");
        sum += e;
    }
    const double dev = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > 1e-10) {
        std::ostringstream os;
        os << "povm_product: effects do not sum to the identity (deviation " << dev << ")";
        throw std::invalid_argument(os.str());
    }
    std::vector<Superoperator> lin;
    nlohmann::json eff = nlohmann::json::array(), ch = nlohmann::json::array();
    for (std::size_t k = 0; k < channels.size(); ++k) {
        if (!channels[k].is_square() || channels[k].dim() != d) throw DimensionError("povm_product: channel dimension mismatch");
        require_stochastic(channels[k], "povm_product");
        lin.push_back(channels[k].linearized());
        eff.push_back(operator_to_json(effects[k]));
        ch.push_back(superoperator_to_json(channels[k]));
    }
    return StochasticProduct(
        static_cast<int>(d),
        [effects, lin](const Matrix& a, const Matrix& b) {
            Matrix out = Matrix::Zero(b.rows(), b.cols());
            for (std::size_t k = 0; k < effects.size(); ++k) {
                const Complex w = (a * effects[k]).trace();
                if (w != Complex(0.0)) out += w * lin[k].apply(b);
            }
            return out;
        },
        {{"kind", "povm"}, {"effects", eff}, {"channels", ch}});
}

StochasticProduct partial_trace_product(const Superoperator& joint_channel, int dim, int dim_aux) {
    if (dim < 2 || dim_aux < 1) throw std::invalid_argument("partial_trace_product: invalid dimensions");
    if (joint_channel.dim_in() != dim * dim || joint_channel.dim_out() != dim * dim_aux) {
        std::ostringstream os;
        os << "partial_trace_product: joint channel must map dimension " << dim * dim << " to " << dim * dim_aux;
        throw DimensionError(os.str());
    }
    require_stochastic(joint_channel, "partial_trace_product");
    const Superoperator theta = joint_channel.linearized();
    return StochasticProduct(
        dim,
        [theta, dim, dim_aux](const Matrix& a, const Matrix& b) {
            return partial_trace_second(theta.apply(kron(a, b)), dim, dim_aux);
        },
        {{"kind", "partial_trace"}, {"dim", dim}, {"dim_aux", dim_aux}, {"joint_channel", superoperator_to_json(joint_channel)}});
}

Superoperator left_map(const StochasticProduct& p, const Matrix& rho) {
    return Superoperator::from_function(p.dim(), p.dim(), [&](const Matrix& e) { return p(rho, e); });
}

Superoperator right_map(const StochasticProduct& p, const Matrix& sigma) {
    return Superoperator::from_function(p.dim(), p.dim(), [&](const Matrix& e) { return p(e, sigma); });
}

PartialMaps partial_maps(const StochasticProduct& p) {
    return {[p](const Matrix& rho) { return left_map(p, rho); }, [p](const Matrix& sigma) { return right_map(p, sigma); }};
}

std::string to_string(PointKind k) {
    switch (k) {
        case PointKind::bijective: return "bijective";
        case PointKind::injective_pureness_preserving: return "injective_pureness_preserving";
        case PointKind::collapsing: return "collapsing";
        default: return "generic";
    }
}

PointClassification classify_point(const StochasticProduct& p, const Matrix& rho, Side side, const ClassifyOptions& opts) {
    DensityOperator state(rho);
    const Superoperator phi = side == Side::left ? left_map(p, state.matrix()) : right_map(p, state.matrix());
    PointClassification pc;
    pc.side = side;
    pc.evidence = classify(phi, opts);
    if (pc.evidence.is_symmetry)
        pc.kind = PointKind::bijective;
    else if (pc.evidence.is_collapse)
        pc.kind = PointKind::collapsing;
    else if (pc.evidence.is_pureness_preserving_sampled)
        pc.kind = PointKind::injective_pureness_preserving;
    else
        pc.kind = PointKind::generic;
    return pc;
}

CovarianceCheck check_covariance(const StochasticProduct& p, const ProjectiveRep& u, const ProjectiveRep& v, Side side,
                                 int pairs, std::uint64_t seed, double tol) {
    if (u.dim != p.dim() || v.dim != p.dim()) throw DimensionError("check_covariance: rep dimension differs from product");
    if (u.size() != v.size()) throw std::invalid_argument("check_covariance: reps must share one group");
    CovarianceCheck out;
    for (int s = 0; s < pairs; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        const Matrix rho = random_mixed_state(p.dim(), rng);
        const Matrix sigma = random_mixed_state(p.dim(), rng);
        const Matrix base = p(rho, sigma);
        for (int g = 0; g < u.size(); ++g) {
            const Matrix lhs = side == Side::left ? p(u.act(g, rho), sigma) : p(rho, u.act(g, sigma));
            out.max_residual = std::max(out.max_residual, trace_norm(lhs - v.act(g, base)));
        }
    }
    out.passed = out.max_residual <= tol;
    return out;
}

bool same_level_set(const StochasticProduct& p, const Matrix& rho, const Matrix& sigma, Side side, double tol) {
    const Superoperator a = side == Side::left ? left_map(p, rho) : right_map(p, rho);
    const Superoperator b = side == Side::left ? left_map(p, sigma) : right_map(p, sigma);
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= tol;
}

nlohmann::json point_classification_to_json(const PointClassification& c) {
    return {{"kind", to_string(c.kind)}, {"side", to_string(c.side)}, {"evidence", classification_to_json(c.evidence)}};
}

}  // namespace stochprod
