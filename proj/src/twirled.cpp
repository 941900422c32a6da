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

#include "stochprod/twirled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stochprod {

namespace {

void check_pair(const ProjectiveRep& u, const ProjectiveRep& v) {
    if (u.size() != v.size() || u.is_finite() != v.is_finite())
        throw std::invalid_argument("twirled context: U and V must live on the same group");
    if (u.is_finite() && u.group->cayley() != v.group->cayley())
        throw std::invalid_argument("twirled context: U and V must live on the same group");
}

// w(g) = haar(g) tr(A U_g T U_g*)
std::vector<Complex> weight_vector(const ProjectiveRep& u, const Matrix& t, const Matrix& a) {
    std::vector<Complex> w(u.size(), 0.0);
    for (int g = 0; g < u.size(); ++g)
        if (u.haar[g] != 0.0) w[g] = u.haar[g] * (a * u.act(g, t)).trace();
    return w;
}

Matrix weighted_twirl(const ProjectiveRep& v, const std::vector<Complex>& c, const Matrix& b) {
    Matrix out = Matrix::Zero(v.dim, v.dim);
    for (int k = 0; k < v.size(); ++k)
        if (c[k] != Complex(0.0)) out += c[k] * v.act(k, b);
    return out;
}

Matrix state_for(const std::string& kind, int d, Rng& rng) {
    if (kind == "maximally_mixed") return Matrix::Identity(d, d) / static_cast<double>(d);
    if (kind == "basis0") return DensityOperator::basis_projector(d, 0).matrix();
    if (kind == "random_pure") return random_pure_state(d, rng);
    if (kind == "random_mixed") return random_mixed_state(d, rng);
    throw std::invalid_argument("unknown fiducial \"" + kind + "\"");
}

}  // namespace

TwirledContext::TwirledContext(ProjectiveRep u, Matrix fiducial, GroupMeasure nu)
    : u_(std::make_shared<const ProjectiveRep>(std::move(u))), t_(std::move(fiducial)), nu_(std::move(nu)) {
    if (!u_->irreducible) throw std::invalid_argument("twirled context: U must be irreducible (square integrable)");
    if (t_.rows() != u_->dim || t_.cols() != u_->dim) throw DimensionError("twirled context: fiducial dimension differs from U");
    if (nu_.size() != u_->size()) throw DimensionError("twirled context: measure size differs from group size");
    stochastic_ = state_residuals(t_).ok() && nu_.is_probability();
}

TwirledContext::TwirledContext(ProjectiveRep u, ProjectiveRep v, Matrix fiducial, GroupMeasure nu)
    : TwirledContext(std::move(u), std::move(fiducial), std::move(nu)) {
    check_pair(*u_, v);
    v_ = std::make_shared<const ProjectiveRep>(std::move(v));
}

Matrix twirled_product(const ProjectiveRep& u, const ProjectiveRep& v, const Matrix& t, const GroupMeasure& nu,
                       const Matrix& a, const Matrix& b) {
    if (a.rows() != u.dim || a.cols() != u.dim || b.rows() != v.dim || b.cols() != v.dim)
        throw DimensionError("triple product: operand dimension mismatch");
    if (nu.size() != u.size()) throw DimensionError("triple product: measure size differs from group size");
    const auto w = weight_vector(u, t, a);
    if (u.is_finite()) {
        const FiniteGroup& g = *u.group;
        std::vector<Complex> c(g.order(), 0.0);
        for (int x = 0; x < g.order(); ++x) {
            if (w[x] == Complex(0.0)) continue;
            for (int y = 0; y < g.order(); ++y)
                if (nu.weights[y] != Complex(0.0)) c[g.mul(x, y)] += w[x] * nu.weights[y];
        }
        return weighted_twirl(v, c, b);
    }
    return weighted_twirl(v, w, weighted_twirl(v, nu.weights, b));
}

Matrix triple_product(const TwirledContext& ctx, const Matrix& a, const Matrix& b) {
    return twirled_product(ctx.rep_u(), ctx.rep_v(), ctx.fiducial(), ctx.nu(), a, b);
}

double verify_associativity(const TwirledContext& ctx, int triples, std::uint64_t seed) {
    if (ctx.rep_u().dim != ctx.rep_v().dim) throw DimensionError("associativity needs dim U = dim V");
    double worst = 0;
    for (int s = 0; s < triples; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        const int d = ctx.dim();
        const Matrix a = random_mixed_state(d, rng), b = random_mixed_state(d, rng), c = random_mixed_state(d, rng);
        const Matrix lhs = triple_product(ctx, triple_product(ctx, a, b), c);
        const Matrix rhs = triple_product(ctx, a, triple_product(ctx, b, c));
        worst = std::max(worst, trace_norm(lhs - rhs));
    }
    return worst;
}

double verify_commutativity(const TwirledContext& ctx, int pairs, std::uint64_t seed) {
    if (ctx.rep_u().dim != ctx.rep_v().dim) throw DimensionError("commutativity needs dim U = dim V");
    double worst = 0;
    for (int s = 0; s < pairs; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        const Matrix a = random_mixed_state(ctx.dim(), rng), b = random_mixed_state(ctx.dim(), rng);
        worst = std::max(worst, trace_norm(triple_product(ctx, a, b) - triple_product(ctx, b, a)));
    }
    return worst;
}

TraceNormReport verify_trace_and_norm(const TwirledContext& ctx, int samples, std::uint64_t seed) {
    TraceNormReport r;
    r.samples = samples;
    r.max_norm_excess = -std::numeric_limits<double>::infinity();
    const ProjectiveRep& u = ctx.rep_u();
    const ProjectiveRep& v = ctx.rep_v();
    const Complex nu_total = ctx.nu().total();
    const double nu_tv = ctx.nu().total_variation();
    for (int s = 0; s < samples; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        const Matrix a = random_operator(u.dim, rng);
        const Matrix t = random_operator(u.dim, rng);
        const Matrix b = random_operator(v.dim, rng);
        const Matrix out = twirled_product(u, v, t, ctx.nu(), a, b);
        const Complex expect = nu_total * a.trace() * t.trace() * b.trace();
        r.max_trace_residual = std::max(r.max_trace_residual, std::abs(out.trace() - expect));
        const double bound = nu_tv * trace_norm(a) * trace_norm(t) * trace_norm(b);
        const double nrm = trace_norm(out);
        r.max_norm_excess = std::max(r.max_norm_excess, nrm - bound);
        if (bound > 0) r.max_norm_ratio = std::max(r.max_norm_ratio, nrm / bound);
    }
    return r;
}

double CovarianceReport::max() const {
    double m = std::max({left_covariance, fiducial_translate, right_translate, exchange, invariance});
    if (abelian) m = std::max(m, *abelian);
    return m;
}

CovarianceReport verify_covariance(const TwirledContext& ctx, int pairs, std::uint64_t seed) {
    const ProjectiveRep& u = ctx.rep_u();
    const ProjectiveRep& v = ctx.rep_v();
    if (!u.is_finite()) throw std::invalid_argument("verify_covariance: translates are only available on finite groups");
    if (u.dim != v.dim) throw DimensionError("verify_covariance needs dim U = dim V");
    const FiniteGroup& grp = *u.group;
    const Matrix& t = ctx.fiducial();
    const GroupMeasure& nu = ctx.nu();
    const GroupMeasure delta = dirac(u);
    CovarianceReport r;
    r.pairs = pairs;
    if (grp.is_abelian()) r.abelian = 0.0;
    auto prod = [&](const Matrix& tt, const GroupMeasure& m, const Matrix& a, const Matrix& b) {
        return twirled_product(u, v, tt, m, a, b);
    };
    for (int s = 0; s < pairs; ++s) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
        const Matrix a = random_mixed_state(u.dim, rng);
        const Matrix b = random_mixed_state(v.dim, rng);
        const Matrix base = prod(t, nu, a, b);
        for (int g = 0; g < grp.order(); ++g) {
            const int gi = grp.inv(g);
            const GroupMeasure nu_left = translate(nu, g, Side::left, grp);
            const GroupMeasure nu_right = translate(nu, g, Side::right, grp);

            r.left_covariance = std::max(r.left_covariance, trace_norm(v.act(g, base) - prod(t, nu, u.act(g, a), b)));
            r.fiducial_translate =
                std::max(r.fiducial_translate, trace_norm(prod(u.act(gi, t), nu, a, b) - prod(t, nu_left, a, b)));
            r.right_translate =
                std::max(r.right_translate, trace_norm(prod(t, nu, a, v.act(gi, b)) - prod(t, nu_right, a, b)));
            r.exchange = std::max(r.exchange, trace_norm(prod(u.act(g, t), delta, a, b) - prod(t, delta, a, v.act(gi, b))));
            r.invariance = std::max(r.invariance, trace_norm(base - prod(u.act(g, t), nu_left, a, b)));

            if (r.abelian) {
                // rho_g.sigma = (rho.sigma)_g = rho.sigma_g = rho ._{T,nu^g} sigma = rho ._{T_{g^-1},nu} sigma
                const Matrix ref = prod(t, nu, u.act(g, a), b);
                double e = trace_norm(ref - v.act(g, base));
                e = std::max(e, trace_norm(ref - prod(t, nu, a, v.act(g, b))));
                e = std::max(e, trace_norm(ref - prod(t, nu_left, a, b)));
                e = std::max(e, trace_norm(ref - prod(u.act(gi, t), nu, a, b)));
                r.abelian = std::max(*r.abelian, e);
            }
        }
    }
    return r;
}

StochasticProduct as_stochastic_product(const TwirledContext& ctx) {
    if (!ctx.stochastic()) throw std::invalid_argument("as_stochastic_product: context needs a state fiducial and a probability measure");
    if (!ctx.same_rep()) throw std::invalid_argument("as_stochastic_product: context needs V = U");
    auto shared = std::make_shared<const TwirledContext>(ctx);
    return StochasticProduct(
        ctx.dim(), [shared](const Matrix& a, const Matrix& b) { return triple_product(*shared, a, b); },
        {{"kind", "twirled"}, {"context", context_to_json(ctx)}});
}

Superoperator twirling_operator(const TwirledContext& ctx, const Matrix& rho) {
    const ProjectiveRep& u = ctx.rep_u();
    if (!u.is_finite()) throw std::invalid_argument("twirling_operator: finite groups only");
    const GroupMeasure mu = measure_of_state_pair(u, rho, ctx.fiducial());
    const GroupMeasure c = convolve(mu, ctx.nu(), *u.group);
    return twirling_channel(ctx.rep_v().matrices, c.weights);
}

Matrix covariant_povm(const ProjectiveRep& rep, const Matrix& fiducial, const std::vector<bool>& subset) {
    if (static_cast<int>(subset.size()) != rep.size()) throw DimensionError("covariant_povm: mask size differs from group size");
    if (fiducial.rows() != rep.dim) throw DimensionError("covariant_povm: fiducial dimension mismatch");
    Matrix f = Matrix::Zero(rep.dim, rep.dim);
    for (int g = 0; g < rep.size(); ++g)
        if (subset[g] && rep.haar[g] != 0.0) f += rep.haar[g] * rep.act(g, fiducial);
    return f;
}

Superoperator covariant_instrument(const TwirledContext& ctx, const Matrix& sigma, const std::vector<bool>& subset) {
    const ProjectiveRep& u = ctx.rep_u();
    const ProjectiveRep& v = ctx.rep_v();
    if (static_cast<int>(subset.size()) != u.size()) throw DimensionError("covariant_instrument: mask size differs from group size");
    const Matrix sigma_nu = weighted_twirl(v, ctx.nu().weights, sigma);
    std::vector<Matrix> images(u.size());
    for (int g = 0; g < u.size(); ++g)
        if (subset[g] && u.haar[g] != 0.0) images[g] = v.act(g, sigma_nu);
    return Superoperator::from_function(u.dim, v.dim, [&](const Matrix& rho) {
        Matrix out = Matrix::Zero(v.dim, v.dim);
        for (int g = 0; g < u.size(); ++g)
            if (subset[g] && u.haar[g] != 0.0) out += (u.haar[g] * (rho * u.act(g, ctx.fiducial())).trace()) * images[g];
        return out;
    });
}

TwirledContext context_from_json(const nlohmann::json& j, std::uint64_t seed) {
    ProjectiveRep u = rep_from_json(j);
    Rng rng(derive_seed(seed, 0x7477));
    const int d = u.dim;
    Matrix t;
    const auto& fj = j.contains("fiducial") ? j.at("fiducial") : nlohmann::json("basis0");
    if (fj.is_string())
        t = state_for(fj.get<std::string>(), d, rng);
    else
        t = operator_from_json(fj);
    GroupMeasure nu;
    const auto& nj = j.contains("nu") ? j.at("nu") : nlohmann::json("delta");
    if (nj.is_string()) {
        const auto kind = nj.get<std::string>();
        if (kind == "delta")
            nu = dirac(u);
        else if (kind == "uniform")
            nu = uniform(u);
        else if (kind == "random")
            nu = random_probability(u, rng);
        else
            throw std::invalid_argument("unknown measure \"" + kind + "\" (expected delta, uniform or random)");
    } else {
        nu = measure_from_json(nj);
    }
    const std::string vkind = j.value("v", "same");
    if (vkind == "same") return TwirledContext(std::move(u), std::move(t), std::move(nu));
    if (vkind == "conjugate") {
        ProjectiveRep v = conjugate_rep(u);
        return TwirledContext(std::move(u), std::move(v), std::move(t), std::move(nu));
    }
    throw std::invalid_argument("unknown V choice \"" + vkind + "\" (expected same or conjugate)");
}

nlohmann::json context_to_json(const TwirledContext& ctx) {
    nlohmann::json j = rep_to_json(ctx.rep_u());
    j["fiducial"] = operator_to_json(ctx.fiducial());
    j["nu"] = measure_to_json(ctx.nu());
    if (ctx.same_rep())
        j["v"] = "same";
    else if (ctx.rep_v().name == ctx.rep_u().name + "*")
        j["v"] = "conjugate";
    else
        j["v"] = rep_to_json(ctx.rep_v());
    return j;
}

nlohmann::json covariance_report_to_json(const CovarianceReport& r) {
    nlohmann::json j = {{"left_covariance", r.left_covariance},
                        {"fiducial_translate", r.fiducial_translate},
                        {"right_translate", r.right_translate},
                        {"exchange", r.exchange},
                        {"invariance", r.invariance},
                        {"pairs", r.pairs}};
    j["abelian"] = r.abelian ? nlohmann::json(*r.abelian) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json trace_norm_report_to_json(const TraceNormReport& r) {
    return {{"max_trace_residual", r.max_trace_residual},
            {"max_norm_excess", r.max_norm_excess},
            {"max_norm_ratio", r.max_norm_ratio},
            {"samples", r.samples}};
}

}  // namespace stochprod
