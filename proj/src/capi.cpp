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

#include "stochprod/stochprod.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <memory>
#include <string>

#include "stochprod/operator.hpp"
#include "stochprod/product.hpp"
#include "stochprod/runner.hpp"
#include "stochprod/twirled.hpp"

struct sp_operator {
    stochprod::Matrix m;
};

struct sp_context {
    std::unique_ptr<stochprod::TwirledContext> ctx;
};

namespace {

thread_local std::string g_last_error;

sp_status fail(sp_status s, const std::string& what) {
    g_last_error = what;
    return s;
}

template <class F>
sp_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const stochprod::ConfigError& e) {
        return fail(SP_ERR_CONFIG, e.what());
    } catch (const stochprod::ProductRejected& e) {
        return fail(SP_ERR_REJECTED, e.what());
    } catch (const stochprod::DimensionError& e) {
        return fail(SP_ERR_DIMENSION, e.what());
    } catch (const stochprod::NumericalError& e) {
        return fail(SP_ERR_NUMERICAL, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(SP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(SP_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(SP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SP_ERR_INTERNAL, "unknown exception");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* sp_version(void) { return "0.1.0"; }
const char* sp_last_error(void) { return g_last_error.c_str(); }
void sp_string_free(char* s) { std::free(s); }

size_t sp_suite_count(void) { return stochprod::suite_names().size(); }

const char* sp_suite_name(size_t index) {
    const auto& names = stochprod::suite_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

sp_status sp_run(const char* config_path, const char* out_dir, int has_seed, uint64_t seed, int* exit_code) {
    return guarded([&] {
        if (!config_path || !exit_code) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        std::optional<std::string> dir;
        if (out_dir) dir = out_dir;
        std::optional<std::uint64_t> s;
        if (has_seed) s = seed;
        *exit_code = stochprod::run(config_path, dir, s, std::cerr);
        return SP_OK;
    });
}

sp_status sp_demo(const char* config_path, int* exit_code) {
    return guarded([&] {
        if (!config_path || !exit_code) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        *exit_code = stochprod::demo(config_path, std::cerr);
        return SP_OK;
    });
}

sp_status sp_operator_create(int dim, const double* re, const double* im, sp_operator** out) {
    return guarded([&] {
        if (!re || !out || dim <= 0) return fail(SP_ERR_INVALID_ARGUMENT, "need dim > 0, re and out");
        auto op = std::make_unique<sp_operator>();
        op->m.resize(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) op->m(i, j) = {re[i * dim + j], im ? im[i * dim + j] : 0.0};
        if (!op->m.allFinite()) return fail(SP_ERR_INVALID_ARGUMENT, "non-finite entry");
        *out = op.release();
        return SP_OK;
    });
}

sp_status sp_operator_random_state(int dim, uint64_t seed, int pure, sp_operator** out) {
    return guarded([&] {
        if (!out || dim <= 0) return fail(SP_ERR_INVALID_ARGUMENT, "need dim > 0 and out");
        stochprod::Rng rng(seed);
        auto op = std::make_unique<sp_operator>();
        op->m = pure ? stochprod::random_pure_state(dim, rng) : stochprod::random_mixed_state(dim, rng);
        *out = op.release();
        return SP_OK;
    });
}

void sp_operator_destroy(sp_operator* op) { delete op; }

int sp_operator_dim(const sp_operator* op) { return op ? static_cast<int>(op->m.rows()) : 0; }

sp_status sp_operator_get(const sp_operator* op, double* re, double* im) {
    return guarded([&] {
        if (!op || !re) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        const auto d = op->m.rows();
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                re[i * d + j] = op->m(i, j).real();
                if (im) im[i * d + j] = op->m(i, j).imag();
            }
        return SP_OK;
    });
}

sp_status sp_operator_trace_norm(const sp_operator* op, double* out) {
    return guarded([&] {
        if (!op || !out) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        *out = stochprod::trace_norm(op->m);
        return SP_OK;
    });
}

sp_status sp_operator_purity(const sp_operator* op, double* out) {
    return guarded([&] {
        if (!op || !out) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        *out = stochprod::purity(op->m);
        return SP_OK;
    });
}

sp_status sp_operator_is_state(const sp_operator* op, double tol, int* out) {
    return guarded([&] {
        if (!op || !out) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        const auto r = stochprod::state_residuals(op->m);
        *out = r.hermiticity <= tol && r.min_eigenvalue >= -tol && r.trace_error <= tol ? 1 : 0;
        return SP_OK;
    });
}

sp_status sp_context_from_json(const char* descriptor, uint64_t seed, sp_context** out) {
    return guarded([&] {
        if (!descriptor || !out) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        auto c = std::make_unique<sp_context>();
        c->ctx = std::make_unique<stochprod::TwirledContext>(
            stochprod::context_from_json(nlohmann::json::parse(descriptor), seed));
        *out = c.release();
        return SP_OK;
    });
}

void sp_context_destroy(sp_context* ctx) { delete ctx; }

int sp_context_dim(const sp_context* ctx) { return ctx && ctx->ctx ? ctx->ctx->dim() : 0; }

sp_status sp_context_to_json(const sp_context* ctx, char** out) {
    return guarded([&] {
        if (!ctx || !out) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        *out = dup_string(stochprod::context_to_json(*ctx->ctx).dump());
        return SP_OK;
    });
}

sp_status sp_context_product(const sp_context* ctx, const sp_operator* a, const sp_operator* b, sp_operator** out) {
    return guarded([&] {
        if (!ctx || !a || !b || !out) return fail(SP_ERR_INVALID_ARGUMENT, "null argument");
        auto r = std::make_unique<sp_operator>();
        r->m = stochprod::triple_product(*ctx->ctx, a->m, b->m);
        *out = r.release();
        return SP_OK;
    });
}

sp_status sp_context_associativity(const sp_context* ctx, int triples, uint64_t seed, double* residual) {
    return guarded([&] {
        if (!ctx || !residual || triples <= 0) return fail(SP_ERR_INVALID_ARGUMENT, "bad argument");
        *residual = stochprod::verify_associativity(*ctx->ctx, triples, seed);
        return SP_OK;
    });
}

}  // extern "C"
