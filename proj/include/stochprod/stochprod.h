/*
 * Copyright 2026 The stochprod Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef STOCHPROD_H
#define STOCHPROD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SP_API __attribute__((visibility("default")))
#else
#define SP_API
#endif

typedef enum sp_status {
    SP_OK = 0,
    SP_ERR_INVALID_ARGUMENT = 1,
    SP_ERR_DIMENSION = 2,
    SP_ERR_NUMERICAL = 3,
    SP_ERR_REJECTED = 4, /* candidate product failed validation */
    SP_ERR_CONFIG = 5,
    SP_ERR_IO = 6,
    SP_ERR_INTERNAL = 7
} sp_status;

typedef struct sp_operator sp_operator;
typedef struct sp_context sp_context;

SP_API const char* sp_version(void);
/* Message of the last failed call on this thread, "" if none. */
SP_API const char* sp_last_error(void);
SP_API void sp_string_free(char* s);

SP_API size_t sp_suite_count(void);
SP_API const char* sp_suite_name(size_t index);

/* Runs the suites of a config. out_dir may be NULL; seed is used when has_seed != 0.
 * *exit_code receives 0 (all passed), 1 (a suite failed) or 2 (config error).
 * Progress lines go to stderr. */
SP_API sp_status sp_run(const char* config_path, const char* out_dir, int has_seed, uint64_t seed, int* exit_code);
SP_API sp_status sp_demo(const char* config_path, int* exit_code);

/* Square complex matrices, entries in row-major order. */
SP_API sp_status sp_operator_create(int dim, const double* re, const double* im, sp_operator** out);
SP_API sp_status sp_operator_random_state(int dim, uint64_t seed, int pure, sp_operator** out);
SP_API void sp_operator_destroy(sp_operator* op);
SP_API int sp_operator_dim(const sp_operator* op);
SP_API sp_status sp_operator_get(const sp_operator* op, double* re, double* im);
SP_API sp_status sp_operator_trace_norm(const sp_operator* op, double* out);
SP_API sp_status sp_operator_purity(const sp_operator* op, double* out);
/* 1 if op is a density operator within tol, 0 otherwise. */
SP_API sp_status sp_operator_is_state(const sp_operator* op, double tol, int* out);

/* Twirled product context from a JSON descriptor such as
 * {"rep":"weyl","d":3,"fiducial":"random_pure","nu":"delta"}. */
SP_API sp_status sp_context_from_json(const char* descriptor, uint64_t seed, sp_context** out);
SP_API void sp_context_destroy(sp_context* ctx);
SP_API int sp_context_dim(const sp_context* ctx);
/* Caller releases *out with sp_string_free. */
SP_API sp_status sp_context_to_json(const sp_context* ctx, char** out);
SP_API sp_status sp_context_product(const sp_context* ctx, const sp_operator* a, const sp_operator* b, sp_operator** out);
SP_API sp_status sp_context_associativity(const sp_context* ctx, int triples, uint64_t seed, double* residual);

#ifdef __cplusplus
}
#endif

#endif
