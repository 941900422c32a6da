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

/* Plain C client of the shared library. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "stochprod/stochprod.h"

static int failed = 0;

#define EXPECT(cond)                                              \
    do {                                                          \
        if (!(cond)) {                                            \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            failed = 1;                                           \
        }                                                         \
    } while (0)

int main(void) {
    EXPECT(strlen(sp_version()) > 0);
    EXPECT(sp_suite_count() == 7);
    EXPECT(strcmp(sp_suite_name(0), "operator-core") == 0);
    EXPECT(sp_suite_name(99) == NULL);

    /* |0><0| with the Weyl d=2 context and fiducial |0><0| is a fixed point */
    const double re[4] = {1, 0, 0, 0};
    sp_operator* p0 = NULL;
    EXPECT(sp_operator_create(2, re, NULL, &p0) == SP_OK);
    sp_context* ctx = NULL;
    EXPECT(sp_context_from_json("{\"rep\":\"weyl\",\"d\":2,\"fiducial\":\"basis0\",\"nu\":\"delta\"}", 1, &ctx) == SP_OK);
    EXPECT(sp_context_dim(ctx) == 2);
    sp_operator* out = NULL;
    EXPECT(sp_context_product(ctx, p0, p0, &out) == SP_OK);
    double ore[4], oim[4];
    EXPECT(sp_operator_get(out, ore, oim) == SP_OK);
    EXPECT(fabs(ore[0] - 1) < 1e-14 && fabs(ore[1]) < 1e-14 && fabs(ore[2]) < 1e-14 && fabs(ore[3]) < 1e-14);
    int is_state = 0;
    EXPECT(sp_operator_is_state(out, 1e-9, &is_state) == SP_OK && is_state == 1);
    double purity = 0;
    EXPECT(sp_operator_purity(out, &purity) == SP_OK && fabs(purity - 1) < 1e-14);

    sp_operator* r = NULL;
    EXPECT(sp_operator_random_state(2, 5, 0, &r) == SP_OK);
    double tn = 0;
    EXPECT(sp_operator_trace_norm(r, &tn) == SP_OK && fabs(tn - 1) < 1e-12);

    double resid = 1;
    EXPECT(sp_context_associativity(ctx, 10, 3, &resid) == SP_OK && resid <= 1e-10);
    char* js = NULL;
    EXPECT(sp_context_to_json(ctx, &js) == SP_OK && js && strstr(js, "\"weyl\"") != NULL);
    sp_string_free(js);

    /* errors are reported through codes and the last-error message */
    sp_operator* three = NULL;
    const double id3[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    EXPECT(sp_operator_create(3, id3, NULL, &three) == SP_OK);
    sp_operator* bad = NULL;
    EXPECT(sp_context_product(ctx, three, p0, &bad) == SP_ERR_DIMENSION);
    EXPECT(bad == NULL);
    EXPECT(strlen(sp_last_error()) > 0);
    sp_context* nope = NULL;
    EXPECT(sp_context_from_json("{\"rep\":\"weyl\"", 1, &nope) == SP_ERR_INVALID_ARGUMENT);
    EXPECT(sp_context_from_json("{\"rep\":\"su2\",\"j\":0}", 1, &nope) == SP_ERR_INVALID_ARGUMENT);
    EXPECT(sp_operator_create(0, re, NULL, &bad) == SP_ERR_INVALID_ARGUMENT);
    int code = -1;
    EXPECT(sp_run("/nonexistent/config.json", NULL, 0, 0, &code) == SP_OK && code == 2);

    sp_operator_destroy(three);
    sp_operator_destroy(r);
    sp_operator_destroy(out);
    sp_operator_destroy(p0);
    sp_context_destroy(ctx);
    sp_operator_destroy(NULL);
    sp_context_destroy(NULL);
    if (!failed) printf("capi ok\n");
    return failed;
}
