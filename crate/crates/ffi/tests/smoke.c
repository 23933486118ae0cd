#include <math.h>
#include <stdio.h>
#include <string.h>

#include "chsh_tradeoff.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    CtState *s = NULL;
    CtTradeoff t;
    CHECK(ct_make_w(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, &s) == CT_OK);
    CHECK(ct_tradeoff_sum(s, &t) == CT_OK);
    CHECK(fabs(t.total - 32.0 / 3.0) < 1e-10);

    CtClassification c;
    CHECK(ct_classify(s, &c) == CT_OK);
    CHECK(c.tag == CT_W);

    char *json = NULL;
    CHECK(ct_state_to_json(s, &json) == CT_OK);
    CHECK(strstr(json, "\"n\":3") != NULL);
    ct_string_free(json);
    ct_state_free(s);

    CHECK(ct_make_biseparable(7, 0.3, &s) == CT_INVALID_ARGUMENT);
    CHECK(strlen(ct_last_error()) > 0);
    CHECK(ct_tradeoff_sum(NULL, &t) == CT_NULL_POINTER);

    CtState *h = NULL;
    double v = 0.0;
    CHECK(ct_state_haar(4, 42, &h) == CT_OK);
    CHECK(ct_conjecture_sum(h, 0, &v) == CT_OK);
    CHECK(v >= 0.0 && v <= 3.0 + 1e-9);
    ct_state_free(h);

    printf("ok %s\n", ct_version());
    return 0;
}
