#include <math.h>
#include <stdio.h>
#include <string.h>

#include "genhilbert.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    GhSequence *seq = NULL;
    CHECK(gh_sequence_new_family(GH_FAMILY_STANDARD, 0.0, 0.0, &seq) == GH_STATUS_OK);

    double h23 = 0.0;
    CHECK(gh_entry(seq, 2, 3, &h23) == GH_STATUS_OK);
    CHECK(h23 == 0.25);

    GhVerdicts v;
    CHECK(gh_classify(seq, 1000, &v) == GH_STATUS_OK);
    CHECK(v.bounded == GH_VERDICT_YES && v.compact == GH_VERDICT_NO);

    double eig[2];
    CHECK(gh_eigenvalues(seq, 2, eig) == GH_STATUS_OK);
    CHECK(fabs(eig[0] - 1.2675918792439982) < 1e-12);

    char *json = NULL;
    size_t schedule[] = {2, 4, 8};
    CHECK(gh_sandwich_json(seq, 2, schedule, 3, 1000, &json) == GH_STATUS_OK);
    CHECK(strstr(json, "\"ladder\"") != NULL);
    gh_string_free(json);

    GhSequence *bad = NULL;
    CHECK(gh_sequence_new_family(GH_FAMILY_POWER, -1.0, 0.5, &bad) == GH_STATUS_INVALID_ARGUMENT);
    CHECK(bad == NULL);
    CHECK(strlen(gh_last_error_message()) > 0);

    gh_sequence_free(seq);
    printf("ok %s\n", gh_version());
    return 0;
}
