/* Plain C client: the public header must compile as C and the library must be
 * usable without any C++ on the caller's side. */
#include <stdio.h>
#include <string.h>

#include "smotekit/smotekit.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                \
        }                                                            \
    } while (0)

static const char* csv =
    "x,y,class\n"
    "1,1,m\n1.5,1.2,m\n1.1,1.7,m\n"
    "5,5,M\n5.5,4,M\n6,6,M\n4,5,M\n6.5,5,M\n";

int main(void) {
    smk_dataset* ds = NULL;
    smk_augmented* aug = NULL;
    smk_resample_options opts;
    smk_status st;

    st = smk_dataset_load_text(csv, "{\"x\":\"continuous\",\"y\":\"continuous\",\"class\":\"class\"}", "m", &ds);
    CHECK(st == SMK_OK);
    CHECK(smk_dataset_rows(ds) == 8);
    CHECK(smk_dataset_minority_count(ds) == 3);

    smk_resample_options_init(&opts);
    opts.over_percent = 200;
    opts.k = 2;
    st = smk_resample(ds, &opts, &aug);
    CHECK(st == SMK_OK);
    CHECK(smk_augmented_synthetic_count(aug) == 6);
    CHECK(smk_augmented_minority_count(aug) == 9);
    smk_augmented_free(aug);

    opts.k = 0;
    CHECK(smk_resample(ds, &opts, &aug) == SMK_ERR_CONFIG);
    CHECK(strlen(smk_last_error()) > 0);

    smk_dataset_free(ds);
    printf("capi_smoke: ok (%s)\n", smk_version());
    return 0;
}
