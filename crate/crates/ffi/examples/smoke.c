#include <stdio.h>
#include "kcolor.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s INSTANCE\n", argv[0]);
        return 2;
    }
    KcInstance *inst = NULL;
    if (kc_instance_from_path(argv[1], &inst) != KC_STATUS_OK) {
        fprintf(stderr, "error: %s\n", kc_last_error());
        return 1;
    }
    uint64_t total = 0, mono = 0;
    kc_count(inst, &total, &mono);
    printf("crossings %llu monochromatic %llu\n", (unsigned long long)total, (unsigned long long)mono);

    KcBound *bound = NULL;
    if (kc_bound(inst, false, &bound) != KC_STATUS_OK) {
        fprintf(stderr, "error: %s\n", kc_last_error());
        kc_instance_free(inst);
        return 1;
    }
    char *s = NULL;
    kc_bound_decimal(bound, KC_QUANTITY_BOUND, 17, &s);
    printf("bound %s\n", s);
    kc_string_free(s);
    kc_bound_free(bound);
    kc_instance_free(inst);
    return 0;
}
