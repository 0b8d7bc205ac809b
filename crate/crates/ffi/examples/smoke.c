#include <stdio.h>
#include "cclab.h"

int main(void) {
    CclabSystem *sys = NULL;
    if (cclab_system_from_catalogue("s1", &sys) != CCLAB_STATUS_OK) {
        fprintf(stderr, "%s\n", cclab_last_error_message());
        return 1;
    }
    char *r = NULL;
    if (cclab_curvature_at_exact(sys, "0", "0", &r) == CCLAB_STATUS_OK) {
        printf("R(0,0) = %s\n", r);
        cclab_string_free(r);
    }
    uint32_t k = 0;
    cclab_hilbert_threshold(&k);
    printf("threshold k = %u\n", k);
    cclab_system_free(sys);
    return 0;
}
