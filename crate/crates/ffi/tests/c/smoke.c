#include <stdio.h>
#include <string.h>
#include "unimod.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, unimod_last_error()); return 1; } } while (0)

int main(void) {
    UnimodRing *ring = NULL;
    CHECK(unimod_ring_new("kind=Zps p=3 s=2", &ring) == UNIMOD_STATUS_OK);

    uint64_t card = 0, m = 0;
    CHECK(unimod_ring_cardinality(ring, &card) == UNIMOD_STATUS_OK && card == 9);
    CHECK(unimod_ring_maximal_ideal_size(ring, &m) == UNIMOD_STATUS_OK && m == 3);

    char *label = NULL;
    CHECK(unimod_ring_label(ring, &label) == UNIMOD_STATUS_OK && strcmp(label, "Z9") == 0);
    unimod_string_free(label);

    UnimodForm *form = NULL;
    CHECK(unimod_form_plane(ring, UNIMOD_PLANE_HYPERBOLIC, &form) == UNIMOD_STATUS_OK);
    uint64_t s = 0, size = 0;
    CHECK(unimod_form_theoretical_s(form, &s) == UNIMOD_STATUS_OK && s == 6);
    char *witness = NULL;
    CHECK(unimod_form_max_orthogonal_set(form, 10000, &size, &witness) == UNIMOD_STATUS_OK && size == 6);
    printf("%s\n", witness);
    unimod_string_free(witness);
    unimod_form_free(form);

    CHECK(unimod_form_new(ring, "3,0;0,1", &form) == UNIMOD_STATUS_OK);
    CHECK(unimod_form_canonicalize(form, NULL, NULL) == UNIMOD_STATUS_DEGENERATE);
    CHECK(strlen(unimod_last_error()) > 0);
    unimod_form_free(form);

    CHECK(unimod_verify_ring(ring, 10000) == UNIMOD_STATUS_OK);
    unimod_ring_free(ring);

    CHECK(unimod_ring_new("kind=Zps p=2 s=1", &ring) == UNIMOD_STATUS_EVEN_CHARACTERISTIC);
    CHECK(unimod_ring_new(NULL, &ring) == UNIMOD_STATUS_NULL_POINTER);
    return 0;
}
