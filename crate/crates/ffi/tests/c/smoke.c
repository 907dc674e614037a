#include <stdio.h>
#include <string.h>

#include "asmass.h"

#define CHECK(cond)                                           \
    do {                                                      \
        if (!(cond)) {                                        \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond); \
            return 1;                                         \
        }                                                     \
    } while (0)

int main(void) {
    char *s = NULL;
    CHECK(asmass_mass_g_poly(12, 7, &s) == ASMASS_STATUS_OK);
    CHECK(strcmp(s, "4q^3 - 3q^2") == 0);
    asmass_string_free(s);

    AsmassRamData *r = NULL;
    CHECK(asmass_ram_new(3, "2,2", &r) == ASMASS_STATUS_OK);
    CHECK(asmass_ram_genus(r) == 2);
    CHECK(asmass_structural_mass(r, NULL, 3, 1000000, &s) == ASMASS_STATUS_OK);
    CHECK(strcmp(s, "2/1") == 0);
    asmass_string_free(s);
    asmass_ram_free(r);

    AsmassField *f = NULL;
    CHECK(asmass_field_new(4, 1, &f) == ASMASS_STATUS_NOT_PRIME);
    CHECK(strstr(asmass_last_error_message(), "not a prime") != NULL);
    CHECK(asmass_field_new(5, 1, &f) == ASMASS_STATUS_OK);
    uint64_t burnside = 0;
    int64_t closed = 0;
    CHECK(asmass_four_set_orbits(f, ASMASS_BEHAVIOR_TOTAL, &burnside, &closed) == ASMASS_STATUS_OK);
    CHECK(burnside == 11 && closed == 11);
    asmass_field_free(f);
    puts("ok");
    return 0;
}
