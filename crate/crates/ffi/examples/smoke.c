#include <assert.h>
#include <stdio.h>
#include <string.h>
#include "schottky_lab.h"

int main(void) {
    const char *marking_json =
        "{\"genus\":1,\"tolerance\":1e-9,\"pairs\":[{"
        "\"circle\":{\"circle\":{\"center\":[0.0,0.0],\"radius\":1.0}},"
        "\"circle_prime\":{\"circle\":{\"center\":[10.0,0.0],\"radius\":1.0}},"
        "\"generator\":[[10.0,0.0],[-1.0,0.0],[1.0,0.0],[0.0,0.0]]}]}";

    printf("version: %s\n", sl_version());

    SlMarking *marking = NULL;
    SlStatus status = sl_marking_parse(marking_json, &marking);
    assert(status == SL_OK);

    uint32_t genus = 0;
    assert(sl_marking_genus(marking, &genus) == SL_OK);
    assert(genus == 1);

    bool pass = false;
    char *report = NULL;
    assert(sl_marking_verify_classical(marking, &pass, &report) == SL_OK);
    assert(pass);
    assert(strstr(report, "\"pass\": true") != NULL);
    sl_string_free(report);

    char *svg = NULL;
    assert(sl_marking_limit_set_svg(marking, 2, &svg) == SL_OK);
    assert(strstr(svg, "<svg") != NULL);
    sl_string_free(svg);

    SlPoint points[4] = {
        {0.0, 0.0, 0}, {0.0, 0.0, 1}, {3.0, 4.0, 0}, {0.0, -1.0, 0},
    };
    char *cert = NULL;
    assert(sl_certify_cross_ratio(points, 0.125, 1e-9, &pass, &cert) == SL_OK);
    assert(pass);
    sl_string_free(cert);

    char *trace = NULL;
    assert(sl_prove(SL_PROVE_CUBE, &pass, &trace) == SL_OK);
    assert(pass);
    sl_string_free(trace);

    sl_marking_free(marking);

    // Error path: bad JSON.
    SlMarking *bad = NULL;
    assert(sl_marking_parse("nope", &bad) == SL_PARSE_ERROR);
    char *msg = sl_last_error_message();
    assert(msg != NULL);
    sl_string_free(msg);

    printf("C smoke test passed\n");
    return 0;
}
