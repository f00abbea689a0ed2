#include <stdio.h>
#include <string.h>
#include "waring_cert.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, wc_last_error_message()); return 1; } } while (0)

int main(void) {
    /* a single point (1:0:0:0) with coefficient 3: only the x0^6 entry is nonzero */
    char json[2048];
    int n = snprintf(json, sizeof json, "{\"field\": \"F_101\", \"points\": [[\"1\",\"0\",\"0\",\"0\"]], \"sextic\": [\"3\"");
    for (int i = 1; i < 84; i++) n += snprintf(json + n, sizeof json - n, ", \"0\"");
    snprintf(json + n, sizeof json - n, "]}");

    WcInstance *inst = NULL;
    CHECK(wc_instance_from_json(json, &inst) == WC_ERROR_OK);
    CHECK(wc_instance_length(inst) == 1);

    WcCertificate *cert = NULL;
    CHECK(wc_certify(inst, 7, &cert) == WC_ERROR_OK);
    WcStatus status;
    CHECK(wc_certificate_status(cert, &status) == WC_ERROR_OK);
    CHECK(status == WC_STATUS_IDENTIFIABLE);
    CHECK(wc_certificate_rank(cert) == 1);
    CHECK(strstr(wc_certificate_json(cert), "\"Identifiable\"") != NULL);

    size_t h[4];
    CHECK(wc_hilbert_function(json, 3, h, 4) == WC_ERROR_OK);
    CHECK(h[0] == 1 && h[3] == 1);
    CHECK(wc_hilbert_function(json, 3, h, 2) == WC_ERROR_BUFFER_TOO_SMALL);

    WcInstance *bad = NULL;
    CHECK(wc_instance_from_json("{\"field\": \"Q\", \"points\": [", &bad) == WC_ERROR_PARSE);
    CHECK(bad == NULL && strlen(wc_last_error_message()) > 0);

    wc_certificate_free(cert);
    wc_instance_free(inst);
    printf("c smoke ok (%s)\n", wc_version());
    return 0;
}
