#include <math.h>
#include <stdio.h>
#include <string.h>

#include "wcs.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond,    \
                    wcs_last_error_message());                        \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    WcsModel *model = NULL;
    CHECK(wcs_model_new("flat", 4, &model) == WCS_STATUS_OK);
    WcsSpectrum *spectrum = NULL;
    CHECK(wcs_spectrum_solve(model, 0.5, 2, WCS_METHOD_FINITE_DIFFERENCE, 1024, 1e-10, &spectrum) == WCS_STATUS_OK);
    double d1 = 0.0;
    CHECK(wcs_spectrum_eigenvalue(spectrum, 0, &d1) == WCS_STATUS_OK);
    CHECK(fabs(d1 - 4.0 * M_PI * M_PI) < 1e-6);
    CHECK(wcs_spectrum_eigenvalue(spectrum, 5, &d1) == WCS_STATUS_INVALID_ARGUMENT);
    CHECK(strlen(wcs_last_error_message()) > 0);
    char *json = NULL;
    CHECK(wcs_spectrum_to_json(spectrum, &json) == WCS_STATUS_OK);
    CHECK(strstr(json, "\"eigenvalues\"") != NULL);
    wcs_string_free(json);
    wcs_spectrum_free(spectrum);
    wcs_model_free(model);

    WcsModel *sphere = NULL;
    WcsSurface *surface = NULL;
    WcsReport *report = NULL;
    CHECK(wcs_model_new("sphere", 0, &sphere) == WCS_STATUS_OK);
    CHECK(wcs_surface_new("clifford:3,2", &surface) == WCS_STATUS_OK);
    WcsVerdictOptions opts = wcs_verdict_options_default();
    CHECK(wcs_verdict(sphere, surface, 1.5607963267948966, &opts, &report) == WCS_STATUS_OK);
    double sum = 0.0;
    WcsVerdict verdict;
    CHECK(wcs_report_values(report, NULL, NULL, &sum, &verdict) == WCS_STATUS_OK);
    CHECK(sum < 0.0 && verdict == WCS_VERDICT_UNSTABLE);
    wcs_report_free(report);
    wcs_surface_free(surface);
    wcs_model_free(sphere);

    CHECK(wcs_model_new("nowhere", 3, &model) == WCS_STATUS_UNKNOWN_NAME);
    CHECK(wcs_paper_bound(15) > 0.0 && wcs_paper_bound(14) < 0.0);
    puts("ok");
    return 0;
}
