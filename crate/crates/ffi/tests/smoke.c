#include <stdio.h>
#include "quadcone.h"

int main(void) {
    double s_re[4] = {0.5, 0.0, 0.0, 1.0 / 3.0};
    double h_re[4] = {1.0, 0.0, 0.0, -1.0};
    QcCone *cone = NULL;
    QcNormalForm *nf = NULL;
    QcSettings opts = {0, 1000, 0};
    int verdict = 0, side = 0;

    if (qc_cone_new(2, s_re, NULL, h_re, NULL, &cone) != QC_OK) {
        fprintf(stderr, "%s\n", qc_last_error());
        return 1;
    }
    if (qc_classify(cone, &nf) == QC_OK) {
        printf("%s\n", qc_normal_form_tag(nf));
        qc_normal_form_free(nf);
    }
    if (qc_decide(cone, &opts, &verdict, &side) == QC_OK) {
        printf("%s\n", verdict == QC_VERDICT_ONE_SIDED ? "one-sided" : "two-sided");
    }
    qc_cone_free(cone);
    return 0;
}
