/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface of the choquard shared library: opaque profile handles,
 * integer status codes, and JSON report strings. Every entry point returns
 * CHQ_OK (0) on success, CHQ_EINVAL (1) for invalid input, CHQ_ENUMERIC (2)
 * for numerical failure; chq_last_error() describes the latest failure in
 * the calling thread.
 */
#ifndef CHOQUARD_CAPI_H
#define CHOQUARD_CAPI_H

#ifdef __cplusplus
extern "C" {
#endif

#define CHQ_OK 0
#define CHQ_EINVAL 1
#define CHQ_ENUMERIC 2

/* Radial profile on a log grid plus the kernel exponent mu it was saved
 * with. Allocated by the library; release with chq_profile_free. */
typedef struct chq_profile chq_profile;

/* Message of the most recent failure in this thread ("" if none). The
 * pointer stays valid until the next failing call in the same thread. */
const char* chq_last_error(void);

/* ---- profiles ---------------------------------------------------- */
int chq_profile_read(const char* path, chq_profile** out);
int chq_profile_from_csv(const char* text, chq_profile** out);
int chq_profile_write(const chq_profile* p, const char* path);
int chq_profile_free(chq_profile* p);
int chq_profile_dim(const chq_profile* p, int* out);
int chq_profile_mu(const chq_profile* p, double* out);
int chq_profile_size(const chq_profile* p, int* out);

/* Coefficient-weighted sum of concentric bubbles described by a family
 * JSON document, sampled on a fresh grid (n nodes on [r_min, r_max]). */
int chq_family_profile(const char* family_json, int n, double r_min,
                       double r_max, chq_profile** out);

/* ---- JSON reports (free every *out_json with chq_string_free) ----- */
int chq_constants_json(int dim, double mu, char** out_json);
int chq_deficit_json(const chq_profile* p, char** out_json);
int chq_residual_json(const chq_profile* p, char** out_json);

/* Best kappa-bubble fit. *out_converged (optional, may be NULL) reports
 * optimizer convergence so callers can map it to an exit status. */
int chq_fit_json(const chq_profile* p, int kappa, char** out_json,
                 int* out_converged);

/* Sector-l eigenvalues at the unit bubble. When dump_prefix is non-NULL,
 * eigenvectors are written to <prefix><k>.csv in the profile format. */
int chq_spectrum_json(int dim, double mu, int l, int count, int n,
                      double r_min, double r_max, const char* dump_prefix,
                      char** out_json);

/* Stability sweep from a config JSON document; out_csv may be NULL. */
int chq_sweep_json(const char* config_json, int jobs, char** out_json,
                   char** out_csv);

/* Two-bubble integral int W_1^p W_2^q at one concentric scale ratio. */
int chq_interaction_point_json(int dim, double p, double q,
                               double lambda_ratio, char** out_json);

/* Slope regression of the same integral over a ratio grid. */
int chq_interaction_slopes_json(int dim, double p, double q,
                                const double* ratios, int n_ratios,
                                char** out_json);

/* Riesz-potential self-check against the closed form at the bubble. */
int chq_kernel_test_json(int dim, double mu, int n, char** out_json);

void chq_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CHOQUARD_CAPI_H */
