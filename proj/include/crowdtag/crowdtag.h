/* crowdtag - design and analysis of reward-based participation games for
 * crowd-sourced fake-post tagging on social platforms.
 *
 * C API (stable ABI). All functions are thread-safe on distinct handles;
 * handles are immutable after creation and may be shared across threads.
 *
 * Conventions:
 *   - Functions return ct_status; CT_OK means success.
 *   - Output strings (*out) are heap-allocated; release with ct_string_free.
 *   - On failure, *errmsg (when present) receives a one-line diagnostic,
 *     also to be released with ct_string_free. Pass NULL to ignore.
 *
 * Determinism: every randomized entry point takes an explicit 64-bit seed.
 * The generator is SplitMix64; simulation draws two variates per epoch
 * (participant type, then tag) and Monte-Carlo sweeps seed sample i with
 * master_seed XOR i. Identical inputs and seeds reproduce outputs exactly.
 */
#ifndef CROWDTAG_H
#define CROWDTAG_H

#include <stdint.h>

#if defined(_WIN32)
#define CROWDTAG_API __declspec(dllexport)
#else
#define CROWDTAG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ct_status {
  CT_OK = 0,
  CT_ERROR = 1,             /* internal error */
  CT_INVALID_ARGUMENT = 2,  /* bad handle/flag/value */
  CT_VALIDATION_FAILED = 3, /* model constraints violated */
  CT_NOT_DESIGNABLE = 4,    /* no incentive design exists for this target */
  CT_PARSE_ERROR = 5        /* malformed JSON / unknown or missing key */
} ct_status;

/* Opaque handles. */
typedef struct ct_model ct_model;   /* system parameters + (theta, delta) target */
typedef struct ct_design ct_design; /* complete design bundle */

CROWDTAG_API const char* ct_version(void);
CROWDTAG_API void ct_string_free(char* s);

/* --- model ----------------------------------------------------------- */

/* Parses a flat JSON config with exactly the keys
 *   alpha_R alpha_F mu_a p a b c C_e Q_p Q_np theta delta
 * Unknown or missing keys are CT_PARSE_ERROR naming the offending key.
 * Constraint violations are CT_VALIDATION_FAILED listing every violation. */
CROWDTAG_API ct_status ct_model_parse_json(const char* text, ct_model** out,
                                           char** errmsg);
CROWDTAG_API void ct_model_free(ct_model* m);

/* Constraint report as JSON {"ok": bool, "violations": [...]}; never fails
 * for a live handle (handles returned by ct_model_parse_json always pass). */
CROWDTAG_API ct_status ct_model_validation_report(const ct_model* m,
                                                  char** out);

/* --- design ---------------------------------------------------------- */

/* Runs the design pipeline. knobs_json may be NULL (library defaults) or a
 * JSON object with any of:
 *   "eps":          number or "auto"      (theta-tilde inflation)
 *   "eps1":         number or "midpoint"  (position of c*w*alpha_R in its interval)
 *   "eps2":         number or "midpoint"  (eta above eta_bar)
 *   "gamma_margin": number                (gamma = (1+margin)*gamma_lower)
 * Explicit knob values outside their admissible intervals are
 * CT_INVALID_ARGUMENT. Returns CT_NOT_DESIGNABLE with a reason code in
 * *errmsg when the target is not achievable. */
CROWDTAG_API ct_status ct_design_run(const ct_model* m, const char* knobs_json,
                                     ct_design** out, char** errmsg);

/* Bundle round-trip. The bundle embeds the model, resolved knobs, all design
 * fields and diagnostics, and a params digest for cross-checking. */
CROWDTAG_API ct_status ct_design_to_json(const ct_design* d, char** out);
CROWDTAG_API ct_status ct_design_parse_json(const char* text, ct_design** out,
                                            char** errmsg);
CROWDTAG_API void ct_design_free(ct_design* d);

/* --- analysis -------------------------------------------------------- */

/* Limiting fraction of fake tags for post 'F' or 'R' at population profile
 * (mu0, mu1, mu2) under the design's warning mechanism. JSON:
 * {"beta_star","regime","rho_bar","rho"}. */
CROWDTAG_API ct_status ct_attractor_report(const ct_design* d, char post,
                                           double mu0, double mu1, double mu2,
                                           char** out, char** errmsg);

/* Stochastic tagging chain for `epochs` taggers; CSV with header
 * k,beta,participant_type,tag. Pass mu0 = mu1 = mu2 = -1 to simulate at the
 * design's equilibrium profile. */
CROWDTAG_API ct_status ct_simulate_csv(const ct_design* d, char post,
                                       double mu0, double mu1, double mu2,
                                       long long epochs, uint64_t seed,
                                       char** out, char** errmsg);

/* Nash-equilibrium report: equilibrium set, classification, utilities,
 * success probabilities, degradation metric. grid_step > 0 additionally runs
 * a best-response scan over the whole strategy simplex and appends the
 * surviving candidate profiles. */
CROWDTAG_API ct_status ct_verify_ne(const ct_design* d, double grid_step,
                                    char** out, char** errmsg);

/* Monte-Carlo feasibility/degradation sweep over capacity gaps d_values.
 * CSV with header d,n,frac_designable,frac_P_lt_10,mean_P,n_second_ne,master_seed
 * (one extra frac_R_AI column appears if closed-form feasibility and pipeline
 * designability ever differ). summary_json (optional) receives the same rows
 * plus provenance as JSON. */
CROWDTAG_API ct_status ct_sweep_csv(double theta, const double* d_values,
                                    int n_d, int n_samples, uint64_t master_seed,
                                    const char* knobs_json, char** out,
                                    char** summary_json, char** errmsg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CROWDTAG_H */
