#ifndef CHIRALQ_H
#define CHIRALQ_H

/* C interface to the chiralq core: driven qubit-cavity arrays reduced to
 * dissipatively squeezed photon pairs, with entanglement and output-line
 * diagnostics. All functions return cq_status; on failure the thread-local
 * message from cq_last_error() describes what went wrong. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef CQ_API
#if defined(__GNUC__)
#define CQ_API __attribute__((visibility("default")))
#else
#define CQ_API
#endif
#endif

typedef enum cq_status {
  CQ_OK = 0,
  CQ_ERROR_VALIDATION = 2, /* bad parameters, config or preconditions */
  CQ_ERROR_NUMERICAL = 3,  /* instability, non-physical state, truncation */
  CQ_ERROR_IO = 4          /* file system failures */
} cq_status;

CQ_API const char* cq_version(void);

/* Message describing this thread's most recent failure; never NULL. */
CQ_API const char* cq_last_error(void);

typedef struct cq_config cq_config;
typedef struct cq_model cq_model;

/* ---- configuration ---- */

CQ_API cq_status cq_config_parse(const char* text, cq_config** out);
CQ_API cq_status cq_config_parse_file(const char* path, cq_config** out);
/* Canonical text form; round-trips through cq_config_parse. Free the
 * returned string with cq_string_free. */
CQ_API cq_status cq_config_render(const cq_config* cfg, char** text);
CQ_API cq_status cq_config_set_mode(cq_config* cfg, const char* mode);
CQ_API cq_status cq_config_set_output(cq_config* cfg, const char* path);
CQ_API void cq_config_free(cq_config* cfg);
CQ_API void cq_string_free(char* text);

/* ---- effective model ---- */

/* Reduce the configured drive to pair couplings. Scalars by name: "g1",
 * "g2", "gbar_mag", "eta", "q", "Delta", "N". */
CQ_API cq_status cq_model_derive(const cq_config* cfg, cq_model** out);
CQ_API cq_status cq_model_get(const cq_model* m, const char* name, double* out);
CQ_API cq_status cq_model_dispersion(const cq_model* m, double k, double* out);
CQ_API cq_status cq_model_band_parameter(const cq_model* m, double k, double* out);
CQ_API cq_status cq_model_pairing(const cq_model* m, double k, double* out);
CQ_API cq_status cq_model_pairing_index(const cq_model* m, int idx, int* out);
CQ_API void cq_model_free(cq_model* m);

/* ---- pair entanglement ---- */

CQ_API cq_status cq_log_negativity_closed(double eta, double band_E, double* out);
/* gamma is the row-major 4x4 pair covariance (Q_k, P_k, Q_p, P_p). */
CQ_API cq_status cq_log_negativity_sympl(const double gamma[16], double* out);
CQ_API cq_status cq_steady_covariance(const cq_model* m, double k, double gamma[16]);

/* Integrate the pair correlators from vacuum and report E_N at n_samples
 * evenly spaced times; t_out/en_out must hold n_samples entries.
 * dt <= 0 selects the integrator's step rule. */
CQ_API cq_status cq_evolve_pair(double g1, double g2, double Gamma, double band_E,
                                double t_final, double dt, size_t n_samples,
                                double* t_out, double* en_out);

CQ_API cq_status cq_criticality(const cq_model* m, double* relax_rate, double* T1,
                                int* stable);

/* ---- orchestration ---- */

/* Run the config's mode and write its CSV (plus optional gnuplot stub).
 * seed is reserved for future stochastic features: echoed, never used. */
CQ_API cq_status cq_run(const cq_config* cfg, int workers, int gnuplot_stub,
                        int have_seed, unsigned long seed);

#ifdef __cplusplus
}
#endif

#endif /* CHIRALQ_H */
