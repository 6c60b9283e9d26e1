/* C interface to the irisim library. All functions are thread-safe except
 * that a single irisim_experiment must not be used from two threads at once.
 * Every call that can fail returns an irisim_status; on failure
 * irisim_last_error() describes the problem for the calling thread. */
#ifndef IRISIM_IRISIM_H
#define IRISIM_IRISIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(IRISIM_BUILDING_LIBRARY)
#    define IRISIM_API __declspec(dllexport)
#  else
#    define IRISIM_API __declspec(dllimport)
#  endif
#else
#  define IRISIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irisim_status {
    IRISIM_OK = 0,
    IRISIM_ERR_INTERNAL = 1,
    IRISIM_ERR_CONFIG = 2,
    IRISIM_ERR_IO = 3,
    IRISIM_ERR_INVALID_ARGUMENT = 4,
    IRISIM_ERR_DOMAIN = 5,
    IRISIM_ERR_INJECTIVITY = 6,
    IRISIM_ERR_UNSUPPORTED = 7,
    IRISIM_ERR_UNKNOWN_FIGURE = 8,
    IRISIM_ERR_INSUFFICIENT_SAMPLES = 9
} irisim_status;

typedef enum irisim_run_mode {
    IRISIM_RUN_SIM = 0,
    IRISIM_RUN_THEORY = 1,
    IRISIM_RUN_BOTH = 2
} irisim_run_mode;

typedef enum irisim_scheme {
    IRISIM_SCHEME_TWOPATH = 0,
    IRISIM_SCHEME_BASELINE = 1
} irisim_scheme;

typedef enum irisim_modulation {
    IRISIM_BPSK = 0,
    IRISIM_QPSK = 1
} irisim_modulation;

/* Opaque experiment: a validated configuration. */
typedef struct irisim_experiment irisim_experiment;

typedef struct irisim_bound_report {
    double snr_sr_db;
    double snr_rd_db;
    double p_e_rd;
    double p_e_rd_mrc;
    double p_e_sr;
    double p_e_sr_no_iri;
    double p_prime;
    double p_prime_mrc;
    double p_triple_prime;
    double p_case1;
    double p_case2;
    double t_cfnc_lb;     /* per source */
    double t_new_lb;      /* per source, L -> infinity */
    double t_new_lb_finite; /* per source, configured L */
    double sr_standard_error;
    int saturated;
} irisim_bound_report;

/* Creates an experiment from a JSON document. *out is NULL on failure. */
IRISIM_API irisim_status irisim_experiment_create(const char* config_json, irisim_experiment** out);
IRISIM_API void irisim_experiment_destroy(irisim_experiment* exp);

/* Merges a JSON object into the configuration; unchanged on failure. */
IRISIM_API irisim_status irisim_experiment_apply_overrides(irisim_experiment* exp, const char* overrides_json);

/* Copies the effective configuration as JSON into buf (NUL-terminated).
 * *needed receives the required size including the terminator. Passing
 * buf == NULL or a short buffer only reports the size. */
IRISIM_API irisim_status irisim_experiment_config_json(const irisim_experiment* exp, char* buf, size_t capacity,
                                                       size_t* needed);

/* Runs the experiment and writes CSV to csv_path, or stdout when NULL. */
IRISIM_API irisim_status irisim_experiment_run(irisim_experiment* exp, irisim_run_mode mode, const char* csv_path);

/* Writes the line-delimited log of one frame. When snr_db is on the grid the
 * frame reuses the random stream the sweep would draw. NULL path: stdout. */
IRISIM_API irisim_status irisim_experiment_write_frame_log(irisim_experiment* exp, irisim_scheme scheme,
                                                           double snr_db, uint64_t frame_index, const char* path);

IRISIM_API irisim_status irisim_experiment_bounds(const irisim_experiment* exp, double snr_db,
                                                  irisim_bound_report* out);

/* Runs a canned figure configuration ("5".."11"). out_dir NULL uses the
 * IRISIM_OUT_DIR environment variable or the current directory.
 * overrides_json may be NULL. csv_path_buf, when not NULL, receives the CSV
 * path (truncated to capacity). */
IRISIM_API irisim_status irisim_reproduce_figure(const char* figure_id, const char* out_dir,
                                                 const char* overrides_json, char* csv_path_buf,
                                                 size_t capacity);

IRISIM_API double irisim_q_function(double x);

/* PNC maps on symbol values. BPSK ignores the imaginary parts. */
IRISIM_API irisim_status irisim_pnc_f(irisim_modulation m, double z_re, double z_im, double* out_re,
                                      double* out_im);
IRISIM_API irisim_status irisim_pnc_g(irisim_modulation m, double a_re, double a_im, double b_re, double b_im,
                                      double* out_re, double* out_im);

/* Message for the last failing call on this thread; "" if none. */
IRISIM_API const char* irisim_last_error(void);
IRISIM_API const char* irisim_version(void);
IRISIM_API const char* irisim_status_name(irisim_status status);

#ifdef __cplusplus
}
#endif

#endif
