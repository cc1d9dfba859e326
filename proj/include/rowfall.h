#ifndef ROWFALL_H
#define ROWFALL_H

/* C interface to the rowfall sparse elimination engine.
 *
 * All functions returning rf_status set a thread-local message retrievable
 * via rf_last_error() on failure. Objects returned through out-parameters are
 * owned by the caller and released with the matching *_free function; out
 * parameters are written only on RF_OK. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rf_status {
    RF_OK = 0,
    RF_ERR_INVALID_ARGUMENT = 1,
    RF_ERR_PARSE = 2,
    RF_ERR_IO = 3,
    RF_ERR_SINGULAR = 4,
    RF_ERR_DOMAIN = 5,
    RF_ERR_PROTOCOL = 6,
    RF_ERR_DEADLOCK = 7,
    RF_ERR_INTERNAL = 8
} rf_status;

/* Value domain of a matrix: arbitrary-precision integers (eliminated
 * fraction-free), arbitrary-precision rationals, or IEEE doubles. */
typedef enum rf_domain {
    RF_DOMAIN_INT = 0,
    RF_DOMAIN_RATIONAL = 1,
    RF_DOMAIN_F64 = 2
} rf_domain;

typedef enum rf_pivot {
    RF_PIVOT_FIRST = 0,     /* keep the first row to arrive */
    RF_PIVOT_SPARSEST = 1,  /* fewest entries, smaller lead breaking ties */
    RF_PIVOT_THRESHOLD = 2, /* sparsest among leads within gamma of the largest */
    RF_PIVOT_PARTIAL = 3    /* largest lead; threshold with gamma = 1 */
} rf_pivot;

typedef struct rf_matrix rf_matrix;
typedef struct rf_lu rf_lu;
typedef struct rf_stats rf_stats;

typedef struct rf_options {
    int64_t workers;      /* 1 runs the deterministic sequential driver */
    int64_t stripe_width; /* consecutive columns per worker stripe */
    rf_pivot pivot;
    double gamma;         /* threshold eligibility bar, in [0, 1] */
    double epsilon;       /* float-domain zero cutoff, > 0 */
    int use_gcd;          /* fraction-free: scale updates down by the lead gcd */
    int strip_content;    /* fraction-free: divide each result by its content */
} rf_options;

/* Fills in the defaults: 1 worker, stripe width 1, sparsest pivoting with
 * gamma 0.5, epsilon 1e-10, gcd scaling on, content stripping off. */
void rf_options_init(rf_options* opts);

/* Message for the most recent failure on this thread; empty if none. */
const char* rf_last_error(void);

/* Matrices travel as SMS files: a "rows cols M" header, one "i j value" line
 * per entry with 1-based indices, and a "0 0 0" trailer. */
rf_status rf_matrix_read(const char* path, rf_domain domain, rf_matrix** out);
rf_status rf_matrix_parse(const char* text, rf_domain domain, rf_matrix** out);
rf_status rf_matrix_write(const rf_matrix* m, const char* path);
rf_status rf_matrix_format(const rf_matrix* m, char** out);
rf_status rf_matrix_transpose(const rf_matrix* m, rf_matrix** out);
int64_t rf_matrix_rows(const rf_matrix* m);
int64_t rf_matrix_cols(const rf_matrix* m);
int64_t rf_matrix_nnz(const rf_matrix* m);
void rf_matrix_free(rf_matrix* m);

/* Elimination entry points. stats may be NULL; otherwise it receives the
 * per-worker message counters of the run. */
rf_status rf_rank(const rf_matrix* m, const rf_options* opts, int64_t* rank,
                  rf_stats** stats);
rf_status rf_echelon(const rf_matrix* m, const rf_options* opts, rf_matrix** echelon,
                     rf_stats** stats);

/* Factors a square matrix as P*A = L*U with unit lower-triangular L. Integer
 * input is promoted to rationals, since the factors need exact division.
 * Fails with RF_ERR_SINGULAR when some column has no pivot. */
rf_status rf_lu_factor(const rf_matrix* m, const rf_options* opts, rf_lu** out,
                       rf_stats** stats);

/* Views into a factorization, valid while the rf_lu lives. positions[i] is
 * the final position of original row i, i.e. row positions[i] of P*A is row
 * i of A. */
const rf_matrix* rf_lu_l(const rf_lu* lu);
const rf_matrix* rf_lu_u(const rf_lu* lu);
const int64_t* rf_lu_positions(const rf_lu* lu, int64_t* count);
void rf_lu_free(rf_lu* lu);

rf_status rf_stats_json(const rf_stats* stats, char** out);
void rf_stats_free(rf_stats* stats);

/* Releases strings returned by rf_matrix_format and rf_stats_json. */
void rf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ROWFALL_H */
