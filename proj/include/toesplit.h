/* toesplit: block Toeplitz matrix-vector multiplication via split-FFT
 * branch recursion, with a standard circulant-embedding engine, a dense
 * oracle, instrumentation counters, and closed-form cost/memory models.
 *
 * All functions return TS_OK (0) on success; on failure they return an
 * error code and leave a human-readable detail string in ts_last_error()
 * (thread local). Out parameters are untouched on failure. Complex buffers
 * are interleaved doubles (re, im), row-major with level 1 outermost.
 */
#ifndef TOESPLIT_H
#define TOESPLIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
    TS_OK = 0,
    TS_ERR_INVALID_ARGUMENT = 1,
    TS_ERR_SHAPE = 2,
    TS_ERR_SYMMETRY = 3,
    TS_ERR_CAP_EXCEEDED = 4,
    TS_ERR_RESOURCE = 5,
    TS_ERR_IO = 6,
    TS_ERR_LOGIC = 7,
    TS_ERR_INTERNAL = 8
} ts_status;

typedef enum ts_symmetry {
    TS_SYM_GENERAL = 0,
    TS_SYM_SYMMETRIC = 1,
    TS_SYM_SKEW = 2
} ts_symmetry;

typedef enum ts_storage {
    TS_STORAGE_AUTO = -1, /* mirror-compressed whenever the symmetry admits it */
    TS_STORAGE_FULL = 0,
    TS_STORAGE_COMPRESSED = 1
} ts_storage;

typedef enum ts_policy_mode {
    TS_POLICY_LAZY = 0,    /* lazy-sequential: (d+1)s working peak */
    TS_POLICY_PARALLEL = 1 /* eager-parallel: concurrent branch tasks */
} ts_policy_mode;

typedef struct ts_policy {
    ts_policy_mode mode;
    int32_t task_budget; /* max concurrent branch tasks, >= 1 */
} ts_policy;

/* Instrumentation for one matvec. peak_live_elems counts working-vector
 * complex elements only; kernel_elems is the operator's stored spectral
 * data. */
typedef struct ts_metrics {
    uint64_t fft_forward;
    uint64_t fft_inverse;
    uint64_t diag_mults;
    uint64_t phase_mults;
    int64_t peak_live_elems;
    uint64_t kernel_elems;
    uint64_t apply_ns;
    uint64_t precompute_ns;
} ts_metrics;

/* Closed-form cost/memory model for uniform level size n and d levels. */
typedef struct ts_complexity {
    int32_t d;
    double n;
    double s;
    double c_embed;
    double c_split;
    double r_c;
    double r_c_asymptote;
    double r_m;
    double r_m_sym;
} ts_complexity;

typedef struct ts_generator ts_generator;
typedef struct ts_operator ts_operator;

const char* ts_version(void);
const char* ts_status_name(ts_status status);
/* Detail for the last failure on this thread; empty string if none. */
const char* ts_last_error(void);

/* ---- generator specs -------------------------------------------------- */

/* lags: interleaved (re,im), row-major over the (2n_1-1) x ... x (2n_d-1)
 * lag tensor; entry for multi-lag m sits at offset m_l + n_l - 1 per level.
 * Symmetric mode requires t_m == t_{-m} per level, skew t_m == -t_{-m}
 * per level (validated). */
ts_status ts_generator_create(int32_t d, const int64_t* levels, const double* lags,
                              ts_symmetry symmetry, ts_generator** out);

/* Seeded instance: coefficients with independent zero-mean real/imaginary
 * parts of the given variance; symmetric/skew modes are projected onto the
 * symmetry class before construction. Deterministic and portable (SplitMix64
 * streams; role 0 = lags, role 1 = vectors). */
ts_status ts_generator_random(int32_t d, const int64_t* levels, uint64_t seed, double variance,
                              ts_symmetry symmetry, ts_generator** out);

/* JSON fixture format:
 * {"levels":[...], "lags":[[re,im],...], "symmetry":"general|symmetric|skew"} */
ts_status ts_generator_from_json_file(const char* path, ts_generator** out);
ts_status ts_generator_to_json_file(const ts_generator* g, const char* path);

int32_t ts_generator_dims(const ts_generator* g);
ts_status ts_generator_levels(const ts_generator* g, int64_t* out_levels);
void ts_generator_destroy(ts_generator* g);

/* Companion random input vector (stream role 1), length prod(levels). */
ts_status ts_random_vector(int32_t d, const int64_t* levels, uint64_t seed, double variance,
                           double* out);

/* ---- operators --------------------------------------------------------- */

/* Split-FFT operator: precomputes the 2^d parity-indexed spectral blocks.
 * s0 is the circulant padding value; the matvec result never depends on it. */
ts_status ts_operator_create_split(const ts_generator* g, double s0_re, double s0_im,
                                   ts_storage storage, ts_operator** out);

/* Standard circulant-embedding operator (baseline). */
ts_status ts_operator_create_embed(const ts_generator* g, double s0_re, double s0_im,
                                   ts_storage storage, ts_operator** out);

/* y = T v. v and y are interleaved complex of length prod(levels); policy
 * may be NULL (lazy-sequential) and is ignored by embed operators. */
ts_status ts_operator_apply(const ts_operator* op, const double* v, double* y,
                            const ts_policy* policy, ts_metrics* metrics);

int32_t ts_operator_dims(const ts_operator* op);
ts_status ts_operator_levels(const ts_operator* op, int64_t* out_levels);
ts_status ts_operator_kernel_elems(const ts_operator* op, uint64_t* out);

/* Binary kernel-spectra file (split operators only): header {magic "TSKF",
 * version, d, n_1..n_d, symmetry, storage}, then per parity block in
 * ascending branch-id order (bit a = odd along level a+1) the element count
 * followed by little-endian interleaved (re,im) doubles, row-major. */
ts_status ts_operator_save_kernel(const ts_operator* op, const char* path);
ts_status ts_operator_load_split(const char* path, ts_operator** out);

void ts_operator_destroy(ts_operator* op);

/* ---- oracle and model -------------------------------------------------- */

/* Dense O(s^2) reference multiply, built lag by lag from the generator.
 * Fails with TS_ERR_CAP_EXCEEDED when prod(levels) > cap. */
ts_status ts_naive_matvec(const ts_generator* g, const double* v, double* y, int64_t cap);

ts_status ts_predict(int32_t d, double n, ts_complexity* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TOESPLIT_H */
