/* C interface to the multilabel ranking library.
 *
 * Every function that can fail returns an mlr_status; MLR_OK means success.
 * On failure, mlr_last_error() returns a message for the calling thread,
 * valid until that thread's next library call. Out-parameters are written
 * only on success. Buffers returned through char** / double** out-parameters
 * are owned by the caller and released with mlr_free().
 */

#ifndef MLRANK_H_
#define MLRANK_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlr_status {
  MLR_OK = 0,
  MLR_INVALID_ARGUMENT = 1,
  MLR_DIMENSION_MISMATCH = 2,
  MLR_PARSE_ERROR = 3,
  MLR_IO_ERROR = 4,
  MLR_NUMERIC_ERROR = 5,
  MLR_NOT_CONVERGED = 6,
  MLR_DEGENERATE_WEIGHT = 7,
  MLR_UNKNOWN_LABELING = 8,
  MLR_UNKNOWN_ERROR = 99
} mlr_status;

/* Pair-error weighting: constant c, or 1/(s(m-s)) with s the number of
 * relevant labels (zero when a labeling has no relevant/irrelevant pair). */
typedef enum mlr_weight_kind {
  MLR_WEIGHT_CONSTANT = 0,
  MLR_WEIGHT_NORMALIZED = 1
} mlr_weight_kind;

typedef struct mlr_dataset mlr_dataset;
typedef struct mlr_model mlr_model;
typedef struct mlr_synth_model mlr_synth_model;

const char* mlr_version(void);

/* Message for the most recent failure on this thread ("" if none). */
const char* mlr_last_error(void);

void mlr_free(void* buffer);

/* Stream splitter for reproducible parallel work. */
uint64_t mlr_derive_seed(uint64_t seed, uint64_t index);

/* ---- datasets (sparse text format, see mlr_dataset_write) ---- */

mlr_status mlr_dataset_read(const char* path, mlr_dataset** out);

/* Writes `#m=<labels> #d=<features>`, one comment line per stored comment,
 * then one instance per line: comma-separated relevant label indices, a
 * space, then space-separated index:value feature pairs (zeros omitted). */
mlr_status mlr_dataset_write(const mlr_dataset* data, const char* path);

/* Disjoint random split; head receives round(fraction * n) instances. */
mlr_status mlr_dataset_split(const mlr_dataset* data, double fraction,
                             uint64_t seed, mlr_dataset** head,
                             mlr_dataset** tail);

void mlr_dataset_destroy(mlr_dataset* data);

int mlr_dataset_labels(const mlr_dataset* data);     /* m, 0 on NULL */
int mlr_dataset_dimension(const mlr_dataset* data);  /* d, 0 on NULL */
long mlr_dataset_size(const mlr_dataset* data);      /* n, 0 on NULL */

/* ---- synthetic data ---- */

/* Latent linear model: f = Ax + noise, labels = [Mf > 0], x uniform on the
 * unit disk. dependent=0 uses M = identity, nonzero a random mixing. */
mlr_status mlr_synth_create(int labels, double noise_sd, int dependent,
                            uint64_t seed, mlr_synth_model** out);

void mlr_synth_destroy(mlr_synth_model* model);

/* Instance k depends only on (data_seed, k): same-seed datasets of
 * different sizes share a prefix. */
mlr_status mlr_synth_sample(const mlr_synth_model* model, long n,
                            uint64_t data_seed, mlr_dataset** out);

/* JSON description of the model parameters. */
mlr_status mlr_synth_manifest(const mlr_synth_model* model, char** json_out);

/* Monte-Carlo estimate of the best achievable mean rank loss, averaged over
 * n_test fresh instances with reps conditional samples each. std_error may
 * be NULL. */
mlr_status mlr_synth_bayes_risk(const mlr_synth_model* model,
                                mlr_weight_kind weight, double weight_c,
                                long n_test, long reps, uint64_t seed,
                                double* value, double* std_error);

/* ---- training ---- */

/* method: "wbr-ada" (boosted stumps per label), "wbr-logreg" (L2 logistic
 * per label), "pairwise-log" (linear, logistic pair surrogate),
 * "pairwise-stumps" (boosted stumps, exponential pair surrogate).
 *
 * grid holds candidate hyperparameters (rounds, lambda, iteration cap, or
 * total stumps); NULL/0 selects the method default. More than one candidate
 * triggers a 75/25 holdout selection seeded by `seed`, then a refit on the
 * full data. tuning_json (optional) receives the selection trace. */
mlr_status mlr_train(const mlr_dataset* data, const char* method,
                     mlr_weight_kind weight, double weight_c,
                     const double* grid, size_t grid_len, uint64_t seed,
                     mlr_model** out, char** tuning_json);

/* ---- models ---- */

mlr_status mlr_model_save(const mlr_model* model, const char* path);
mlr_status mlr_model_load(const char* path, mlr_model** out);
void mlr_model_destroy(mlr_model* model);

int mlr_model_labels(const mlr_model* model);     /* m, 0 on NULL */
int mlr_model_dimension(const mlr_model* model);  /* d, 0 on NULL */

/* Method name; owned by the model handle. NULL on NULL input. */
const char* mlr_model_method(const mlr_model* model);

/* scores must hold mlr_model_labels() doubles; higher score = ranked
 * more relevant. */
mlr_status mlr_model_predict(const mlr_model* model, const double* features,
                             size_t dimension, double* scores);

/* Mean weighted rank loss on a dataset. per_instance (optional) receives a
 * malloc'd array of n per-instance losses. */
mlr_status mlr_evaluate(const mlr_model* model, const mlr_dataset* data,
                        mlr_weight_kind weight, double weight_c,
                        double* mean_loss, double** per_instance);

/* ---- verification suites ---- */

typedef struct mlr_verify_options {
  long trials;         /* random trials per suite */
  int min_labels;      /* label counts cycled across trials */
  int max_labels;
  uint64_t seed;
  long witness_budget; /* search budget per pairwise loss */
} mlr_verify_options;

/* Fills in the defaults (200 trials, labels 2..5, seed 1, budget 10000). */
void mlr_verify_options_init(mlr_verify_options* options);

/* suite: "all" or one of "mass-identities", "regret-decomposition",
 * "bipartite-reduction", "surrogate-regret-bound", "univariate-consistency",
 * "pairwise-inconsistency". passed receives 1/0; report_json (optional)
 * receives the per-suite report. */
mlr_status mlr_verify(const mlr_verify_options* options, const char* suite,
                      int* passed, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* MLRANK_H_ */
