/* C interface to the fraudbench core. All functions return fb_status; on
 * failure fb_last_error() holds a thread-local message describing the cause.
 * Graph handles are opaque and owned by the caller via fb_graph_free. */
#ifndef FRAUDBENCH_H
#define FRAUDBENCH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FB_OK = 0,
  FB_ERR_INVALID_ARGUMENT = 1,
  FB_ERR_IO = 2,
  FB_ERR_BUDGET = 3,
  FB_ERR_INTERNAL = 4
} fb_status;

typedef struct fb_graph fb_graph;

const char* fb_last_error(void);
const char* fb_version(void);

/* metadata_path may be NULL or empty when the graph has no metadata. */
fb_status fb_graph_load(const char* edges_path, const char* labels_path,
                        const char* metadata_path, fb_graph** out);
fb_status fb_graph_save(const fb_graph* g, const char* edges_path,
                        const char* labels_path);
fb_status fb_graph_sample_sbm(int64_t n_benign, int64_t n_fraud, double p_benign,
                              double p_fraud, double p_cross, uint64_t seed,
                              fb_graph** out);
fb_status fb_graph_inject_clique(const fb_graph* g, int size, double density,
                                 uint64_t seed, fb_graph** out);
fb_status fb_graph_counts(const fb_graph* g, int* n_vertices, int* n_fraud,
                          int64_t* n_edges);
void fb_graph_free(fb_graph* g);

/* detector: a builtin suite name (e.g. "neg_degree"); metric: "auc" or "f1". */
fb_status fb_evaluate(const fb_graph* g, const char* detector, const char* metric,
                      double* out_value);

/* Partition-based private release of a detector's AUC. noise_enabled = 0 skips
 * the Laplace draw and the budget charge. */
fb_status fb_pda_release(const fb_graph* g, const char* detector, int k, double rho,
                         double epsilon, int noise_enabled, uint64_t seed,
                         double* out_released, double* out_partition_mean);

/* method: "sbm", "agm", "agm_triangles" or "topm_filter". */
fb_status fb_synth_generate(const fb_graph* g, const char* method, double epsilon,
                            double delta, double d_multiplier, int noise_enabled,
                            uint64_t seed, fb_graph** out);

/* Membership-inference attack against a release mode ("exact", "pda" or a
 * synthesis method name) over a matched SBM family. Writes an fpr,tpr,threshold
 * CSV to roc_out_path when it is non-NULL. */
fb_status fb_attack_run(const char* mode, int64_t n_benign, int64_t n_fraud,
                        double p_benign, double p_fraud, double p_cross, int k,
                        double rho, double epsilon, double delta,
                        double d_multiplier, int n_positive, int n_negative,
                        uint64_t seed, const char* roc_out_path, double* out_auc,
                        double* out_tpr_at_fpr0);

/* Runs a key=value experiment config; writes the result CSV to out_path and
 * the budget ledger to out_path + ".ledger.json". */
fb_status fb_run_experiment(const char* config_path, const char* out_path);
fb_status fb_run_experiment_text(const char* config_text, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif
