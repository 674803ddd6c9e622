#ifndef ONT_ONT_H
#define ONT_ONT_H

/* C surface of the ontology embedding engine. All handles are opaque;
 * every function returns a status code and reports results through out
 * parameters. On failure the thread-local message from ont_last_error()
 * describes what went wrong. Strings returned through char** are owned
 * by the caller and must be released with ont_string_free(). */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ont_status {
    ONT_OK = 0,
    ONT_ERR_PARSE = 1,   /* malformed input text */
    ONT_ERR_IO = 2,      /* file not readable/writable */
    ONT_ERR_INVALID = 3, /* bad argument, config, or shape */
    ONT_ERR_RUNTIME = 4  /* anything else (numeric failure, ...) */
} ont_status;

/* Message for the most recent failure on this thread; empty string if none. */
const char* ont_last_error(void);

void ont_string_free(char* s);

typedef struct ont_ontology ont_ontology;     /* parsed raw ontology */
typedef struct ont_labels ont_labels;         /* IRI -> label map */
typedef struct ont_defs ont_defs;             /* fresh-name definitions */
typedef struct ont_normalized ont_normalized; /* NF1-NF4 axioms + defs */
typedef struct ont_model ont_model;           /* trained checkpoint */

/* --- ontology / labels / defs --- */

ont_status ont_ontology_read(const char* path, ont_ontology** out);
ont_status ont_ontology_parse(const char* text, ont_ontology** out);
void ont_ontology_free(ont_ontology* o);

ont_status ont_labels_read(const char* path, ont_labels** out);
ont_status ont_labels_parse(const char* text, ont_labels** out);
void ont_labels_free(ont_labels* l);

ont_status ont_defs_read(const char* path, ont_defs** out);
void ont_defs_free(ont_defs* d);

/* --- normalization --- */

ont_status ont_normalize(const ont_ontology* o, ont_normalized** out);
/* defs_path may be NULL when the axiom file uses no fresh names. */
ont_status ont_normalized_read(const char* axioms_path, const char* defs_path,
                               ont_normalized** out);
/* defs_text may be NULL. */
ont_status ont_normalized_parse(const char* axioms_text, const char* defs_text,
                                ont_normalized** out);
ont_status ont_normalized_axioms_text(const ont_normalized* n, char** out);
ont_status ont_normalized_defs_text(const ont_normalized* n, char** out);
void ont_normalized_free(ont_normalized* n);

/* --- verbalization --- */

/* TSV: one `concept-expression<TAB>verbalization` row per distinct concept
 * appearing on either side of an axiom, in first-appearance order.
 * defs may be NULL. */
ont_status ont_verbalize(const ont_ontology* o, const ont_labels* labels,
                         const ont_defs* defs, char** out_tsv);
ont_status ont_verbalize_concept(const char* concept_expr, const ont_labels* labels,
                                 const ont_defs* defs, char** out);

/* --- reasoning --- */

/* Entailed NF1 axioms, one per line (reflexive and B = owl:Thing conclusions
 * always dropped; asserted axioms dropped when exclude_asserted != 0). */
ont_status ont_infer_closure(const ont_normalized* n, int exclude_asserted,
                             char** out);

/* --- dataset splitting --- */

/* Seeded shuffle into 80/10/10; each out parameter receives an axiom file. */
ont_status ont_split(const ont_normalized* n, uint64_t seed, char** out_train,
                     char** out_valid, char** out_test);

/* --- training --- */

/* config_text: flat key=value lines; unknown keys fail. When the config
 * names a valid_axioms file, lambda is selected on it after training. */
ont_status ont_train(const ont_normalized* train, const ont_labels* labels,
                     const char* config_text, ont_model** out);

ont_status ont_model_load(const char* path, ont_model** out);
ont_status ont_model_save(const ont_model* m, const char* path);
ont_status ont_model_lambda(const ont_model* m, double* out);
void ont_model_free(ont_model* m);

/* Grid search over the checkpoint's lambda_grid, maximizing validation MRR;
 * ties go to the smaller lambda. Does not modify the model. */
ont_status ont_select_lambda(const ont_model* m, const ont_labels* labels,
                             const ont_normalized* valid, int filtered,
                             double* out_lambda);

/* --- evaluation --- */

/* Ranks each test axiom against corruptions drawn from the model's
 * candidate pool. `background` supplies definitions for fresh names and,
 * when filtered != 0, the known positives to drop; it may be NULL.
 * Pass lambda = NaN to use the checkpoint's stored value. out_json:
 * {"lambda","hits1","hits10","hits100","mrr","mr","ranks"} with the
 * hit rates and MRR as fractions in [0,1]. */
ont_status ont_evaluate(const ont_model* m, const ont_labels* labels,
                        const ont_normalized* background,
                        const ont_normalized* test, double lambda, int filtered,
                        char** out_json);

/* s(sub <= sup) under the trained encoder; lambda = NaN for the stored one. */
ont_status ont_score(const ont_model* m, const ont_labels* labels,
                     const ont_defs* defs, const char* sub_expr,
                     const char* sup_expr, double lambda, double* out);

/* Same score from a precomputed-embedding TSV (rows keyed by the FNV-1a
 * 64-bit hex hash of the verbalization). */
ont_status ont_score_external(const char* embeddings_path, int dim, double kappa,
                              const ont_labels* labels, const ont_defs* defs,
                              const char* sub_expr, const char* sup_expr,
                              double lambda, double* out);

/* Zero-shot transfer: target_dir must hold test.txt and labels.tsv, and may
 * hold axioms.txt (background/known positives) and defs.tsv. Report format
 * as in ont_evaluate. */
ont_status ont_transfer(const ont_model* m, const char* target_dir, double lambda,
                        int filtered, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
