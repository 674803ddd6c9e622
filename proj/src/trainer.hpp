#ifndef ONT_TRAINER_HPP
#define ONT_TRAINER_HPP

#include <optional>
#include <string>
#include <vector>

#include "encoder.hpp"
#include "normalizer.hpp"
#include "verbalizer.hpp"

namespace ont {

struct TrainConfig {
    double alpha = 3.0;   // contrastive margin
    double beta = 0.5;    // centripetal margin
    double lr = 1e-5;
    int n_neg = 1;
    int epochs = 1;
    int batch_size = 128;
    uint64_t seed = 42;
    int dim = 64;
    int d_tok = 32;
    double kappa = 1.0;
    double eps = 1e-5;
    bool fresh_negatives = true; // role/conj: independent negative per direction
    std::vector<double> lambda_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                       0.6, 0.7, 0.8, 0.9, 1.0};
    std::string valid_axioms; // optional: validation set for lambda selection

    void validate() const;
};

// Flat `key=value` lines; `#` comments. Unknown keys are errors.
TrainConfig parse_train_config(const std::string& text);
std::string train_config_to_text(const TrainConfig& cfg);

// Per-role rotation angles and scaling factor.
struct RoleTransform {
    RotationAngles theta;
    double k = 1.0;
};

// f_r(v) = k_r (.) (R(Theta_r) v): rotate, then hyperbolically scale.
PoincarePoint apply_role(const RoleTransform& r, const PoincarePoint& v);

// --- losses ---

// max(0, d(c,d) - d(c,neg) + alpha)
double loss_contrastive(const PoincarePoint& c, const PoincarePoint& d,
                        const PoincarePoint& d_neg, double alpha);

// max(0, |d|_k - |c|_k + beta)
double loss_centripetal(const PoincarePoint& c, const PoincarePoint& d, double beta);

double loss_hierarchy(const PoincarePoint& c, const PoincarePoint& d,
                      const PoincarePoint& d_neg, double alpha, double beta);

// Uniform draw from the atomic candidate pool. No filtering against positives.
ConceptRef sample_negative(Rng& rng, const std::vector<ConceptRef>& candidates);

// --- model ---

struct Model {
    BallSpec spec;
    TrainConfig cfg;
    TokenVocab vocab;
    EncoderParams enc;
    // Role head: affine map from the mean-pooled role-label embedding
    // (d_tok) to (m angles, 1 scale). Initialized near the identity
    // transform (theta ~ 0, k ~ 1).
    std::vector<double> head_w; // (m+1) x d_tok, row-major
    std::vector<double> head_b; // m+1
    double lambda = 0.0;        // score weight chosen on validation
    std::vector<Iri> candidate_pool; // training atomic signature, sorted

    int num_angles() const { return spec.dim / 2; }
    RoleTransform role_transform(const std::string& role_label) const;
};

struct ModelGrads {
    EncoderGrads enc;
    std::vector<double> head_w;
    std::vector<double> head_b;

    static ModelGrads zeros_like(const Model& m);
};

// One training unit: a normalized axiom's hierarchy term, or the role /
// conjunction term of one deduplicated complex concept.
struct TrainItem {
    enum class Type { Hierarchy, Role, Conjunction } type;
    // Hierarchy: sub/sup verbalizations.
    // Role (Er.D): a = V(Er.D), b = V(D), role_label set.
    // Conjunction (C n D): a = V(C n D), b = V(C), c = V(D).
    std::string a, b, c;
    std::string role_label;
};

// Negative indices into the candidate pool, one per (direction, n_neg).
struct ItemNegatives {
    std::vector<size_t> first;
    std::vector<size_t> second; // role/conj second direction only
};

std::vector<TrainItem> build_train_items(const NormalizedOntology& o,
                                         const LabelMap& labels);

ItemNegatives sample_item_negatives(const TrainItem& item, Rng& rng,
                                    size_t pool_size, const TrainConfig& cfg);

// Loss of one item at the current parameters; accumulates gradients when
// `grads` is non-null. `neg_texts` are the verbalizations of the pool.
double item_loss(const Model& m, const TrainItem& item, const ItemNegatives& negs,
                 const std::vector<std::string>& neg_texts, ModelGrads* grads);

double total_loss(const Model& m, const std::vector<TrainItem>& batch,
                  const std::vector<ItemNegatives>& negs,
                  const std::vector<std::string>& neg_texts, ModelGrads* grads);

struct TrainResult {
    Model model;
    std::vector<double> epoch_mean_loss; // one entry per epoch
};

// Deterministic single-threaded SGD with post-step projection implied by
// the pre-projection parameterization. Throws on non-finite loss.
TrainResult train(const NormalizedOntology& o, const LabelMap& labels,
                  const TrainConfig& cfg);

} // namespace ont

#endif
