#ifndef ONT_EVAL_HPP
#define ONT_EVAL_HPP

#include <map>
#include <optional>

#include "checkpoint.hpp"
#include "reasoner.hpp"

namespace ont {

// s(C <= D) = -(d(c,d) + lambda (|d| - |c|)); higher = more plausible.
double score_points(const PoincarePoint& c, const PoincarePoint& d, double lambda);

double score_concepts(const Concept& c, const Concept& d, const ConceptEncoder& enc,
                      const LabelMap& labels, const DefinitionMap& defs, double lambda);

struct RankingReport {
    std::vector<size_t> ranks;
    double hits1 = 0, hits10 = 0, hits100 = 0; // fractions in [0,1]
    double mrr = 0;                            // fraction in [0,1]
    double mr = 0;                             // mean rank
};

RankingReport compute_metrics(const std::vector<size_t>& ranks);

struct SplitResult {
    std::vector<NormalizedAxiom> train, valid, test;
};

// Seeded shuffle, then floor(0.8n) / floor(0.1n) / remainder.
SplitResult split_dataset(const std::vector<NormalizedAxiom>& axioms, uint64_t seed);

std::map<NfKind, size_t> nf_counts(const std::vector<NormalizedAxiom>& axioms);

// Inference task: train on everything; test = all entailed NF1 (asserted
// excluded by default); valid = up to `valid_size` of them, sampled
// without replacement.
struct InferenceSets {
    std::vector<NormalizedAxiom> train, valid, test;
};
InferenceSets build_inference_sets(const NormalizedOntology& o, uint64_t seed,
                                   bool exclude_asserted = true,
                                   size_t valid_size = 1000);

// Ranks test axioms against corruptions of one side, per NF kind:
// NF1/NF2 corrupt the superclass, NF3 the existential filler, NF4 the
// superclass. Ties count as ranked higher (pessimistic). Candidate pool =
// atomic concepts of the training signature; `filtered` removes known
// positives other than the truth.
class Evaluator {
public:
    Evaluator(const ConceptEncoder& enc, const LabelMap& labels,
              const DefinitionMap& defs, std::vector<Iri> pool);

    void set_known_positives(const std::vector<NormalizedAxiom>& known);

    size_t rank_axiom(const NormalizedAxiom& test, double lambda, bool filtered = false);
    RankingReport evaluate(const std::vector<NormalizedAxiom>& tests, double lambda,
                           bool filtered = false);
    // Max validation MRR; ties broken toward smaller lambda.
    double select_lambda(const std::vector<NormalizedAxiom>& valid,
                         std::vector<double> grid, bool filtered = false);

    const PoincarePoint& embed_concept(const ConceptRef& c);

private:
    const ConceptEncoder& enc_;
    const LabelMap& labels_;
    const DefinitionMap& defs_;
    std::vector<Iri> pool_;
    std::map<std::string, PoincarePoint> cache_; // keyed by functional syntax
    std::map<std::string, std::set<Iri>> known_; // corruption context -> answers
};

// No parameter updates; ranking over the target's atomic concepts.
RankingReport transfer_evaluate(const Model& ckpt, const LabelMap& target_labels,
                                const NormalizedOntology& target_background,
                                const std::vector<NormalizedAxiom>& target_test,
                                std::optional<double> lambda = std::nullopt,
                                bool filtered = false);

} // namespace ont

#endif
