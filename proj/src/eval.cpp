#include "eval.hpp"

#include <algorithm>

#include "verbalizer.hpp"

namespace ont {

double score_points(const PoincarePoint& c, const PoincarePoint& d, double lambda) {
    return -(hdist(c, d) + lambda * (hnorm(d) - hnorm(c)));
}

double score_concepts(const Concept& c, const Concept& d, const ConceptEncoder& enc,
                      const LabelMap& labels, const DefinitionMap& defs, double lambda) {
    PoincarePoint pc = enc.embed_text(verbalize(c, labels, defs));
    PoincarePoint pd = enc.embed_text(verbalize(d, labels, defs));
    return score_points(pc, pd, lambda);
}

RankingReport compute_metrics(const std::vector<size_t>& ranks) {
    if (ranks.empty()) throw OntError("compute_metrics on empty rank list");
    RankingReport r;
    r.ranks = ranks;
    double inv_sum = 0, sum = 0;
    size_t h1 = 0, h10 = 0, h100 = 0;
    for (size_t rank : ranks) {
        if (rank < 1) throw OntError("rank < 1");
        inv_sum += 1.0 / static_cast<double>(rank);
        sum += static_cast<double>(rank);
        if (rank <= 1) ++h1;
        if (rank <= 10) ++h10;
        if (rank <= 100) ++h100;
    }
    const double n = static_cast<double>(ranks.size());
    r.mrr = inv_sum / n;
    r.mr = sum / n;
    r.hits1 = h1 / n;
    r.hits10 = h10 / n;
    r.hits100 = h100 / n;
    return r;
}

SplitResult split_dataset(const std::vector<NormalizedAxiom>& axioms, uint64_t seed) {
    std::vector<NormalizedAxiom> shuffled = axioms;
    Rng rng(seed);
    shuffle_vec(rng, shuffled);
    const size_t n = shuffled.size();
    const size_t n_train = static_cast<size_t>(0.8 * static_cast<double>(n));
    const size_t n_valid = static_cast<size_t>(0.1 * static_cast<double>(n));
    SplitResult out;
    out.train.assign(shuffled.begin(), shuffled.begin() + n_train);
    out.valid.assign(shuffled.begin() + n_train, shuffled.begin() + n_train + n_valid);
    out.test.assign(shuffled.begin() + n_train + n_valid, shuffled.end());
    return out;
}

std::map<NfKind, size_t> nf_counts(const std::vector<NormalizedAxiom>& axioms) {
    std::map<NfKind, size_t> out;
    for (const auto& a : axioms) ++out[a.kind];
    return out;
}

InferenceSets build_inference_sets(const NormalizedOntology& o, uint64_t seed,
                                   bool exclude_asserted, size_t valid_size) {
    std::set<Iri> sig;
    for (const Iri& i : o.atomic_signature()) sig.insert(i);
    InferenceSets out;
    out.train = o.axioms;
    out.test = entailed_nf1(o.axioms, sig, exclude_asserted);
    std::vector<NormalizedAxiom> pool = out.test;
    Rng rng(seed);
    shuffle_vec(rng, pool);
    if (pool.size() > valid_size) pool.resize(valid_size);
    out.valid = std::move(pool);
    return out;
}

namespace {

// The corrupted slot and the fixed remainder of a test axiom.
struct Corruption {
    Iri truth;
    std::string context_key;
};

Corruption corruption_of(const NormalizedAxiom& a) {
    switch (a.kind) {
    case NfKind::NF1: return {a.sup, "NF1|" + a.sub.value + "|?"};
    case NfKind::NF2: return {a.sup, "NF2|" + a.sub.value + "|" + a.sub2.value + "|?"};
    case NfKind::NF3:
        return {a.filler, "NF3|" + a.sub.value + "|" + a.role.value + "|?"};
    case NfKind::NF4:
        return {a.sup, "NF4|" + a.role.value + "|" + a.filler.value + "|?"};
    }
    throw OntError("unreachable NF kind");
}

NormalizedAxiom with_candidate(const NormalizedAxiom& a, const Iri& cand) {
    NormalizedAxiom c = a;
    switch (a.kind) {
    case NfKind::NF1:
    case NfKind::NF2:
    case NfKind::NF4: c.sup = cand; break;
    case NfKind::NF3: c.filler = cand; break;
    }
    return c;
}

} // namespace

Evaluator::Evaluator(const ConceptEncoder& enc, const LabelMap& labels,
                     const DefinitionMap& defs, std::vector<Iri> pool)
    : enc_(enc), labels_(labels), defs_(defs), pool_(std::move(pool)) {}

void Evaluator::set_known_positives(const std::vector<NormalizedAxiom>& known) {
    known_.clear();
    for (const auto& a : known) {
        Corruption c = corruption_of(a);
        known_[c.context_key].insert(c.truth);
    }
}

const PoincarePoint& Evaluator::embed_concept(const ConceptRef& c) {
    std::string key = to_functional(*c);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    PoincarePoint p = enc_.embed_text(verbalize(*c, labels_, defs_));
    return cache_.emplace(std::move(key), std::move(p)).first->second;
}

size_t Evaluator::rank_axiom(const NormalizedAxiom& test, double lambda, bool filtered) {
    Corruption corr = corruption_of(test);
    const std::set<Iri>* known = nullptr;
    if (filtered) {
        auto it = known_.find(corr.context_key);
        if (it != known_.end()) known = &it->second;
    }
    const PoincarePoint& truth_sub = embed_concept(test.sub_concept());
    const PoincarePoint& truth_sup = embed_concept(test.sup_concept());
    const double s_truth = score_points(truth_sub, truth_sup, lambda);

    size_t higher_or_tied = 0;
    for (const Iri& cand : pool_) {
        if (cand == corr.truth) continue;
        if (known && known->count(cand)) continue;
        NormalizedAxiom ca = with_candidate(test, cand);
        const PoincarePoint& pc = embed_concept(ca.sub_concept());
        const PoincarePoint& pd = embed_concept(ca.sup_concept());
        if (score_points(pc, pd, lambda) >= s_truth) ++higher_or_tied;
    }
    return 1 + higher_or_tied;
}

RankingReport Evaluator::evaluate(const std::vector<NormalizedAxiom>& tests,
                                  double lambda, bool filtered) {
    std::vector<size_t> ranks;
    ranks.reserve(tests.size());
    for (const auto& t : tests) ranks.push_back(rank_axiom(t, lambda, filtered));
    return compute_metrics(ranks);
}

double Evaluator::select_lambda(const std::vector<NormalizedAxiom>& valid,
                                std::vector<double> grid, bool filtered) {
    if (valid.empty()) throw OntError("lambda selection needs a nonempty validation set");
    if (grid.empty()) throw OntError("empty lambda grid");
    std::sort(grid.begin(), grid.end());
    double best_lambda = grid.front();
    double best_mrr = -1;
    for (double l : grid) {
        double mrr = evaluate(valid, l, filtered).mrr;
        if (mrr > best_mrr) {
            best_mrr = mrr;
            best_lambda = l;
        }
    }
    return best_lambda;
}

RankingReport transfer_evaluate(const Model& ckpt, const LabelMap& target_labels,
                                const NormalizedOntology& target_background,
                                const std::vector<NormalizedAxiom>& target_test,
                                std::optional<double> lambda, bool filtered) {
    TrainableEncoder enc(&ckpt.vocab, &ckpt.enc, &ckpt.spec);
    NormalizedOntology sig_union;
    sig_union.axioms = target_background.axioms;
    sig_union.axioms.insert(sig_union.axioms.end(), target_test.begin(),
                            target_test.end());
    Evaluator ev(enc, target_labels, target_background.defs,
                 sig_union.atomic_signature());
    if (filtered) ev.set_known_positives(target_background.axioms);
    return ev.evaluate(target_test, lambda.value_or(ckpt.lambda), filtered);
}

} // namespace ont
