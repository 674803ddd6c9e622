#include "ont/ont.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "checkpoint.hpp"
#include "eval.hpp"
#include "verbalizer.hpp"

using namespace ont;

struct ont_ontology {
    Ontology o;
};
struct ont_labels {
    LabelMap l;
};
struct ont_defs {
    DefinitionMap d;
};
struct ont_normalized {
    NormalizedOntology n;
};
struct ont_model {
    Model m;
};

namespace {

thread_local std::string g_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
ont_status guarded(Fn&& fn) {
    try {
        fn();
        g_error.clear();
        return ONT_OK;
    } catch (const ParseError& e) {
        g_error = e.what();
        return ONT_ERR_PARSE;
    } catch (const IoError& e) {
        g_error = e.what();
        return ONT_ERR_IO;
    } catch (const std::invalid_argument& e) {
        g_error = e.what();
        return ONT_ERR_INVALID;
    } catch (const std::exception& e) {
        g_error = e.what();
        return ONT_ERR_RUNTIME;
    }
}

ont_status invalid(const char* msg) {
    g_error = msg;
    return ONT_ERR_INVALID;
}

const DefinitionMap& defs_or_empty(const ont_defs* d) {
    static const DefinitionMap empty;
    return d ? d->d : empty;
}

std::string report_json(const RankingReport& r, double lambda) {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["hits1"] = r.hits1;
    j["hits10"] = r.hits10;
    j["hits100"] = r.hits100;
    j["mrr"] = r.mrr;
    j["mr"] = r.mr;
    j["ranks"] = r.ranks;
    return j.dump();
}

// Fresh-name definitions may arrive on either handle; merge them so the
// candidate pool stays verbalizable whichever file carried them.
DefinitionMap merged_defs(const NormalizedOntology* a, const NormalizedOntology* b) {
    DefinitionMap out;
    for (const NormalizedOntology* src : {a, b}) {
        if (!src) continue;
        for (const auto& [name, def] : src->defs.entries)
            if (!out.contains(name)) out.add(name, def);
    }
    return out;
}

RankingReport run_evaluate(const Model& m, const LabelMap& labels,
                           const NormalizedOntology* background,
                           const NormalizedOntology* test_o,
                           const std::vector<NormalizedAxiom>& test, double lambda,
                           bool filtered) {
    const DefinitionMap defs = merged_defs(background, test_o);
    TrainableEncoder enc(&m.vocab, &m.enc, &m.spec);
    Evaluator ev(enc, labels, defs, m.candidate_pool);
    if (filtered) {
        std::vector<NormalizedAxiom> known = test;
        if (background)
            known.insert(known.end(), background->axioms.begin(),
                         background->axioms.end());
        ev.set_known_positives(known);
    }
    return ev.evaluate(test, lambda, filtered);
}

} // namespace

extern "C" {

const char* ont_last_error(void) { return g_error.c_str(); }

void ont_string_free(char* s) { delete[] s; }

ont_status ont_ontology_read(const char* path, ont_ontology** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new ont_ontology{read_ontology(path)}; });
}

ont_status ont_ontology_parse(const char* text, ont_ontology** out) {
    if (!text || !out) return invalid("null argument");
    return guarded([&] { *out = new ont_ontology{parse_ontology(text)}; });
}

void ont_ontology_free(ont_ontology* o) { delete o; }

ont_status ont_labels_read(const char* path, ont_labels** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new ont_labels{read_labels(path)}; });
}

ont_status ont_labels_parse(const char* text, ont_labels** out) {
    if (!text || !out) return invalid("null argument");
    return guarded([&] { *out = new ont_labels{parse_labels(text)}; });
}

void ont_labels_free(ont_labels* l) { delete l; }

ont_status ont_defs_read(const char* path, ont_defs** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new ont_defs{parse_defs_tsv(read_file(path))}; });
}

void ont_defs_free(ont_defs* d) { delete d; }

ont_status ont_normalize(const ont_ontology* o, ont_normalized** out) {
    if (!o || !out) return invalid("null argument");
    return guarded([&] { *out = new ont_normalized{normalize(o->o)}; });
}

ont_status ont_normalized_read(const char* axioms_path, const char* defs_path,
                               ont_normalized** out) {
    if (!axioms_path || !out) return invalid("null argument");
    return guarded([&] {
        *out = new ont_normalized{
            read_normalized(axioms_path, defs_path ? defs_path : "")};
    });
}

ont_status ont_normalized_parse(const char* axioms_text, const char* defs_text,
                                ont_normalized** out) {
    if (!axioms_text || !out) return invalid("null argument");
    return guarded([&] {
        NormalizedOntology n;
        n.axioms = parse_normalized_axioms(axioms_text);
        if (defs_text) n.defs = parse_defs_tsv(defs_text);
        *out = new ont_normalized{std::move(n)};
    });
}

ont_status ont_normalized_axioms_text(const ont_normalized* n, char** out) {
    if (!n || !out) return invalid("null argument");
    return guarded([&] { *out = dup_string(to_functional(n->n)); });
}

ont_status ont_normalized_defs_text(const ont_normalized* n, char** out) {
    if (!n || !out) return invalid("null argument");
    return guarded([&] { *out = dup_string(defs_to_tsv(n->n.defs)); });
}

void ont_normalized_free(ont_normalized* n) { delete n; }

ont_status ont_verbalize(const ont_ontology* o, const ont_labels* labels,
                         const ont_defs* defs, char** out_tsv) {
    if (!o || !labels || !out_tsv) return invalid("null argument");
    return guarded([&] {
        const DefinitionMap& d = defs_or_empty(defs);
        std::string tsv;
        std::set<std::string> seen;
        for (const Axiom& a : o->o.axioms) {
            for (const ConceptRef& c : {a.sub, a.sup}) {
                std::string key = to_functional(*c);
                if (!seen.insert(key).second) continue;
                tsv += key + "\t" + verbalize(*c, labels->l, d) + "\n";
            }
        }
        *out_tsv = dup_string(tsv);
    });
}

ont_status ont_verbalize_concept(const char* concept_expr, const ont_labels* labels,
                                 const ont_defs* defs, char** out) {
    if (!concept_expr || !labels || !out) return invalid("null argument");
    return guarded([&] {
        ConceptRef c = parse_concept(concept_expr);
        *out = dup_string(verbalize(*c, labels->l, defs_or_empty(defs)));
    });
}

ont_status ont_infer_closure(const ont_normalized* n, int exclude_asserted,
                             char** out) {
    if (!n || !out) return invalid("null argument");
    return guarded([&] {
        std::set<Iri> sig;
        for (const Iri& i : n->n.atomic_signature()) sig.insert(i);
        std::string text;
        for (const NormalizedAxiom& a :
             entailed_nf1(n->n.axioms, sig, exclude_asserted != 0))
            text += to_functional(a) + "\n";
        *out = dup_string(text);
    });
}

ont_status ont_split(const ont_normalized* n, uint64_t seed, char** out_train,
                     char** out_valid, char** out_test) {
    if (!n || !out_train || !out_valid || !out_test) return invalid("null argument");
    return guarded([&] {
        SplitResult s = split_dataset(n->n.axioms, seed);
        auto render = [](const std::vector<NormalizedAxiom>& v) {
            std::string text;
            for (const NormalizedAxiom& a : v) text += to_functional(a) + "\n";
            return text;
        };
        *out_train = dup_string(render(s.train));
        *out_valid = dup_string(render(s.valid));
        *out_test = dup_string(render(s.test));
    });
}

ont_status ont_train(const ont_normalized* train, const ont_labels* labels,
                     const char* config_text, ont_model** out) {
    if (!train || !labels || !config_text || !out) return invalid("null argument");
    return guarded([&] {
        TrainConfig cfg = parse_train_config(config_text);
        TrainResult r = ont::train(train->n, labels->l, cfg);
        if (!cfg.valid_axioms.empty()) {
            std::vector<NormalizedAxiom> valid =
                parse_normalized_axioms(read_file(cfg.valid_axioms));
            TrainableEncoder enc(&r.model.vocab, &r.model.enc, &r.model.spec);
            Evaluator ev(enc, labels->l, train->n.defs, r.model.candidate_pool);
            r.model.lambda = ev.select_lambda(valid, cfg.lambda_grid);
        }
        *out = new ont_model{std::move(r.model)};
    });
}

ont_status ont_model_load(const char* path, ont_model** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = new ont_model{load_checkpoint(path)}; });
}

ont_status ont_model_save(const ont_model* m, const char* path) {
    if (!m || !path) return invalid("null argument");
    return guarded([&] { save_checkpoint(m->m, path); });
}

ont_status ont_model_lambda(const ont_model* m, double* out) {
    if (!m || !out) return invalid("null argument");
    *out = m->m.lambda;
    g_error.clear();
    return ONT_OK;
}

void ont_model_free(ont_model* m) { delete m; }

ont_status ont_select_lambda(const ont_model* m, const ont_labels* labels,
                             const ont_normalized* valid, int filtered,
                             double* out_lambda) {
    if (!m || !labels || !valid || !out_lambda) return invalid("null argument");
    return guarded([&] {
        TrainableEncoder enc(&m->m.vocab, &m->m.enc, &m->m.spec);
        Evaluator ev(enc, labels->l, valid->n.defs, m->m.candidate_pool);
        if (filtered) ev.set_known_positives(valid->n.axioms);
        *out_lambda =
            ev.select_lambda(valid->n.axioms, m->m.cfg.lambda_grid, filtered != 0);
    });
}

ont_status ont_evaluate(const ont_model* m, const ont_labels* labels,
                        const ont_normalized* background,
                        const ont_normalized* test, double lambda, int filtered,
                        char** out_json) {
    if (!m || !labels || !test || !out_json) return invalid("null argument");
    return guarded([&] {
        double l = std::isnan(lambda) ? m->m.lambda : lambda;
        RankingReport r = run_evaluate(m->m, labels->l,
                                       background ? &background->n : nullptr,
                                       &test->n, test->n.axioms, l, filtered != 0);
        *out_json = dup_string(report_json(r, l));
    });
}

ont_status ont_score(const ont_model* m, const ont_labels* labels,
                     const ont_defs* defs, const char* sub_expr,
                     const char* sup_expr, double lambda, double* out) {
    if (!m || !labels || !sub_expr || !sup_expr || !out)
        return invalid("null argument");
    return guarded([&] {
        TrainableEncoder enc(&m->m.vocab, &m->m.enc, &m->m.spec);
        double l = std::isnan(lambda) ? m->m.lambda : lambda;
        *out = score_concepts(*parse_concept(sub_expr), *parse_concept(sup_expr),
                              enc, labels->l, defs_or_empty(defs), l);
    });
}

ont_status ont_score_external(const char* embeddings_path, int dim, double kappa,
                              const ont_labels* labels, const ont_defs* defs,
                              const char* sub_expr, const char* sup_expr,
                              double lambda, double* out) {
    if (!embeddings_path || !labels || !sub_expr || !sup_expr || !out)
        return invalid("null argument");
    return guarded([&] {
        BallSpec spec;
        spec.dim = dim;
        spec.kappa = kappa;
        spec.validate();
        ExternalEncoder enc = ExternalEncoder::load(embeddings_path, spec);
        *out = score_concepts(*parse_concept(sub_expr), *parse_concept(sup_expr),
                              enc, labels->l, defs_or_empty(defs), lambda);
    });
}

ont_status ont_transfer(const ont_model* m, const char* target_dir, double lambda,
                        int filtered, char** out_json) {
    if (!m || !target_dir || !out_json) return invalid("null argument");
    return guarded([&] {
        namespace fs = std::filesystem;
        fs::path dir(target_dir);
        if (!fs::is_directory(dir))
            throw IoError("not a directory: " + std::string(target_dir));
        auto want = [&](const char* name) { return (dir / name).string(); };
        LabelMap labels = read_labels(want("labels.tsv"));
        std::vector<NormalizedAxiom> test =
            parse_normalized_axioms(read_file(want("test.txt")));
        NormalizedOntology background;
        if (fs::exists(dir / "axioms.txt"))
            background.axioms = parse_normalized_axioms(read_file(want("axioms.txt")));
        if (fs::exists(dir / "defs.tsv"))
            background.defs = parse_defs_tsv(read_file(want("defs.tsv")));
        std::optional<double> l;
        if (!std::isnan(lambda)) l = lambda;
        RankingReport r =
            transfer_evaluate(m->m, labels, background, test, l, filtered != 0);
        *out_json = dup_string(report_json(r, l.value_or(m->m.lambda)));
    });
}

} // extern "C"
