#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ont/ont.h"

namespace {

[[noreturn]] void die(ont_status st) {
    std::cerr << "error: " << ont_last_error() << "\n";
    std::exit(static_cast<int>(st));
}

void check(ont_status st) {
    if (st != ONT_OK) die(st);
}

std::string take(char* s) {
    std::string out(s);
    ont_string_free(s);
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write file: " << path << "\n";
        std::exit(2);
    }
    out << content;
}

struct OntologyHandle {
    ont_ontology* p = nullptr;
    ~OntologyHandle() { ont_ontology_free(p); }
};
struct LabelsHandle {
    ont_labels* p = nullptr;
    ~LabelsHandle() { ont_labels_free(p); }
};
struct DefsHandle {
    ont_defs* p = nullptr;
    ~DefsHandle() { ont_defs_free(p); }
};
struct NormalizedHandle {
    ont_normalized* p = nullptr;
    ~NormalizedHandle() { ont_normalized_free(p); }
};
struct ModelHandle {
    ont_model* p = nullptr;
    ~ModelHandle() { ont_model_free(p); }
};

void print_report(const std::string& json_text, const std::string& ranks_out) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    auto pct = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
        return std::string(buf);
    };
    const auto& ranks = j["ranks"];
    std::cout << "axioms  " << ranks.size() << "\n"
              << "lambda  " << j["lambda"].get<double>() << "\n"
              << "H@1     " << pct(j["hits1"].get<double>()) << "\n"
              << "H@10    " << pct(j["hits10"].get<double>()) << "\n"
              << "H@100   " << pct(j["hits100"].get<double>()) << "\n"
              << "MRR     " << pct(j["mrr"].get<double>()) << "\n"
              << "MR      " << j["mr"].get<double>() << "\n";
    if (!ranks_out.empty()) {
        std::ostringstream tsv;
        size_t i = 1;
        for (const auto& r : ranks) tsv << i++ << "\t" << r.get<size_t>() << "\n";
        write_text(ranks_out, tsv.str());
    }
}

// "auto" -> NaN sentinel resolved by the caller; otherwise a number.
double parse_lambda(const std::string& s, bool& is_auto) {
    is_auto = (s == "auto");
    if (is_auto) return std::nan("");
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        std::cerr << "error: --lambda must be 'auto' or a number, got '" << s
                  << "'\n";
        std::exit(3);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EL ontology embedding toolkit"};
    app.require_subcommand(1);

    // --- normalize ---
    auto* norm = app.add_subcommand("normalize", "Rewrite an ontology into NF1-NF4");
    std::string n_in, n_labels, n_out_axioms, n_out_defs;
    norm->add_option("--in", n_in, "ontology file")->required();
    norm->add_option("--labels", n_labels, "label TSV (validated only)");
    norm->add_option("--out-axioms", n_out_axioms, "normalized axioms output")
        ->required();
    norm->add_option("--out-defs", n_out_defs, "fresh-name definitions output")
        ->required();

    // --- verbalize ---
    auto* verb = app.add_subcommand("verbalize", "Render concepts as text");
    std::string v_in, v_labels, v_defs, v_out;
    verb->add_option("--in", v_in, "ontology file")->required();
    verb->add_option("--labels", v_labels, "label TSV")->required();
    verb->add_option("--defs", v_defs, "fresh-name definitions TSV");
    verb->add_option("--out", v_out, "output TSV")->required();

    // --- infer-closure ---
    auto* infer = app.add_subcommand("infer-closure", "Entailed NF1 axioms");
    std::string i_axioms, i_out;
    bool i_include_asserted = false;
    infer->add_option("--axioms", i_axioms, "normalized axioms file")->required();
    infer->add_option("--out", i_out, "output file")->required();
    infer->add_flag("--include-asserted", i_include_asserted,
                    "keep asserted NF1 axioms in the output");

    // --- split ---
    auto* split = app.add_subcommand("split", "80/10/10 split of normalized axioms");
    std::string s_axioms, s_train, s_valid, s_test;
    uint64_t s_seed = 42;
    split->add_option("--axioms", s_axioms, "normalized axioms file")->required();
    split->add_option("--seed", s_seed, "shuffle seed");
    split->add_option("--out-train", s_train, "train output")->required();
    split->add_option("--out-valid", s_valid, "validation output")->required();
    split->add_option("--out-test", s_test, "test output")->required();

    // --- train ---
    auto* train = app.add_subcommand("train", "Train an embedding model");
    std::string t_axioms, t_defs, t_labels, t_config, t_out;
    train->add_option("--axioms", t_axioms, "normalized training axioms")->required();
    train->add_option("--defs", t_defs, "fresh-name definitions TSV");
    train->add_option("--labels", t_labels, "label TSV")->required();
    train->add_option("--config", t_config, "key=value config file")->required();
    train->add_option("--out", t_out, "checkpoint output")->required();

    // --- evaluate ---
    auto* eval = app.add_subcommand("evaluate", "Ranking evaluation");
    std::string e_task, e_ckpt, e_labels, e_train, e_defs, e_test, e_valid;
    std::string e_lambda = "auto", e_ranks_out;
    bool e_filtered = false;
    eval->add_option("--task", e_task, "prediction|inference")
        ->required()
        ->check(CLI::IsMember({"prediction", "inference"}));
    eval->add_option("--ckpt", e_ckpt, "checkpoint")->required();
    eval->add_option("--labels", e_labels, "label TSV")->required();
    eval->add_option("--train", e_train, "training axioms (background)");
    eval->add_option("--defs", e_defs, "fresh-name definitions TSV");
    eval->add_option("--test", e_test,
                     "test axioms; for --task inference defaults to the closure "
                     "of --train");
    eval->add_option("--valid", e_valid, "validation axioms for --lambda auto");
    eval->add_option("--lambda", e_lambda, "'auto' or a number (default auto)");
    eval->add_flag("--filtered", e_filtered, "drop known positives from rankings");
    eval->add_option("--ranks-out", e_ranks_out, "per-axiom rank TSV");

    // --- score ---
    auto* score = app.add_subcommand("score", "Score one subsumption");
    std::string sc_ckpt, sc_emb, sc_labels, sc_defs, sc_sub, sc_sup;
    std::string sc_lambda = "0";
    int sc_dim = 64;
    double sc_kappa = 1.0;
    score->add_option("--ckpt", sc_ckpt, "checkpoint");
    score->add_option("--embeddings", sc_emb, "external embedding TSV");
    score->add_option("--dim", sc_dim, "embedding dimension (with --embeddings)");
    score->add_option("--kappa", sc_kappa, "curvature (with --embeddings)");
    score->add_option("--labels", sc_labels, "label TSV")->required();
    score->add_option("--defs", sc_defs, "fresh-name definitions TSV");
    score->add_option("--sub", sc_sub, "subclass expression")->required();
    score->add_option("--sup", sc_sup, "superclass expression")->required();
    score->add_option("--lambda", sc_lambda,
                      "number, or 'auto' for the checkpoint value");

    // --- transfer ---
    auto* transfer = app.add_subcommand("transfer", "Zero-shot transfer evaluation");
    std::string tr_ckpt, tr_target, tr_lambda = "auto", tr_ranks_out;
    bool tr_filtered = false;
    transfer->add_option("--ckpt", tr_ckpt, "checkpoint")->required();
    transfer->add_option("--target", tr_target, "target dataset directory")
        ->required();
    transfer->add_option("--lambda", tr_lambda,
                         "'auto' (checkpoint value) or a number");
    transfer->add_flag("--filtered", tr_filtered,
                       "drop known positives from rankings");
    transfer->add_option("--ranks-out", tr_ranks_out, "per-axiom rank TSV");

    CLI11_PARSE(app, argc, argv);

    if (norm->parsed()) {
        if (!n_labels.empty()) {
            LabelsHandle l;
            check(ont_labels_read(n_labels.c_str(), &l.p));
        }
        OntologyHandle o;
        check(ont_ontology_read(n_in.c_str(), &o.p));
        NormalizedHandle n;
        check(ont_normalize(o.p, &n.p));
        char *axioms = nullptr, *defs = nullptr;
        check(ont_normalized_axioms_text(n.p, &axioms));
        check(ont_normalized_defs_text(n.p, &defs));
        write_text(n_out_axioms, take(axioms));
        write_text(n_out_defs, take(defs));
        return 0;
    }

    if (verb->parsed()) {
        OntologyHandle o;
        check(ont_ontology_read(v_in.c_str(), &o.p));
        LabelsHandle l;
        check(ont_labels_read(v_labels.c_str(), &l.p));
        DefsHandle d;
        if (!v_defs.empty()) check(ont_defs_read(v_defs.c_str(), &d.p));
        char* tsv = nullptr;
        check(ont_verbalize(o.p, l.p, d.p, &tsv));
        write_text(v_out, take(tsv));
        return 0;
    }

    if (infer->parsed()) {
        NormalizedHandle n;
        check(ont_normalized_read(i_axioms.c_str(), nullptr, &n.p));
        char* text = nullptr;
        check(ont_infer_closure(n.p, i_include_asserted ? 0 : 1, &text));
        write_text(i_out, take(text));
        return 0;
    }

    if (split->parsed()) {
        NormalizedHandle n;
        check(ont_normalized_read(s_axioms.c_str(), nullptr, &n.p));
        char *tr = nullptr, *va = nullptr, *te = nullptr;
        check(ont_split(n.p, s_seed, &tr, &va, &te));
        write_text(s_train, take(tr));
        write_text(s_valid, take(va));
        write_text(s_test, take(te));
        return 0;
    }

    if (train->parsed()) {
        NormalizedHandle n;
        check(ont_normalized_read(t_axioms.c_str(),
                                  t_defs.empty() ? nullptr : t_defs.c_str(), &n.p));
        LabelsHandle l;
        check(ont_labels_read(t_labels.c_str(), &l.p));
        std::ifstream cfg_in(t_config, std::ios::binary);
        if (!cfg_in) {
            std::cerr << "error: cannot open file: " << t_config << "\n";
            return 2;
        }
        std::stringstream cfg;
        cfg << cfg_in.rdbuf();
        ModelHandle m;
        check(ont_train(n.p, l.p, cfg.str().c_str(), &m.p));
        check(ont_model_save(m.p, t_out.c_str()));
        double lambda = 0;
        check(ont_model_lambda(m.p, &lambda));
        std::cout << "checkpoint  " << t_out << "\n"
                  << "lambda      " << lambda << "\n";
        return 0;
    }

    if (eval->parsed()) {
        ModelHandle m;
        check(ont_model_load(e_ckpt.c_str(), &m.p));
        LabelsHandle l;
        check(ont_labels_read(e_labels.c_str(), &l.p));
        NormalizedHandle background;
        if (!e_train.empty())
            check(ont_normalized_read(e_train.c_str(),
                                      e_defs.empty() ? nullptr : e_defs.c_str(),
                                      &background.p));
        NormalizedHandle test;
        if (!e_test.empty()) {
            check(ont_normalized_read(e_test.c_str(),
                                      e_defs.empty() ? nullptr : e_defs.c_str(),
                                      &test.p));
        } else if (e_task == "inference" && background.p) {
            char* closure = nullptr;
            check(ont_infer_closure(background.p, 1, &closure));
            check(ont_normalized_parse(take(closure).c_str(), nullptr, &test.p));
        } else {
            std::cerr << "error: --test is required (or --train with --task "
                         "inference)\n";
            return 3;
        }
        bool is_auto = false;
        double lambda = parse_lambda(e_lambda, is_auto);
        if (is_auto && !e_valid.empty()) {
            NormalizedHandle valid;
            check(ont_normalized_read(e_valid.c_str(),
                                      e_defs.empty() ? nullptr : e_defs.c_str(),
                                      &valid.p));
            check(ont_select_lambda(m.p, l.p, valid.p, e_filtered ? 1 : 0, &lambda));
        } // else NaN -> checkpoint lambda
        char* report = nullptr;
        check(ont_evaluate(m.p, l.p, background.p, test.p, lambda,
                           e_filtered ? 1 : 0, &report));
        print_report(take(report), e_ranks_out);
        return 0;
    }

    if (score->parsed()) {
        if (sc_ckpt.empty() == sc_emb.empty()) {
            std::cerr << "error: exactly one of --ckpt / --embeddings is required\n";
            return 3;
        }
        LabelsHandle l;
        check(ont_labels_read(sc_labels.c_str(), &l.p));
        DefsHandle d;
        if (!sc_defs.empty()) check(ont_defs_read(sc_defs.c_str(), &d.p));
        bool is_auto = false;
        double lambda = parse_lambda(sc_lambda, is_auto);
        double value = 0;
        if (!sc_ckpt.empty()) {
            ModelHandle m;
            check(ont_model_load(sc_ckpt.c_str(), &m.p));
            check(ont_score(m.p, l.p, d.p, sc_sub.c_str(), sc_sup.c_str(), lambda,
                            &value));
        } else {
            if (is_auto) {
                std::cerr << "error: --lambda auto needs --ckpt\n";
                return 3;
            }
            check(ont_score_external(sc_emb.c_str(), sc_dim, sc_kappa, l.p, d.p,
                                     sc_sub.c_str(), sc_sup.c_str(), lambda,
                                     &value));
        }
        std::printf("%.17g\n", value);
        return 0;
    }

    if (transfer->parsed()) {
        ModelHandle m;
        check(ont_model_load(tr_ckpt.c_str(), &m.p));
        bool is_auto = false;
        double lambda = parse_lambda(tr_lambda, is_auto);
        char* report = nullptr;
        check(ont_transfer(m.p, tr_target.c_str(), lambda, tr_filtered ? 1 : 0,
                           &report));
        print_report(take(report), tr_ranks_out);
        return 0;
    }

    return 0;
}
