// Acceptance gate: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "eval.hpp"
#include "oracles.hpp"
#include "reasoner.hpp"
#include "trainer.hpp"

using namespace ont;

namespace {

int g_failures = 0;

void run(const char* name, const std::function<bool()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    std::printf("%s  %-34s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name, secs,
                err.empty() ? "" : " exception: ", err.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PoincarePoint random_point(Rng& rng, const BallSpec& spec, double spread = 1.5) {
    std::vector<double> v(spec.dim);
    for (double& x : v) x = uniform_real(rng, -spread, spread);
    return project_to_ball(v, spec);
}

RotationAngles random_angles(Rng& rng, int dim) {
    RotationAngles t;
    for (int i = 0; i < dim / 2; ++i)
        t.angles.push_back(uniform_real(rng, -3.14159, 3.14159));
    return t;
}

// --- 1. rotation isometry ---

bool rotation_isometry() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    const double kappas[] = {0.25, 1.0, 4.0};
    for (int i = 0; i < 1000; ++i) {
        BallSpec spec{8, kappas[i % 3], 1e-5};
        PoincarePoint x = random_point(rng, spec);
        PoincarePoint y = random_point(rng, spec);
        RotationAngles theta = random_angles(rng, spec.dim);
        PoincarePoint rx = hrotate(theta, x);
        PoincarePoint ry = hrotate(theta, y);
        double d = hdist(x, y);
        if (std::abs(hdist(rx, ry) - d) > 1e-9 * (1 + d)) return false;
        double n = hnorm(x);
        if (std::abs(hnorm(rx) - n) > 1e-9 * (1 + n)) return false;
    }
    return elapsed(t0) < 5.0;
}

// --- 2. score/rank invariance under f_r with k_r = 1 ---

bool score_rank_invariance() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(102);
    BallSpec spec{8, 1.0, 1e-5};
    std::vector<PoincarePoint> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(random_point(rng, spec));
    RoleTransform rt{random_angles(rng, spec.dim), 1.0};
    std::vector<PoincarePoint> moved;
    for (const auto& p : pts) moved.push_back(apply_role(rt, p));

    for (int li = 0; li <= 10; ++li) {
        double lambda = li / 10.0;
        for (size_t i = 0; i < pts.size(); ++i) {
            size_t truth = (i + 1) % pts.size();
            double st = score_points(pts[i], pts[truth], lambda);
            double st2 = score_points(moved[i], moved[truth], lambda);
            size_t rank = 1, rank2 = 1;
            for (size_t j = 0; j < pts.size(); ++j) {
                if (j == i || j == truth) continue;
                double s = score_points(pts[i], pts[j], lambda);
                double s2 = score_points(moved[i], moved[j], lambda);
                if (std::abs(s - s2) > 1e-9) return false;
                if (s >= st) ++rank;
                if (s2 >= st2) ++rank2;
            }
            if (rank != rank2) return false;
        }
    }
    return elapsed(t0) < 5.0;
}

// --- 3. closed-form geometry ---

bool closed_form_geometry() {
    Rng rng(103);
    const double kappas[] = {0.25, 1.0, 4.0};
    for (int i = 0; i < 1000; ++i) {
        BallSpec spec{6, kappas[i % 3], 1e-5};
        PoincarePoint x = random_point(rng, spec);
        double sq = 0;
        for (double c : x.coords) sq += c * c;
        double en = std::sqrt(sq);
        double expect = (2.0 / std::sqrt(spec.kappa)) * std::atanh(std::sqrt(spec.kappa) * en);
        double got = hdist(origin_point(spec), x);
        if (std::abs(got - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
            return false;
    }
    BallSpec unit{2, 1.0, 1e-5};
    PoincarePoint p{unit, {0.5, 0.0}};
    PoincarePoint s = hscale(2.0, p);
    return std::abs(s.coords[0] - 0.8) <= 1e-12 && std::abs(s.coords[1]) <= 1e-12;
}

// --- 4. gradient correctness on random micro-configurations ---

bool gradients_match() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(104);
    const std::vector<std::string> words = {"ax", "bo", "cu", "de", "el",
                                            "fi", "go", "hi", "ju", "ko"};
    const double step = 1e-4;
    int configs = 0;
    for (int trial = 0; trial < 110; ++trial) {
        Model m;
        int dim = 2 * static_cast<int>(1 + uniform_index(rng, 4)); // 2..8
        int d_tok = 2 + static_cast<int>(uniform_index(rng, 3));   // 2..4
        m.spec = BallSpec{dim, 1.0, 1e-5};
        m.cfg.dim = dim;
        m.cfg.d_tok = d_tok;
        m.cfg.alpha = uniform_real(rng, 0.3, 3.0);
        m.cfg.beta = uniform_real(rng, 0.1, 1.0);
        m.cfg.n_neg = 1;

        std::vector<std::string> texts;
        for (const auto& w : words) texts.push_back(w);
        m.vocab = TokenVocab::build(texts);
        m.enc = EncoderParams::init(m.vocab, d_tok, dim, rng);
        // Larger-than-init weights so points are spread out in the ball.
        for (double& x : m.enc.token_table) x = uniform_real(rng, -0.6, 0.6);
        for (double& x : m.enc.output_w) x = uniform_real(rng, -0.6, 0.6);
        for (double& x : m.enc.output_b) x = uniform_real(rng, -0.3, 0.3);
        int angles = m.num_angles();
        m.head_w.assign(static_cast<size_t>(angles + 1) * d_tok, 0.0);
        m.head_b.assign(angles + 1, 0.0);
        for (double& x : m.head_w) x = uniform_real(rng, -0.3, 0.3);
        for (double& x : m.head_b) x = uniform_real(rng, -0.3, 0.3);
        m.head_b[angles] = uniform_real(rng, 0.7, 1.3);

        std::vector<std::string> neg_texts = {"ax", "de bo", "el", "go ko"};
        std::vector<TrainItem> batch;
        TrainItem h{TrainItem::Type::Hierarchy, "ax bo", "cu", "", ""};
        TrainItem r{TrainItem::Type::Role, "something that fi some de", "de", "", "fi"};
        TrainItem c{TrainItem::Type::Conjunction, "ax and el", "ax", "el", ""};
        batch = {h, r, c};
        std::vector<ItemNegatives> negs;
        for (const auto& item : batch)
            negs.push_back(sample_item_negatives(item, rng, neg_texts.size(), m.cfg));

        auto f = [&] { return total_loss(m, batch, negs, neg_texts, nullptr); };
        ModelGrads g = ModelGrads::zeros_like(m);
        total_loss(m, batch, negs, neg_texts, &g);

        const std::pair<std::vector<double>*, std::vector<double>*> arrays[] = {
            {&m.enc.token_table, &g.enc.token_table},
            {&m.enc.output_w, &g.enc.output_w},
            {&m.enc.output_b, &g.enc.output_b},
            {&m.head_w, &g.head_w},
            {&m.head_b, &g.head_b},
        };
        double f0 = f();
        for (const auto& [param, grad] : arrays) {
            for (size_t i = 0; i < param->size(); i += 2) {
                double* cell = &(*param)[i];
                double saved = *cell;
                *cell = saved + step;
                double hi = f();
                *cell = saved - step;
                double lo = f();
                *cell = saved;
                double fd = (hi - lo) / (2 * step);
                // Skip points where the hinge kinks inside the stencil:
                // the two one-sided slopes then disagree.
                double fp = (hi - f0) / step, fm = (f0 - lo) / step;
                if (std::abs(fp - fm) >
                    1e-3 * std::max({1.0, std::abs(fp), std::abs(fm)}))
                    continue;
                if (!oracles::grad_matches((*grad)[i], fd, 1e-4)) return false;
            }
        }
        ++configs;
    }
    return configs >= 100 && elapsed(t0) < 60.0;
}

// --- 5. normalizer soundness ---

std::set<std::pair<Iri, Iri>> entailed_over(const std::vector<NormalizedAxiom>& ax,
                                            const std::set<Iri>& sig) {
    std::set<std::pair<Iri, Iri>> out;
    for (const auto& a : entailed_nf1(ax, sig, false)) out.insert({a.sub, a.sup});
    return out;
}

bool normalizer_soundness() {
    Rng rng(105);
    for (int trial = 0; trial < 20; ++trial) {
        size_t n_ax = 5 + uniform_index(rng, 26); // <= 30
        Ontology o = oracles::random_ontology(rng, n_ax, 3, 7, 2);
        std::set<Iri> sig = o.atomic_concepts;

        std::vector<size_t> fwd, rev;
        for (size_t i = 0; i < o.axioms.size(); ++i) fwd.push_back(i);
        rev.assign(fwd.rbegin(), fwd.rend());
        NormalizedOntology n1 = normalize(o, &fwd);
        NormalizedOntology n2 = normalize(o, &rev);
        if (entailed_over(n1.axioms, sig) != entailed_over(n2.axioms, sig))
            return false;
    }

    // Person n Eteach.Class <= Teacher normalizes to exactly three axioms.
    Ontology ex;
    ex.add(Axiom{parse_concept("ObjectIntersectionOf(Person "
                               "ObjectSomeValuesFrom(teach Class))"),
                 parse_concept("Teacher")});
    NormalizedOntology n = normalize(ex);
    std::set<std::string> got;
    for (const auto& a : n.axioms) got.insert(to_functional(a));
    std::set<std::string> want = {
        "SubClassOf(_N1 ObjectSomeValuesFrom(teach Class))",
        "SubClassOf(ObjectSomeValuesFrom(teach Class) _N1)",
        "SubClassOf(ObjectIntersectionOf(Person _N1) Teacher)",
    };
    return got == want;
}

// --- 6. reasoner vs oracle ---

bool reasoner_oracle() {
    Rng rng(106);
    for (int trial = 0; trial < 20; ++trial) {
        size_t n_atoms = 4 + uniform_index(rng, 10);
        std::vector<Iri> atoms;
        for (size_t i = 0; i < n_atoms; ++i) atoms.emplace_back("A" + std::to_string(i));
        std::set<std::pair<Iri, Iri>> edges;
        std::vector<NormalizedAxiom> ax;
        size_t n_ax = 5 + uniform_index(rng, 46); // <= 50
        for (size_t i = 0; i < n_ax; ++i) {
            Iri a = atoms[uniform_index(rng, atoms.size())];
            Iri b = atoms[uniform_index(rng, atoms.size())];
            if (a == b || !edges.insert({a, b}).second) continue;
            NormalizedAxiom na;
            na.kind = NfKind::NF1;
            na.sub = a;
            na.sup = b;
            ax.push_back(na);
        }
        std::set<Iri> sig(atoms.begin(), atoms.end());
        if (entailed_over(ax, sig) != oracles::transitive_closure(edges)) return false;
    }
    // {X <= Er.A, A <= B, Er.B <= Y} derives X <= Y via R3, R1, R4.
    auto mono = parse_normalized_axioms("SubClassOf(X ObjectSomeValuesFrom(r A))\n"
                                        "SubClassOf(A B)\n"
                                        "SubClassOf(ObjectSomeValuesFrom(r B) Y)");
    return saturate(mono).holds(Iri("X"), Iri("Y"));
}

// --- 7. metric arithmetic ---

bool metric_arithmetic() {
    RankingReport r = compute_metrics({1, 2, 4});
    return std::abs(r.mrr - 7.0 / 12.0) <= 1e-9 &&
           std::abs(r.mr - 7.0 / 3.0) <= 1e-9 &&
           std::abs(r.hits1 - 1.0 / 3.0) <= 1e-9;
}

// --- 8. end-to-end toy run ---

struct ToyData {
    Ontology o;
    LabelMap labels;
};

ToyData build_toy() {
    ToyData t;
    const std::vector<std::string> roots = {"animal", "plant", "machine"};
    const std::vector<std::string> l1_mods = {"small", "large", "wild",  "green", "dry",
                                              "tall",  "fast",  "heavy", "slow"};
    const std::vector<std::string> l2_mods = {
        "old",  "young", "red",  "blue",  "soft", "hard", "wet",  "cold",
        "hot",  "dark",  "pale", "fine",  "flat", "wide", "thin", "deep",
        "loud", "calm",  "bare", "plain"};

    auto iri_of = [](const std::string& label) {
        std::string s = label;
        for (char& c : s)
            if (c == ' ') c = '_';
        return Iri(s);
    };
    auto add_concept = [&](const std::string& label) {
        Iri iri = iri_of(label);
        t.labels.concept_labels[iri] = label;
        return iri;
    };
    auto sub = [&](const Iri& a, const Iri& b) {
        t.o.add(Axiom{Concept::atomic(a), Concept::atomic(b)});
    };

    std::vector<Iri> root_iris, l1_iris;
    for (const auto& r : roots) root_iris.push_back(add_concept(r));
    // 9 level-1 concepts, 3 per root; 45 plain subsumptions in total.
    for (size_t i = 0; i < l1_mods.size(); ++i) {
        Iri parent = root_iris[i % 3];
        Iri child = add_concept(l1_mods[i] + " " + roots[i % 3]);
        l1_iris.push_back(child);
        sub(child, parent);
    }
    // 36 level-2 concepts, 4 per level-1 parent.
    for (size_t p = 0; p < l1_iris.size(); ++p) {
        for (size_t c = 0; c < 4; ++c) {
            const std::string& mod = l2_mods[(p * 4 + c) % l2_mods.size()];
            Iri child = add_concept(mod + " " + l1_mods[p] + " " + roots[p % 3]);
            sub(child, l1_iris[p]);
        }
    }
    // Roles and 10 existential axioms.
    Iri eats("eats"), part("part");
    t.labels.role_labels[eats] = "eats";
    t.labels.role_labels[part] = "is part of";
    for (size_t i = 0; i < 10; ++i) {
        Iri role = (i % 2 == 0) ? eats : part;
        t.o.add(Axiom{Concept::atomic(l1_iris[i % l1_iris.size()]),
                      Concept::some(role, Concept::atomic(root_iris[i % 3]))});
    }
    // 5 conjunction axioms.
    for (size_t i = 0; i < 5; ++i)
        t.o.add(Axiom{Concept::conj(Concept::atomic(l1_iris[i]),
                                    Concept::atomic(l1_iris[i + 3])),
                      Concept::atomic(root_iris[i % 3])});
    return t;
}

struct ToyRun {
    std::string checkpoint_json;
    std::string report;
    double mrr = 0;
    double loss_first = 0, loss_last = 0;
    size_t pool_size = 0;
};

ToyRun run_toy_once() {
    ToyData t = build_toy();
    NormalizedOntology n = normalize(t.o);

    std::vector<NormalizedAxiom> nf1, rest;
    for (const auto& a : n.axioms)
        (a.kind == NfKind::NF1 ? nf1 : rest).push_back(a);
    SplitResult split = split_dataset(nf1, 4);

    NormalizedOntology train_o;
    train_o.defs = n.defs;
    train_o.axioms = split.train;
    train_o.axioms.insert(train_o.axioms.end(), rest.begin(), rest.end());

    TrainConfig cfg;
    cfg.dim = 16;
    cfg.d_tok = 8;
    cfg.epochs = 200;
    cfg.batch_size = 16;
    cfg.lr = 0.03;
    cfg.alpha = 0.5;
    cfg.beta = 0.5;
    cfg.n_neg = 5;
    cfg.seed = 4;
    TrainResult r = train(train_o, t.labels, cfg);

    TrainableEncoder enc(&r.model.vocab, &r.model.enc, &r.model.spec);
    Evaluator ev(enc, t.labels, n.defs, r.model.candidate_pool);
    double lambda = ev.select_lambda(split.valid, cfg.lambda_grid);
    RankingReport rep = ev.evaluate(split.test, lambda);

    ToyRun out;
    out.checkpoint_json = checkpoint_to_json(r.model);
    out.mrr = rep.mrr;
    out.loss_first = r.epoch_mean_loss.front();
    out.loss_last = r.epoch_mean_loss.back();
    out.pool_size = r.model.candidate_pool.size();
    std::ostringstream rs;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", lambda, rep.mrr, rep.mr);
    rs << buf;
    for (size_t rank : rep.ranks) rs << " " << rank;
    out.report = rs.str();
    return out;
}

bool toy_end_to_end() {
    auto t0 = std::chrono::steady_clock::now();
    ToyRun a = run_toy_once();
    ToyRun b = run_toy_once();
    if (a.checkpoint_json != b.checkpoint_json || a.report != b.report) {
        std::printf("      toy: nondeterministic run\n");
        return false;
    }
    double harmonic = 0;
    for (size_t i = 1; i <= a.pool_size; ++i) harmonic += 1.0 / static_cast<double>(i);
    double random_mrr = harmonic / static_cast<double>(a.pool_size);
    std::printf("      toy: mrr=%.4f random=%.4f loss %0.4f -> %0.4f pool=%zu\n",
                a.mrr, random_mrr, a.loss_first, a.loss_last, a.pool_size);
    if (a.mrr < 5.0 * random_mrr) return false;
    if (!(a.loss_last < 0.5 * a.loss_first)) return false;
    return elapsed(t0) < 60.0;
}

// --- 9. reference corpus sizes (only when the data directory is supplied) ---

size_t count_nf1(const std::string& path) {
    size_t n = 0;
    for (const auto& a : parse_normalized_axioms(read_file(path)))
        if (a.kind == NfKind::NF1) ++n;
    return n;
}

bool reference_corpus_sizes() {
    const char* dir = std::getenv("ONT_GALEN_DIR");
    if (dir == nullptr) {
        std::printf("      (skipped: ONT_GALEN_DIR not set)\n");
        return true;
    }
    std::string d(dir);
    if (count_nf1(d + "/train.txt") != 25610) return false;
    if (count_nf1(d + "/valid.txt") != 3200) return false;
    if (count_nf1(d + "/test.txt") != 3203) return false;

    NormalizedOntology all = read_normalized(d + "/axioms.txt");
    std::vector<Iri> sig = all.atomic_signature();
    std::set<Iri> sig_set(sig.begin(), sig.end());
    return entailed_nf1(all.axioms, sig_set, true).size() == 335002;
}

} // namespace

int main() {
    run("1/9 rotation isometry", rotation_isometry);
    run("2/9 score and rank invariance", score_rank_invariance);
    run("3/9 closed-form geometry", closed_form_geometry);
    run("4/9 gradient correctness", gradients_match);
    run("5/9 normalizer soundness", normalizer_soundness);
    run("6/9 reasoner vs oracle", reasoner_oracle);
    run("7/9 metric arithmetic", metric_arithmetic);
    run("8/9 end-to-end toy run", toy_end_to_end);
    run("9/9 reference corpus sizes", reference_corpus_sizes);
    if (g_failures == 0) std::printf("ALL CRITERIA PASSED\n");
    return g_failures;
}
