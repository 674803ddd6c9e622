#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "checkpoint.hpp"
#include "oracles.hpp"
#include "trainer.hpp"

using namespace ont;

namespace {

PoincarePoint pt(const BallSpec& s, std::vector<double> c) {
    return PoincarePoint{s, std::move(c)};
}

// Point at hyperbolic norm h from the origin along +x (kappa = 1).
PoincarePoint at_norm(const BallSpec& s, double h) {
    std::vector<double> c(s.dim, 0.0);
    c[0] = std::tanh(h / 2.0);
    return pt(s, c);
}

const char* kLabels = "A\tconcept\talpha\n"
                      "B\tconcept\tbeta\n"
                      "C\tconcept\tgamma\n"
                      "D\tconcept\tdelta\n"
                      "r\trole\trelates to\n";

NormalizedOntology tiny_ontology() {
    Ontology o = parse_ontology("SubClassOf(A B)\n"
                                "SubClassOf(ObjectIntersectionOf(A B) C)\n"
                                "SubClassOf(A ObjectSomeValuesFrom(r B))\n"
                                "SubClassOf(ObjectSomeValuesFrom(r D) C)");
    return normalize(o);
}

TrainConfig tiny_config() {
    TrainConfig cfg;
    cfg.dim = 4;
    cfg.d_tok = 3;
    cfg.epochs = 1;
    cfg.batch_size = 2;
    cfg.lr = 0.01;
    cfg.seed = 5;
    return cfg;
}

} // namespace

TEST_CASE("config text round trip and validation") {
    TrainConfig cfg;
    CHECK(cfg.alpha == 3.0);
    CHECK(cfg.beta == 0.5);
    CHECK(cfg.lr == 1e-5);
    CHECK(cfg.n_neg == 1);
    CHECK(cfg.epochs == 1);
    CHECK(cfg.batch_size == 128);
    CHECK(cfg.dim == 64);
    CHECK(cfg.lambda_grid.size() == 11);

    TrainConfig parsed = parse_train_config("alpha=2.5\n# comment\n"
                                            "lambda_grid=0,0.5,1\n"
                                            "dim = 8 # inline comment\n"
                                            "fresh_negatives=false\n");
    CHECK(parsed.alpha == 2.5);
    CHECK(parsed.lambda_grid == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(parsed.dim == 8);
    CHECK(!parsed.fresh_negatives);

    TrainConfig back = parse_train_config(train_config_to_text(parsed));
    CHECK(back.alpha == parsed.alpha);
    CHECK(back.lambda_grid == parsed.lambda_grid);
    CHECK(back.fresh_negatives == parsed.fresh_negatives);

    CHECK_THROWS_AS(parse_train_config("no_such_key=1\n"), ParseError);
    CHECK_THROWS_AS(parse_train_config("alpha\n"), ParseError);
    CHECK_THROWS_AS(parse_train_config("alpha=abc\n"), ParseError);
    CHECK_THROWS_AS(parse_train_config("n_neg=0\n"), OntError);
    CHECK_THROWS_AS(parse_train_config("dim=7\n"), OntError);
    CHECK_THROWS_AS(parse_train_config("lambda_grid=0,2\n"), OntError);
}

TEST_CASE("apply_role anchors") {
    BallSpec s{2, 1.0, 1e-5};
    PoincarePoint x = pt(s, {0.5, 0.0});

    RoleTransform ident;
    ident.theta.angles = {0.0};
    ident.k = 1.0;
    PoincarePoint same = apply_role(ident, x);
    CHECK(same.coords[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(same.coords[1] == doctest::Approx(0.0).epsilon(1e-12));

    RoleTransform rt;
    rt.theta.angles = {3.14159265358979323846 / 2};
    rt.k = 2.0;
    PoincarePoint y = apply_role(rt, x);
    CHECK(y.coords[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(y.coords[1] == doctest::Approx(0.8).epsilon(1e-12));

    // k = 1: isometry for random pairs.
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> a(2), b(2);
        for (double& v : a) v = uniform_real(rng, -0.6, 0.6);
        for (double& v : b) v = uniform_real(rng, -0.6, 0.6);
        PoincarePoint pa = pt(s, a), pb = pt(s, b);
        RoleTransform t;
        t.theta.angles = {uniform_real(rng, -3.0, 3.0)};
        t.k = 1.0;
        double d = hdist(pa, pb);
        CHECK(std::abs(hdist(apply_role(t, pa), apply_role(t, pb)) - d) <=
              1e-9 * (1 + d));
    }
}

TEST_CASE("loss anchors") {
    BallSpec s{2, 1.0, 1e-5};
    PoincarePoint o = origin_point(s);
    PoincarePoint x = pt(s, {0.5, 0.0}); // hnorm = ln 3

    // contrastive
    PoincarePoint far = at_norm(s, 5.0);
    CHECK(loss_contrastive(x, x, far, 3.0) == 0.0);
    CHECK(loss_contrastive(x, x, x, 3.0) == 3.0);
    PoincarePoint near = at_norm(s, 0.5); // hdist(origin, near) = 0.5
    CHECK(loss_contrastive(o, x, near, 0.5) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-9));

    // centripetal
    CHECK(loss_centripetal(x, x, 0.5) == 0.5);
    CHECK(loss_centripetal(x, o, 0.5) == 0.0);
    CHECK(loss_centripetal(at_norm(s, 0.2), at_norm(s, 1.0), 0.5) ==
          doctest::Approx(1.3).epsilon(1e-9));

    // hierarchy = contrastive + centripetal
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> a(2), b(2), c(2);
        for (double* v : {a.data(), b.data(), c.data()})
            for (int k = 0; k < 2; ++k) v[k] = uniform_real(rng, -0.6, 0.6);
        PoincarePoint pa = pt(s, a), pb = pt(s, b), pc = pt(s, c);
        CHECK(loss_hierarchy(pa, pb, pc, 3.0, 0.5) ==
              loss_contrastive(pa, pb, pc, 3.0) + loss_centripetal(pa, pb, 0.5));
    }
}

TEST_CASE("negative sampling") {
    std::vector<ConceptRef> pool{Concept::atomic(Iri("only"))};
    Rng rng(1);
    for (int i = 0; i < 5; ++i)
        CHECK(sample_negative(rng, pool)->name().value == "only");

    std::vector<ConceptRef> empty;
    CHECK_THROWS_AS(sample_negative(rng, empty), OntError);

    // Reproducibility.
    std::vector<ConceptRef> ten;
    for (int i = 0; i < 10; ++i)
        ten.push_back(Concept::atomic(Iri("c" + std::to_string(i))));
    Rng r1(99), r2(99);
    for (int i = 0; i < 50; ++i)
        CHECK(sample_negative(r1, ten)->name() == sample_negative(r2, ten)->name());

    // Chi-square uniformity, 10k draws over 10 candidates, p > 0.001.
    Rng r3(7);
    std::map<std::string, int> counts;
    for (int i = 0; i < 10000; ++i) ++counts[sample_negative(r3, ten)->name().value];
    double stat = 0;
    for (const auto& c : ten) {
        double obs = counts[c->name().value];
        stat += (obs - 1000.0) * (obs - 1000.0) / 1000.0;
    }
    CHECK(stat < oracles::kChi2Crit9Dof);
}

TEST_CASE("build_train_items: one hierarchy term per axiom plus deduplicated "
          "complex-concept terms") {
    NormalizedOntology n = tiny_ontology();
    LabelMap labels = parse_labels(kLabels);
    std::vector<TrainItem> items = build_train_items(n, labels);
    size_t hier = 0, role = 0, conj = 0;
    for (const auto& it : items) {
        if (it.type == TrainItem::Type::Hierarchy) ++hier;
        if (it.type == TrainItem::Type::Role) ++role;
        if (it.type == TrainItem::Type::Conjunction) ++conj;
    }
    CHECK(hier == n.axioms.size());
    CHECK(role == 2); // Er.B and Er.D, each once
    CHECK(conj == 1); // A n B
    for (const auto& it : items)
        if (it.type == TrainItem::Type::Role) CHECK(it.role_label == "relates to");
}

TEST_CASE("item_loss equals a hand-composed recomputation") {
    NormalizedOntology n = tiny_ontology();
    LabelMap labels = parse_labels(kLabels);
    TrainConfig cfg = tiny_config();
    cfg.lr = 0.0;
    Model m = train(n, labels, cfg).model;

    std::vector<std::string> neg_texts;
    for (const Iri& c : m.candidate_pool)
        neg_texts.push_back(verbalize(*Concept::atomic(c), labels, n.defs));

    std::vector<TrainItem> items = build_train_items(n, labels);
    Rng rng(3);
    for (const TrainItem& it : items) {
        ItemNegatives negs = sample_item_negatives(it, rng, neg_texts.size(), cfg);
        double got = item_loss(m, it, negs, neg_texts, nullptr);

        auto embed = [&](const std::string& text) {
            return encode(text, m.enc, m.vocab, m.spec);
        };
        PoincarePoint n1 = embed(neg_texts[negs.first[0]]);
        double want = 0;
        if (it.type == TrainItem::Type::Hierarchy) {
            want = loss_hierarchy(embed(it.a), embed(it.b), n1, cfg.alpha, cfg.beta);
        } else if (it.type == TrainItem::Type::Role) {
            PoincarePoint ex = embed(it.a);
            PoincarePoint f = apply_role(m.role_transform(it.role_label),
                                         embed(it.b));
            PoincarePoint n2 = embed(neg_texts[negs.second[0]]);
            want = 0.5 * (loss_hierarchy(ex, f, n1, cfg.alpha, cfg.beta) +
                          loss_hierarchy(f, ex, n2, cfg.alpha, cfg.beta));
        } else {
            PoincarePoint cd = embed(it.a);
            PoincarePoint n2 = embed(neg_texts[negs.second[0]]);
            want = 0.5 * (loss_hierarchy(cd, embed(it.b), n1, cfg.alpha, cfg.beta) +
                          loss_hierarchy(cd, embed(it.c), n2, cfg.alpha, cfg.beta));
        }
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("coincident points floor the role/conjunction loss at beta") {
    // With a zeroed encoder every text embeds to the origin, and f_r is the
    // identity, so each hierarchy direction contributes exactly beta
    // (contrastive margin alpha=0 keeps that term at zero).
    LabelMap labels = parse_labels("A\tconcept\tsame\n"
                                   "B\tconcept\tsame\n"
                                   "r\trole\tsame\n");
    Ontology o = parse_ontology("SubClassOf(A ObjectSomeValuesFrom(r B))");
    NormalizedOntology n = normalize(o);
    TrainConfig cfg = tiny_config();
    cfg.alpha = 0.0;
    cfg.lr = 0.0;
    Model m = train(n, labels, cfg).model;
    // Force the exact identity transform and an all-zero encoder so every
    // text lands on the origin (the texts themselves differ).
    std::fill(m.head_w.begin(), m.head_w.end(), 0.0);
    std::fill(m.head_b.begin(), m.head_b.end(), 0.0);
    m.head_b[m.num_angles()] = 1.0;
    std::fill(m.enc.token_table.begin(), m.enc.token_table.end(), 0.0);
    std::fill(m.enc.output_w.begin(), m.enc.output_w.end(), 0.0);
    std::fill(m.enc.output_b.begin(), m.enc.output_b.end(), 0.0);

    std::vector<std::string> neg_texts{"same"};
    std::vector<TrainItem> items = build_train_items(n, labels);
    for (const TrainItem& it : items) {
        if (it.type == TrainItem::Type::Hierarchy) continue;
        ItemNegatives negs;
        negs.first = {0};
        negs.second = {0};
        CHECK(item_loss(m, it, negs, neg_texts, nullptr) ==
              doctest::Approx(cfg.beta).epsilon(1e-9));
    }
}

TEST_CASE("total_loss: empty batch, additivity") {
    NormalizedOntology n = tiny_ontology();
    LabelMap labels = parse_labels(kLabels);
    TrainConfig cfg = tiny_config();
    cfg.lr = 0.0;
    Model m = train(n, labels, cfg).model;
    std::vector<std::string> neg_texts;
    for (const Iri& c : m.candidate_pool)
        neg_texts.push_back(verbalize(*Concept::atomic(c), labels, n.defs));

    CHECK(total_loss(m, {}, {}, neg_texts, nullptr) == 0.0);

    std::vector<TrainItem> items = build_train_items(n, labels);
    Rng rng(8);
    std::vector<ItemNegatives> negs;
    double sum = 0;
    for (const auto& it : items) {
        negs.push_back(sample_item_negatives(it, rng, neg_texts.size(), cfg));
        sum += item_loss(m, it, negs.back(), neg_texts, nullptr);
    }
    CHECK(total_loss(m, items, negs, neg_texts, nullptr) ==
          doctest::Approx(sum).epsilon(1e-12));
    CHECK_THROWS_AS(total_loss(m, items, {}, neg_texts, nullptr), OntError);
}

TEST_CASE("gradients of total_loss match finite differences (micro-configs)") {
    Rng rng(21);
    LabelMap labels = parse_labels(kLabels);
    NormalizedOntology n = tiny_ontology();
    for (int trial = 0; trial < 10; ++trial) {
        TrainConfig cfg = tiny_config();
        cfg.seed = 100 + trial;
        cfg.lr = 0.0;
        Model m = train(n, labels, cfg).model;
        std::vector<std::string> neg_texts;
        for (const Iri& c : m.candidate_pool)
            neg_texts.push_back(verbalize(*Concept::atomic(c), labels, n.defs));
        std::vector<TrainItem> items = build_train_items(n, labels);
        std::vector<ItemNegatives> negs;
        for (const auto& it : items)
            negs.push_back(sample_item_negatives(it, rng, neg_texts.size(), cfg));

        ModelGrads g = ModelGrads::zeros_like(m);
        total_loss(m, items, negs, neg_texts, &g);
        auto value = [&] { return total_loss(m, items, negs, neg_texts, nullptr); };
        const double f0 = value();
        const double step = 1e-4;

        for (auto [param, grad] :
             {std::pair{&m.enc.token_table, &g.enc.token_table},
              std::pair{&m.enc.output_w, &g.enc.output_w},
              std::pair{&m.enc.output_b, &g.enc.output_b},
              std::pair{&m.head_w, &g.head_w}, std::pair{&m.head_b, &g.head_b}}) {
            for (size_t i = 0; i < param->size(); i += 3) {
                double* cell = &(*param)[i];
                const double saved = *cell;
                *cell = saved + step;
                double hi = value();
                *cell = saved - step;
                double lo = value();
                *cell = saved;
                // A hinge kink inside the stencil makes the one-sided slopes
                // disagree; the central difference is meaningless there.
                double fp = (hi - f0) / step, fm = (f0 - lo) / step;
                if (std::abs(fp - fm) >
                    1e-3 * std::max({1.0, std::abs(fp), std::abs(fm)}))
                    continue;
                CHECK(oracles::grad_matches((*grad)[i], (hi - lo) / (2 * step)));
            }
        }
    }
}

TEST_CASE("training determinism and lr=0 leaves parameters at init") {
    NormalizedOntology n = tiny_ontology();
    LabelMap labels = parse_labels(kLabels);
    TrainConfig cfg = tiny_config();
    cfg.epochs = 3;

    TrainResult a = train(n, labels, cfg);
    TrainResult b = train(n, labels, cfg);
    CHECK(checkpoint_to_json(a.model) == checkpoint_to_json(b.model));
    CHECK(a.epoch_mean_loss == b.epoch_mean_loss);

    cfg.lr = 0.0;
    Model frozen = train(n, labels, cfg).model;
    Rng rng(cfg.seed);
    EncoderParams fresh = EncoderParams::init(frozen.vocab, cfg.d_tok, cfg.dim, rng);
    CHECK(frozen.enc.token_table == fresh.token_table);
    CHECK(frozen.enc.output_w == fresh.output_w);
    CHECK(frozen.enc.output_b == fresh.output_b);
    CHECK(frozen.head_b[frozen.num_angles()] == 1.0);
}

TEST_CASE("mean epoch loss falls on a chain ontology") {
    std::string axioms, labels_tsv;
    for (int i = 0; i < 10; ++i) {
        axioms += "SubClassOf(C" + std::to_string(i) + " C" + std::to_string(i + 1) +
                  ")\n";
    }
    for (int i = 0; i <= 10; ++i)
        labels_tsv += "C" + std::to_string(i) + "\tconcept\tnode level " +
                      std::to_string(i) + "\n";
    NormalizedOntology n;
    n.axioms = parse_normalized_axioms(axioms);
    LabelMap labels = parse_labels(labels_tsv);

    TrainConfig cfg = tiny_config();
    cfg.dim = 8;
    cfg.d_tok = 8;
    cfg.epochs = 150;
    cfg.lr = 0.02;
    cfg.alpha = 1.0;
    cfg.beta = 0.3;
    TrainResult r = train(n, labels, cfg);
    REQUIRE(r.epoch_mean_loss.size() == 150);
    CHECK(r.epoch_mean_loss.back() < 0.5 * r.epoch_mean_loss.front());
}

TEST_CASE("checkpoint round trip is bitwise stable") {
    NormalizedOntology n = tiny_ontology();
    LabelMap labels = parse_labels(kLabels);
    Model m = train(n, labels, tiny_config()).model;
    m.lambda = 0.3;
    std::string json = checkpoint_to_json(m);
    Model back = checkpoint_from_json(json);
    CHECK(checkpoint_to_json(back) == json);
    CHECK(back.lambda == 0.3);
    CHECK(back.candidate_pool == m.candidate_pool);
    // Loaded model reproduces embeddings exactly.
    PoincarePoint p1 = encode("alpha and beta", m.enc, m.vocab, m.spec);
    PoincarePoint p2 = encode("alpha and beta", back.enc, back.vocab, back.spec);
    CHECK(p1.coords == p2.coords);

    CHECK_THROWS_AS(checkpoint_from_json("{\"version\": 99}"), OntError);
}
