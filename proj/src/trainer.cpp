#include "trainer.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace ont {

void TrainConfig::validate() const {
    if (alpha < 0 || beta < 0) throw OntError("margins must be >= 0");
    if (!(lr >= 0)) throw OntError("lr must be >= 0");
    if (n_neg < 1) throw OntError("n_neg must be >= 1");
    if (epochs < 1) throw OntError("epochs must be >= 1");
    if (batch_size < 1) throw OntError("batch_size must be >= 1");
    if (d_tok < 1) throw OntError("d_tok must be >= 1");
    BallSpec{dim, kappa, eps}.validate();
    if (lambda_grid.empty()) throw OntError("lambda_grid must be nonempty");
    for (double l : lambda_grid)
        if (l < 0 || l > 1) throw OntError("lambda values must lie in [0,1]");
}

namespace {

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(std::stod(field));
    return out;
}

} // namespace

TrainConfig parse_train_config(const std::string& text) {
    TrainConfig cfg;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (blank) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
        auto strip = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        try {
            if (key == "alpha") cfg.alpha = std::stod(val);
            else if (key == "beta") cfg.beta = std::stod(val);
            else if (key == "lr") cfg.lr = std::stod(val);
            else if (key == "n_neg") cfg.n_neg = std::stoi(val);
            else if (key == "epochs") cfg.epochs = std::stoi(val);
            else if (key == "batch_size") cfg.batch_size = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "dim") cfg.dim = std::stoi(val);
            else if (key == "d_tok") cfg.d_tok = std::stoi(val);
            else if (key == "kappa") cfg.kappa = std::stod(val);
            else if (key == "eps") cfg.eps = std::stod(val);
            else if (key == "fresh_negatives") cfg.fresh_negatives = (val == "true" || val == "1");
            else if (key == "lambda_grid") cfg.lambda_grid = parse_grid(val);
            else if (key == "valid_axioms") cfg.valid_axioms = val;
            else throw ParseError(lineno, "unknown config key: " + key);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad value for " + key + ": " + val);
        }
    }
    cfg.validate();
    return cfg;
}

std::string train_config_to_text(const TrainConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "alpha=" << cfg.alpha << "\nbeta=" << cfg.beta << "\nlr=" << cfg.lr
        << "\nn_neg=" << cfg.n_neg << "\nepochs=" << cfg.epochs
        << "\nbatch_size=" << cfg.batch_size << "\nseed=" << cfg.seed
        << "\ndim=" << cfg.dim << "\nd_tok=" << cfg.d_tok << "\nkappa=" << cfg.kappa
        << "\neps=" << cfg.eps
        << "\nfresh_negatives=" << (cfg.fresh_negatives ? "true" : "false")
        << "\nlambda_grid=";
    for (size_t i = 0; i < cfg.lambda_grid.size(); ++i)
        out << (i ? "," : "") << cfg.lambda_grid[i];
    if (!cfg.valid_axioms.empty()) out << "\nvalid_axioms=" << cfg.valid_axioms;
    out << "\n";
    return out.str();
}

PoincarePoint apply_role(const RoleTransform& r, const PoincarePoint& v) {
    return hscale(r.k, hrotate(r.theta, v));
}

double loss_contrastive(const PoincarePoint& c, const PoincarePoint& d,
                        const PoincarePoint& d_neg, double alpha) {
    double pre = hdist(c, d) - hdist(c, d_neg) + alpha;
    return pre > 0 ? pre : 0.0;
}

double loss_centripetal(const PoincarePoint& c, const PoincarePoint& d, double beta) {
    double pre = hnorm(d) - hnorm(c) + beta;
    return pre > 0 ? pre : 0.0;
}

double loss_hierarchy(const PoincarePoint& c, const PoincarePoint& d,
                      const PoincarePoint& d_neg, double alpha, double beta) {
    return loss_contrastive(c, d, d_neg, alpha) + loss_centripetal(c, d, beta);
}

ConceptRef sample_negative(Rng& rng, const std::vector<ConceptRef>& candidates) {
    if (candidates.empty()) throw OntError("empty negative-sampling pool");
    return candidates[uniform_index(rng, candidates.size())];
}

RoleTransform Model::role_transform(const std::string& role_label) const {
    PoolTrace t = pool_trace(role_label, enc, vocab);
    const int m = num_angles();
    RoleTransform r;
    r.theta.angles.assign(m, 0.0);
    for (int i = 0; i <= m; ++i) {
        double v = head_b[i];
        const double* w = head_w.data() + static_cast<size_t>(i) * enc.d_tok;
        for (int j = 0; j < enc.d_tok; ++j) v += w[j] * t.pooled[j];
        if (i < m)
            r.theta.angles[i] = v;
        else
            r.k = v;
    }
    return r;
}

ModelGrads ModelGrads::zeros_like(const Model& m) {
    ModelGrads g;
    g.enc = EncoderGrads::zeros_like(m.enc);
    g.head_w.assign(m.head_w.size(), 0.0);
    g.head_b.assign(m.head_b.size(), 0.0);
    return g;
}

std::vector<TrainItem> build_train_items(const NormalizedOntology& o,
                                         const LabelMap& labels) {
    std::vector<TrainItem> items;
    for (const auto& ax : o.axioms) {
        TrainItem it;
        it.type = TrainItem::Type::Hierarchy;
        it.a = verbalize(*ax.sub_concept(), labels, o.defs);
        it.b = verbalize(*ax.sup_concept(), labels, o.defs);
        items.push_back(std::move(it));
    }
    // Deduplicated existential / conjunction types, in sorted order.
    std::set<std::pair<Iri, Iri>> exts; // (role, filler)
    std::set<std::pair<Iri, Iri>> conjs;
    for (const auto& ax : o.axioms) {
        if (ax.kind == NfKind::NF3 || ax.kind == NfKind::NF4)
            exts.insert({ax.role, ax.filler});
        else if (ax.kind == NfKind::NF2)
            conjs.insert({ax.sub, ax.sub2});
    }
    auto atom_of = [](const Iri& n) {
        if (n == top_iri()) return Concept::top();
        if (n == bottom_iri()) return Concept::bottom();
        return Concept::atomic(n);
    };
    for (const auto& [role, filler] : exts) {
        TrainItem it;
        it.type = TrainItem::Type::Role;
        ConceptRef f = atom_of(filler);
        it.a = verbalize(*Concept::some(role, f), labels, o.defs);
        it.b = verbalize(*f, labels, o.defs);
        it.role_label = verbalize_role(role, labels);
        items.push_back(std::move(it));
    }
    for (const auto& [l, r] : conjs) {
        TrainItem it;
        it.type = TrainItem::Type::Conjunction;
        ConceptRef cl = atom_of(l);
        ConceptRef cr = atom_of(r);
        it.a = verbalize(*Concept::conj(cl, cr), labels, o.defs);
        it.b = verbalize(*cl, labels, o.defs);
        it.c = verbalize(*cr, labels, o.defs);
        items.push_back(std::move(it));
    }
    return items;
}

ItemNegatives sample_item_negatives(const TrainItem& item, Rng& rng,
                                    size_t pool_size, const TrainConfig& cfg) {
    ItemNegatives n;
    for (int i = 0; i < cfg.n_neg; ++i) n.first.push_back(uniform_index(rng, pool_size));
    if (item.type != TrainItem::Type::Hierarchy) {
        if (cfg.fresh_negatives) {
            for (int i = 0; i < cfg.n_neg; ++i)
                n.second.push_back(uniform_index(rng, pool_size));
        } else {
            n.second = n.first;
        }
    }
    return n;
}

namespace {

// One hierarchy term with gradient weight w. Contrastive part is averaged
// over the negatives; centripetal is independent of them.
double hier_term(const PoincarePoint& pc, const PoincarePoint& pd,
                 const std::vector<const PoincarePoint*>& pnegs, double alpha,
                 double beta, double w, std::vector<double>* gc,
                 std::vector<double>* gd, std::vector<std::vector<double>*> gnegs) {
    const double inv = 1.0 / static_cast<double>(pnegs.size());
    double contrast = 0;
    for (size_t i = 0; i < pnegs.size(); ++i) {
        double pre = hdist(pc, pd) - hdist(pc, *pnegs[i]) + alpha;
        if (pre > 0) {
            contrast += pre * inv;
            if (gc || gd) hdist_backward(pc, pd, w * inv, gc, gd);
            if (gc || gnegs[i]) hdist_backward(pc, *pnegs[i], -w * inv, gc, gnegs[i]);
        }
    }
    double loss = contrast;
    double pre2 = hnorm(pd) - hnorm(pc) + beta;
    if (pre2 > 0) {
        loss += pre2;
        if (gd) hnorm_backward(pd, w, gd);
        if (gc) hnorm_backward(pc, -w, gc);
    }
    return loss;
}

struct NegSet {
    std::vector<EncodeTrace> traces;
    std::vector<std::vector<double>> grads;
    std::vector<const PoincarePoint*> points;
    std::vector<std::vector<double>*> gptrs;

    NegSet(const Model& m, const std::vector<size_t>& idx,
           const std::vector<std::string>& neg_texts, bool want_grads) {
        traces.reserve(idx.size());
        grads.resize(idx.size());
        for (size_t i = 0; i < idx.size(); ++i) {
            traces.push_back(encode_trace(neg_texts.at(idx[i]), m.enc, m.vocab, m.spec));
            if (want_grads) grads[i].assign(m.spec.dim, 0.0);
        }
        for (size_t i = 0; i < idx.size(); ++i) {
            points.push_back(&traces[i].point);
            gptrs.push_back(want_grads ? &grads[i] : nullptr);
        }
    }

    void backward(const Model& m, ModelGrads& g) {
        for (size_t i = 0; i < traces.size(); ++i)
            encode_backward(traces[i], grads[i], m.enc, m.spec, g.enc);
    }
};

} // namespace

double item_loss(const Model& m, const TrainItem& item, const ItemNegatives& negs,
                 const std::vector<std::string>& neg_texts, ModelGrads* grads) {
    const bool wg = grads != nullptr;
    const double alpha = m.cfg.alpha;
    const double beta = m.cfg.beta;

    if (item.type == TrainItem::Type::Hierarchy) {
        EncodeTrace tc = encode_trace(item.a, m.enc, m.vocab, m.spec);
        EncodeTrace td = encode_trace(item.b, m.enc, m.vocab, m.spec);
        NegSet ns(m, negs.first, neg_texts, wg);
        std::vector<double> gc, gd;
        if (wg) {
            gc.assign(m.spec.dim, 0.0);
            gd.assign(m.spec.dim, 0.0);
        }
        double loss = hier_term(tc.point, td.point, ns.points, alpha, beta, 1.0,
                                wg ? &gc : nullptr, wg ? &gd : nullptr, ns.gptrs);
        if (wg) {
            encode_backward(tc, gc, m.enc, m.spec, grads->enc);
            encode_backward(td, gd, m.enc, m.spec, grads->enc);
            ns.backward(m, *grads);
        }
        return loss;
    }

    if (item.type == TrainItem::Type::Role) {
        EncodeTrace tex = encode_trace(item.a, m.enc, m.vocab, m.spec);
        EncodeTrace tfl = encode_trace(item.b, m.enc, m.vocab, m.spec);
        PoolTrace rp = pool_trace(item.role_label, m.enc, m.vocab);
        const int ma = m.num_angles();
        RoleTransform rt;
        rt.theta.angles.assign(ma, 0.0);
        for (int i = 0; i <= ma; ++i) {
            double v = m.head_b[i];
            const double* w = m.head_w.data() + static_cast<size_t>(i) * m.enc.d_tok;
            for (int j = 0; j < m.enc.d_tok; ++j) v += w[j] * rp.pooled[j];
            if (i < ma)
                rt.theta.angles[i] = v;
            else
                rt.k = v;
        }
        PoincarePoint rotated = hrotate(rt.theta, tfl.point);
        PoincarePoint f = hscale(rt.k, rotated);

        NegSet n1(m, negs.first, neg_texts, wg);
        NegSet n2(m, negs.second, neg_texts, wg);
        std::vector<double> gex, gf;
        if (wg) {
            gex.assign(m.spec.dim, 0.0);
            gf.assign(m.spec.dim, 0.0);
        }
        double l1 = hier_term(tex.point, f, n1.points, alpha, beta, 0.5,
                              wg ? &gex : nullptr, wg ? &gf : nullptr, n1.gptrs);
        double l2 = hier_term(f, tex.point, n2.points, alpha, beta, 0.5,
                              wg ? &gf : nullptr, wg ? &gex : nullptr, n2.gptrs);
        double loss = 0.5 * (l1 + l2);
        if (wg) {
            std::vector<double> grot(m.spec.dim, 0.0), gfl(m.spec.dim, 0.0);
            std::vector<double> gtheta(ma, 0.0);
            double gk = 0;
            hscale_backward(rt.k, rotated, gf, &grot, &gk);
            hrotate_backward(rt.theta, tfl.point, grot, &gfl, &gtheta);
            // head parameters and role-label token rows
            std::vector<double> ghead(ma + 1, 0.0);
            for (int i = 0; i < ma; ++i) ghead[i] = gtheta[i];
            ghead[ma] = gk;
            std::vector<double> ge(m.enc.d_tok, 0.0);
            for (int i = 0; i <= ma; ++i) {
                grads->head_b[i] += ghead[i];
                const double* w = m.head_w.data() + static_cast<size_t>(i) * m.enc.d_tok;
                double* gw = grads->head_w.data() + static_cast<size_t>(i) * m.enc.d_tok;
                for (int j = 0; j < m.enc.d_tok; ++j) {
                    gw[j] += ghead[i] * rp.pooled[j];
                    ge[j] += ghead[i] * w[j];
                }
            }
            pool_backward(rp, ge, m.enc, grads->enc);
            encode_backward(tex, gex, m.enc, m.spec, grads->enc);
            encode_backward(tfl, gfl, m.enc, m.spec, grads->enc);
            n1.backward(m, *grads);
            n2.backward(m, *grads);
        }
        return loss;
    }

    // Conjunction: L = 1/2 (L_<(cd < c) + L_<(cd < d))
    EncodeTrace tcd = encode_trace(item.a, m.enc, m.vocab, m.spec);
    EncodeTrace tl = encode_trace(item.b, m.enc, m.vocab, m.spec);
    EncodeTrace tr = encode_trace(item.c, m.enc, m.vocab, m.spec);
    NegSet n1(m, negs.first, neg_texts, wg);
    NegSet n2(m, negs.second, neg_texts, wg);
    std::vector<double> gcd, gl, gr;
    if (wg) {
        gcd.assign(m.spec.dim, 0.0);
        gl.assign(m.spec.dim, 0.0);
        gr.assign(m.spec.dim, 0.0);
    }
    double l1 = hier_term(tcd.point, tl.point, n1.points, alpha, beta, 0.5,
                          wg ? &gcd : nullptr, wg ? &gl : nullptr, n1.gptrs);
    double l2 = hier_term(tcd.point, tr.point, n2.points, alpha, beta, 0.5,
                          wg ? &gcd : nullptr, wg ? &gr : nullptr, n2.gptrs);
    double loss = 0.5 * (l1 + l2);
    if (wg) {
        encode_backward(tcd, gcd, m.enc, m.spec, grads->enc);
        encode_backward(tl, gl, m.enc, m.spec, grads->enc);
        encode_backward(tr, gr, m.enc, m.spec, grads->enc);
        n1.backward(m, *grads);
        n2.backward(m, *grads);
    }
    return loss;
}

double total_loss(const Model& m, const std::vector<TrainItem>& batch,
                  const std::vector<ItemNegatives>& negs,
                  const std::vector<std::string>& neg_texts, ModelGrads* grads) {
    if (batch.size() != negs.size()) throw OntError("batch/negatives size mismatch");
    double loss = 0;
    for (size_t i = 0; i < batch.size(); ++i)
        loss += item_loss(m, batch[i], negs[i], neg_texts, grads);
    return loss;
}

namespace {

void sgd_step(std::vector<double>& p, const std::vector<double>& g, double lr) {
    for (size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
}

} // namespace

TrainResult train(const NormalizedOntology& o, const LabelMap& labels,
                  const TrainConfig& cfg) {
    cfg.validate();
    Model m;
    m.cfg = cfg;
    m.spec = BallSpec{cfg.dim, cfg.kappa, cfg.eps};
    m.candidate_pool = o.atomic_signature();
    if (m.candidate_pool.empty()) throw OntError("cannot train on an empty ontology");

    auto atom_of = [](const Iri& n) {
        if (n == top_iri()) return Concept::top();
        if (n == bottom_iri()) return Concept::bottom();
        return Concept::atomic(n);
    };
    std::vector<std::string> neg_texts;
    neg_texts.reserve(m.candidate_pool.size());
    for (const Iri& c : m.candidate_pool)
        neg_texts.push_back(verbalize(*atom_of(c), labels, o.defs));

    std::vector<TrainItem> items = build_train_items(o, labels);

    std::vector<std::string> all_texts = neg_texts;
    for (const auto& it : items) {
        all_texts.push_back(it.a);
        all_texts.push_back(it.b);
        if (!it.c.empty()) all_texts.push_back(it.c);
        if (!it.role_label.empty()) all_texts.push_back(it.role_label);
    }
    m.vocab = TokenVocab::build(all_texts);

    Rng rng(cfg.seed);
    m.enc = EncoderParams::init(m.vocab, cfg.d_tok, cfg.dim, rng);
    const int ma = m.num_angles();
    m.head_w.assign(static_cast<size_t>(ma + 1) * cfg.d_tok, 0.0);
    m.head_b.assign(ma + 1, 0.0);
    for (auto& x : m.head_w) x = uniform_real(rng, -0.01, 0.01);
    m.head_b[ma] = 1.0; // start from the identity transform

    TrainResult res;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::vector<size_t> order = shuffled_indices(rng, items.size());
        double epoch_loss = 0;
        size_t step = 0;
        for (size_t off = 0; off < order.size(); off += cfg.batch_size, ++step) {
            size_t end = std::min(order.size(), off + cfg.batch_size);
            ModelGrads g = ModelGrads::zeros_like(m);
            double batch_loss = 0;
            for (size_t i = off; i < end; ++i) {
                const TrainItem& it = items[order[i]];
                ItemNegatives negs =
                    sample_item_negatives(it, rng, m.candidate_pool.size(), cfg);
                batch_loss += item_loss(m, it, negs, neg_texts, &g);
            }
            if (!std::isfinite(batch_loss))
                throw OntError("non-finite loss at epoch " + std::to_string(epoch + 1) +
                               ", step " + std::to_string(step + 1));
            epoch_loss += batch_loss;
            sgd_step(m.enc.token_table, g.enc.token_table, cfg.lr);
            sgd_step(m.enc.output_w, g.enc.output_w, cfg.lr);
            sgd_step(m.enc.output_b, g.enc.output_b, cfg.lr);
            sgd_step(m.head_w, g.head_w, cfg.lr);
            sgd_step(m.head_b, g.head_b, cfg.lr);
        }
        res.epoch_mean_loss.push_back(items.empty() ? 0.0
                                                    : epoch_loss / items.size());
    }
    res.model = std::move(m);
    return res;
}

} // namespace ont
