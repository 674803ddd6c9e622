#include "encoder.hpp"

#include "ontology.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace ont {

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

TokenVocab TokenVocab::build(const std::vector<std::string>& texts) {
    std::set<std::string> uniq;
    for (const auto& t : texts)
        for (auto& tok : tokenize(t)) uniq.insert(tok);
    TokenVocab v;
    v.tokens.assign(uniq.begin(), uniq.end());
    for (size_t i = 0; i < v.tokens.size(); ++i)
        v.index[v.tokens[i]] = static_cast<int>(i);
    v.oov_index = static_cast<int>(v.tokens.size());
    return v;
}

int TokenVocab::lookup(const std::string& token) const {
    auto it = index.find(token);
    return it == index.end() ? oov_index : it->second;
}

EncoderParams EncoderParams::init(const TokenVocab& vocab, int d_tok, int dim, Rng& rng) {
    EncoderParams p;
    p.d_tok = d_tok;
    p.dim = dim;
    p.token_table.resize(static_cast<size_t>(vocab.rows()) * d_tok);
    p.output_w.resize(static_cast<size_t>(dim) * d_tok);
    p.output_b.resize(dim);
    for (auto& x : p.token_table) x = uniform_real(rng, -0.05, 0.05);
    for (auto& x : p.output_w) x = uniform_real(rng, -0.05, 0.05);
    for (auto& x : p.output_b) x = uniform_real(rng, -0.05, 0.05);
    return p;
}

const double* EncoderParams::row(int token_id) const {
    return token_table.data() + static_cast<size_t>(token_id) * d_tok;
}

EncoderGrads EncoderGrads::zeros_like(const EncoderParams& p) {
    EncoderGrads g;
    g.token_table.assign(p.token_table.size(), 0.0);
    g.output_w.assign(p.output_w.size(), 0.0);
    g.output_b.assign(p.output_b.size(), 0.0);
    return g;
}

PoolTrace pool_trace(const std::string& text, const EncoderParams& p,
                     const TokenVocab& vocab) {
    PoolTrace t;
    for (auto& tok : tokenize(text)) t.token_ids.push_back(vocab.lookup(tok));
    t.pooled.assign(p.d_tok, 0.0);
    if (!t.token_ids.empty()) {
        // Sum in sorted-id order so the mean is bitwise permutation-invariant.
        std::vector<int> order(t.token_ids);
        std::sort(order.begin(), order.end());
        for (int id : order) {
            const double* r = p.row(id);
            for (int j = 0; j < p.d_tok; ++j) t.pooled[j] += r[j];
        }
        const double inv = 1.0 / static_cast<double>(t.token_ids.size());
        for (double& x : t.pooled) x *= inv;
    }
    return t;
}

void pool_backward(const PoolTrace& t, const std::vector<double>& gpooled,
                   const EncoderParams& p, EncoderGrads& g) {
    if (t.token_ids.empty()) return;
    const double inv = 1.0 / static_cast<double>(t.token_ids.size());
    for (int id : t.token_ids) {
        double* gr = g.token_table.data() + static_cast<size_t>(id) * p.d_tok;
        for (int j = 0; j < p.d_tok; ++j) gr[j] += inv * gpooled[j];
    }
}

EncodeTrace encode_trace(const std::string& text, const EncoderParams& p,
                         const TokenVocab& vocab, const BallSpec& spec) {
    if (p.dim != spec.dim) throw OntError("encoder/ball dimension mismatch");
    PoolTrace pt = pool_trace(text, p, vocab);
    EncodeTrace t;
    t.token_ids = std::move(pt.token_ids);
    t.pooled = std::move(pt.pooled);
    t.pre.assign(p.dim, 0.0);
    for (int i = 0; i < p.dim; ++i) {
        double z = p.output_b[i];
        const double* wrow = p.output_w.data() + static_cast<size_t>(i) * p.d_tok;
        for (int j = 0; j < p.d_tok; ++j) z += wrow[j] * t.pooled[j];
        t.pre[i] = z;
    }
    t.point = project_to_ball(t.pre, spec);
    return t;
}

PoincarePoint encode(const std::string& text, const EncoderParams& p,
                     const TokenVocab& vocab, const BallSpec& spec) {
    return encode_trace(text, p, vocab, spec).point;
}

void encode_backward(const EncodeTrace& t, const std::vector<double>& gpoint,
                     const EncoderParams& p, const BallSpec& spec, EncoderGrads& g) {
    std::vector<double> gpre(p.dim, 0.0);
    project_backward(t.pre, spec, gpoint, &gpre);
    std::vector<double> gpooled(p.d_tok, 0.0);
    for (int i = 0; i < p.dim; ++i) {
        g.output_b[i] += gpre[i];
        const double* wrow = p.output_w.data() + static_cast<size_t>(i) * p.d_tok;
        double* gwrow = g.output_w.data() + static_cast<size_t>(i) * p.d_tok;
        for (int j = 0; j < p.d_tok; ++j) {
            gwrow[j] += gpre[i] * t.pooled[j];
            gpooled[j] += gpre[i] * wrow[j];
        }
    }
    PoolTrace pt{t.token_ids, t.pooled};
    pool_backward(pt, gpooled, p, g);
}

std::string verbalization_hash(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

ExternalEncoder ExternalEncoder::parse(const std::string& tsv, const BallSpec& spec) {
    ExternalEncoder e(spec);
    std::istringstream in(tsv);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        if (!std::getline(ls, key, '\t')) throw ParseError(lineno, "missing key");
        std::vector<double> v;
        std::string field;
        while (std::getline(ls, field, '\t')) v.push_back(std::stod(field));
        if (static_cast<int>(v.size()) != spec.dim)
            throw ParseError(lineno, "embedding dimension mismatch: got " +
                                         std::to_string(v.size()) + ", want " +
                                         std::to_string(spec.dim));
        e.rows_[key] = std::move(v);
    }
    return e;
}

ExternalEncoder ExternalEncoder::load(const std::string& path, const BallSpec& spec) {
    return parse(read_file(path), spec);
}

PoincarePoint ExternalEncoder::embed_text(const std::string& text) const {
    auto it = rows_.find(verbalization_hash(text));
    if (it == rows_.end())
        throw OntError("no external embedding for verbalization: " + text);
    return project_to_ball(it->second, spec_);
}

} // namespace ont
