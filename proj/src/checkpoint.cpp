#include "checkpoint.hpp"

#include <json.hpp>

namespace ont {

namespace {

using nlohmann::json;

constexpr int kVersion = 1;

json config_to_json(const TrainConfig& c) {
    return json{{"alpha", c.alpha},
                {"beta", c.beta},
                {"lr", c.lr},
                {"n_neg", c.n_neg},
                {"epochs", c.epochs},
                {"batch_size", c.batch_size},
                {"seed", c.seed},
                {"dim", c.dim},
                {"d_tok", c.d_tok},
                {"kappa", c.kappa},
                {"eps", c.eps},
                {"fresh_negatives", c.fresh_negatives},
                {"lambda_grid", c.lambda_grid},
                {"valid_axioms", c.valid_axioms}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.alpha = j.at("alpha");
    c.beta = j.at("beta");
    c.lr = j.at("lr");
    c.n_neg = j.at("n_neg");
    c.epochs = j.at("epochs");
    c.batch_size = j.at("batch_size");
    c.seed = j.at("seed");
    c.dim = j.at("dim");
    c.d_tok = j.at("d_tok");
    c.kappa = j.at("kappa");
    c.eps = j.at("eps");
    c.fresh_negatives = j.at("fresh_negatives");
    c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    c.valid_axioms = j.at("valid_axioms");
    return c;
}

} // namespace

std::string checkpoint_to_json(const Model& m) {
    json j;
    j["version"] = kVersion;
    j["spec"] = {{"dim", m.spec.dim}, {"kappa", m.spec.kappa}, {"eps", m.spec.eps}};
    j["config"] = config_to_json(m.cfg);
    j["vocab"] = m.vocab.tokens;
    j["token_table"] = m.enc.token_table;
    j["output_w"] = m.enc.output_w;
    j["output_b"] = m.enc.output_b;
    j["head_w"] = m.head_w;
    j["head_b"] = m.head_b;
    j["lambda"] = m.lambda;
    std::vector<std::string> pool;
    pool.reserve(m.candidate_pool.size());
    for (const auto& i : m.candidate_pool) pool.push_back(i.value);
    j["candidate_pool"] = pool;
    return j.dump(2);
}

Model checkpoint_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (j.at("version").get<int>() != kVersion)
        throw OntError("unsupported checkpoint version");
    Model m;
    m.spec.dim = j.at("spec").at("dim");
    m.spec.kappa = j.at("spec").at("kappa");
    m.spec.eps = j.at("spec").at("eps");
    m.spec.validate();
    m.cfg = config_from_json(j.at("config"));
    m.vocab.tokens = j.at("vocab").get<std::vector<std::string>>();
    for (size_t i = 0; i < m.vocab.tokens.size(); ++i)
        m.vocab.index[m.vocab.tokens[i]] = static_cast<int>(i);
    m.vocab.oov_index = static_cast<int>(m.vocab.tokens.size());
    m.enc.d_tok = m.cfg.d_tok;
    m.enc.dim = m.cfg.dim;
    m.enc.token_table = j.at("token_table").get<std::vector<double>>();
    m.enc.output_w = j.at("output_w").get<std::vector<double>>();
    m.enc.output_b = j.at("output_b").get<std::vector<double>>();
    m.head_w = j.at("head_w").get<std::vector<double>>();
    m.head_b = j.at("head_b").get<std::vector<double>>();
    m.lambda = j.at("lambda");
    for (const auto& s : j.at("candidate_pool"))
        m.candidate_pool.emplace_back(s.get<std::string>());
    const size_t rows = m.vocab.tokens.size() + 1;
    if (m.enc.token_table.size() != rows * m.enc.d_tok ||
        m.enc.output_w.size() != static_cast<size_t>(m.enc.dim) * m.enc.d_tok ||
        m.enc.output_b.size() != static_cast<size_t>(m.enc.dim) ||
        m.head_b.size() != static_cast<size_t>(m.spec.dim / 2 + 1) ||
        m.head_w.size() != m.head_b.size() * m.enc.d_tok)
        throw OntError("checkpoint parameter shapes inconsistent");
    return m;
}

void save_checkpoint(const Model& m, const std::string& path) {
    write_file(path, checkpoint_to_json(m) + "\n");
}

Model load_checkpoint(const std::string& path) {
    return checkpoint_from_json(read_file(path));
}

} // namespace ont
