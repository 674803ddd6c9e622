#ifndef ONT_ENCODER_HPP
#define ONT_ENCODER_HPP

#include <map>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace ont {

// Lowercase, split on whitespace and punctuation (any non-alphanumeric).
std::vector<std::string> tokenize(const std::string& s);

struct TokenVocab {
    std::vector<std::string> tokens; // sorted, unique
    std::map<std::string, int> index;
    int oov_index = 0; // == tokens.size(); its row is trainable too

    static TokenVocab build(const std::vector<std::string>& texts);
    int lookup(const std::string& token) const;
    int rows() const { return static_cast<int>(tokens.size()) + 1; }
};

// Mean-pooled token encoder with a shared affine map into the
// pre-projection space. Stands in for a sentence encoder.
struct EncoderParams {
    int d_tok = 32;
    int dim = 64;
    std::vector<double> token_table; // rows x d_tok, row-major
    std::vector<double> output_w;    // dim x d_tok, row-major
    std::vector<double> output_b;    // dim

    static EncoderParams init(const TokenVocab& vocab, int d_tok, int dim, Rng& rng);
    const double* row(int token_id) const;
};

struct EncoderGrads {
    std::vector<double> token_table;
    std::vector<double> output_w;
    std::vector<double> output_b;

    static EncoderGrads zeros_like(const EncoderParams& p);
};

struct EncodeTrace {
    std::vector<int> token_ids;
    std::vector<double> pooled; // d_tok
    std::vector<double> pre;    // dim, before projection
    PoincarePoint point;
};

EncodeTrace encode_trace(const std::string& text, const EncoderParams& p,
                         const TokenVocab& vocab, const BallSpec& spec);

PoincarePoint encode(const std::string& text, const EncoderParams& p,
                     const TokenVocab& vocab, const BallSpec& spec);

// Accumulates dL/d(params) given dL/d(point coords).
void encode_backward(const EncodeTrace& t, const std::vector<double>& gpoint,
                     const EncoderParams& p, const BallSpec& spec, EncoderGrads& g);

// Mean-pooled token rows only (used for role labels feeding the role head).
struct PoolTrace {
    std::vector<int> token_ids;
    std::vector<double> pooled; // d_tok
};
PoolTrace pool_trace(const std::string& text, const EncoderParams& p,
                     const TokenVocab& vocab);
void pool_backward(const PoolTrace& t, const std::vector<double>& gpooled,
                   const EncoderParams& p, EncoderGrads& g);

// Uniform interface for scoring paths.
class ConceptEncoder {
public:
    virtual ~ConceptEncoder() = default;
    virtual PoincarePoint embed_text(const std::string& text) const = 0;
};

class TrainableEncoder final : public ConceptEncoder {
public:
    TrainableEncoder(const TokenVocab* vocab, const EncoderParams* params,
                     const BallSpec* spec)
        : vocab_(vocab), params_(params), spec_(spec) {}
    PoincarePoint embed_text(const std::string& text) const override {
        return encode(text, *params_, *vocab_, *spec_);
    }

private:
    const TokenVocab* vocab_;
    const EncoderParams* params_;
    const BallSpec* spec_;
};

// Precomputed sentence embeddings keyed by the FNV-1a 64-bit hash of the
// verbalization, hex-encoded. TSV rows: hash<TAB>v1<TAB>...<TAB>v_dim.
class ExternalEncoder final : public ConceptEncoder {
public:
    ExternalEncoder(BallSpec spec) : spec_(spec) { spec_.validate(); }
    static ExternalEncoder parse(const std::string& tsv, const BallSpec& spec);
    static ExternalEncoder load(const std::string& path, const BallSpec& spec);
    PoincarePoint embed_text(const std::string& text) const override;

private:
    BallSpec spec_;
    std::map<std::string, std::vector<double>> rows_;
};

std::string verbalization_hash(const std::string& text);

} // namespace ont

#endif
