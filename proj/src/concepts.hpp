#ifndef ONT_CONCEPTS_HPP
#define ONT_CONCEPTS_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ont {

struct OntError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : OntError {
    using OntError::OntError;
};

struct ParseError : OntError {
    ParseError(size_t line, const std::string& msg)
        : OntError("line " + std::to_string(line) + ": " + msg), line(line) {}
    size_t line;
};

// Opaque entity identifier. Comparison is exact text equality.
struct Iri {
    std::string value;

    Iri() = default;
    explicit Iri(std::string v) : value(std::move(v)) {}

    bool operator==(const Iri& o) const { return value == o.value; }
    bool operator!=(const Iri& o) const { return value != o.value; }
    bool operator<(const Iri& o) const { return value < o.value; }
};

// Reserved names for top/bottom when they occupy an atomic position.
inline const Iri& top_iri() {
    static const Iri i("owl:Thing");
    return i;
}
inline const Iri& bottom_iri() {
    static const Iri i("owl:Nothing");
    return i;
}

enum class ConceptKind { Top, Bottom, Atomic, Conjunction, Existential };

class Concept;
using ConceptRef = std::shared_ptr<const Concept>;

// Immutable EL concept tree: T | _|_ | A | C n D | Er.C.
// Nominals {a} are folded into atomic concepts at parse time.
class Concept {
public:
    static ConceptRef top();
    static ConceptRef bottom();
    static ConceptRef atomic(Iri name);
    static ConceptRef conj(ConceptRef left, ConceptRef right);
    static ConceptRef some(Iri role, ConceptRef filler);

    ConceptKind kind() const { return kind_; }
    bool is_atomicish() const {
        return kind_ == ConceptKind::Top || kind_ == ConceptKind::Bottom ||
               kind_ == ConceptKind::Atomic;
    }
    // Atomic name, or the reserved IRI for Top/Bottom.
    const Iri& name() const;
    const Iri& role() const;
    const ConceptRef& left() const { return left_; }
    const ConceptRef& right() const { return right_; }
    const ConceptRef& filler() const { return left_; }

    size_t hash() const { return hash_; }
    bool equals(const Concept& o) const;
    // Total structural order; used wherever deterministic iteration matters.
    int compare(const Concept& o) const;

private:
    Concept(ConceptKind k, Iri iri, ConceptRef l, ConceptRef r);

    ConceptKind kind_;
    Iri iri_;        // Atomic name or Existential role
    ConceptRef left_;  // Conjunction left / Existential filler
    ConceptRef right_; // Conjunction right
    size_t hash_;
};

inline bool operator==(const ConceptRef& a, const Concept& b) { return a->equals(b); }

struct ConceptRefEq {
    bool operator()(const ConceptRef& a, const ConceptRef& b) const {
        return a->equals(*b);
    }
};
struct ConceptRefHash {
    size_t operator()(const ConceptRef& c) const { return c->hash(); }
};
struct ConceptRefLess {
    bool operator()(const ConceptRef& a, const ConceptRef& b) const {
        return a->compare(*b) < 0;
    }
};

struct Axiom {
    ConceptRef sub;
    ConceptRef sup;
};

// Functional-syntax rendering (the same subset the parser accepts).
std::string to_functional(const Concept& c);
std::string to_functional(const Axiom& a);

} // namespace ont

#endif
