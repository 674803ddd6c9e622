#ifndef ONT_NORMALIZER_HPP
#define ONT_NORMALIZER_HPP

#include <map>
#include <optional>
#include <vector>

#include "ontology.hpp"

namespace ont {

enum class NfKind { NF1, NF2, NF3, NF4 };

// One axiom in normal form. Field use per kind:
//   NF1: sub <= sup
//   NF2: sub n sub2 <= sup
//   NF3: sub <= Erole.filler
//   NF4: Erole.filler <= sup
struct NormalizedAxiom {
    NfKind kind;
    Iri sub;
    Iri sub2;
    Iri role;
    Iri filler;
    Iri sup;

    ConceptRef sub_concept() const;
    ConceptRef sup_concept() const;
    bool operator==(const NormalizedAxiom& o) const;
};

NfKind axiom_nf_kind(const NormalizedAxiom& a);

std::string to_functional(const NormalizedAxiom& a);

// Fresh name -> the complex concept it abbreviates. Insertion-ordered so
// each definition only references earlier fresh names.
struct DefinitionMap {
    std::vector<std::pair<Iri, ConceptRef>> entries;
    std::map<Iri, ConceptRef> by_name;

    void add(Iri name, ConceptRef def);
    const ConceptRef* find(const Iri& name) const;
    bool contains(const Iri& name) const { return by_name.count(name) != 0; }
};

struct NormalizedOntology {
    std::vector<NormalizedAxiom> axioms;
    DefinitionMap defs;

    // Atomic concepts occurring anywhere in the normalized axioms,
    // sorted; this is the negative-sampling / candidate pool.
    std::vector<Iri> atomic_signature() const;
    std::vector<Iri> role_signature() const;
};

// Fresh names are `_N1, _N2, ...`, numbered by a left-to-right, innermost-
// first traversal of the axiom list in the given processing order (identity
// by default; a permutation is accepted so tests can vary naming order).
NormalizedOntology normalize(const Ontology& o,
                             const std::vector<size_t>* axiom_order = nullptr);

// Classify an arbitrary axiom; nullopt when not in any normal form.
std::optional<NormalizedAxiom> classify_normalized(const Axiom& a);

std::string to_functional(const NormalizedOntology& n);
std::string defs_to_tsv(const DefinitionMap& defs);
DefinitionMap parse_defs_tsv(const std::string& source);

// Reads a normalized-axiom file (and optional defs file).
NormalizedOntology read_normalized(const std::string& axioms_path,
                                   const std::string& defs_path = "");
std::vector<NormalizedAxiom> parse_normalized_axioms(const std::string& source);

} // namespace ont

#endif
