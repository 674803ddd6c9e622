#ifndef ONT_ONTOLOGY_HPP
#define ONT_ONTOLOGY_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "concepts.hpp"

namespace ont {

// Finite list of TBox axioms with cached signature.
struct Ontology {
    std::vector<Axiom> axioms;
    std::set<Iri> atomic_concepts; // includes individuals folded from ObjectOneOf
    std::set<Iri> roles;

    void add(Axiom a);
    void recompute_signature();
};

// Entity labels feeding verbalization.
struct LabelMap {
    std::map<Iri, std::string> concept_labels;
    std::map<Iri, std::string> role_labels;
};

// Parse one concept expression in the functional-syntax subset:
//   ObjectIntersectionOf(X Y ...)   (n-ary input left-folded to binary)
//   ObjectSomeValuesFrom(r X)
//   ObjectOneOf(a)                  (treated as an atomic concept)
//   owl:Thing | owl:Nothing | bare IRI
ConceptRef parse_concept(const std::string& source);

// One `SubClassOf(X Y)` axiom per line; `#` starts a comment line.
Ontology parse_ontology(const std::string& source);
Ontology read_ontology(const std::string& path);

std::string to_functional(const Ontology& o);
void write_ontology(const Ontology& o, const std::string& path);

// TSV lines `IRI<TAB>kind<TAB>label`, kind in {concept, role}.
// Later duplicates overwrite earlier ones.
LabelMap parse_labels(const std::string& source);
LabelMap read_labels(const std::string& path);

// Every Existential and Conjunction subtree occurring anywhere in the
// ontology, deduplicated structurally.
struct SubExpressions {
    std::vector<ConceptRef> existentials; // sorted structurally
    std::vector<ConceptRef> conjunctions;
};
SubExpressions collect_subexpressions(const Ontology& o);

// Symbols occurring in one concept tree.
void collect_signature(const Concept& c, std::set<Iri>& concepts, std::set<Iri>& roles);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace ont

#endif
