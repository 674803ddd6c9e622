#ifndef ONT_REASONER_HPP
#define ONT_REASONER_HPP

#include <map>
#include <set>
#include <vector>

#include "normalizer.hpp"

namespace ont {

// Completion-rule saturation over normalized axioms. S(A) holds the atomic
// subsumers of A; R(r) the derived role links between atomic concepts.
struct Saturation {
    std::map<Iri, std::set<Iri>> subsumers;           // S
    std::map<Iri, std::set<std::pair<Iri, Iri>>> links; // R

    const std::set<Iri>& of(const Iri& a) const;
    bool holds(const Iri& a, const Iri& b) const; // b in S(a), incl. init facts
};

// Least fixpoint of:
//   init S(A) >= {A, T}
//   R1: A' in S(A), A' <= B            => B in S(A)
//   R2: A1, A2 in S(A), A1 n A2 <= B   => B in S(A)
//   R3: A' in S(A), A' <= Er.B         => (A,B) in R(r)
//   R4: (A,B) in R(r), B' in S(B), Er.B' <= A' => A' in S(A)
Saturation saturate(const std::vector<NormalizedAxiom>& axioms);

// All entailed A <= B with A, B restricted to `signature`, excluding
// reflexive pairs and conclusions B = T. When `exclude_asserted` is set,
// asserted NF1 axioms are removed (building the inference test set).
std::vector<NormalizedAxiom> entailed_nf1(const std::vector<NormalizedAxiom>& axioms,
                                          const std::set<Iri>& signature,
                                          bool exclude_asserted);

} // namespace ont

#endif
