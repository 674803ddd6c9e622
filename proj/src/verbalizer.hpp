#ifndef ONT_VERBALIZER_HPP
#define ONT_VERBALIZER_HPP

#include <string>

#include "normalizer.hpp"
#include "ontology.hpp"

namespace ont {

// Compositional natural-language rendering:
//   V(A) = label(A), V(T) = "thing", V(_|_) = "nothing",
//   V(C n D) = "V(C) and V(D)",
//   V(Er.C)  = "something that V(r) some V(C)".
// Fresh names resolve through their definitions. Label casing is kept
// verbatim. Output is trimmed and single-spaced.
std::string verbalize(const Concept& c, const LabelMap& labels, const DefinitionMap& defs);

std::string verbalize_role(const Iri& r, const LabelMap& labels);

} // namespace ont

#endif
