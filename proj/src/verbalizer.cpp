#include "verbalizer.hpp"

#include <cctype>
#include <set>

namespace ont {

namespace {

std::string squeeze_spaces(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true; // also trims leading space
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out += ' ';
            in_space = false;
            out += c;
        }
    }
    return out;
}

struct Verbalizer {
    const LabelMap& labels;
    const DefinitionMap& defs;
    std::set<Iri> in_progress; // cycle guard over fresh names

    std::string atomic_text(const Iri& name) {
        auto it = labels.concept_labels.find(name);
        if (it != labels.concept_labels.end()) return it->second;
        if (const ConceptRef* def = defs.find(name)) {
            if (!in_progress.insert(name).second)
                throw OntError("cyclic definition for " + name.value);
            std::string t = render(**def);
            in_progress.erase(name);
            return t;
        }
        throw OntError("missing label for concept " + name.value);
    }

    std::string render(const Concept& c) {
        switch (c.kind()) {
        case ConceptKind::Top: return "thing";
        case ConceptKind::Bottom: return "nothing";
        case ConceptKind::Atomic: return atomic_text(c.name());
        case ConceptKind::Conjunction:
            return render(*c.left()) + " and " + render(*c.right());
        case ConceptKind::Existential:
            return "something that " + verbalize_role(c.role(), labels) + " some " +
                   render(*c.filler());
        }
        throw OntError("unreachable concept kind");
    }
};

} // namespace

std::string verbalize(const Concept& c, const LabelMap& labels, const DefinitionMap& defs) {
    Verbalizer v{labels, defs, {}};
    return squeeze_spaces(v.render(c));
}

std::string verbalize_role(const Iri& r, const LabelMap& labels) {
    auto it = labels.role_labels.find(r);
    if (it == labels.role_labels.end())
        throw OntError("missing label for role " + r.value);
    return it->second;
}

} // namespace ont
