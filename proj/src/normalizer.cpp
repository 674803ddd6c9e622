#include "normalizer.hpp"

#include <map>
#include <sstream>

namespace ont {

namespace {

ConceptRef atom(const Iri& name) {
    if (name == top_iri()) return Concept::top();
    if (name == bottom_iri()) return Concept::bottom();
    return Concept::atomic(name);
}

} // namespace

ConceptRef NormalizedAxiom::sub_concept() const {
    switch (kind) {
    case NfKind::NF1:
    case NfKind::NF3: return atom(sub);
    case NfKind::NF2: return Concept::conj(atom(sub), atom(sub2));
    case NfKind::NF4: return Concept::some(role, atom(filler));
    }
    throw OntError("unreachable NF kind");
}

ConceptRef NormalizedAxiom::sup_concept() const {
    switch (kind) {
    case NfKind::NF1:
    case NfKind::NF2:
    case NfKind::NF4: return atom(sup);
    case NfKind::NF3: return Concept::some(role, atom(filler));
    }
    throw OntError("unreachable NF kind");
}

bool NormalizedAxiom::operator==(const NormalizedAxiom& o) const {
    return kind == o.kind && sub == o.sub && sub2 == o.sub2 && role == o.role &&
           filler == o.filler && sup == o.sup;
}

NfKind axiom_nf_kind(const NormalizedAxiom& a) { return a.kind; }

std::string to_functional(const NormalizedAxiom& a) {
    return to_functional(Axiom{a.sub_concept(), a.sup_concept()});
}

void DefinitionMap::add(Iri name, ConceptRef def) {
    entries.emplace_back(name, def);
    by_name[std::move(name)] = std::move(def);
}

const ConceptRef* DefinitionMap::find(const Iri& name) const {
    auto it = by_name.find(name);
    return it == by_name.end() ? nullptr : &it->second;
}

std::vector<Iri> NormalizedOntology::atomic_signature() const {
    std::set<Iri> s;
    for (const auto& a : axioms) {
        switch (a.kind) {
        case NfKind::NF1: s.insert(a.sub); s.insert(a.sup); break;
        case NfKind::NF2: s.insert(a.sub); s.insert(a.sub2); s.insert(a.sup); break;
        case NfKind::NF3: s.insert(a.sub); s.insert(a.filler); break;
        case NfKind::NF4: s.insert(a.filler); s.insert(a.sup); break;
        }
    }
    return {s.begin(), s.end()};
}

std::vector<Iri> NormalizedOntology::role_signature() const {
    std::set<Iri> s;
    for (const auto& a : axioms)
        if (a.kind == NfKind::NF3 || a.kind == NfKind::NF4) s.insert(a.role);
    return {s.begin(), s.end()};
}

namespace {

struct Normalizer {
    NormalizedOntology out;
    std::map<ConceptRef, Iri, ConceptRefLess> memo;
    size_t counter = 0;

    Iri fresh_name() { return Iri("_N" + std::to_string(++counter)); }

    // Returns an atomic name for `c`, introducing (and defining in both
    // directions) a fresh name when `c` is complex. Innermost first.
    Iri name_of(const ConceptRef& c) {
        if (c->is_atomicish()) return c->name();
        ConceptRef flat;
        if (c->kind() == ConceptKind::Conjunction) {
            Iri a = name_of(c->left());
            Iri b = name_of(c->right());
            flat = Concept::conj(atom(a), atom(b));
            auto it = memo.find(flat);
            if (it != memo.end()) return it->second;
            Iri n = fresh_name();
            memo.emplace(flat, n);
            out.defs.add(n, flat);
            out.axioms.push_back({NfKind::NF2, a, b, {}, {}, n});
            out.axioms.push_back({NfKind::NF1, n, {}, {}, {}, a});
            out.axioms.push_back({NfKind::NF1, n, {}, {}, {}, b});
            return n;
        }
        // Existential
        Iri b = name_of(c->filler());
        flat = Concept::some(c->role(), atom(b));
        auto it = memo.find(flat);
        if (it != memo.end()) return it->second;
        Iri n = fresh_name();
        memo.emplace(flat, n);
        out.defs.add(n, flat);
        out.axioms.push_back({NfKind::NF3, n, {}, c->role(), b, {}});
        out.axioms.push_back({NfKind::NF4, {}, {}, c->role(), b, n});
        return n;
    }

    void normalize_axiom(const ConceptRef& sub, const ConceptRef& sup) {
        if (sup->kind() == ConceptKind::Conjunction) {
            normalize_axiom(sub, sup->left());
            normalize_axiom(sub, sup->right());
            return;
        }
        if (sup->kind() == ConceptKind::Existential) {
            Iri a = sub->is_atomicish() ? sub->name() : name_of(sub);
            Iri b = name_of(sup->filler());
            out.axioms.push_back({NfKind::NF3, a, {}, sup->role(), b, {}});
            return;
        }
        // sup atomic-ish
        Iri s = sup->name();
        switch (sub->kind()) {
        case ConceptKind::Top:
        case ConceptKind::Bottom:
        case ConceptKind::Atomic:
            out.axioms.push_back({NfKind::NF1, sub->name(), {}, {}, {}, s});
            break;
        case ConceptKind::Conjunction: {
            Iri a = name_of(sub->left());
            Iri b = name_of(sub->right());
            out.axioms.push_back({NfKind::NF2, a, b, {}, {}, s});
            break;
        }
        case ConceptKind::Existential: {
            Iri b = name_of(sub->filler());
            out.axioms.push_back({NfKind::NF4, {}, {}, sub->role(), b, s});
            break;
        }
        }
    }
};

} // namespace

NormalizedOntology normalize(const Ontology& o, const std::vector<size_t>* axiom_order) {
    Normalizer n;
    if (axiom_order) {
        if (axiom_order->size() != o.axioms.size())
            throw OntError("axiom_order size mismatch");
        for (size_t i : *axiom_order) {
            const Axiom& a = o.axioms.at(i);
            n.normalize_axiom(a.sub, a.sup);
        }
    } else {
        for (const Axiom& a : o.axioms) n.normalize_axiom(a.sub, a.sup);
    }
    return std::move(n.out);
}

std::optional<NormalizedAxiom> classify_normalized(const Axiom& a) {
    const ConceptRef& c = a.sub;
    const ConceptRef& d = a.sup;
    if (c->is_atomicish() && d->is_atomicish())
        return NormalizedAxiom{NfKind::NF1, c->name(), {}, {}, {}, d->name()};
    if (c->kind() == ConceptKind::Conjunction && c->left()->is_atomicish() &&
        c->right()->is_atomicish() && d->is_atomicish())
        return NormalizedAxiom{NfKind::NF2, c->left()->name(), c->right()->name(),
                               {}, {}, d->name()};
    if (c->is_atomicish() && d->kind() == ConceptKind::Existential &&
        d->filler()->is_atomicish())
        return NormalizedAxiom{NfKind::NF3, c->name(), {}, d->role(),
                               d->filler()->name(), {}};
    if (c->kind() == ConceptKind::Existential && c->filler()->is_atomicish() &&
        d->is_atomicish())
        return NormalizedAxiom{NfKind::NF4, {}, {}, c->role(),
                               c->filler()->name(), d->name()};
    return std::nullopt;
}

std::string to_functional(const NormalizedOntology& n) {
    std::string out;
    for (const auto& a : n.axioms) {
        out += to_functional(a);
        out += '\n';
    }
    return out;
}

std::string defs_to_tsv(const DefinitionMap& defs) {
    std::string out;
    for (const auto& [name, def] : defs.entries) {
        out += name.value;
        out += '\t';
        out += to_functional(*def);
        out += '\n';
    }
    return out;
}

DefinitionMap parse_defs_tsv(const std::string& source) {
    DefinitionMap defs;
    std::istringstream in(source);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        bool blank = true;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) { blank = false; break; }
        if (blank || line[0] == '#') continue;
        size_t t = line.find('\t');
        if (t == std::string::npos)
            throw ParseError(lineno, "expected freshIRI<TAB>concept-expression");
        defs.add(Iri(line.substr(0, t)), parse_concept(line.substr(t + 1)));
    }
    return defs;
}

std::vector<NormalizedAxiom> parse_normalized_axioms(const std::string& source) {
    Ontology o = parse_ontology(source);
    std::vector<NormalizedAxiom> out;
    out.reserve(o.axioms.size());
    for (size_t i = 0; i < o.axioms.size(); ++i) {
        auto n = classify_normalized(o.axioms[i]);
        if (!n)
            throw ParseError(i + 1,
                             "axiom not in normal form: " + to_functional(o.axioms[i]));
        out.push_back(*n);
    }
    return out;
}

NormalizedOntology read_normalized(const std::string& axioms_path,
                                   const std::string& defs_path) {
    NormalizedOntology n;
    n.axioms = parse_normalized_axioms(read_file(axioms_path));
    if (!defs_path.empty()) n.defs = parse_defs_tsv(read_file(defs_path));
    return n;
}

} // namespace ont
