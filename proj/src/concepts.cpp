#include "concepts.hpp"

namespace ont {

namespace {

size_t hash_combine(size_t seed, size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

size_t compute_hash(ConceptKind k, const Iri& iri, const ConceptRef& l,
                    const ConceptRef& r) {
    size_t h = static_cast<size_t>(k) * 0x9e3779b97f4a7c15ULL + 1;
    h = hash_combine(h, std::hash<std::string>{}(iri.value));
    if (l) h = hash_combine(h, l->hash());
    if (r) h = hash_combine(h, r->hash());
    return h;
}

} // namespace

Concept::Concept(ConceptKind k, Iri iri, ConceptRef l, ConceptRef r)
    : kind_(k), iri_(std::move(iri)), left_(std::move(l)), right_(std::move(r)),
      hash_(compute_hash(k, iri_, left_, right_)) {}

ConceptRef Concept::top() {
    static const ConceptRef c(new Concept(ConceptKind::Top, Iri{}, nullptr, nullptr));
    return c;
}

ConceptRef Concept::bottom() {
    static const ConceptRef c(new Concept(ConceptKind::Bottom, Iri{}, nullptr, nullptr));
    return c;
}

ConceptRef Concept::atomic(Iri name) {
    if (name.value.empty()) throw OntError("atomic concept with empty IRI");
    return ConceptRef(new Concept(ConceptKind::Atomic, std::move(name), nullptr, nullptr));
}

ConceptRef Concept::conj(ConceptRef left, ConceptRef right) {
    if (!left || !right) throw OntError("conjunction with null operand");
    return ConceptRef(new Concept(ConceptKind::Conjunction, Iri{}, std::move(left),
                                  std::move(right)));
}

ConceptRef Concept::some(Iri role, ConceptRef filler) {
    if (role.value.empty()) throw OntError("existential with empty role IRI");
    if (!filler) throw OntError("existential with null filler");
    return ConceptRef(new Concept(ConceptKind::Existential, std::move(role),
                                  std::move(filler), nullptr));
}

const Iri& Concept::name() const {
    switch (kind_) {
    case ConceptKind::Top: return top_iri();
    case ConceptKind::Bottom: return bottom_iri();
    case ConceptKind::Atomic: return iri_;
    default: throw OntError("name() on complex concept");
    }
}

const Iri& Concept::role() const {
    if (kind_ != ConceptKind::Existential) throw OntError("role() on non-existential");
    return iri_;
}

bool Concept::equals(const Concept& o) const {
    if (this == &o) return true;
    if (kind_ != o.kind_ || hash_ != o.hash_ || iri_ != o.iri_) return false;
    if ((left_ == nullptr) != (o.left_ == nullptr)) return false;
    if ((right_ == nullptr) != (o.right_ == nullptr)) return false;
    if (left_ && !left_->equals(*o.left_)) return false;
    if (right_ && !right_->equals(*o.right_)) return false;
    return true;
}

int Concept::compare(const Concept& o) const {
    if (this == &o) return 0;
    if (kind_ != o.kind_)
        return static_cast<int>(kind_) < static_cast<int>(o.kind_) ? -1 : 1;
    if (int c = iri_.value.compare(o.iri_.value)) return c < 0 ? -1 : 1;
    auto cmp_child = [](const ConceptRef& a, const ConceptRef& b) {
        if (!a && !b) return 0;
        if (!a) return -1;
        if (!b) return 1;
        return a->compare(*b);
    };
    if (int c = cmp_child(left_, o.left_)) return c;
    return cmp_child(right_, o.right_);
}

std::string to_functional(const Concept& c) {
    switch (c.kind()) {
    case ConceptKind::Top: return "owl:Thing";
    case ConceptKind::Bottom: return "owl:Nothing";
    case ConceptKind::Atomic: return c.name().value;
    case ConceptKind::Conjunction:
        return "ObjectIntersectionOf(" + to_functional(*c.left()) + " " +
               to_functional(*c.right()) + ")";
    case ConceptKind::Existential:
        return "ObjectSomeValuesFrom(" + c.role().value + " " +
               to_functional(*c.filler()) + ")";
    }
    throw OntError("unreachable concept kind");
}

std::string to_functional(const Axiom& a) {
    return "SubClassOf(" + to_functional(*a.sub) + " " + to_functional(*a.sup) + ")";
}

} // namespace ont
