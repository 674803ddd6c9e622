#include "reasoner.hpp"

#include <deque>

namespace ont {

const std::set<Iri>& Saturation::of(const Iri& a) const {
    static const std::set<Iri> empty;
    auto it = subsumers.find(a);
    return it == subsumers.end() ? empty : it->second;
}

bool Saturation::holds(const Iri& a, const Iri& b) const {
    if (b == a || b == top_iri()) return true;
    return of(a).count(b) != 0;
}

namespace {

struct Indexes {
    std::map<Iri, std::vector<Iri>> nf1;                        // A' -> B
    std::map<Iri, std::vector<std::pair<Iri, Iri>>> nf2;        // conjunct -> (other, B)
    std::map<Iri, std::vector<std::pair<Iri, Iri>>> nf3;        // A' -> (r, B)
    std::map<std::pair<Iri, Iri>, std::vector<Iri>> nf4;        // (r, B') -> A'
};

} // namespace

Saturation saturate(const std::vector<NormalizedAxiom>& axioms) {
    Indexes ix;
    std::set<Iri> domain;
    domain.insert(top_iri());
    for (const auto& a : axioms) {
        switch (a.kind) {
        case NfKind::NF1:
            ix.nf1[a.sub].push_back(a.sup);
            domain.insert(a.sub);
            domain.insert(a.sup);
            break;
        case NfKind::NF2:
            ix.nf2[a.sub].emplace_back(a.sub2, a.sup);
            ix.nf2[a.sub2].emplace_back(a.sub, a.sup);
            domain.insert(a.sub);
            domain.insert(a.sub2);
            domain.insert(a.sup);
            break;
        case NfKind::NF3:
            ix.nf3[a.sub].emplace_back(a.role, a.filler);
            domain.insert(a.sub);
            domain.insert(a.filler);
            break;
        case NfKind::NF4:
            ix.nf4[{a.role, a.filler}].push_back(a.sup);
            domain.insert(a.filler);
            domain.insert(a.sup);
            break;
        }
    }

    Saturation sat;
    // reverse link index: target -> (role, source)
    std::map<Iri, std::vector<std::pair<Iri, Iri>>> rev_links;

    std::deque<std::pair<Iri, Iri>> sub_work;  // (A, new subsumer)
    std::deque<std::tuple<Iri, Iri, Iri>> link_work; // (r, A, B)

    auto add_subsumer = [&](const Iri& a, const Iri& b) {
        if (sat.subsumers[a].insert(b).second) sub_work.emplace_back(a, b);
    };
    auto add_link = [&](const Iri& r, const Iri& a, const Iri& b) {
        if (sat.links[r].insert({a, b}).second) link_work.emplace_back(r, a, b);
    };

    for (const Iri& a : domain) {
        add_subsumer(a, a);
        add_subsumer(a, top_iri());
    }

    while (!sub_work.empty() || !link_work.empty()) {
        if (!sub_work.empty()) {
            auto [a, ap] = sub_work.front();
            sub_work.pop_front();
            // R1
            if (auto it = ix.nf1.find(ap); it != ix.nf1.end())
                for (const Iri& b : it->second) add_subsumer(a, b);
            // R2
            if (auto it = ix.nf2.find(ap); it != ix.nf2.end()) {
                const auto& sa = sat.subsumers[a];
                for (const auto& [other, b] : it->second)
                    if (sa.count(other)) add_subsumer(a, b);
            }
            // R3
            if (auto it = ix.nf3.find(ap); it != ix.nf3.end())
                for (const auto& [r, b] : it->second) add_link(r, a, b);
            // R4 with ap as the new B' in S(B): links into a
            if (auto it = rev_links.find(a); it != rev_links.end())
                for (const auto& [r, src] : it->second)
                    if (auto jt = ix.nf4.find({r, ap}); jt != ix.nf4.end())
                        for (const Iri& sup : jt->second) add_subsumer(src, sup);
            continue;
        }
        auto [r, a, b] = link_work.front();
        link_work.pop_front();
        rev_links[b].emplace_back(r, a);
        // R4 over the existing S(b)
        for (const Iri& bp : sat.subsumers[b])
            if (auto jt = ix.nf4.find({r, bp}); jt != ix.nf4.end())
                for (const Iri& sup : jt->second) add_subsumer(a, sup);
    }
    return sat;
}

std::vector<NormalizedAxiom> entailed_nf1(const std::vector<NormalizedAxiom>& axioms,
                                          const std::set<Iri>& signature,
                                          bool exclude_asserted) {
    Saturation sat = saturate(axioms);
    std::set<std::pair<Iri, Iri>> asserted;
    if (exclude_asserted)
        for (const auto& a : axioms)
            if (a.kind == NfKind::NF1) asserted.insert({a.sub, a.sup});

    std::vector<NormalizedAxiom> out;
    for (const Iri& a : signature) {
        for (const Iri& b : sat.of(a)) {
            if (b == a || b == top_iri()) continue;
            if (!signature.count(b)) continue;
            if (exclude_asserted && asserted.count({a, b})) continue;
            out.push_back({NfKind::NF1, a, {}, {}, {}, b});
        }
    }
    return out;
}

} // namespace ont
