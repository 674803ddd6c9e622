#include "ontology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace ont {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

namespace {

struct Token {
    enum Kind { LParen, RParen, Symbol, End } kind;
    std::string text;
    size_t line;
};

std::vector<Token> tokenize_expr(const std::string& s, size_t line) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(') {
            out.push_back({Token::LParen, "(", line});
            ++i;
        } else if (c == ')') {
            out.push_back({Token::RParen, ")", line});
            ++i;
        } else {
            size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) &&
                   s[j] != '(' && s[j] != ')')
                ++j;
            out.push_back({Token::Symbol, s.substr(i, j - i), line});
            i = j;
        }
    }
    out.push_back({Token::End, "", line});
    return out;
}

struct Parser {
    const std::vector<Token>& toks;
    size_t pos = 0;

    const Token& peek() const { return toks[pos]; }
    Token next() { return toks[pos++]; }

    void expect(Token::Kind k, const char* what) {
        if (peek().kind != k) throw ParseError(peek().line, std::string("expected ") + what);
    }

    ConceptRef concept_expr() {
        expect(Token::Symbol, "concept expression");
        Token head = next();
        if (head.text == "owl:Thing") return Concept::top();
        if (head.text == "owl:Nothing") return Concept::bottom();
        if (head.text == "ObjectIntersectionOf") {
            expect(Token::LParen, "'(' after ObjectIntersectionOf");
            next();
            std::vector<ConceptRef> parts;
            while (peek().kind != Token::RParen) {
                if (peek().kind == Token::End)
                    throw ParseError(peek().line, "unbalanced parentheses");
                parts.push_back(concept_expr());
            }
            next();
            if (parts.size() < 2)
                throw ParseError(head.line, "ObjectIntersectionOf needs >= 2 operands");
            ConceptRef acc = parts[0];
            for (size_t i = 1; i < parts.size(); ++i) acc = Concept::conj(acc, parts[i]);
            return acc;
        }
        if (head.text == "ObjectSomeValuesFrom") {
            expect(Token::LParen, "'(' after ObjectSomeValuesFrom");
            next();
            expect(Token::Symbol, "role IRI");
            Iri role(next().text);
            ConceptRef filler = concept_expr();
            expect(Token::RParen, "')'");
            next();
            return Concept::some(role, filler);
        }
        if (head.text == "ObjectOneOf") {
            expect(Token::LParen, "'(' after ObjectOneOf");
            next();
            expect(Token::Symbol, "individual IRI");
            Iri ind(next().text);
            expect(Token::RParen, "')' (ObjectOneOf takes one individual)");
            next();
            // Nominals become atomic concepts named by the individual.
            return Concept::atomic(ind);
        }
        if (head.text == "SubClassOf")
            throw ParseError(head.line, "SubClassOf is not a concept expression");
        return Concept::atomic(Iri(head.text));
    }

    Axiom axiom() {
        expect(Token::Symbol, "SubClassOf");
        Token head = next();
        if (head.text != "SubClassOf")
            throw ParseError(head.line, "expected SubClassOf, got '" + head.text + "'");
        expect(Token::LParen, "'(' after SubClassOf");
        next();
        ConceptRef sub = concept_expr();
        ConceptRef sup = concept_expr();
        expect(Token::RParen, "')'");
        next();
        return Axiom{sub, sup};
    }

    void expect_end() {
        if (peek().kind != Token::End)
            throw ParseError(peek().line, "trailing input after expression");
    }
};

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

ConceptRef parse_concept(const std::string& source) {
    auto toks = tokenize_expr(source, 1);
    Parser p{toks};
    ConceptRef c = p.concept_expr();
    p.expect_end();
    return c;
}

void collect_signature(const Concept& c, std::set<Iri>& concepts, std::set<Iri>& roles) {
    switch (c.kind()) {
    case ConceptKind::Top:
    case ConceptKind::Bottom:
        break;
    case ConceptKind::Atomic:
        concepts.insert(c.name());
        break;
    case ConceptKind::Conjunction:
        collect_signature(*c.left(), concepts, roles);
        collect_signature(*c.right(), concepts, roles);
        break;
    case ConceptKind::Existential:
        roles.insert(c.role());
        collect_signature(*c.filler(), concepts, roles);
        break;
    }
}

void Ontology::add(Axiom a) {
    collect_signature(*a.sub, atomic_concepts, roles);
    collect_signature(*a.sup, atomic_concepts, roles);
    axioms.push_back(std::move(a));
}

void Ontology::recompute_signature() {
    atomic_concepts.clear();
    roles.clear();
    for (const auto& a : axioms) {
        collect_signature(*a.sub, atomic_concepts, roles);
        collect_signature(*a.sup, atomic_concepts, roles);
    }
}

Ontology parse_ontology(const std::string& source) {
    Ontology o;
    std::istringstream in(source);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        auto toks = tokenize_expr(line, lineno);
        Parser p{toks};
        o.add(p.axiom());
        p.expect_end();
    }
    return o;
}

Ontology read_ontology(const std::string& path) { return parse_ontology(read_file(path)); }

std::string to_functional(const Ontology& o) {
    std::string out;
    for (const auto& a : o.axioms) {
        out += to_functional(a);
        out += '\n';
    }
    return out;
}

void write_ontology(const Ontology& o, const std::string& path) {
    write_file(path, to_functional(o));
}

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

LabelMap parse_labels(const std::string& source) {
    LabelMap m;
    std::istringstream in(source);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw ParseError(lineno, "expected IRI<TAB>kind<TAB>label");
        std::string iri = trim(line.substr(0, t1));
        std::string kind = trim(line.substr(t1 + 1, t2 - t1 - 1));
        std::string label = trim(line.substr(t2 + 1));
        if (iri.empty()) throw ParseError(lineno, "empty IRI");
        if (label.empty()) throw ParseError(lineno, "empty label");
        if (kind == "concept")
            m.concept_labels[Iri(iri)] = label;
        else if (kind == "role")
            m.role_labels[Iri(iri)] = label;
        else
            throw ParseError(lineno, "unknown kind '" + kind + "' (want concept|role)");
    }
    return m;
}

LabelMap read_labels(const std::string& path) { return parse_labels(read_file(path)); }

namespace {

void walk_subexprs(const ConceptRef& c,
                   std::set<ConceptRef, ConceptRefLess>& ex,
                   std::set<ConceptRef, ConceptRefLess>& cj) {
    switch (c->kind()) {
    case ConceptKind::Conjunction:
        cj.insert(c);
        walk_subexprs(c->left(), ex, cj);
        walk_subexprs(c->right(), ex, cj);
        break;
    case ConceptKind::Existential:
        ex.insert(c);
        walk_subexprs(c->filler(), ex, cj);
        break;
    default:
        break;
    }
}

} // namespace

SubExpressions collect_subexpressions(const Ontology& o) {
    std::set<ConceptRef, ConceptRefLess> ex, cj;
    for (const auto& a : o.axioms) {
        walk_subexprs(a.sub, ex, cj);
        walk_subexprs(a.sup, ex, cj);
    }
    SubExpressions out;
    out.existentials.assign(ex.begin(), ex.end());
    out.conjunctions.assign(cj.begin(), cj.end());
    return out;
}

} // namespace ont
