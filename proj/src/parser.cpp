#include "cspforge/parser.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace cspforge {

namespace {

struct Tok {
    enum Kind { Ident, Number, Str, Punct, End } kind = End;
    std::string text;
    int line = 0;
    int col = 0;
};

std::vector<Tok> lex(const std::string& text) {
    std::vector<Tok> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(text[i++]);
            continue;
        }
        if (isspace((unsigned char)c)) {
            advance(c);
            ++i;
            continue;
        }
        Tok t;
        t.line = line;
        t.col = col;
        if (isalpha((unsigned char)c) || c == '_') {
            t.kind = Tok::Ident;
            while (i < text.size() &&
                   (isalnum((unsigned char)text[i]) || text[i] == '_' || text[i] == '\'')) {
                t.text += text[i];
                advance(text[i++]);
            }
        } else if (isdigit((unsigned char)c)) {
            t.kind = Tok::Number;
            while (i < text.size() &&
                   (isalnum((unsigned char)text[i]) || text[i] == '_' || text[i] == '\'')) {
                t.text += text[i];
                advance(text[i++]);
            }
        } else if (c == '"') {
            t.kind = Tok::Str;
            advance(text[i++]);
            while (i < text.size() && text[i] != '"') {
                if (text[i] == '\\' && i + 1 < text.size()) advance(text[i++]);
                t.text += text[i];
                advance(text[i++]);
            }
            if (i >= text.size()) throw ParseError("unterminated string", t.line, t.col);
            advance(text[i++]);
        } else {
            t.kind = Tok::Punct;
            if (i + 1 < text.size()) {
                std::string two = text.substr(i, 2);
                if (two == "->" || two == ":=" || two == ":-") {
                    t.text = two;
                    advance(text[i++]);
                    advance(text[i++]);
                    out.push_back(t);
                    continue;
                }
            }
            t.text = std::string(1, c);
            advance(text[i++]);
        }
        out.push_back(t);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

struct Parser {
    std::vector<Tok> toks;
    size_t pos = 0;
    Document doc;

    const Tok& peek() const { return toks[pos]; }
    const Tok& get() { return toks[pos++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, peek().line, peek().col);
    }
    bool at(const std::string& p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool at_word(const std::string& w) const {
        return peek().kind == Tok::Ident && peek().text == w;
    }
    void expect(const std::string& p) {
        if (!at(p)) fail("expected '" + p + "'");
        ++pos;
    }
    std::string ident() {
        if (peek().kind != Tok::Ident) fail("expected an identifier");
        return get().text;
    }
    std::string name() {
        if (peek().kind != Tok::Ident && peek().kind != Tok::Number && peek().kind != Tok::Str)
            fail("expected a name");
        return get().text;
    }

    const Signature& signature_ref(const std::string& n) {
        const Signature* sig = doc.find_signature(n);
        if (!sig) fail("unknown signature " + n);
        return *sig;
    }

    void parse_signature() {
        std::string sname = ident();
        Signature sig;
        expect("{");
        while (!at("}")) {
            if (at_word("type")) {
                get();
                sig.add_type(ident());
                expect(";");
            } else if (at_word("rel")) {
                get();
                std::string rel = ident();
                expect(":");
                std::vector<int> arity;
                while (!at(";")) {
                    std::string t = ident();
                    int idx = sig.type_index(t);
                    if (idx < 0) fail("arity uses undeclared type " + t);
                    arity.push_back(idx);
                }
                expect(";");
                sig.add_symbol(rel, std::move(arity));
            } else {
                fail("expected 'type' or 'rel'");
            }
        }
        expect("}");
        doc.signatures.push_back({sname, std::move(sig)});
    }

    void parse_structure() {
        std::string sname = ident();
        expect(":");
        const Signature sig = signature_ref(ident());
        Structure s;
        s.sig = sig;
        s.domains.resize(sig.types.size());
        s.relations.resize(sig.symbols.size());
        std::vector<char> seen_type(sig.types.size(), 0), seen_sym(sig.symbols.size(), 0);
        std::vector<std::pair<int, std::vector<std::vector<std::string>>>> pending;
        expect("{");
        while (!at("}")) {
            std::string entry = ident();
            expect("=");
            expect("{");
            int t = sig.type_index(entry);
            int sy = sig.symbol_index(entry);
            if (t >= 0) {
                if (seen_type[t]) fail("type listed twice: " + entry);
                seen_type[t] = 1;
                while (!at("}")) {
                    s.domains[t].push_back(name());
                    if (at(",")) get();
                }
            } else if (sy >= 0) {
                if (seen_sym[sy]) fail("relation listed twice: " + entry);
                seen_sym[sy] = 1;
                std::vector<std::vector<std::string>> raw;
                while (!at("}")) {
                    expect("(");
                    std::vector<std::string> tup;
                    while (!at(")")) {
                        tup.push_back(name());
                        if (at(",")) get();
                    }
                    expect(")");
                    raw.push_back(std::move(tup));
                    if (at(",")) get();
                }
                pending.push_back({sy, std::move(raw)});
            } else {
                fail("neither a type nor a symbol of the signature: " + entry);
            }
            expect("}");
            expect(";");
        }
        expect("}");
        for (auto& [sy, raw] : pending) {
            const auto& ar = sig.symbols[sy].arity;
            for (const auto& tup : raw) {
                if (tup.size() != ar.size()) fail("tuple arity mismatch in " + sname);
                Tuple resolved(tup.size());
                for (size_t i = 0; i < tup.size(); ++i) {
                    int e = s.element_index(ar[i], tup[i]);
                    if (e < 0) fail("unknown element " + tup[i] + " in " + sname);
                    resolved[i] = e;
                }
                s.relations[sy].push_back(resolved);
            }
        }
        canonicalize_relations(s);
        validate_structure(s);
        doc.structures.push_back({sname, std::move(s)});
    }

    struct RawAtom {
        std::string pred; // empty for equality
        std::vector<std::string> args;
        int line = 0, col = 0;
    };

    RawAtom parse_atom() {
        RawAtom a;
        a.line = peek().line;
        a.col = peek().col;
        if (peek().kind == Tok::Ident && toks[pos + 1].kind == Tok::Punct &&
            toks[pos + 1].text == "(") {
            a.pred = ident();
            expect("(");
            while (!at(")")) {
                a.args.push_back(ident());
                if (at(",")) get();
            }
            expect(")");
        } else {
            a.args.push_back(ident());
            expect("=");
            a.args.push_back(ident());
        }
        return a;
    }

    DatalogProgram parse_program_block(const Signature& input) {
        DatalogProgram p;
        p.input = input;
        std::string output_name;
        struct RawRule {
            RawAtom head;
            std::vector<RawAtom> body;
        };
        std::vector<RawRule> raw_rules;
        expect("{");
        while (!at("}")) {
            if (at_word("idb")) {
                get();
                std::string idb = ident();
                expect(":");
                std::vector<int> arity;
                while (!at(";")) {
                    std::string t = ident();
                    int idx = input.type_index(t);
                    if (idx < 0) fail("idb arity uses undeclared type " + t);
                    arity.push_back(idx);
                }
                expect(";");
                p.add_idb(idb, std::move(arity));
            } else if (at_word("output")) {
                get();
                output_name = ident();
                expect(";");
            } else {
                RawRule r;
                r.head = parse_atom();
                if (at(":-")) {
                    get();
                    while (true) {
                        r.body.push_back(parse_atom());
                        if (at(",")) {
                            get();
                            continue;
                        }
                        break;
                    }
                }
                expect(".");
                raw_rules.push_back(std::move(r));
            }
        }
        expect("}");
        if (output_name.empty()) fail("program lacks an output declaration");
        if (p.idb_index(output_name) < 0) {
            // EDB output becomes an IDB echo via a copy rule
            int edb = input.symbol_index(output_name);
            if (edb < 0) fail("output names an undeclared predicate " + output_name);
            const auto& ar = input.symbols[edb].arity;
            int idb = p.add_idb(output_name + "_out", ar);
            Rule copy;
            copy.var_types = ar;
            std::vector<int> vars(ar.size());
            for (size_t i = 0; i < ar.size(); ++i) vars[i] = (int)i;
            copy.head = {p.edb_count() + idb, vars};
            copy.body = {{edb, vars}};
            p.rules.push_back(copy);
            p.output = idb;
        } else {
            p.output = p.idb_index(output_name);
        }

        for (const auto& raw : raw_rules) {
            Rule rule;
            std::map<std::string, int> var_of;
            auto var_id = [&](const std::string& v) {
                auto it = var_of.find(v);
                if (it != var_of.end()) return it->second;
                int id = (int)rule.var_types.size();
                var_of[v] = id;
                rule.var_types.push_back(-1);
                return id;
            };
            auto build_atom = [&](const RawAtom& ra) {
                Atom a;
                if (ra.pred.empty()) {
                    a.pred = Atom::kEquality;
                } else {
                    int sy = input.symbol_index(ra.pred);
                    int idb = p.idb_index(ra.pred);
                    if (sy >= 0)
                        a.pred = sy;
                    else if (idb >= 0)
                        a.pred = p.edb_count() + idb;
                    else
                        throw ParseError("undeclared predicate " + ra.pred, ra.line, ra.col);
                }
                for (const auto& v : ra.args) a.vars.push_back(var_id(v));
                return a;
            };
            rule.head = build_atom(raw.head);
            for (const auto& ra : raw.body) rule.body.push_back(build_atom(ra));

            // type inference: union-find over variables, types seeded by
            // predicate positions, equality atoms link their sides
            std::vector<int> parent(rule.var_types.size());
            for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            auto all_atoms = [&](auto&& fn) {
                fn(rule.head);
                for (const auto& a : rule.body) fn(a);
            };
            all_atoms([&](const Atom& a) {
                if (a.pred == Atom::kEquality) parent[find(a.vars[0])] = find(a.vars[1]);
            });
            all_atoms([&](const Atom& a) {
                if (a.pred == Atom::kEquality) return;
                const auto& ar = p.pred_arity(a.pred);
                for (size_t i = 0; i < ar.size(); ++i) {
                    int root = find(a.vars[i]);
                    if (rule.var_types[root] >= 0 && rule.var_types[root] != ar[i])
                        throw ParseError("conflicting types for a rule variable", raw.head.line,
                                         raw.head.col);
                    rule.var_types[root] = ar[i];
                }
            });
            for (size_t v = 0; v < rule.var_types.size(); ++v) {
                int root = find((int)v);
                if (rule.var_types[root] < 0)
                    throw ParseError("cannot infer the type of a rule variable", raw.head.line,
                                     raw.head.col);
                rule.var_types[v] = rule.var_types[root];
            }
            p.rules.push_back(std::move(rule));
        }
        validate_program(p);
        return p;
    }

    void parse_program() {
        std::string pname = ident();
        expect(":");
        const Signature sig = signature_ref(ident());
        doc.programs.push_back({pname, parse_program_block(sig)});
    }

    void parse_interpretation() {
        std::string iname = ident();
        expect(":");
        const Signature in = signature_ref(ident());
        expect("->");
        const Signature out = signature_ref(ident());
        DatalogInterpretation phi;
        phi.input = in;
        phi.output = out;
        phi.type_programs.resize(out.types.size());
        phi.symbol_programs.resize(out.symbols.size());
        std::vector<char> seen_type(out.types.size(), 0), seen_sym(out.symbols.size(), 0);
        expect("{");
        while (!at("}")) {
            bool is_type = at_word("type");
            if (!is_type && !at_word("rel")) fail("expected 'type' or 'rel'");
            get();
            std::string target = ident();
            expect(":=");
            if (!at_word("program")) fail("expected 'program'");
            get();
            DatalogProgram prog = parse_program_block(in);
            expect(";");
            if (is_type) {
                int t = out.type_index(target);
                if (t < 0) fail("unknown output type " + target);
                if (seen_type[t]) fail("type defined twice: " + target);
                seen_type[t] = 1;
                phi.type_programs[t] = std::move(prog);
            } else {
                int sy = out.symbol_index(target);
                if (sy < 0) fail("unknown output symbol " + target);
                if (seen_sym[sy]) fail("symbol defined twice: " + target);
                seen_sym[sy] = 1;
                phi.symbol_programs[sy] = std::move(prog);
            }
        }
        expect("}");
        for (int t = 0; t < (int)out.types.size(); ++t)
            if (!seen_type[t]) fail("missing program for output type " + out.types[t]);
        for (int sy = 0; sy < (int)out.symbols.size(); ++sy)
            if (!seen_sym[sy]) fail("missing program for output symbol " + out.symbols[sy].name);
        validate_interpretation(phi);
        doc.interpretations.push_back({iname, std::move(phi)});
    }

    void parse_union() {
        std::string uname = ident();
        expect(":");
        const Signature in = signature_ref(ident());
        expect("->");
        const Signature out = signature_ref(ident());
        UnionGadget u;
        u.input = in;
        u.output = out;
        u.type_map.assign(in.types.size(), -1);
        u.symbol_map.assign(in.symbols.size(), -1);
        expect("{");
        while (!at("}")) {
            bool is_type = at_word("type");
            if (!is_type && !at_word("rel")) fail("expected 'type' or 'rel'");
            get();
            std::string from = ident();
            expect("->");
            std::string to = ident();
            expect(";");
            if (is_type) {
                int a = in.type_index(from), b = out.type_index(to);
                if (a < 0 || b < 0) fail("unknown type in union gadget");
                u.type_map[a] = b;
            } else {
                int a = in.symbol_index(from), b = out.symbol_index(to);
                if (a < 0 || b < 0) fail("unknown symbol in union gadget");
                u.symbol_map[a] = b;
            }
        }
        expect("}");
        for (int t = 0; t < (int)in.types.size(); ++t)
            if (u.type_map[t] < 0) fail("union gadget misses type " + in.types[t]);
        for (int sy = 0; sy < (int)in.symbols.size(); ++sy)
            if (u.symbol_map[sy] < 0) fail("union gadget misses symbol " + in.symbols[sy].name);
        validate_union_gadget(u);
        doc.unions.push_back({uname, std::move(u)});
    }

    ElemRef element_ref(const Structure& s) {
        std::string first = name();
        if (at(".")) {
            get();
            std::string elem = name();
            int t = s.sig.type_index(first);
            if (t < 0) fail("unknown type qualifier " + first);
            int e = s.element_index(t, elem);
            if (e < 0) fail("unknown element " + elem);
            return {t, e};
        }
        int found_t = -1, found_e = -1;
        for (int t = 0; t < (int)s.domains.size(); ++t) {
            int e = s.element_index(t, first);
            if (e >= 0) {
                if (found_t >= 0) fail("ambiguous element " + first + "; qualify with a type");
                found_t = t;
                found_e = e;
            }
        }
        if (found_t < 0) fail("unknown element " + first);
        return {found_t, found_e};
    }

    Homomorphism parse_glue_map(const Structure& from, const Structure& to) {
        Homomorphism h;
        h.map.resize(from.domains.size());
        for (int t = 0; t < (int)from.domains.size(); ++t)
            h.map[t].assign(from.domain_size(t), -1);
        expect("{");
        while (!at("}")) {
            ElemRef d = element_ref(from);
            expect("->");
            ElemRef e = element_ref(to);
            if (d.type != e.type) fail("glue map crosses types");
            h.map[d.type][d.elem] = e.elem;
            if (at(",")) get();
        }
        expect("}");
        for (int t = 0; t < (int)from.domains.size(); ++t)
            for (int i = 0; i < from.domain_size(t); ++i)
                if (h.map[t][i] < 0)
                    fail("glue map is not total: missing " + from.element_name(t, i));
        return h;
    }

    void parse_gadget() {
        std::string gname = ident();
        expect(":");
        const Signature in = signature_ref(ident());
        expect("->");
        const Signature out = signature_ref(ident());
        Gadget g;
        g.input = in;
        g.output = out;
        g.type_structs.resize(in.types.size());
        g.symbol_structs.resize(in.symbols.size());
        g.glue.resize(in.symbols.size());
        for (int sy = 0; sy < (int)in.symbols.size(); ++sy)
            g.glue[sy].resize(in.symbols[sy].arity.size());
        std::vector<char> seen_type(in.types.size(), 0), seen_sym(in.symbols.size(), 0);
        std::vector<std::vector<char>> seen_glue(in.symbols.size());
        for (int sy = 0; sy < (int)in.symbols.size(); ++sy)
            seen_glue[sy].assign(in.symbols[sy].arity.size(), 0);
        expect("{");
        while (!at("}")) {
            if (at_word("node")) {
                get();
                int t = in.type_index(ident());
                if (t < 0) fail("unknown gadget type");
                expect(":=");
                const Structure* s = doc.find_structure(ident());
                if (!s) fail("unknown structure in gadget");
                if (!(s->sig == out)) fail("gadget node structure over the wrong signature");
                g.type_structs[t] = *s;
                seen_type[t] = 1;
                expect(";");
            } else if (at_word("edge")) {
                get();
                int sy = in.symbol_index(ident());
                if (sy < 0) fail("unknown gadget symbol");
                expect(":=");
                const Structure* s = doc.find_structure(ident());
                if (!s) fail("unknown structure in gadget");
                if (!(s->sig == out)) fail("gadget edge structure over the wrong signature");
                g.symbol_structs[sy] = *s;
                seen_sym[sy] = 1;
                expect(";");
            } else if (at_word("glue")) {
                get();
                int sy = in.symbol_index(ident());
                if (sy < 0) fail("unknown gadget symbol in glue");
                expect("[");
                if (peek().kind != Tok::Number) fail("glue position must be a number");
                int i = std::stoi(get().text);
                expect("]");
                if (i < 1 || i > (int)in.symbols[sy].arity.size())
                    fail("glue position out of range");
                if (!seen_sym[sy] || !seen_type[in.symbols[sy].arity[i - 1]])
                    fail("glue must follow its node and edge declarations");
                expect(":=");
                g.glue[sy][i - 1] = parse_glue_map(g.type_structs[in.symbols[sy].arity[i - 1]],
                                                   g.symbol_structs[sy]);
                seen_glue[sy][i - 1] = 1;
                expect(";");
            } else {
                fail("expected 'node', 'edge' or 'glue'");
            }
        }
        expect("}");
        for (int t = 0; t < (int)in.types.size(); ++t)
            if (!seen_type[t]) fail("gadget misses node for type " + in.types[t]);
        for (int sy = 0; sy < (int)in.symbols.size(); ++sy) {
            if (!seen_sym[sy]) fail("gadget misses edge for symbol " + in.symbols[sy].name);
            for (size_t i = 0; i < seen_glue[sy].size(); ++i)
                if (!seen_glue[sy][i])
                    fail("gadget misses glue " + in.symbols[sy].name + "[" +
                         std::to_string(i + 1) + "]");
        }
        validate_gadget(g);
        doc.gadgets.push_back({gname, std::move(g)});
    }

    void parse_projective() {
        std::string gname = ident();
        expect(":");
        const Signature in = signature_ref(ident());
        expect("->");
        const Signature out = signature_ref(ident());
        ProjectiveGadget g;
        g.input = in;
        g.output = out;
        g.type_structs.resize(in.types.size());
        g.maps.resize(in.symbols.size());
        std::vector<char> seen_type(in.types.size(), 0), seen_map(in.symbols.size(), 0);
        expect("{");
        while (!at("}")) {
            if (at_word("node")) {
                get();
                int t = in.type_index(ident());
                if (t < 0) fail("unknown projective gadget type");
                expect(":=");
                const Structure* s = doc.find_structure(ident());
                if (!s) fail("unknown structure in projective gadget");
                if (!(s->sig == out))
                    fail("projective gadget structure over the wrong signature");
                g.type_structs[t] = *s;
                seen_type[t] = 1;
                expect(";");
            } else if (at_word("map")) {
                get();
                int sy = in.symbol_index(ident());
                if (sy < 0) fail("unknown projective gadget symbol");
                const auto& ar = in.symbols[sy].arity;
                if (ar.size() != 2) fail("projective gadget symbols must be binary");
                if (!seen_type[ar[0]] || !seen_type[ar[1]])
                    fail("map must follow its node declarations");
                expect(":=");
                g.maps[sy] = parse_glue_map(g.type_structs[ar[1]], g.type_structs[ar[0]]);
                seen_map[sy] = 1;
                expect(";");
            } else {
                fail("expected 'node' or 'map'");
            }
        }
        expect("}");
        for (int t = 0; t < (int)in.types.size(); ++t)
            if (!seen_type[t]) fail("projective gadget misses node for type " + in.types[t]);
        for (int sy = 0; sy < (int)in.symbols.size(); ++sy)
            if (!seen_map[sy])
                fail("projective gadget misses map for symbol " + in.symbols[sy].name);
        validate_projective_gadget(g);
        doc.projectives.push_back({gname, std::move(g)});
    }

    void parse_labelcover() {
        std::string lname = ident();
        LabelCoverInstance s;
        expect("{");
        while (!at("}")) {
            if (at_word("var")) {
                get();
                LabelCoverInstance::Var v;
                v.name = name();
                expect(":");
                expect("{");
                while (!at("}")) {
                    v.labels.push_back(name());
                    if (at(",")) get();
                }
                expect("}");
                expect(";");
                s.vars.push_back(std::move(v));
            } else if (at_word("con")) {
                get();
                std::string uu = name();
                expect("->");
                std::string vv = name();
                int u = s.var_index(uu), v = s.var_index(vv);
                if (u < 0 || v < 0) fail("constraint references unknown variable");
                LabelCoverInstance::Con con;
                con.u = u;
                con.v = v;
                con.pi.assign(s.vars[u].labels.size(), -1);
                expect(":");
                expect("{");
                while (!at("}")) {
                    std::string from = name();
                    expect("->");
                    std::string to = name();
                    int fi = -1, ti = -1;
                    for (int i = 0; i < (int)s.vars[u].labels.size(); ++i)
                        if (s.vars[u].labels[i] == from) fi = i;
                    for (int i = 0; i < (int)s.vars[v].labels.size(); ++i)
                        if (s.vars[v].labels[i] == to) ti = i;
                    if (fi < 0 || ti < 0) fail("constraint map references unknown label");
                    con.pi[fi] = ti;
                    if (at(",")) get();
                }
                expect("}");
                expect(";");
                for (int i = 0; i < (int)con.pi.size(); ++i)
                    if (con.pi[i] < 0)
                        fail("constraint map is not total: missing " + s.vars[u].labels[i]);
                s.cons.push_back(std::move(con));
            } else {
                fail("expected 'var' or 'con'");
            }
        }
        expect("}");
        validate_label_cover(s);
        doc.labelcovers.push_back({lname, std::move(s)});
    }

    void run() {
        while (peek().kind != Tok::End) {
            if (at_word("signature")) {
                get();
                parse_signature();
            } else if (at_word("structure")) {
                get();
                parse_structure();
            } else if (at_word("program")) {
                get();
                parse_program();
            } else if (at_word("interpretation")) {
                get();
                parse_interpretation();
            } else if (at_word("union")) {
                get();
                parse_union();
            } else if (at_word("gadget")) {
                get();
                parse_gadget();
            } else if (at_word("projective")) {
                get();
                parse_projective();
            } else if (at_word("labelcover")) {
                get();
                parse_labelcover();
            } else {
                fail("expected a declaration");
            }
        }
    }
};

template <typename T>
const T* find_in(const std::vector<std::pair<std::string, T>>& list, const std::string& name) {
    for (const auto& [n, v] : list)
        if (n == name) return &v;
    return nullptr;
}

} // namespace

const Signature* Document::find_signature(const std::string& n) const {
    return find_in(signatures, n);
}
const Structure* Document::find_structure(const std::string& n) const {
    return find_in(structures, n);
}
const DatalogProgram* Document::find_program(const std::string& n) const {
    return find_in(programs, n);
}
const DatalogInterpretation* Document::find_interpretation(const std::string& n) const {
    return find_in(interpretations, n);
}
const UnionGadget* Document::find_union(const std::string& n) const { return find_in(unions, n); }
const Gadget* Document::find_gadget(const std::string& n) const { return find_in(gadgets, n); }
const ProjectiveGadget* Document::find_projective(const std::string& n) const {
    return find_in(projectives, n);
}
const LabelCoverInstance* Document::find_labelcover(const std::string& n) const {
    return find_in(labelcovers, n);
}

Document parse_document(const std::string& text) {
    Parser p;
    p.toks = lex(text);
    p.run();
    return std::move(p.doc);
}

namespace {

template <typename T>
void merge_eq(std::vector<std::pair<std::string, T>>& target,
              const std::vector<std::pair<std::string, T>>& add, const char* kind) {
    for (const auto& [name, value] : add) {
        const T* existing = find_in(target, name);
        if (existing) {
            if (!(*existing == value))
                throw Error(std::string(kind) + " " + name + " redeclared with a different value");
        } else {
            target.push_back({name, value});
        }
    }
}

template <typename T>
void merge_presence(std::vector<std::pair<std::string, T>>& target,
                    const std::vector<std::pair<std::string, T>>& add) {
    for (const auto& [name, value] : add)
        if (!find_in(target, name)) target.push_back({name, value});
}

} // namespace

void merge_document(Document& target, const Document& doc) {
    merge_eq(target.signatures, doc.signatures, "signature");
    merge_eq(target.structures, doc.structures, "structure");
    merge_presence(target.programs, doc.programs);
    merge_presence(target.interpretations, doc.interpretations);
    merge_presence(target.unions, doc.unions);
    merge_presence(target.gadgets, doc.gadgets);
    merge_presence(target.projectives, doc.projectives);
    merge_eq(target.labelcovers, doc.labelcovers, "labelcover");
}

namespace {

bool bare_ok(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!isalnum((unsigned char)c) && c != '_' && c != '\'') return false;
    return true;
}

std::string quoted(const std::string& s) {
    if (bare_ok(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string print_signature(const std::string& name, const Signature& sig) {
    std::ostringstream out;
    out << "signature " << name << " {";
    for (const auto& t : sig.types) out << " type " << t << ";";
    for (const auto& sym : sig.symbols) {
        out << " rel " << sym.name << " :";
        for (int t : sym.arity) out << " " << sig.types[t];
        out << " ;";
    }
    out << " }\n";
    return out.str();
}

std::string print_structure(const std::string& name, const std::string& sig_name,
                            const Structure& s) {
    std::ostringstream out;
    out << "structure " << name << " : " << sig_name << " {\n";
    for (int t = 0; t < (int)s.domains.size(); ++t) {
        out << "  " << s.sig.types[t] << " = {";
        for (int i = 0; i < s.domain_size(t); ++i)
            out << (i ? ", " : " ") << quoted(s.domains[t][i]);
        out << " };\n";
    }
    for (int sy = 0; sy < (int)s.relations.size(); ++sy) {
        out << "  " << s.sig.symbols[sy].name << " = {";
        const auto& ar = s.sig.symbols[sy].arity;
        for (size_t j = 0; j < s.relations[sy].size(); ++j) {
            out << (j ? ", (" : " (");
            for (size_t i = 0; i < ar.size(); ++i)
                out << (i ? "," : "") << quoted(s.domains[ar[i]][s.relations[sy][j][i]]);
            out << ")";
        }
        out << " };\n";
    }
    out << "}\n";
    return out.str();
}

namespace {

std::string print_program_body(const DatalogProgram& p) {
    std::ostringstream out;
    for (const auto& idb : p.idbs) {
        out << "  idb " << idb.name << " :";
        for (int t : idb.arity) out << " " << p.input.types[t];
        out << " ;\n";
    }
    out << "  output " << p.idbs[p.output].name << ";\n";
    auto atom_str = [&](const Atom& a) {
        std::ostringstream s;
        if (a.pred == Atom::kEquality) {
            s << "x" << a.vars[0] << " = x" << a.vars[1];
            return s.str();
        }
        s << p.pred_name(a.pred) << "(";
        for (size_t i = 0; i < a.vars.size(); ++i) s << (i ? "," : "") << "x" << a.vars[i];
        s << ")";
        return s.str();
    };
    for (const auto& r : p.rules) {
        out << "  " << atom_str(r.head);
        if (!r.body.empty()) {
            out << " :- ";
            for (size_t i = 0; i < r.body.size(); ++i) out << (i ? ", " : "") << atom_str(r.body[i]);
        }
        out << ".\n";
    }
    return out.str();
}

} // namespace

std::string print_program(const std::string& name, const std::string& sig_name,
                          const DatalogProgram& p) {
    std::ostringstream out;
    out << "program " << name << " : " << sig_name << " {\n" << print_program_body(p) << "}\n";
    return out.str();
}

std::string print_interpretation(const std::string& name, const std::string& in_name,
                                 const std::string& out_name, const DatalogInterpretation& phi) {
    std::ostringstream out;
    out << "interpretation " << name << " : " << in_name << " -> " << out_name << " {\n";
    for (int t = 0; t < (int)phi.output.types.size(); ++t)
        out << " type " << phi.output.types[t] << " := program {\n"
            << print_program_body(phi.type_programs[t]) << " };\n";
    for (int sy = 0; sy < (int)phi.output.symbols.size(); ++sy)
        out << " rel " << phi.output.symbols[sy].name << " := program {\n"
            << print_program_body(phi.symbol_programs[sy]) << " };\n";
    out << "}\n";
    return out.str();
}

std::string print_union(const std::string& name, const std::string& in_name,
                        const std::string& out_name, const UnionGadget& u) {
    std::ostringstream out;
    out << "union " << name << " : " << in_name << " -> " << out_name << " {";
    for (int t = 0; t < (int)u.input.types.size(); ++t)
        out << " type " << u.input.types[t] << " -> " << u.output.types[u.type_map[t]] << ";";
    for (int sy = 0; sy < (int)u.input.symbols.size(); ++sy)
        out << " rel " << u.input.symbols[sy].name << " -> "
            << u.output.symbols[u.symbol_map[sy]].name << ";";
    out << " }\n";
    return out.str();
}

std::string print_labelcover(const std::string& name, const LabelCoverInstance& s) {
    std::ostringstream out;
    out << "labelcover " << name << " {\n";
    for (const auto& v : s.vars) {
        out << "  var " << quoted(v.name) << " : {";
        for (size_t i = 0; i < v.labels.size(); ++i)
            out << (i ? ", " : " ") << quoted(v.labels[i]);
        out << " };\n";
    }
    for (const auto& c : s.cons) {
        out << "  con " << quoted(s.vars[c.u].name) << " -> " << quoted(s.vars[c.v].name)
            << " : {";
        for (size_t i = 0; i < c.pi.size(); ++i)
            out << (i ? ", " : " ") << quoted(s.vars[c.u].labels[i]) << " -> "
                << quoted(s.vars[c.v].labels[c.pi[i]]);
        out << " };\n";
    }
    out << "}\n";
    return out.str();
}

std::string print_document(const Document& doc) {
    std::ostringstream out;
    std::vector<std::pair<std::string, Signature>> sigs = doc.signatures;
    auto sig_name = [&](const Signature& sig) {
        for (const auto& [n, s] : sigs)
            if (s == sig) return n;
        std::string fresh = "sig" + std::to_string(sigs.size());
        while (find_in(sigs, fresh)) fresh += "'";
        sigs.push_back({fresh, sig});
        return fresh;
    };
    std::ostringstream body;
    for (const auto& [n, s] : doc.structures) body << print_structure(n, sig_name(s.sig), s);
    for (const auto& [n, p] : doc.programs) body << print_program(n, sig_name(p.input), p);
    for (const auto& [n, phi] : doc.interpretations)
        body << print_interpretation(n, sig_name(phi.input), sig_name(phi.output), phi);
    for (const auto& [n, u] : doc.unions)
        body << print_union(n, sig_name(u.input), sig_name(u.output), u);
    for (const auto& [n, s] : doc.labelcovers) body << print_labelcover(n, s);
    for (const auto& [n, sig] : sigs) out << print_signature(n, sig);
    out << body.str();
    return out.str();
}

using nlohmann::json;

namespace {

json signature_to_json_obj(const Signature& sig) {
    json types = json::array();
    for (const auto& t : sig.types) types.push_back(t);
    json symbols = json::array();
    for (const auto& sym : sig.symbols) {
        json arity = json::array();
        for (int t : sym.arity) arity.push_back(sig.types[t]);
        symbols.push_back({{"name", sym.name}, {"arity", arity}});
    }
    return {{"types", types}, {"symbols", symbols}};
}

Signature signature_from_json_obj(const json& j) {
    Signature sig;
    for (const auto& t : j.at("types")) sig.add_type(t.get<std::string>());
    for (const auto& sym : j.at("symbols")) {
        std::vector<int> arity;
        for (const auto& t : sym.at("arity")) {
            int idx = sig.type_index(t.get<std::string>());
            if (idx < 0) throw Error("json signature arity names unknown type");
            arity.push_back(idx);
        }
        sig.add_symbol(sym.at("name").get<std::string>(), std::move(arity));
    }
    return sig;
}

} // namespace

std::string structure_to_json(const Structure& s) {
    json j;
    j["signature"] = signature_to_json_obj(s.sig);
    j["domains"] = s.domains;
    j["relations"] = s.relations;
    return j.dump();
}

Structure structure_from_json(const std::string& text) {
    json j = json::parse(text);
    Structure s;
    s.sig = signature_from_json_obj(j.at("signature"));
    s.domains = j.at("domains").get<std::vector<std::vector<std::string>>>();
    s.relations = j.at("relations").get<std::vector<std::vector<Tuple>>>();
    canonicalize_relations(s);
    validate_structure(s);
    return s;
}

std::string labelcover_to_json(const LabelCoverInstance& s) {
    json vars = json::array();
    for (const auto& v : s.vars) vars.push_back({{"name", v.name}, {"labels", v.labels}});
    json cons = json::array();
    for (const auto& c : s.cons) cons.push_back({{"u", c.u}, {"v", c.v}, {"pi", c.pi}});
    json j{{"vars", vars}, {"cons", cons}};
    return j.dump();
}

LabelCoverInstance labelcover_from_json(const std::string& text) {
    json j = json::parse(text);
    LabelCoverInstance s;
    for (const auto& v : j.at("vars"))
        s.vars.push_back(
            {v.at("name").get<std::string>(), v.at("labels").get<std::vector<std::string>>()});
    for (const auto& c : j.at("cons"))
        s.cons.push_back(
            {c.at("u").get<int>(), c.at("v").get<int>(), c.at("pi").get<std::vector<int>>()});
    validate_label_cover(s);
    return s;
}

std::string minion_to_json(const Minion& m) {
    json j;
    j["max_arity"] = m.max_arity;
    j["elements"] = m.elems;
    j["minors"] = m.minor_tab;
    return j.dump();
}

Minion minion_from_json(const std::string& text) {
    json j = json::parse(text);
    Minion m;
    m.max_arity = j.at("max_arity").get<int>();
    m.elems = j.at("elements").get<std::vector<std::vector<std::string>>>();
    m.minor_tab = j.at("minors").get<std::vector<std::vector<std::vector<std::vector<int>>>>>();
    std::string why;
    if (!check_minion_laws(m, &why)) throw Error("json minion violates the minion laws: " + why);
    return m;
}

} // namespace cspforge
