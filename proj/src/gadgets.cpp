#include "cspforge/gadgets.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace cspforge {

void validate_gadget(const Gadget& g) {
    if ((int)g.type_structs.size() != (int)g.input.types.size() ||
        (int)g.symbol_structs.size() != (int)g.input.symbols.size() ||
        (int)g.glue.size() != (int)g.input.symbols.size())
        throw ValidationError("gadget components do not cover the input signature");
    for (const auto& d : g.type_structs)
        if (d.sig != g.output) throw ValidationError("gadget type structure over wrong signature");
    for (int s = 0; s < (int)g.input.symbols.size(); ++s) {
        const auto& ar = g.input.symbols[s].arity;
        if (g.symbol_structs[s].sig != g.output)
            throw ValidationError("gadget symbol structure over wrong signature");
        if (g.glue[s].size() != ar.size())
            throw ValidationError("gadget needs one gluing map per symbol position");
        for (size_t i = 0; i < ar.size(); ++i)
            if (!is_homomorphism(g.type_structs[ar[i]], g.symbol_structs[s], g.glue[s][i]))
                throw ValidationError("gluing map p_{" + g.input.symbols[s].name + "," +
                                      std::to_string(i + 1) + "} is not a homomorphism");
    }
}

namespace {

// side-by-side copies of structures, one per tag, returning per-copy offsets
struct CopyBlock {
    Structure big;
    std::vector<std::vector<int>> offset; // [copy][type]

    CopyBlock(const Signature& sig, size_t ntypes) {
        big.sig = sig;
        big.domains.resize(sig.types.size());
        big.relations.resize(sig.symbols.size());
        (void)ntypes;
    }

    int add_copy(const Structure& piece, const std::string& tag) {
        std::vector<int> off(big.domains.size());
        for (int t = 0; t < (int)big.domains.size(); ++t) {
            off[t] = (int)big.domains[t].size();
            for (const auto& name : piece.domains[t])
                big.domains[t].push_back("[" + tag + "|" + name + "]");
        }
        for (int s = 0; s < (int)big.relations.size(); ++s) {
            const auto& ar = big.sig.symbols[s].arity;
            for (const auto& tup : piece.relations[s]) {
                Tuple img(tup.size());
                for (size_t i = 0; i < tup.size(); ++i) img[i] = tup[i] + off[ar[i]];
                big.relations[s].push_back(img);
            }
        }
        offset.push_back(off);
        return (int)offset.size() - 1;
    }
};

} // namespace

Structure apply_gadget(const Gadget& g, const Structure& x) {
    validate_gadget(g);
    if (g.input != x.sig) throw SignatureMismatch("gadget input signature does not match");

    CopyBlock block(g.output, g.output.types.size());
    // copy of D_t per element, copy of S_R per constraint tuple
    std::vector<std::vector<int>> elem_copy(x.domains.size());
    for (int t = 0; t < (int)x.domains.size(); ++t)
        for (int i = 0; i < x.domain_size(t); ++i)
            elem_copy[t].push_back(block.add_copy(g.type_structs[t], "e:" + x.element_name(t, i)));
    std::vector<std::vector<int>> tuple_copy(x.relations.size());
    for (int s = 0; s < (int)x.relations.size(); ++s)
        for (int j = 0; j < (int)x.relations[s].size(); ++j) {
            std::vector<std::string> parts;
            for (size_t i = 0; i < x.relations[s][j].size(); ++i)
                parts.push_back(x.element_name(x.sig.symbols[s].arity[i], x.relations[s][j][i]));
            tuple_copy[s].push_back(
                block.add_copy(g.symbol_structs[s], "c:" + x.sig.symbols[s].name + tuple_name(parts)));
        }

    canonicalize_relations(block.big);
    Partition part(block.big);
    // equality constraints (a; p_{R,i}(e)) = (a_i; e)
    for (int s = 0; s < (int)x.relations.size(); ++s) {
        const auto& ar = x.sig.symbols[s].arity;
        for (int j = 0; j < (int)x.relations[s].size(); ++j) {
            const auto& tup = x.relations[s][j];
            for (size_t i = 0; i < tup.size(); ++i) {
                const Structure& d = g.type_structs[ar[i]];
                int ccopy = tuple_copy[s][j];
                int ecopy = elem_copy[ar[i]][tup[i]];
                for (int st = 0; st < (int)d.domains.size(); ++st)
                    for (int e = 0; e < d.domain_size(st); ++e) {
                        int img = g.glue[s][i].map[st][e];
                        part.unite({st, block.offset[ccopy][st] + img},
                                   {st, block.offset[ecopy][st] + e});
                    }
            }
        }
    }
    return quotient(block.big, part);
}

void validate_projective_gadget(const ProjectiveGadget& g) {
    if ((int)g.type_structs.size() != (int)g.input.types.size() ||
        (int)g.maps.size() != (int)g.input.symbols.size())
        throw ValidationError("projective gadget components do not cover the input signature");
    for (const auto& d : g.type_structs)
        if (d.sig != g.output)
            throw ValidationError("projective gadget structure over wrong signature");
    for (int s = 0; s < (int)g.input.symbols.size(); ++s) {
        const auto& ar = g.input.symbols[s].arity;
        if (ar.size() != 2)
            throw ValidationError("projective gadget input symbols must be binary");
        if (!is_homomorphism(g.type_structs[ar[1]], g.type_structs[ar[0]], g.maps[s]))
            throw ValidationError("p_" + g.input.symbols[s].name + " is not a homomorphism");
    }
}

Structure apply_projective_gadget(const ProjectiveGadget& g, const Structure& x) {
    validate_projective_gadget(g);
    if (g.input != x.sig) throw SignatureMismatch("projective gadget input signature mismatch");

    CopyBlock block(g.output, g.output.types.size());
    std::vector<std::vector<int>> elem_copy(x.domains.size());
    for (int t = 0; t < (int)x.domains.size(); ++t)
        for (int i = 0; i < x.domain_size(t); ++i)
            elem_copy[t].push_back(block.add_copy(g.type_structs[t], x.element_name(t, i)));

    canonicalize_relations(block.big);
    Partition part(block.big);
    // (a; p_R(d)) = (b; d) for (a, b) in R, d ranging over D_s
    for (int s = 0; s < (int)x.relations.size(); ++s) {
        int t = x.sig.symbols[s].arity[0];
        int ssrc = x.sig.symbols[s].arity[1];
        const Structure& ds = g.type_structs[ssrc];
        for (const auto& tup : x.relations[s]) {
            int acopy = elem_copy[t][tup[0]];
            int bcopy = elem_copy[ssrc][tup[1]];
            for (int st = 0; st < (int)ds.domains.size(); ++st)
                for (int d = 0; d < ds.domain_size(st); ++d) {
                    int img = g.maps[s].map[st][d];
                    part.unite({st, block.offset[acopy][st] + img},
                               {st, block.offset[bcopy][st] + d});
                }
        }
    }
    return quotient(block.big, part);
}

Signature reified_signature(const Signature& pi) {
    Signature out;
    for (const auto& t : pi.types) out.add_type(t);
    std::vector<int> sym_type(pi.symbols.size());
    for (int s = 0; s < (int)pi.symbols.size(); ++s) {
        std::string name = pi.symbols[s].name;
        while (out.type_index(name) >= 0) name += "'";
        sym_type[s] = out.add_type(name);
    }
    for (int s = 0; s < (int)pi.symbols.size(); ++s) {
        const auto& ar = pi.symbols[s].arity;
        for (size_t i = 0; i < ar.size(); ++i)
            out.add_symbol("P_" + pi.symbols[s].name + "_" + std::to_string(i + 1),
                           {sym_type[s], ar[i]});
    }
    return out;
}

Structure reify(const Structure& x) {
    Signature sig = reified_signature(x.sig);
    Structure out;
    out.sig = sig;
    out.domains.resize(sig.types.size());
    out.relations.resize(sig.symbols.size());
    int ntypes = (int)x.domains.size();
    for (int t = 0; t < ntypes; ++t) out.domains[t] = x.domains[t];
    for (int s = 0; s < (int)x.relations.size(); ++s) {
        const auto& ar = x.sig.symbols[s].arity;
        for (const auto& tup : x.relations[s]) {
            std::vector<std::string> parts;
            for (size_t i = 0; i < tup.size(); ++i)
                parts.push_back(x.element_name(ar[i], tup[i]));
            out.domains[ntypes + s].push_back(tuple_name(parts));
        }
    }
    int sym = 0;
    for (int s = 0; s < (int)x.relations.size(); ++s) {
        const auto& ar = x.sig.symbols[s].arity;
        for (size_t i = 0; i < ar.size(); ++i, ++sym)
            for (int j = 0; j < (int)x.relations[s].size(); ++j)
                out.relations[sym].push_back({j, x.relations[s][j][i]});
    }
    canonicalize_relations(out);
    return out;
}

DatalogInterpretation reify_interpretation(const Signature& pi) {
    DatalogInterpretation phi;
    phi.input = pi;
    phi.output = reified_signature(pi);
    for (int t = 0; t < (int)pi.types.size(); ++t) {
        DatalogProgram p;
        p.input = pi;
        p.add_idb("D_" + pi.types[t], {t});
        Rule r;
        r.var_types = {t};
        r.head = {p.edb_count(), {0}};
        r.body = {{Atom::kEquality, {0, 0}}};
        p.rules.push_back(r);
        p.output = 0;
        phi.type_programs.push_back(std::move(p));
    }
    for (int s = 0; s < (int)pi.symbols.size(); ++s) {
        DatalogProgram p;
        p.input = pi;
        const auto& ar = pi.symbols[s].arity;
        p.add_idb("DT_" + pi.symbols[s].name, ar);
        Rule r;
        r.var_types = ar;
        std::vector<int> vars(ar.size());
        for (size_t i = 0; i < ar.size(); ++i) vars[i] = (int)i;
        r.head = {p.edb_count(), vars};
        r.body = {{s, vars}};
        p.rules.push_back(r);
        p.output = 0;
        phi.type_programs.push_back(std::move(p));
    }
    for (int s = 0; s < (int)pi.symbols.size(); ++s) {
        const auto& ar = pi.symbols[s].arity;
        for (size_t i = 0; i < ar.size(); ++i) {
            DatalogProgram p;
            p.input = pi;
            std::vector<int> head_ar = ar;
            head_ar.push_back(ar[i]);
            p.add_idb("P_" + pi.symbols[s].name + "_" + std::to_string(i + 1), head_ar);
            Rule r;
            r.var_types = ar;
            std::vector<int> head_vars(ar.size());
            for (size_t j = 0; j < ar.size(); ++j) head_vars[j] = (int)j;
            head_vars.push_back((int)i);
            std::vector<int> body_vars(ar.size());
            for (size_t j = 0; j < ar.size(); ++j) body_vars[j] = (int)j;
            r.head = {p.edb_count(), head_vars};
            r.body = {{s, body_vars}};
            p.rules.push_back(r);
            p.output = 0;
            phi.symbol_programs.push_back(std::move(p));
        }
    }
    validate_interpretation(phi);
    return phi;
}

LabelCoverInstance reify_to_label_cover(const Structure& a, const Structure& x) {
    if (a.sig != x.sig) throw SignatureMismatch("reify_to_label_cover needs a shared signature");
    LabelCoverInstance out;
    std::vector<std::vector<int>> elem_var(x.domains.size());
    for (int t = 0; t < (int)x.domains.size(); ++t)
        for (int i = 0; i < x.domain_size(t); ++i) {
            LabelCoverInstance::Var v;
            v.name = x.sig.types[t] + ":" + x.element_name(t, i);
            v.labels = a.domains[t];
            elem_var[t].push_back((int)out.vars.size());
            out.vars.push_back(std::move(v));
        }
    for (int s = 0; s < (int)x.relations.size(); ++s) {
        const auto& ar = x.sig.symbols[s].arity;
        for (int j = 0; j < (int)x.relations[s].size(); ++j) {
            const auto& tup = x.relations[s][j];
            LabelCoverInstance::Var v;
            std::vector<std::string> parts;
            for (size_t i = 0; i < tup.size(); ++i)
                parts.push_back(x.element_name(ar[i], tup[i]));
            v.name = x.sig.symbols[s].name + tuple_name(parts);
            for (const auto& atup : a.relations[s]) {
                std::vector<std::string> aparts;
                for (size_t i = 0; i < atup.size(); ++i)
                    aparts.push_back(a.element_name(ar[i], atup[i]));
                v.labels.push_back(tuple_name(aparts));
            }
            int cvar = (int)out.vars.size();
            out.vars.push_back(std::move(v));
            for (size_t i = 0; i < tup.size(); ++i) {
                LabelCoverInstance::Con con;
                con.u = cvar;
                con.v = elem_var[ar[i]][tup[i]];
                for (const auto& atup : a.relations[s]) con.pi.push_back(atup[i]);
                out.cons.push_back(std::move(con));
            }
        }
    }
    validate_label_cover(out);
    return out;
}

ProjectiveGadget to_projective(const Gadget& g) {
    validate_gadget(g);
    ProjectiveGadget out;
    out.input = reified_signature(g.input);
    out.output = g.output;
    for (const auto& d : g.type_structs) out.type_structs.push_back(d);
    for (const auto& r : g.symbol_structs) out.type_structs.push_back(r);
    for (int s = 0; s < (int)g.input.symbols.size(); ++s)
        for (size_t i = 0; i < g.input.symbols[s].arity.size(); ++i)
            out.maps.push_back(g.glue[s][i]);
    validate_projective_gadget(out);
    return out;
}

namespace {

std::string ident(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (isalnum((unsigned char)c) || c == '_' || c == '\'') ? c : '_';
    return out;
}

} // namespace

DDatalogReduction compile_projective_gadget(const ProjectiveGadget& g) {
    validate_projective_gadget(g);
    const Signature& pi = g.input;

    // tagged disjoint union of the D_t; the structures are assumed pairwise
    // disjoint, realized here by the (type, element) tagging
    struct Piece {
        int pi_type;
        int sigma_type;
        int elem;
        std::string name;
    };
    std::vector<Piece> dd;
    std::vector<std::vector<std::vector<int>>> dd_index(pi.types.size()); // [pitype][sigmatype][elem]
    for (int t = 0; t < (int)pi.types.size(); ++t) {
        dd_index[t].resize(g.output.types.size());
        for (int st = 0; st < (int)g.output.types.size(); ++st) {
            dd_index[t][st].resize(g.type_structs[t].domain_size(st));
            for (int e = 0; e < g.type_structs[t].domain_size(st); ++e) {
                dd_index[t][st][e] = (int)dd.size();
                dd.push_back({t, st, e,
                              ident(pi.types[t] + "_" + g.type_structs[t].element_name(st, e))});
            }
        }
    }
    int nd = (int)dd.size();

    Signature sigma2;
    for (const auto& p : dd) sigma2.add_type("g_" + p.name);
    // R_g per output symbol and per type-compatible tuple over dd
    struct SymCopy {
        int symbol;
        std::vector<int> g;
    };
    std::vector<SymCopy> copies;
    for (int s = 0; s < (int)g.output.symbols.size(); ++s) {
        const auto& ar = g.output.symbols[s].arity;
        std::vector<int> cur(ar.size());
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == ar.size()) {
                std::string name = g.output.symbols[s].name;
                for (int gi : cur) name += "__" + dd[gi].name;
                std::vector<int> sar;
                for (int gi : cur) sar.push_back(gi);
                sigma2.add_symbol(name, sar);
                copies.push_back({s, cur});
                return;
            }
            for (int j = 0; j < nd; ++j)
                if (dd[j].sigma_type == ar[i]) {
                    cur[i] = j;
                    rec(i + 1);
                }
        };
        rec(0);
    }

    DatalogInterpretation phi;
    phi.input = pi;
    phi.output = sigma2;
    for (int j = 0; j < nd; ++j) {
        DatalogProgram p;
        p.input = pi;
        p.add_idb("D_" + dd[j].name, {dd[j].pi_type});
        Rule r;
        r.var_types = {dd[j].pi_type};
        r.head = {p.edb_count(), {0}};
        r.body = {{Atom::kEquality, {0, 0}}};
        p.rules.push_back(r);
        p.output = 0;
        phi.type_programs.push_back(std::move(p));
    }

    for (const auto& copy : copies) {
        DatalogProgram p;
        p.input = pi;
        // I_{h1,h2} with arity (type(h1), type(h2))
        std::vector<std::vector<int>> iidx(nd, std::vector<int>(nd));
        for (int h1 = 0; h1 < nd; ++h1)
            for (int h2 = 0; h2 < nd; ++h2)
                iidx[h1][h2] = p.add_idb("I_" + dd[h1].name + "__" + dd[h2].name,
                                         {dd[h1].pi_type, dd[h2].pi_type});
        std::vector<int> out_ar;
        for (int gi : copy.g) out_ar.push_back(dd[gi].pi_type);
        int out_idb = p.add_idb("O", out_ar);
        int e = p.edb_count();

        // gluing facts: I_{p_S(h), h}(x, y) <- S(x, y)
        for (int s = 0; s < (int)pi.symbols.size(); ++s) {
            int t = pi.symbols[s].arity[0], src = pi.symbols[s].arity[1];
            for (int st = 0; st < (int)g.output.types.size(); ++st)
                for (int h = 0; h < g.type_structs[src].domain_size(st); ++h) {
                    int img = g.maps[s].map[st][h];
                    Rule r;
                    r.var_types = {t, src};
                    r.head = {e + iidx[dd_index[t][st][img]][dd_index[src][st][h]], {0, 1}};
                    r.body = {{s, {0, 1}}};
                    p.rules.push_back(r);
                }
        }
        // reflexive symmetric transitive closure
        for (int h = 0; h < nd; ++h) {
            Rule r;
            r.var_types = {dd[h].pi_type};
            r.head = {e + iidx[h][h], {0, 0}};
            r.body = {{Atom::kEquality, {0, 0}}};
            p.rules.push_back(r);
        }
        for (int h1 = 0; h1 < nd; ++h1)
            for (int h2 = 0; h2 < nd; ++h2) {
                Rule r;
                r.var_types = {dd[h1].pi_type, dd[h2].pi_type};
                r.head = {e + iidx[h1][h2], {0, 1}};
                r.body = {{e + iidx[h2][h1], {1, 0}}};
                p.rules.push_back(r);
            }
        for (int h1 = 0; h1 < nd; ++h1)
            for (int h2 = 0; h2 < nd; ++h2)
                for (int h3 = 0; h3 < nd; ++h3) {
                    Rule r;
                    r.var_types = {dd[h1].pi_type, dd[h2].pi_type, dd[h3].pi_type};
                    r.head = {e + iidx[h1][h3], {0, 2}};
                    r.body = {{e + iidx[h1][h2], {0, 1}}, {e + iidx[h2][h3], {1, 2}}};
                    p.rules.push_back(r);
                }
        // R_g(x_1..x_k) <- I_{g_1,h_1}(x_1, y), ..., I_{g_k,h_k}(x_k, y)
        // for each h in the R-relation of some D_s
        int k = (int)copy.g.size();
        for (int src = 0; src < (int)pi.types.size(); ++src) {
            const auto& rel = g.type_structs[src].relations[copy.symbol];
            const auto& ar = g.output.symbols[copy.symbol].arity;
            for (const auto& h : rel) {
                Rule r;
                for (int i = 0; i < k; ++i) r.var_types.push_back(dd[copy.g[i]].pi_type);
                int yvar = (int)r.var_types.size();
                r.var_types.push_back(src);
                std::vector<int> head_vars(k);
                for (int i = 0; i < k; ++i) head_vars[i] = i;
                r.head = {e + out_idb, head_vars};
                for (int i = 0; i < k; ++i) {
                    int hi = dd_index[src][ar[i]][h[i]];
                    r.body.push_back({e + iidx[copy.g[i]][hi], {i, yvar}});
                }
                if (k == 0) r.body.push_back({Atom::kEquality, {yvar, yvar}});
                p.rules.push_back(r);
            }
        }
        p.output = out_idb;
        validate_program(p);
        phi.symbol_programs.push_back(std::move(p));
    }
    validate_interpretation(phi);

    UnionGadget un;
    un.input = sigma2;
    un.output = g.output;
    for (const auto& piece : dd) un.type_map.push_back(piece.sigma_type);
    for (const auto& copy : copies) un.symbol_map.push_back(copy.symbol);
    validate_union_gadget(un);
    return {std::move(phi), std::move(un)};
}

DDatalogReduction compile_gadget(const Gadget& g) {
    auto reduced = compile_projective_gadget(to_projective(g));
    DDatalogReduction out;
    out.interp = compose_interpretations(reify_interpretation(g.input), reduced.interp);
    out.un = reduced.un;
    return out;
}

ProjectiveGadget universal_gadget(const Structure& b, const LabelCoverReduct& red) {
    ProjectiveGadget out;
    out.input = red.sig;
    out.output = b.sig;
    for (const auto& labels : red.type_labels)
        out.type_structs.push_back(power(b, (int)labels.size()));
    for (int s = 0; s < (int)red.symbol_maps.size(); ++s) {
        // p_{E_sigma}(d) = d o sigma : B^Y -> B^X
        int tx = red.sig.symbols[s].arity[0], ty = red.sig.symbols[s].arity[1];
        int nx = (int)red.type_labels[tx].size(), ny = (int)red.type_labels[ty].size();
        Homomorphism h;
        h.map.resize(b.domains.size());
        for (int t = 0; t < (int)b.domains.size(); ++t) {
            int bt = b.domain_size(t);
            long long count = 1;
            for (int i = 0; i < ny; ++i) count *= bt;
            h.map[t].resize(count);
            for (long long idx = 0; idx < count; ++idx) {
                std::vector<int> d(ny);
                long long rem = idx;
                for (int i = ny - 1; i >= 0; --i) {
                    d[i] = (int)(rem % bt);
                    rem /= bt;
                }
                long long pre = 0;
                for (int i = 0; i < nx; ++i) pre = pre * bt + d[red.symbol_maps[s][i]];
                h.map[t][idx] = (int)pre;
            }
        }
        out.maps.push_back(std::move(h));
    }
    validate_projective_gadget(out);
    return out;
}

namespace {

Structure k2_graph() {
    Signature sig = digraph_signature();
    return make_structure(sig, {{"0", "1"}}, {{{0, 1}, {1, 0}}});
}

} // namespace

Gadget k2_to_kinf_gadget() {
    Gadget g;
    g.input = digraph_signature();
    g.output = digraph_signature();
    g.type_structs = {k2_graph()};
    g.symbol_structs = {k2_graph()};
    Homomorphism idm, swap;
    idm.map = {{0, 1}};
    swap.map = {{1, 0}};
    g.glue = {{idm, swap}};
    validate_gadget(g);
    return g;
}

ProjectiveGadget k2_to_kinf_projective() {
    ProjectiveGadget g;
    g.input = digraph_signature();
    g.output = digraph_signature();
    g.type_structs = {k2_graph()};
    Homomorphism swap;
    swap.map = {{1, 0}};
    g.maps = {swap};
    validate_projective_gadget(g);
    return g;
}

Gadget k5_to_c5_gadget() {
    Gadget g;
    g.input = digraph_signature();
    g.output = digraph_signature();
    Signature sig = digraph_signature();
    Structure dot = make_structure(sig, {{"*"}}, {{}});
    Structure p3 = make_structure(
        sig, {{"0", "1", "2", "3"}},
        {{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}}});
    g.type_structs = {dot};
    g.symbol_structs = {p3};
    Homomorphism p1, p2;
    p1.map = {{0}};
    p2.map = {{3}};
    g.glue = {{p1, p2}};
    validate_gadget(g);
    return g;
}

} // namespace cspforge
