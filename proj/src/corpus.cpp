#include "cspforge/corpus.hpp"

#include "cspforge/relax.hpp"

#include <algorithm>
#include <set>

namespace cspforge {

Structure complete_graph(int n) {
    Signature sig = digraph_signature();
    std::vector<std::string> dom;
    for (int i = 0; i < n; ++i) dom.push_back(std::to_string(i));
    std::vector<Tuple> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) edges.push_back({i, j});
    return make_structure(sig, {dom}, {edges});
}

Structure directed_cycle(int n) {
    Signature sig = digraph_signature();
    std::vector<std::string> dom;
    for (int i = 0; i < n; ++i) dom.push_back(std::to_string(i));
    std::vector<Tuple> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return make_structure(sig, {dom}, {edges});
}

Structure directed_path(int n) {
    Signature sig = digraph_signature();
    std::vector<std::string> dom;
    for (int i = 0; i <= n; ++i) dom.push_back(std::to_string(i));
    std::vector<Tuple> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, i + 1});
    return make_structure(sig, {dom}, {edges});
}

Structure single_edge() {
    return make_structure(digraph_signature(), {{"u", "v"}}, {{{0, 1}}});
}

Structure loop_graph() {
    return make_structure(digraph_signature(), {{"u"}}, {{{0, 0}}});
}

Structure complete_bipartite(int n, int m) {
    Signature sig = digraph_signature();
    std::vector<std::string> dom;
    for (int i = 0; i < n + m; ++i) dom.push_back(std::to_string(i));
    std::vector<Tuple> edges;
    for (int i = 0; i < n; ++i)
        for (int j = n; j < n + m; ++j) {
            edges.push_back({i, j});
            edges.push_back({j, i});
        }
    return make_structure(sig, {dom}, {edges});
}

Structure random_structure(const Signature& sig, Rng& rng, int max_elems, int tuple_percent) {
    Structure s;
    s.sig = sig;
    s.domains.resize(sig.types.size());
    s.relations.resize(sig.symbols.size());
    for (int t = 0; t < (int)sig.types.size(); ++t) {
        int n = 1 + rng.below(max_elems);
        for (int i = 0; i < n; ++i) s.domains[t].push_back("e" + std::to_string(i));
    }
    for (int sy = 0; sy < (int)sig.symbols.size(); ++sy) {
        const auto& ar = sig.symbols[sy].arity;
        long long total = 1;
        for (int t : ar) total *= s.domain_size(t);
        for (long long idx = 0; idx < total; ++idx) {
            if (!rng.chance(tuple_percent, 100)) continue;
            Tuple tup(ar.size());
            long long rem = idx;
            for (int i = (int)ar.size() - 1; i >= 0; --i) {
                tup[i] = (int)(rem % s.domain_size(ar[i]));
                rem /= s.domain_size(ar[i]);
            }
            s.relations[sy].push_back(tup);
        }
    }
    canonicalize_relations(s);
    return s;
}

Structure random_digraph(Rng& rng, int max_vertices, int edge_percent) {
    return random_structure(digraph_signature(), rng, max_vertices, edge_percent);
}

HomPair random_hom_pair(const Signature& sig, Rng& rng, int max_elems, int tuple_percent) {
    HomPair out;
    out.b = random_structure(sig, rng, max_elems, tuple_percent);
    out.a.sig = sig;
    out.a.domains.resize(sig.types.size());
    out.a.relations.resize(sig.symbols.size());
    out.f.map.resize(sig.types.size());
    for (int t = 0; t < (int)sig.types.size(); ++t) {
        int n = 1 + rng.below(max_elems);
        for (int i = 0; i < n; ++i) {
            out.a.domains[t].push_back("a" + std::to_string(i));
            out.f.map[t].push_back(rng.below(out.b.domain_size(t)));
        }
    }
    // tuples of A are random preimages of tuples of B, so f is a
    // homomorphism by construction
    for (int sy = 0; sy < (int)sig.symbols.size(); ++sy) {
        const auto& ar = sig.symbols[sy].arity;
        if (out.b.relations[sy].empty()) continue;
        int tries = 2 + rng.below(2 * max_elems);
        for (int t = 0; t < tries; ++t) {
            Tuple tup(ar.size());
            for (size_t i = 0; i < ar.size(); ++i) tup[i] = rng.below(out.a.domain_size(ar[i]));
            Tuple img(tup.size());
            for (size_t i = 0; i < tup.size(); ++i) img[i] = out.f.map[ar[i]][tup[i]];
            if (std::binary_search(out.b.relations[sy].begin(), out.b.relations[sy].end(), img))
                out.a.relations[sy].push_back(tup);
        }
    }
    canonicalize_relations(out.a);
    return out;
}

Structure planted_instance(const Structure& tmpl, Rng& rng, int n_elems, int n_tuples) {
    Structure x;
    x.sig = tmpl.sig;
    x.domains.resize(tmpl.domains.size());
    x.relations.resize(tmpl.relations.size());
    std::vector<std::vector<int>> plant(tmpl.domains.size());
    for (int t = 0; t < (int)tmpl.domains.size(); ++t) {
        if (tmpl.domain_size(t) == 0) continue;
        for (int i = 0; i < n_elems; ++i) {
            x.domains[t].push_back("x" + std::to_string(i));
            plant[t].push_back(rng.below(tmpl.domain_size(t)));
        }
    }
    for (int attempt = 0; attempt < n_tuples * 4; ++attempt) {
        int sy = rng.below((int)tmpl.relations.size());
        const auto& ar = x.sig.symbols[sy].arity;
        Tuple tup(ar.size());
        bool ok = true;
        for (size_t i = 0; i < ar.size() && ok; ++i) {
            if (x.domain_size(ar[i]) == 0)
                ok = false;
            else
                tup[i] = rng.below(x.domain_size(ar[i]));
        }
        if (!ok) continue;
        Tuple img(tup.size());
        for (size_t i = 0; i < tup.size(); ++i) img[i] = plant[ar[i]][tup[i]];
        if (std::binary_search(tmpl.relations[sy].begin(), tmpl.relations[sy].end(), img)) {
            x.relations[sy].push_back(tup);
            if ((int)x.relations[sy].size() >= n_tuples) break;
        }
    }
    canonicalize_relations(x);
    return x;
}

LabelCoverInstance random_label_cover(Rng& rng, int max_vars, int max_labels, int max_cons) {
    LabelCoverInstance s;
    int nv = 1 + rng.below(max_vars);
    for (int v = 0; v < nv; ++v) {
        LabelCoverInstance::Var var;
        var.name = "v" + std::to_string(v);
        int nl = 1 + rng.below(max_labels);
        for (int l = 0; l < nl; ++l) var.labels.push_back(std::to_string(l));
        s.vars.push_back(std::move(var));
    }
    int nc = rng.below(max_cons + 1);
    for (int c = 0; c < nc; ++c) {
        LabelCoverInstance::Con con;
        con.u = rng.below(nv);
        con.v = rng.below(nv);
        for (size_t i = 0; i < s.vars[con.u].labels.size(); ++i)
            con.pi.push_back(rng.below((int)s.vars[con.v].labels.size()));
        s.cons.push_back(std::move(con));
    }
    validate_label_cover(s);
    return s;
}

Structure tseitin_k4(const std::vector<unsigned>& charges) {
    if (charges.size() != 4) throw ValidationError("tseitin_k4 needs one charge per vertex");
    Structure tmpl = group_template(2, {1});
    Structure x;
    x.sig = tmpl.sig;
    x.domains.resize(1);
    x.relations.resize(x.sig.symbols.size());
    auto add_elem = [&](const std::string& name) {
        x.domains[0].push_back(name);
        return (int)x.domains[0].size() - 1;
    };
    // one variable per edge of K4
    std::vector<std::vector<int>> edge(4, std::vector<int>(4, -1));
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            edge[i][j] = edge[j][i] = add_elem("e" + std::to_string(i) + std::to_string(j));
    int one = add_elem("one");
    int zero = add_elem("zero");
    x.relations[1].push_back({one});            // one = 1
    x.relations[0].push_back({one, one, zero}); // 1 + 1 = zero
    // per vertex: e_a + e_b + e_c = charge, chained through an auxiliary
    for (int v = 0; v < 4; ++v) {
        std::vector<int> inc;
        for (int w = 0; w < 4; ++w)
            if (w != v) inc.push_back(edge[v][w]);
        int s = add_elem("s" + std::to_string(v));
        x.relations[0].push_back({inc[0], inc[1], s});
        x.relations[0].push_back({s, inc[2], charges[v] ? one : zero});
    }
    canonicalize_relations(x);
    validate_structure(x);
    return x;
}

ReductionPool reduction_pool() {
    ReductionPool pool;
    Signature dg = digraph_signature();
    pool.digraph_reductions.push_back(
        {"identity", {identity_interpretation(dg), identity_union_gadget(dg)}});
    pool.digraph_reductions.push_back(
        {"line-digraph", {line_digraph_interpretation(), identity_union_gadget(dg)}});
    pool.digraph_reductions.push_back(
        {"k2-to-kinf", compile_projective_gadget(k2_to_kinf_projective())});
    {
        DatalogInterpretation two_col;
        two_col.input = dg;
        two_col.output = trivial_signature();
        two_col.symbol_programs.push_back(two_colouring_program());
        validate_interpretation(two_col);
        pool.digraph_reductions.push_back(
            {"two-colouring", {two_col, identity_union_gadget(trivial_signature())}});
    }
    {
        DatalogInterpretation loops;
        loops.input = dg;
        loops.output = trivial_signature();
        DatalogProgram p;
        p.input = dg;
        p.add_idb("C", {});
        Rule r;
        r.var_types = {0};
        r.head = {p.edb_count(), {}};
        r.body = {{0, {0, 0}}};
        p.rules.push_back(r);
        p.output = 0;
        loops.symbol_programs.push_back(std::move(p));
        validate_interpretation(loops);
        pool.digraph_reductions.push_back(
            {"loop-check", {loops, identity_union_gadget(trivial_signature())}});
    }
    pool.digraph_reductions.push_back(
        {"reify", {reify_interpretation(dg), identity_union_gadget(reified_signature(dg))}});
    {
        DatalogInterpretation tensor2 = tensor_interpretation(dg, 2);
        UnionGadget u = identity_union_gadget(tensor2.output);
        pool.digraph_reductions.push_back({"tensor-2", {std::move(tensor2), std::move(u)}});
    }
    return pool;
}

std::vector<std::pair<std::string, Structure>> template_pool() {
    std::vector<std::pair<std::string, Structure>> pool;
    pool.push_back({"K2", complete_graph(2)});
    pool.push_back({"K3", complete_graph(3)});
    pool.push_back({"Z2", group_template(2, {1})});
    {
        // K2 carrying an always-false nullary symbol
        Signature sig = digraph_signature();
        sig.add_symbol("False", {});
        Structure k2f = make_structure(sig, {{"0", "1"}}, {{{0, 1}, {1, 0}}, {}});
        pool.push_back({"K2-false", k2f});
    }
    pool.push_back({"bot", bot_structure()});
    return pool;
}

} // namespace cspforge
