#include "doctest.h"

#include "cspforge/corpus.hpp"
#include "cspforge/gadgets.hpp"
#include "oracles.hpp"

using namespace cspforge;

TEST_CASE("K5 -> C5 gadget replaces an edge with a path of length 3") {
    Gadget g = k5_to_c5_gadget();
    Structure out = apply_gadget(g, single_edge());
    CHECK(out.domain_size(0) == 4);
    CHECK(out.relations[0].size() == 6);
    Structure p3 = make_structure(digraph_signature(), {{"0", "1", "2", "3"}},
                                  {{{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}}});
    CHECK(is_isomorphic(out, p3));
}

TEST_CASE("K2 -> Kinf gadget on even and odd cycles") {
    Gadget g = k2_to_kinf_gadget();
    SUBCASE("C4 collapses to a single edge") {
        Structure out = apply_gadget(g, directed_cycle(4));
        CHECK(is_isomorphic(out, complete_graph(2)));
    }
    SUBCASE("C3 collapses to a loop") {
        Structure out = apply_gadget(g, directed_cycle(3));
        CHECK(is_isomorphic(out, loop_graph()));
    }
}

TEST_CASE("projective K2 -> Kinf gadget agrees with the general form") {
    Gadget g = k2_to_kinf_gadget();
    ProjectiveGadget pg = k2_to_kinf_projective();
    SUBCASE("on C4") {
        CHECK(is_isomorphic(apply_projective_gadget(pg, directed_cycle(4)), complete_graph(2)));
    }
    SUBCASE("on random digraphs") {
        Rng rng(71);
        for (int i = 0; i < 15; ++i) {
            Structure x = random_digraph(rng, 5, 35);
            CHECK(is_isomorphic(apply_gadget(g, x), apply_projective_gadget(pg, x)));
        }
    }
    SUBCASE("empty input yields the empty structure") {
        Structure empty = make_structure(digraph_signature(), {{}}, {{}});
        Structure out = apply_projective_gadget(pg, empty);
        CHECK(out.domain_size(0) == 0);
    }
}

TEST_CASE("projective gadget with identity maps collapses endpoint copies") {
    ProjectiveGadget pg;
    pg.input = digraph_signature();
    pg.output = digraph_signature();
    pg.type_structs = {complete_graph(2)};
    Homomorphism id;
    id.map = {{0, 1}};
    pg.maps = {id};
    Structure two = make_structure(digraph_signature(), {{"a", "b"}}, {{{0, 1}}});
    Structure out = apply_projective_gadget(pg, two);
    CHECK(out.domain_size(0) == 2);
}

TEST_CASE("reification") {
    SUBCASE("single edge") {
        Structure r = reify(single_edge());
        REQUIRE(r.sig.types.size() == 2);
        CHECK(r.domains[0] == std::vector<std::string>{"u", "v"});
        CHECK(r.domains[1] == std::vector<std::string>{"(u,v)"});
        CHECK(r.relations[0] == std::vector<Tuple>{{0, 0}}); // P_E_1
        CHECK(r.relations[1] == std::vector<Tuple>{{0, 1}}); // P_E_2
    }
    SUBCASE("empty relations give an empty tuple type") {
        Structure r = reify(make_structure(digraph_signature(), {{"a"}}, {{}}));
        CHECK(r.domain_size(1) == 0);
    }
    SUBCASE("C3 has 3 edge elements and 6 incidence pairs") {
        Structure r = reify(directed_cycle(3));
        CHECK(r.domain_size(1) == 3);
        CHECK(r.relations[0].size() + r.relations[1].size() == 6);
    }
    SUBCASE("the reification interpretation computes the same structure") {
        Rng rng(13);
        auto rho = reify_interpretation(digraph_signature());
        for (int i = 0; i < 10; ++i) {
            Structure x = random_digraph(rng, 4, 40);
            CHECK(is_isomorphic(apply_interpretation(rho, x), reify(x)));
        }
    }
}

TEST_CASE("reify_to_label_cover") {
    Structure k2 = complete_graph(2);
    SUBCASE("single edge over K2") {
        auto lc = reify_to_label_cover(k2, single_edge());
        REQUIRE(lc.vars.size() == 3);
        CHECK(lc.vars[0].labels == std::vector<std::string>{"0", "1"});
        CHECK(lc.vars[2].labels == std::vector<std::string>{"(0,1)", "(1,0)"});
        REQUIRE(lc.cons.size() == 2);
        CHECK(lc.cons[0].pi == std::vector<int>{0, 1});
        CHECK(lc.cons[1].pi == std::vector<int>{1, 0});
    }
    SUBCASE("empty instance") {
        Structure empty = make_structure(digraph_signature(), {{}}, {{}});
        auto lc = reify_to_label_cover(k2, empty);
        CHECK(lc.vars.empty());
    }
    SUBCASE("loop over K2: both projections constrain the same variable") {
        auto lc = reify_to_label_cover(k2, loop_graph());
        REQUIRE(lc.cons.size() == 2);
        CHECK(lc.cons[0].v == lc.cons[1].v);
    }
}

TEST_CASE("to_projective decomposition: gamma(X) iso gamma'(rho(X))") {
    std::vector<Gadget> pool = {k2_to_kinf_gadget(), k5_to_c5_gadget()};
    Rng rng(101);
    for (const auto& g : pool) {
        ProjectiveGadget pg = to_projective(g);
        for (int i = 0; i < 8; ++i) {
            Structure x = random_digraph(rng, 4, 40);
            CHECK(is_isomorphic(apply_gadget(g, x), apply_projective_gadget(pg, reify(x))));
        }
    }
    SUBCASE("K5 -> C5 projective data matches the worked example") {
        ProjectiveGadget pg = to_projective(k5_to_c5_gadget());
        CHECK(pg.type_structs[0].domain_size(0) == 1); // D_v singleton
        CHECK(pg.type_structs[1].domain_size(0) == 4); // D_e = P3
        CHECK(pg.maps[0].map[0][0] == 0);              // p_S(*) = 0
        CHECK(pg.maps[1].map[0][0] == 3);              // p_T(*) = 3
    }
}

TEST_CASE("universal gadget") {
    SUBCASE("one unconstrained variable gives the power") {
        LabelCoverInstance s;
        s.vars.push_back({"v", {"x", "y", "z"}});
        Structure out = apply_universal_gadget(complete_graph(2), s);
        CHECK(is_isomorphic(out, power(complete_graph(2), 3)));
    }
    SUBCASE("constant constraint collapse, computed by hand") {
        // u of type {0,1} constrained by a constant map into w of type {*}:
        // each d : {*} -> K2 glues (u; d o sigma) to (w; d), so the four
        // u-functions collapse onto the two constants
        LabelCoverInstance s;
        s.vars.push_back({"u", {"0", "1"}});
        s.vars.push_back({"w", {"*"}});
        s.cons.push_back({0, 1, {0, 0}});
        Structure out = apply_universal_gadget(complete_graph(2), s);
        CHECK(out.domain_size(0) == 4);
        CHECK(find_homomorphism(out, complete_graph(2)).has_value());
    }
}

TEST_CASE("compiled projective gadget is a Datalog reduction") {
    DDatalogReduction red = compile_projective_gadget(k2_to_kinf_projective());
    SUBCASE("on C4 the output is K_{4,4}") {
        Structure out = apply_reduction(red, directed_cycle(4));
        CHECK(is_isomorphic(out, complete_bipartite(4, 4)));
        CHECK(is_hom_equivalent(out, complete_graph(2)));
    }
    SUBCASE("on C3 the output is hom-equivalent to a loop") {
        Structure out = apply_reduction(red, directed_cycle(3));
        CHECK(is_hom_equivalent(out, loop_graph()));
    }
    SUBCASE("recursion appears only through the closure IDBs") {
        for (const auto& p : red.interp.symbol_programs)
            for (const auto& rule : p.rules)
                for (const auto& atom : rule.body) {
                    if (atom.pred == Atom::kEquality || !p.is_idb(atom.pred)) continue;
                    CHECK(p.pred_name(atom.pred).substr(0, 2) == "I_");
                }
    }
}

TEST_CASE("compile_gadget pipeline is hom-equivalent to the gadget replacement") {
    SUBCASE("K5 -> C5 on a single edge") {
        DDatalogReduction red = compile_gadget(k5_to_c5_gadget());
        Structure out = apply_reduction(red, single_edge());
        Structure direct = apply_gadget(k5_to_c5_gadget(), single_edge());
        CHECK(is_hom_equivalent(out, direct));
    }
    SUBCASE("K2 -> Kinf on random digraphs") {
        DDatalogReduction red = compile_gadget(k2_to_kinf_gadget());
        Gadget g = k2_to_kinf_gadget();
        Rng rng(301);
        for (int i = 0; i < 10; ++i) {
            Structure x = random_digraph(rng, 4, 40);
            CHECK(is_hom_equivalent(apply_reduction(red, x), apply_gadget(g, x)));
        }
    }
}

TEST_CASE("gadget monotonicity") {
    Gadget g = k2_to_kinf_gadget();
    Rng rng(43);
    for (int i = 0; i < 10; ++i) {
        auto pair = random_hom_pair(digraph_signature(), rng, 3, 45);
        CHECK(find_homomorphism(apply_gadget(g, pair.a), apply_gadget(g, pair.b)).has_value());
    }
}

TEST_CASE("universality of the universal gadget") {
    // if gamma(P^Sigma) -> B then gamma(S) -> pi_B(S); realized with
    // B := gamma(P^Sigma) itself
    Rng rng(613);
    int checked = 0;
    for (int i = 0; i < 8; ++i) {
        auto s = random_label_cover(rng, 2, 2, 2);
        auto red = label_cover_reduct({&s});
        Structure p = lc_template_structure(red);
        ProjectiveGadget gamma;
        gamma.input = red.sig;
        gamma.output = digraph_signature();
        for (size_t t = 0; t < red.type_labels.size(); ++t)
            gamma.type_structs.push_back(complete_graph(2));
        Homomorphism swap;
        swap.map = {{1, 0}};
        for (size_t sy = 0; sy < red.symbol_maps.size(); ++sy) gamma.maps.push_back(swap);
        Structure b = apply_projective_gadget(gamma, p);
        if (b.domain_size(0) == 0) continue;
        Structure lhs = apply_projective_gadget(gamma, lc_as_structure(s, red));
        Structure rhs = apply_universal_gadget(b, s);
        CHECK(find_homomorphism(lhs, rhs).has_value());
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("universal gadget monotonicity via weak homomorphisms") {
    // S -> pi_P(T) implies pi_B(S) -> pi_B(T) for every template B
    Rng rng(617);
    int checked = 0;
    for (int i = 0; i < 12; ++i) {
        auto t = random_label_cover(rng, 2, 2, 2);
        auto s = t;
        auto red = label_cover_reduct({&s, &t});
        Structure p = lc_template_structure(red);
        Structure pit = apply_universal_gadget(p, t);
        Structure slc = lc_as_structure(s, red);
        if (!find_homomorphism(slc, pit).has_value()) continue;
        ++checked;
        for (auto& [name, b] : template_pool()) {
            if (name == "Z2") continue; // ternary relation powers get large
            CAPTURE(name);
            CHECK(find_homomorphism(apply_universal_gadget(b, s), apply_universal_gadget(b, t))
                      .has_value());
        }
    }
    CHECK(checked > 0);
}
