#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cspforge/corpus.hpp"
#include "cspforge/structures.hpp"
#include "oracles.hpp"

using namespace cspforge;

TEST_CASE("find_homomorphism on named graphs") {
    Structure k3 = complete_graph(3);
    Structure k2 = complete_graph(2);
    Structure c5 = directed_cycle(5);
    Structure c3 = directed_cycle(3);

    auto id = find_homomorphism(k3, k3);
    REQUIRE(id.has_value());
    CHECK(is_homomorphism(k3, k3, *id));

    // oracle: exhaustive search over all 3^5 vertex maps
    CHECK(oracles::brute_force_hom_exists(c5, k3));
    auto h = find_homomorphism(c5, k3);
    REQUIRE(h.has_value());
    CHECK(is_homomorphism(c5, k3, *h));

    CHECK(!oracles::brute_force_hom_exists(c3, k2));
    CHECK(!find_homomorphism(c3, k2).has_value());
}

TEST_CASE("find_homomorphism agrees with brute force on random pairs") {
    Rng rng(20240817);
    for (int i = 0; i < 60; ++i) {
        Structure x = random_digraph(rng, 4, 35);
        Structure a = random_digraph(rng, 3, 45);
        bool expect = oracles::brute_force_hom_exists(x, a);
        auto h = find_homomorphism(x, a);
        CHECK(h.has_value() == expect);
        if (h) CHECK(is_homomorphism(x, a, *h));
    }
}

TEST_CASE("homomorphism witness is deterministic") {
    Structure c5 = directed_cycle(5);
    Structure k3 = complete_graph(3);
    auto h1 = find_homomorphism(c5, k3);
    auto h2 = find_homomorphism(c5, k3);
    REQUIRE(h1.has_value());
    CHECK(h1->map == h2->map);
}

TEST_CASE("homomorphisms compose") {
    Rng rng(7);
    Structure loop = loop_graph();
    for (int i = 0; i < 20; ++i) {
        auto pair = random_hom_pair(digraph_signature(), rng, 4, 40);
        CHECK(is_homomorphism(pair.a, pair.b, pair.f));
        // every digraph maps onto the loop
        auto g = find_homomorphism(pair.b, loop);
        REQUIRE(g.has_value());
        Homomorphism gf = compose(pair.f, *g, pair.a);
        CHECK(is_homomorphism(pair.a, loop, gf));
    }
}

TEST_CASE("is_isomorphic") {
    Structure k2 = complete_graph(2);
    Structure k2r = make_structure(digraph_signature(), {{"x", "y"}}, {{{0, 1}, {1, 0}}});
    CHECK(is_isomorphic(k2, k2r));
    CHECK(!is_isomorphic(k2, loop_graph()));

    // two disjoint edges vs K2^{[2]}: enumerate the power by definition
    Structure p = power(k2, 2);
    CHECK(p.domain_size(0) == 4);
    CHECK(p.relations[0].size() == 4);
    Structure two_edges = make_structure(digraph_signature(), {{"a", "b", "c", "d"}},
                                         {{{0, 1}, {1, 0}, {2, 3}, {3, 2}}});
    CHECK(is_isomorphic(two_edges, p));
    CHECK(!is_isomorphic(two_edges, complete_bipartite(2, 2)));
}

TEST_CASE("is_hom_equivalent") {
    CHECK(is_hom_equivalent(complete_graph(2), complete_bipartite(4, 4)));
    CHECK(!is_hom_equivalent(directed_cycle(3), loop_graph()));
    CHECK(!is_hom_equivalent(directed_cycle(3), complete_graph(2)));

    // C5 folds onto C5 with a pendant vertex oriented along the cycle
    Structure c5p = make_structure(
        digraph_signature(), {{"0", "1", "2", "3", "4", "p"}},
        {{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {5, 1}}});
    CHECK(is_hom_equivalent(directed_cycle(5), c5p));
}

TEST_CASE("power") {
    Structure k2 = complete_graph(2);
    SUBCASE("K2^[2] is the perfect matching on four vertices") {
        Structure p = power(k2, 2);
        CHECK(p.domains[0] == std::vector<std::string>{"(0,0)", "(0,1)", "(1,0)", "(1,1)"});
        CHECK(p.relations[0] == std::vector<Tuple>{{0, 3}, {1, 2}, {2, 1}, {3, 0}});
    }
    SUBCASE("empty exponent gives one element and full relations") {
        Structure p = power(k2, 0);
        CHECK(p.domain_size(0) == 1);
        CHECK(p.relations[0] == std::vector<Tuple>{{0, 0}});
        Structure pb = power(bot_structure(), 0);
        CHECK(pb.relations[0] == std::vector<Tuple>{Tuple{}});
    }
    SUBCASE("power by [1] is isomorphic to the base") {
        for (auto& [name, b] : template_pool()) {
            CAPTURE(name);
            CHECK(is_isomorphic(power(b, 1), b));
        }
    }
    SUBCASE("projections are homomorphisms") {
        Rng rng(99);
        for (int n = 1; n <= 3; ++n) {
            Structure b = random_digraph(rng, 3, 40);
            Structure p = power(b, n);
            for (int coord = 0; coord < n; ++coord) {
                Homomorphism proj;
                proj.map.resize(1);
                for (int e = 0; e < p.domain_size(0); ++e) {
                    int rem = e, digit = 0;
                    for (int i = n - 1; i >= 0; --i) {
                        if (i == coord) digit = rem % b.domain_size(0);
                        rem /= b.domain_size(0);
                    }
                    proj.map[0].push_back(digit);
                }
                CHECK(is_homomorphism(p, b, proj));
            }
        }
    }
}

TEST_CASE("quotient") {
    Structure a = make_structure(digraph_signature(), {{"a", "b", "c"}}, {{}});
    SUBCASE("empty equation set is the identity up to naming") {
        CHECK(is_isomorphic(quotient(a, std::vector<std::pair<ElemRef, ElemRef>>{}), a));
    }
    SUBCASE("transitivity collapses a chain to one class") {
        auto q = quotient(a, {{{0, 0}, {0, 1}}, {{0, 1}, {0, 2}}});
        CHECK(q.domain_size(0) == 1);
    }
    SUBCASE("path with endpoints identified becomes a cycle") {
        Structure p3 = directed_path(3);
        auto q = quotient(p3, {{{0, 0}, {0, 3}}});
        CHECK(is_isomorphic(q, directed_cycle(3)));
    }
    SUBCASE("idempotence") {
        Structure p3 = directed_path(3);
        auto q = quotient(p3, {{{0, 0}, {0, 3}}});
        auto q2 = quotient(q, std::vector<std::pair<ElemRef, ElemRef>>{});
        CHECK(is_isomorphic(q, q2));
    }
    SUBCASE("cross-type equation is rejected") {
        Structure r = reify(single_edge());
        CHECK_THROWS_AS(quotient(r, {{{0, 0}, {1, 0}}}), ValidationError);
    }
}

TEST_CASE("disjoint_union") {
    Structure k2 = complete_graph(2);
    auto u = disjoint_union({k2, k2});
    CHECK(u.domain_size(0) == 4);
    CHECK(u.relations[0].size() == 4);
    auto ul = disjoint_union({loop_graph(), single_edge()});
    CHECK(ul.domain_size(0) == 3);
    CHECK(ul.relations[0].size() == 2);
    Structure empty = make_structure(digraph_signature(), {{}}, {{}});
    CHECK(is_isomorphic(disjoint_union({empty, k2}), k2));
}

TEST_CASE("trivial structures") {
    CHECK(bot_structure().relations[0].empty());
    CHECK(top_structure().relations[0] == std::vector<Tuple>{Tuple{}});
    CHECK(find_homomorphism(bot_structure(), bot_structure()).has_value());
    CHECK(!find_homomorphism(top_structure(), bot_structure()).has_value());
    CHECK(find_homomorphism(bot_structure(), top_structure()).has_value());
}

TEST_CASE("empty target domain blocks homomorphisms") {
    Structure x = make_structure(digraph_signature(), {{"a"}}, {{}});
    Structure empty = make_structure(digraph_signature(), {{}}, {{}});
    CHECK(!find_homomorphism(x, empty).has_value());
    CHECK(find_homomorphism(empty, x).has_value());
}

TEST_CASE("signature mismatch is reported") {
    CHECK_THROWS_AS(find_homomorphism(complete_graph(2), bot_structure()), SignatureMismatch);
    CHECK_THROWS_AS(is_isomorphic(complete_graph(2), bot_structure()), SignatureMismatch);
}
