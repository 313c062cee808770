#include "doctest.h"

#include "cspforge/corpus.hpp"
#include "cspforge/minions.hpp"
#include "oracles.hpp"

#include <functional>

using namespace cspforge;

namespace {

// count homomorphisms A^[n] -> B by raw enumeration over all maps
int count_polymorphisms_by_enumeration(const Structure& a, const Structure& b, int n) {
    Structure p = power(a, n);
    int count = 0;
    std::vector<std::vector<int>> map(p.domains.size());
    for (int t = 0; t < (int)p.domains.size(); ++t) map[t].assign(p.domain_size(t), 0);
    std::vector<std::pair<int, int>> elems;
    for (int t = 0; t < (int)p.domains.size(); ++t)
        for (int i = 0; i < p.domain_size(t); ++i) elems.push_back({t, i});
    std::function<void(size_t)> rec = [&](size_t pos) {
        if (pos == elems.size()) {
            Homomorphism h{map};
            if (is_homomorphism(p, b, h)) ++count;
            return;
        }
        auto [t, i] = elems[pos];
        for (int v = 0; v < b.domain_size(t); ++v) {
            map[t][i] = v;
            rec(pos + 1);
        }
    };
    rec(0);
    return count;
}

} // namespace

TEST_CASE("polymorphism minion sizes match raw enumeration") {
    Structure k2 = complete_graph(2);
    Structure k3 = complete_graph(3);
    Minion pk2 = polymorphism_minion(k2, 2);
    CHECK(pk2.size(1) == 2);
    CHECK(pk2.size(2) == 4);
    CHECK(pk2.size(1) == count_polymorphisms_by_enumeration(k2, k2, 1));
    CHECK(pk2.size(2) == count_polymorphisms_by_enumeration(k2, k2, 2));
    Minion pk3 = polymorphism_minion(k3, 1);
    CHECK(pk3.size(1) == 6);
    CHECK(pk3.size(1) == count_polymorphisms_by_enumeration(k3, k3, 1));
}

TEST_CASE("minion laws hold for the constructed minions") {
    std::string why;
    CHECK(check_minion_laws(polymorphism_minion(complete_graph(2), 3), &why));
    CHECK(check_minion_laws(projections_minion(3), &why));
    CHECK(check_minion_laws(polymorphism_minion(bot_structure(), 3), &why));
    CHECK(check_minion_laws(omega(polymorphism_minion(complete_graph(2), 3)), &why));
    CHECK(check_minion_laws(omega(projections_minion(3)), &why));
}

TEST_CASE("omega element counts") {
    Minion pbot = polymorphism_minion(bot_structure(), 4);
    for (int n = 1; n <= 4; ++n) CHECK(pbot.size(n) == 1);
    Minion om = omega(pbot);
    for (int n = 1; n <= 4; ++n) CHECK(om.size(n) == (1 << n) - 1);
    Minion pk2 = polymorphism_minion(complete_graph(2), 2);
    Minion ok2 = omega(pk2);
    CHECK(ok2.size(2) == 2 * pk2.size(1) + pk2.size(2));
}

TEST_CASE("omega minors") {
    Minion pk2 = polymorphism_minion(complete_graph(2), 2);
    Minion om = omega(pk2);
    SUBCASE("singleton support is carried along") {
        // ({1}, f)^pi = ({pi(1)}, f)
        for (int f = 0; f < pk2.size(1); ++f) {
            int idx = omega_index(pk2, 2, 0b01, f);
            int img = om.minor(2, idx, {1, 1}, 2); // pi maps both to position 2
            auto [mask, e] = omega_decompose(pk2, 2, img);
            CHECK(mask == 0b10);
            CHECK(e == f);
        }
    }
    SUBCASE("constant map collapses the support") {
        // ({1,2}, f)^pi with pi constant = ({1}, f^collapse)
        for (int f = 0; f < pk2.size(2); ++f) {
            int idx = omega_index(pk2, 2, 0b11, f);
            int img = om.minor(2, idx, {0, 0}, 1);
            auto [mask, e] = omega_decompose(pk2, 1, img);
            CHECK(mask == 0b01);
            CHECK(e == pk2.minor(2, f, {0, 0}, 1));
        }
    }
}

TEST_CASE("counit and co-Kleisli composition") {
    Minion pk2 = polymorphism_minion(complete_graph(2), 2);
    Minion proj = projections_minion(2);
    CoKleisliArrow nu = counit(pk2);
    CHECK(arrow_is_natural(nu));
    SUBCASE("full support is the identity") {
        for (int n = 1; n <= 2; ++n)
            for (int f = 0; f < pk2.size(n); ++f)
                CHECK(nu.xi[n - 1][omega_index(pk2, n, (1u << n) - 1, f)] == f);
    }
    SUBCASE("units of the comonad") {
        // arrows proj ~> pk2 exist; nu absorbs on both sides
        auto h = find_minion_homomorphism(omega(proj), pk2);
        REQUIRE(h.has_value());
        CoKleisliArrow xi{proj, pk2, h->xi};
        CHECK(arrow_is_natural(xi));
        auto left = cokleisli_compose(counit(pk2), xi);
        auto right = cokleisli_compose(xi, counit(proj));
        CHECK(left.xi == xi.xi);
        CHECK(right.xi == xi.xi);
    }
    SUBCASE("associativity on sampled triples") {
        Minion pbot = polymorphism_minion(bot_structure(), 2);
        Rng rng(8);
        for (int i = 0; i < 10; ++i) {
            auto h1 = find_minion_homomorphism(omega(proj), pk2, rng.next() | 1);
            auto h2 = find_minion_homomorphism(omega(pk2), pbot, rng.next() | 1);
            auto h3 = find_minion_homomorphism(omega(pbot), pbot, rng.next() | 1);
            REQUIRE(h1.has_value());
            REQUIRE(h2.has_value());
            REQUIRE(h3.has_value());
            CoKleisliArrow a1{proj, pk2, h1->xi};
            CoKleisliArrow a2{pk2, pbot, h2->xi};
            CoKleisliArrow a3{pbot, pbot, h3->xi};
            auto lhs = cokleisli_compose(a3, cokleisli_compose(a2, a1));
            auto rhs = cokleisli_compose(cokleisli_compose(a3, a2), a1);
            CHECK(lhs.xi == rhs.xi);
        }
    }
}

TEST_CASE("minion homomorphism search") {
    Minion pk2 = polymorphism_minion(complete_graph(2), 2);
    SUBCASE("identity exists") {
        auto h = find_minion_homomorphism(pk2, pk2);
        REQUIRE(h.has_value());
        CHECK(minion_hom_is_natural(pk2, pk2, *h));
    }
    SUBCASE("projections map into any minion") {
        Minion proj = projections_minion(2);
        auto h = find_minion_homomorphism(proj, pk2);
        REQUIRE(h.has_value());
        CHECK(minion_hom_is_natural(proj, pk2, *h));
        // naturality forces xi(x) = u^(1 -> x) for the unary u
        int u = h->xi[0][0];
        CHECK(h->xi[1][0] == pk2.minor(1, u, {0}, 2));
        CHECK(h->xi[1][1] == pk2.minor(1, u, {1}, 2));
    }
    SUBCASE("no homomorphism omega(Pol(bot)) -> Pol(K2) at truncation 2") {
        Minion om = omega(polymorphism_minion(bot_structure(), 2));
        CHECK(!find_minion_homomorphism(om, pk2).has_value());
        // cross-check the obstruction: the full-support element is fixed by
        // the swap, but no binary element of Pol(K2) is
        int full = omega_index(polymorphism_minion(bot_structure(), 2), 2, 0b11, 0);
        CHECK(om.minor(2, full, {1, 0}, 2) == full);
        bool some_fixed = false;
        for (int g = 0; g < pk2.size(2); ++g)
            some_fixed = some_fixed || pk2.minor(2, g, {1, 0}, 2) == g;
        CHECK(!some_fixed);
    }
}

TEST_CASE("arc-consistency adjunction") {
    Minion pk2 = polymorphism_minion(complete_graph(2), 3);
    SUBCASE("single unconstrained variable: both sides hold") {
        LabelCoverInstance s;
        s.vars.push_back({"v", {"a", "b"}});
        auto [l, r] = arc_adjunction_sides(s, pk2);
        CHECK(l);
        CHECK(r);
    }
    SUBCASE("emptied instance: both sides fail") {
        LabelCoverInstance s;
        s.vars.push_back({"u", {"0", "1"}});
        s.vars.push_back({"v", {"a", "b"}});
        s.cons.push_back({0, 1, {0, 0}});
        s.cons.push_back({0, 1, {1, 1}});
        auto [l, r] = arc_adjunction_sides(s, pk2);
        CHECK(!l);
        CHECK(!r);
    }
    SUBCASE("agreement on random instances") {
        Rng rng(60);
        for (int i = 0; i < 50; ++i) {
            auto s = random_label_cover(rng, 3, 3, 3);
            CHECK(check_arc_adjunction(s, pk2));
        }
    }
    SUBCASE("oversized types are rejected") {
        LabelCoverInstance s;
        s.vars.push_back({"v", {"a", "b", "c", "d"}});
        CHECK_THROWS_AS(lc_maps_to_minion(s, pk2), ValidationError);
    }
}

TEST_CASE("rational distributions") {
    SUBCASE("pushforward under a constant map is a point mass") {
        RationalDistribution d{{Rational(1, 2), Rational(1, 2)}};
        auto out = qconv_minor(d, {0, 0}, 1);
        CHECK(out.weights == std::vector<Rational>{Rational(1)});
    }
    SUBCASE("swap permutes the weights") {
        RationalDistribution d{{Rational(1, 3), Rational(2, 3)}};
        auto out = qconv_minor(d, {1, 0}, 2);
        CHECK(out.weights == std::vector<Rational>{Rational(2, 3), Rational(1, 3)});
    }
    SUBCASE("preimage sums") {
        RationalDistribution d{{Rational(1, 2), Rational(1, 4), Rational(1, 4)}};
        auto out = qconv_minor(d, {0, 0, 1}, 2);
        CHECK(out.weights == std::vector<Rational>{Rational(3, 4), Rational(1, 4)});
    }
    SUBCASE("support extraction") {
        RationalDistribution point{{Rational(0), Rational(1)}};
        auto [supp, rest] = qconv_to_omega(point);
        CHECK(supp == std::vector<int>{1});
        CHECK(rest.weights == std::vector<Rational>{Rational(1)});
        RationalDistribution uniform{{Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
        auto [supp2, rest2] = qconv_to_omega(uniform);
        CHECK(supp2 == std::vector<int>{0, 1, 2});
        RationalDistribution gap{{Rational(1, 2), Rational(0), Rational(1, 2)}};
        auto [supp3, rest3] = qconv_to_omega(gap);
        CHECK(supp3 == std::vector<int>{0, 2});
        CHECK(rest3.weights == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    }
    SUBCASE("naturality of the support map on random data") {
        Rng rng(61);
        for (int i = 0; i < 40; ++i) {
            int n = 2 + rng.below(3);
            int m = 1 + rng.below(3);
            std::vector<Rational> w(n, Rational(0));
            int mass = 12;
            for (int j = 0; j < n; ++j) {
                int part = (j == n - 1) ? mass : rng.below(mass + 1);
                w[j] = Rational(part) / 12;
                mass -= part;
            }
            RationalDistribution d{w};
            std::vector<int> pi(n);
            for (int j = 0; j < n; ++j) pi[j] = rng.below(m);
            auto pushed = qconv_minor(d, pi, m);
            auto [supp_push, rest_push] = qconv_to_omega(pushed);
            auto [supp_d, rest_d] = qconv_to_omega(d);
            // supp(lambda^pi) = pi(supp(lambda))
            std::set<int> image;
            for (int s : supp_d) image.insert(pi[s]);
            CHECK(std::vector<int>(image.begin(), image.end()) == supp_push);
            // restricted distributions match under the restricted minor
            std::vector<int> restricted_pi(supp_d.size());
            for (size_t j = 0; j < supp_d.size(); ++j) {
                int target = pi[supp_d[j]];
                restricted_pi[j] =
                    (int)(std::find(supp_push.begin(), supp_push.end(), target) - supp_push.begin());
            }
            auto via = qconv_minor(rest_d, restricted_pi, (int)supp_push.size());
            CHECK(via.weights == rest_push.weights);
        }
    }
}
