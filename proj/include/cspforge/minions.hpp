#pragma once

#include "cspforge/labelcover.hpp"
#include "cspforge/rational.hpp"
#include "cspforge/structures.hpp"

#include <cstdint>
#include <vector>

namespace cspforge {

// Abstract minion truncated at max_arity: element sets over the canonical
// sets [1..max_arity] plus the full minor table. Elements are opaque indices
// with a human-readable rendering.
struct Minion {
    int max_arity = 0;
    std::vector<std::vector<std::string>> elems; // [n-1] -> renderings
    // [n-1][m-1][pi_code][elem] -> elem of arity m
    std::vector<std::vector<std::vector<std::vector<int>>>> minor_tab;

    int size(int n) const { return (int)elems[n - 1].size(); }
    int minor(int n, int elem, const std::vector<int>& pi, int m) const;

    bool operator==(const Minion&) const = default;
};

// mixed-radix code of a map [n] -> [m] given as 0-based images
int pi_code(const std::vector<int>& pi, int m);
std::vector<int> pi_decode(int code, int n, int m);

// identity law and composition law, checked exhaustively on the truncation
bool check_minion_laws(const Minion& m, std::string* why = nullptr);

// Pol(A, B): arity-n elements are the homomorphisms A^[n] -> B; minors by
// precomposition. Throws if some arity has no homomorphisms.
Minion polymorphism_minion(const Structure& a, const Structure& b, int max_arity);
Minion polymorphism_minion(const Structure& a, int max_arity);

// the minion of projections: P^([n]) = [n], x^pi = pi(x)
Minion projections_minion(int max_arity);

// omega(M): pairs (Y, f) with Y a nonempty subset of [n] and f in M^(Y);
// (Z, f)^pi = (pi(Z), f^{pi|_Z})
Minion omega(const Minion& m);
int omega_index(const Minion& inner, int n, uint32_t mask, int elem);
std::pair<uint32_t, int> omega_decompose(const Minion& inner, int n, int idx);

// co-Kleisli arrow M ~> N, i.e. a minion homomorphism omega(M) -> N
struct CoKleisliArrow {
    Minion source;
    Minion target;
    std::vector<std::vector<int>> xi; // [n-1][omega(M) elem] -> N elem
};

bool arrow_is_natural(const CoKleisliArrow& a);
CoKleisliArrow counit(const Minion& m);
CoKleisliArrow cokleisli_compose(const CoKleisliArrow& xi, const CoKleisliArrow& zeta);

// natural transformation M -> N on the truncation; seed != 0 randomizes the
// value order (used to sample arrows), the search itself stays exhaustive
struct MinionHom {
    std::vector<std::vector<int>> xi;
};
std::optional<MinionHom> find_minion_homomorphism(const Minion& m, const Minion& n,
                                                  uint64_t seed = 0);
bool minion_hom_is_natural(const Minion& m, const Minion& n, const MinionHom& h);

// brute-force homomorphism of a label cover instance into a minion viewed as
// a structure, labels identified with [n] by list order
bool lc_maps_to_minion(const LabelCoverInstance& s, const Minion& m);

// both sides of the adjunction kappa_arc(X) -> M iff X -> omega(M); returns
// whether they agree
bool check_arc_adjunction(const LabelCoverInstance& x, const Minion& m);
std::pair<bool, bool> arc_adjunction_sides(const LabelCoverInstance& x, const Minion& m);

// Q_conv: rational probability distributions with pushforward minors
struct RationalDistribution {
    std::vector<Rational> weights;
};

void validate_distribution(const RationalDistribution& d);
RationalDistribution qconv_minor(const RationalDistribution& d, const std::vector<int>& pi, int m);
std::pair<std::vector<int>, RationalDistribution> qconv_to_omega(const RationalDistribution& d);

} // namespace cspforge
