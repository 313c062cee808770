#pragma once

#include "cspforge/datalog.hpp"
#include "cspforge/gadgets.hpp"
#include "cspforge/labelcover.hpp"
#include "cspforge/structures.hpp"

#include <cstdint>
#include <vector>

namespace cspforge {

// splitmix64; self-contained so seeded corpora are identical across
// platforms and standard libraries
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int below(int n) { return n <= 0 ? 0 : (int)(next() % (uint64_t)n); }
    bool chance(int num, int den) { return below(den) < num; }
};

Structure complete_graph(int n);              // symmetric clique K_n
Structure directed_cycle(int n);              // C_n
Structure directed_path(int n);               // n edges, n+1 vertices
Structure single_edge();
Structure loop_graph();
Structure complete_bipartite(int n, int m);

// random structure over a signature with the given per-type sizes
Structure random_structure(const Signature& sig, Rng& rng, int max_elems, int tuple_percent);
Structure random_digraph(Rng& rng, int max_vertices, int edge_percent);

// (A, B, f) with f : A -> B planted by construction
struct HomPair {
    Structure a;
    Structure b;
    Homomorphism f;
};
HomPair random_hom_pair(const Signature& sig, Rng& rng, int max_elems, int tuple_percent);

// random instance with a planted homomorphism into the template
Structure planted_instance(const Structure& tmpl, Rng& rng, int n_elems, int n_tuples);

LabelCoverInstance random_label_cover(Rng& rng, int max_vars, int max_labels, int max_cons);

// Tseitin parity instance over the Z_2 group template: one variable per
// edge of K4 plus per-vertex auxiliaries, with the given vertex charges.
Structure tseitin_k4(const std::vector<unsigned>& charges);

// pools used by the verification suites
struct ReductionPool {
    std::vector<std::pair<std::string, DDatalogReduction>> digraph_reductions;
};
ReductionPool reduction_pool();

std::vector<std::pair<std::string, Structure>> template_pool();

} // namespace cspforge
