#pragma once

#include "cspforge/structures.hpp"

#include <string>
#include <vector>

namespace cspforge {

// Typed binary CSP with function-labelled constraints pi(u) = v. Every
// variable carries its own finite label set; constraint maps are total on
// the source labels.
struct LabelCoverInstance {
    struct Var {
        std::string name;
        std::vector<std::string> labels;
        bool operator==(const Var&) const = default;
    };
    struct Con {
        int u = 0;
        int v = 0;
        std::vector<int> pi; // u-label index -> v-label index
        bool operator==(const Con&) const = default;
    };
    std::vector<Var> vars;
    std::vector<Con> cons;

    int var_index(const std::string& name) const;
    bool operator==(const LabelCoverInstance&) const = default;
};

void validate_label_cover(const LabelCoverInstance& s);

// kappa_arc: prune label sets to the arc-consistent fixed point and restrict
// every constraint map to the surviving labels. Empty label sets are legal
// output. Deterministic: constraints are processed in input order, FIFO.
LabelCoverInstance enforce_arc_consistency(const LabelCoverInstance& s);

bool has_empty_type(const LabelCoverInstance& s);

// subsets of the type-tagged elements of x with size <= k, ordered by size
// then lexicographically
std::vector<std::vector<ElemRef>> subsets_upto(const Structure& x, int k);
// partial homomorphisms K -> A in lexicographic order of value vectors
std::vector<std::vector<int>> partial_homomorphisms(const Structure& a, const Structure& x,
                                                    const std::vector<ElemRef>& k);
std::string subset_name(const Structure& x, const std::vector<ElemRef>& k);
std::string partial_hom_name(const Structure& a, const Structure& x,
                             const std::vector<ElemRef>& k, const std::vector<int>& f);

// sigma_k: one variable per at-most-k-element subset of X's elements, typed
// by the partial homomorphisms into A, with a restriction constraint per
// proper subset pair. Constraints of X whose support exceeds k never lie
// inside any K; ignored_count reports how many.
LabelCoverInstance sigma_k(const Structure& a, const Structure& x, int k,
                           int* ignored_count = nullptr);

// accept iff enforcing arc consistency on sigma_k leaves no empty type
bool k_consistency_test(const Structure& a, int k, const Structure& x);

// pi_B: replace a variable of type F by the power B^F, gluing copies along
// constraints by precomposition, then collapse.
Structure apply_universal_gadget(const Structure& b, const LabelCoverInstance& s);

// the same application with the pre-collapse copies exposed: big holds the
// side-by-side powers (offset[var][type] locates a copy), class_of maps its
// elements to the collapsed result
struct UniversalApplication {
    Structure big;
    std::vector<std::vector<int>> offset;
    Structure result;
    std::vector<std::vector<int>> class_of;
};
UniversalApplication apply_universal_gadget_detailed(const Structure& b,
                                                     const LabelCoverInstance& s);

// kappa_k^{A,B} = pi_B . kappa_arc . sigma_k^A
Structure k_consistency_reduce(const Structure& a, const Structure& b, int k,
                               const Structure& x);

// kappa_arc^{A,B} = pi_B . kappa_arc . rho^A
Structure arc_consistency_reduce(const Structure& a, const Structure& b,
                                 const Structure& x);

// rho^A lives in gadgets.hpp (reify_to_label_cover); declared here for the
// reduction pipelines.
LabelCoverInstance reify_to_label_cover(const Structure& a, const Structure& x);

// A finite reduct of the label cover signature: one type per distinct label
// set, one symbol per distinct constraint map. Lets label cover instances be
// viewed as structures, and realizes the template reduct P^Sigma.
struct LabelCoverReduct {
    Signature sig;
    std::vector<std::vector<std::string>> type_labels; // per type
    std::vector<std::vector<int>> symbol_maps;         // per symbol E_pi
    int type_of(const std::vector<std::string>& labels) const;
    int symbol_of(int type_u, int type_v, const std::vector<int>& pi) const;
};

LabelCoverReduct label_cover_reduct(const std::vector<const LabelCoverInstance*>& instances);
Structure lc_as_structure(const LabelCoverInstance& s, const LabelCoverReduct& red);
// P^Sigma: P_X = X and E_pi = graph of pi
Structure lc_template_structure(const LabelCoverReduct& red);

} // namespace cspforge
