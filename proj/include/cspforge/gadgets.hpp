#pragma once

#include "cspforge/datalog.hpp"
#include "cspforge/labelcover.hpp"
#include "cspforge/structures.hpp"

namespace cspforge {

// Gadget replacement data: a Sigma-structure per input type and per input
// symbol, glued by homomorphisms p_{R,i} : D_{ar_R(i)} -> S_R.
struct Gadget {
    Signature input;
    Signature output;
    std::vector<Structure> type_structs;
    std::vector<Structure> symbol_structs;
    std::vector<std::vector<Homomorphism>> glue; // [symbol][position]
};

void validate_gadget(const Gadget& g);
Structure apply_gadget(const Gadget& g, const Structure& x);

// Projective gadget: all-binary input signature, one structure per type,
// one homomorphism p_R : D_s -> D_t per symbol R with ar_R = (t, s) (the
// order of t and s is reversed).
struct ProjectiveGadget {
    Signature input;
    Signature output;
    std::vector<Structure> type_structs;
    std::vector<Homomorphism> maps;
};

void validate_projective_gadget(const ProjectiveGadget& g);
Structure apply_projective_gadget(const ProjectiveGadget& g, const Structure& x);

// rho: one new type per symbol, with P_{R,i} linking a constraint tuple to
// its i-th coordinate.
Signature reified_signature(const Signature& pi);
Structure reify(const Structure& x);
DatalogInterpretation reify_interpretation(const Signature& pi);

// gamma(X) and to_projective(gamma)(rho(X)) are isomorphic.
ProjectiveGadget to_projective(const Gadget& g);

// Lemma-style compiler: the compiled reduction is homomorphically equivalent
// to the projective gadget replacement. Recursion appears only in the
// I_{h,h'} closure rules.
DDatalogReduction compile_projective_gadget(const ProjectiveGadget& g);

// reification interpretation composed with the projective-gadget compilation
DDatalogReduction compile_gadget(const Gadget& g);

// universal gadget pi_B as a projective gadget object over a fixed reduct
ProjectiveGadget universal_gadget(const Structure& b, const LabelCoverReduct& red);

// sample gadgets
Gadget k2_to_kinf_gadget();
ProjectiveGadget k2_to_kinf_projective();
Gadget k5_to_c5_gadget();

} // namespace cspforge
