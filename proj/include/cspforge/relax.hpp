#pragma once

#include "cspforge/datalog.hpp"
#include "cspforge/labelcover.hpp"
#include "cspforge/minions.hpp"
#include "cspforge/rational.hpp"
#include "cspforge/structures.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cspforge {

// System of exact-rational linear equalities with optional per-variable
// nonnegativity and [0,1] bounds.
struct LinearSystem {
    struct Var {
        std::string name;
        bool nonneg = false;
        bool ub1 = false;
        bool operator==(const Var&) const = default;
    };
    struct Row {
        std::vector<std::pair<int, Rational>> terms;
        Rational rhs;
        bool operator==(const Row&) const = default;
    };
    std::vector<Var> vars;
    std::vector<Row> rows;

    bool operator==(const LinearSystem&) const = default;
};

// exact feasibility via phase-1 simplex with Bland's rule; the witness
// satisfies every row and bound exactly
std::optional<std::vector<Rational>> lp_feasible(const LinearSystem& l);
bool lp_witness_ok(const LinearSystem& l, const std::vector<Rational>& w);

std::string export_text(const LinearSystem& l);
LinearSystem parse_linear_system(const std::string& text);

// Integer-coefficient equality system over Z (modulus empty) or Z_n.
struct GroupSystem {
    std::optional<unsigned> modulus;
    std::vector<std::string> vars;
    struct Row {
        std::vector<std::pair<int, Integer>> terms;
        Integer rhs;
        bool operator==(const Row&) const = default;
    };
    std::vector<Row> rows;

    bool operator==(const GroupSystem&) const = default;
};

// Smith-normal-form feasibility with witness; Z_n reduces to Z by appending
// one modulus-coefficient slack variable per row.
std::optional<std::vector<Integer>> solve_group_system(const GroupSystem& s);
bool group_witness_ok(const GroupSystem& s, const std::vector<Integer>& w);

std::string export_text(const GroupSystem& s);
GroupSystem parse_group_system(const std::string& text);

// SA^k: variables x_{K,f} over all subsets of size <= k and all partial
// homomorphisms, with the normalization and marginal rows of the relaxation
// and [0,1] bounds.
LinearSystem sherali_adams_system(const Structure& a, int k, const Structure& x);

// lambda_conv: one LP variable per (variable, label); normalization rows sum
// to 1 (the displayed "= 0" is available behind literal_zero_rhs, with no
// claim about intent) and every variable is nonnegative.
LinearSystem lambda_conv(const LabelCoverInstance& s, bool literal_zero_rhs = false);

// the same rows valued over the group G; the sets F_K come from running the
// consistency enforcement first, and no nonnegativity applies
GroupSystem affine_system(const Structure& a, int k, const Structure& x,
                          std::optional<unsigned> modulus);

// template of CSP(Z_n): ternary x1 + x2 = y plus one unary y = b per
// generator
Structure group_template(unsigned modulus, const std::vector<unsigned>& generators);

// encode an instance over a group template as a group system directly
GroupSystem group_instance_system(const Structure& g_template, const Structure& x,
                                  std::optional<unsigned> modulus,
                                  const std::vector<unsigned>& generators);

// tau^k over a single-sorted signature
DatalogInterpretation tensor_interpretation(const Signature& sigma, int k);

// accepts iff tau^k(X) -> pi_{tau^k(A)}(M), decided as rho^{tau^k(A)}(tau^k(X)) -> M
bool tensor_test(const Structure& a, const Minion& m, int k, const Structure& x);

} // namespace cspforge
