#pragma once

#include "cspforge/structures.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cspforge {

// Body/head atom of a typed Datalog rule. pred >= 0 indexes the program's
// predicate table (EDBs first, then IDBs); pred == kEquality is the typed
// equality x = y.
struct Atom {
    static constexpr int kEquality = -1;
    int pred = 0;
    std::vector<int> vars;
};

struct Rule {
    Atom head;
    std::vector<Atom> body;
    std::vector<int> var_types; // per variable, a type of the input signature
};

// Typed Datalog program with fixed input signature (the EDBs). IDB arities
// are tuples of input types; the output predicate is always an IDB.
struct DatalogProgram {
    Signature input;
    struct Idb {
        std::string name;
        std::vector<int> arity;
        bool operator==(const Idb&) const = default;
    };
    std::vector<Idb> idbs;
    std::vector<Rule> rules;
    int output = 0; // idb index

    int edb_count() const { return (int)input.symbols.size(); }
    int pred_count() const { return edb_count() + (int)idbs.size(); }
    bool is_idb(int pred) const { return pred >= edb_count(); }
    const std::vector<int>& pred_arity(int pred) const {
        return pred < edb_count() ? input.symbols[pred].arity : idbs[pred - edb_count()].arity;
    }
    std::string pred_name(int pred) const {
        return pred < edb_count() ? input.symbols[pred].name : idbs[pred - edb_count()].name;
    }
    const std::vector<int>& output_arity() const { return idbs[output].arity; }

    int idb_index(const std::string& name) const;
    int add_idb(std::string name, std::vector<int> arity);
};

// Rejects ill-typed rules, equality or EDB heads, and range-unrestricted
// rules (a head variable must occur in the body, equality atoms included).
void validate_program(const DatalogProgram& p);

int width(const DatalogProgram& p);

// Least fixed point of the program on x, returning the output relation as a
// sorted set of element tuples. Evaluation is semi-naive; the result equals
// the naive fixed point.
std::vector<Tuple> evaluate_program(const DatalogProgram& p, const Structure& x);

// One Datalog program per output type (domains) and per output symbol
// (relations); the symbol program's arity is the concatenation of the
// arities of the programs of its argument types.
struct DatalogInterpretation {
    Signature input;
    Signature output;
    std::vector<DatalogProgram> type_programs;
    std::vector<DatalogProgram> symbol_programs;
};

void validate_interpretation(const DatalogInterpretation& phi);
int width(const DatalogInterpretation& phi);
Structure apply_interpretation(const DatalogInterpretation& phi, const Structure& x);

// Type/symbol merging maps (d, r) with ar_{r(R)} = d o ar_R.
struct UnionGadget {
    Signature input;
    Signature output;
    std::vector<int> type_map;
    std::vector<int> symbol_map;
};

void validate_union_gadget(const UnionGadget& u);
Structure apply_union_gadget(const UnionGadget& u, const Structure& a);

// A Datalog interpretation followed by a union gadget.
struct DDatalogReduction {
    DatalogInterpretation interp;
    UnionGadget un;
};

Structure apply_reduction(const DDatalogReduction& r, const Structure& x);

DatalogInterpretation identity_interpretation(const Signature& sig);
UnionGadget identity_union_gadget(const Signature& sig);

// Composition constructions: the composed object applies like the sequential
// application, up to isomorphism.
UnionGadget compose_union_gadgets(const UnionGadget& u, const UnionGadget& v);
DatalogInterpretation compose_interpretations(const DatalogInterpretation& phi,
                                              const DatalogInterpretation& chi);
std::pair<DatalogInterpretation, UnionGadget>
swap_union_interpretation(const UnionGadget& u, const DatalogInterpretation& phi);
DDatalogReduction compose_ddatalog(const DDatalogReduction& r1, const DDatalogReduction& r2);

// The width-4 program deciding 2-colourability (derives C on odd cycles) and
// the line digraph interpretation, both over digraphs.
Signature digraph_signature();
DatalogProgram two_colouring_program();
DatalogInterpretation line_digraph_interpretation();

} // namespace cspforge
