#pragma once

#include "cspforge/datalog.hpp"
#include "cspforge/gadgets.hpp"
#include "cspforge/labelcover.hpp"
#include "cspforge/minions.hpp"
#include "cspforge/structures.hpp"

#include <string>
#include <vector>

namespace cspforge {

struct ParseError : Error {
    int line;
    int col;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " at line " + std::to_string(line_) + ", column " + std::to_string(col_)),
          line(line_),
          col(col_) {}
};

// A parsed file: any mix of declarations, with cross-references resolved
// against earlier declarations. Structures reference their signature by
// name; a redeclared name must be structurally identical.
struct Document {
    std::vector<std::pair<std::string, Signature>> signatures;
    std::vector<std::pair<std::string, Structure>> structures;
    std::vector<std::pair<std::string, DatalogProgram>> programs;
    std::vector<std::pair<std::string, DatalogInterpretation>> interpretations;
    std::vector<std::pair<std::string, UnionGadget>> unions;
    std::vector<std::pair<std::string, Gadget>> gadgets;
    std::vector<std::pair<std::string, ProjectiveGadget>> projectives;
    std::vector<std::pair<std::string, LabelCoverInstance>> labelcovers;

    const Signature* find_signature(const std::string& name) const;
    const Structure* find_structure(const std::string& name) const;
    const DatalogProgram* find_program(const std::string& name) const;
    const DatalogInterpretation* find_interpretation(const std::string& name) const;
    const UnionGadget* find_union(const std::string& name) const;
    const Gadget* find_gadget(const std::string& name) const;
    const ProjectiveGadget* find_projective(const std::string& name) const;
    const LabelCoverInstance* find_labelcover(const std::string& name) const;
};

Document parse_document(const std::string& text);

// merges doc into target; same-name declarations must be structurally equal
void merge_document(Document& target, const Document& doc);

std::string print_signature(const std::string& name, const Signature& sig);
std::string print_structure(const std::string& name, const std::string& sig_name,
                            const Structure& s);
std::string print_program(const std::string& name, const std::string& sig_name,
                          const DatalogProgram& p);
std::string print_interpretation(const std::string& name, const std::string& in_name,
                                 const std::string& out_name, const DatalogInterpretation& phi);
std::string print_union(const std::string& name, const std::string& in_name,
                        const std::string& out_name, const UnionGadget& u);
std::string print_labelcover(const std::string& name, const LabelCoverInstance& s);

// a whole document, signatures first, everything by reference
std::string print_document(const Document& doc);

// JSON forms; parse back to structurally equal values
std::string structure_to_json(const Structure& s);
Structure structure_from_json(const std::string& text);
std::string labelcover_to_json(const LabelCoverInstance& s);
LabelCoverInstance labelcover_from_json(const std::string& text);
std::string minion_to_json(const Minion& m);
Minion minion_from_json(const std::string& text);

} // namespace cspforge
