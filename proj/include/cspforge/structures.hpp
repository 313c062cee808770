#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cspforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SignatureMismatch : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

// Multisorted relational signature: ordered type names plus symbols whose
// arity is a tuple of type indices (possibly empty for nullary symbols).
struct Signature {
    std::vector<std::string> types;
    struct Symbol {
        std::string name;
        std::vector<int> arity;
        bool operator==(const Symbol&) const = default;
    };
    std::vector<Symbol> symbols;

    int type_index(const std::string& name) const;
    int symbol_index(const std::string& name) const;
    int add_type(std::string name);
    int add_symbol(std::string name, std::vector<int> arity);

    bool operator==(const Signature&) const = default;
};

using Tuple = std::vector<int>;

// Finite structure over a signature. Element identity is (type, index);
// equal names in distinct types are distinct elements. Relations are kept
// sorted and deduplicated so equal structures compare equal.
struct Structure {
    Signature sig;
    std::vector<std::vector<std::string>> domains;
    std::vector<std::vector<Tuple>> relations;

    int domain_size(int type) const { return (int)domains[type].size(); }
    const std::string& element_name(int type, int elem) const { return domains[type][elem]; }
    int element_index(int type, const std::string& name) const;

    bool operator==(const Structure&) const = default;
};

struct ElemRef {
    int type = 0;
    int elem = 0;
    bool operator==(const ElemRef&) const = default;
    bool operator<(const ElemRef& o) const {
        return type != o.type ? type < o.type : elem < o.elem;
    }
};

// Per-type total maps from source domains to target domains.
struct Homomorphism {
    std::vector<std::vector<int>> map;

    int operator()(int type, int elem) const { return map[type][elem]; }
};

// Union-find over the type-tagged elements of a structure; only same-type
// elements may be equated.
class Partition {
public:
    explicit Partition(const Structure& a);

    void unite(ElemRef x, ElemRef y);
    int find(ElemRef x) const;
    int flat_index(ElemRef x) const;
    int class_count() const;

    // classes in deterministic order; representative is the member whose
    // name is lexicographically minimal
    std::vector<std::vector<ElemRef>> classes() const;

private:
    std::vector<int> type_offset_;
    std::vector<int> elem_type_;
    mutable std::vector<int> parent_;
};

void canonicalize_relations(Structure& a);
void validate_structure(const Structure& a);

Structure make_structure(Signature sig,
                         std::vector<std::vector<std::string>> domains,
                         std::vector<std::vector<Tuple>> relations);

bool is_homomorphism(const Structure& x, const Structure& a, const Homomorphism& h);

// Backtracking with forward arc-pruning; the witness is deterministic: the
// first map in lexicographic element order.
std::optional<Homomorphism> find_homomorphism(const Structure& x, const Structure& a);

// Enumerates every homomorphism x -> a in lexicographic order.
std::vector<Homomorphism> enumerate_homomorphisms(const Structure& x, const Structure& a);

bool is_isomorphic(const Structure& a, const Structure& b);
bool is_hom_equivalent(const Structure& a, const Structure& b);

Homomorphism compose(const Homomorphism& f, const Homomorphism& g, const Structure& x);

// X-fold power with X = [n]; element names are tuples of the base names.
Structure power(const Structure& b, int n);

Structure quotient(const Structure& a, const std::vector<std::pair<ElemRef, ElemRef>>& eqs);
// class_of, when given, receives the per-type map from a's elements to the
// quotient's elements
Structure quotient(const Structure& a, const Partition& part,
                   std::vector<std::vector<int>>* class_of = nullptr);

Structure disjoint_union(const std::vector<Structure>& parts);

// The trivial templates over the signature with no types and one nullary
// symbol C: bot has C empty, top has C = {()}.
Signature trivial_signature();
Structure bot_structure();
Structure top_structure();

std::string tuple_name(const std::vector<std::string>& parts);

} // namespace cspforge
