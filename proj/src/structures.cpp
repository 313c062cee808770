#include "cspforge/structures.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace cspforge {

int Signature::type_index(const std::string& name) const {
    for (int i = 0; i < (int)types.size(); ++i)
        if (types[i] == name) return i;
    return -1;
}

int Signature::symbol_index(const std::string& name) const {
    for (int i = 0; i < (int)symbols.size(); ++i)
        if (symbols[i].name == name) return i;
    return -1;
}

int Signature::add_type(std::string name) {
    if (type_index(name) >= 0) throw ValidationError("duplicate type: " + name);
    types.push_back(std::move(name));
    return (int)types.size() - 1;
}

int Signature::add_symbol(std::string name, std::vector<int> arity) {
    if (symbol_index(name) >= 0) throw ValidationError("duplicate symbol: " + name);
    for (int t : arity)
        if (t < 0 || t >= (int)types.size())
            throw ValidationError("arity refers to undeclared type in symbol " + name);
    symbols.push_back({std::move(name), std::move(arity)});
    return (int)symbols.size() - 1;
}

int Structure::element_index(int type, const std::string& name) const {
    const auto& dom = domains[type];
    for (int i = 0; i < (int)dom.size(); ++i)
        if (dom[i] == name) return i;
    return -1;
}

void canonicalize_relations(Structure& a) {
    for (auto& rel : a.relations) {
        std::sort(rel.begin(), rel.end());
        rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
    }
}

void validate_structure(const Structure& a) {
    if ((int)a.domains.size() != (int)a.sig.types.size())
        throw ValidationError("domain count does not match signature");
    if ((int)a.relations.size() != (int)a.sig.symbols.size())
        throw ValidationError("relation count does not match signature");
    for (int t = 0; t < (int)a.domains.size(); ++t) {
        std::set<std::string> seen(a.domains[t].begin(), a.domains[t].end());
        if (seen.size() != a.domains[t].size())
            throw ValidationError("duplicate element name in type " + a.sig.types[t]);
    }
    for (int s = 0; s < (int)a.relations.size(); ++s) {
        const auto& ar = a.sig.symbols[s].arity;
        for (const auto& tup : a.relations[s]) {
            if (tup.size() != ar.size())
                throw ValidationError("tuple arity mismatch in " + a.sig.symbols[s].name);
            for (size_t i = 0; i < tup.size(); ++i)
                if (tup[i] < 0 || tup[i] >= a.domain_size(ar[i]))
                    throw ValidationError("tuple element out of range in " + a.sig.symbols[s].name);
        }
    }
}

Structure make_structure(Signature sig,
                         std::vector<std::vector<std::string>> domains,
                         std::vector<std::vector<Tuple>> relations) {
    Structure a{std::move(sig), std::move(domains), std::move(relations)};
    a.relations.resize(a.sig.symbols.size());
    canonicalize_relations(a);
    validate_structure(a);
    return a;
}

Partition::Partition(const Structure& a) {
    int off = 0;
    for (int t = 0; t < (int)a.domains.size(); ++t) {
        type_offset_.push_back(off);
        off += a.domain_size(t);
        for (int i = 0; i < a.domain_size(t); ++i) elem_type_.push_back(t);
    }
    parent_.resize(off);
    std::iota(parent_.begin(), parent_.end(), 0);
}

int Partition::flat_index(ElemRef x) const { return type_offset_[x.type] + x.elem; }

int Partition::find(ElemRef x) const {
    int i = flat_index(x);
    while (parent_[i] != i) {
        parent_[i] = parent_[parent_[i]];
        i = parent_[i];
    }
    return i;
}

void Partition::unite(ElemRef x, ElemRef y) {
    if (x.type != y.type) throw ValidationError("cannot equate elements of distinct types");
    int a = find(x), b = find(y);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
}

int Partition::class_count() const {
    int n = 0;
    for (int i = 0; i < (int)parent_.size(); ++i) {
        int r = i;
        while (parent_[r] != r) r = parent_[r];
        if (r == i) ++n;
    }
    return n;
}

std::vector<std::vector<ElemRef>> Partition::classes() const {
    std::map<int, std::vector<ElemRef>> by_root;
    for (int i = 0; i < (int)parent_.size(); ++i) {
        int t = elem_type_[i];
        ElemRef e{t, i - type_offset_[t]};
        by_root[find(e)].push_back(e);
    }
    std::vector<std::vector<ElemRef>> out;
    out.reserve(by_root.size());
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    return out;
}

bool is_homomorphism(const Structure& x, const Structure& a, const Homomorphism& h) {
    if (x.sig != a.sig) return false;
    if (h.map.size() != x.domains.size()) return false;
    for (int t = 0; t < (int)x.domains.size(); ++t) {
        if ((int)h.map[t].size() != x.domain_size(t)) return false;
        for (int v : h.map[t])
            if (v < 0 || v >= a.domain_size(t)) return false;
    }
    for (int s = 0; s < (int)x.relations.size(); ++s) {
        const auto& ar = x.sig.symbols[s].arity;
        for (const auto& tup : x.relations[s]) {
            Tuple img(tup.size());
            for (size_t i = 0; i < tup.size(); ++i) img[i] = h.map[ar[i]][tup[i]];
            if (!std::binary_search(a.relations[s].begin(), a.relations[s].end(), img))
                return false;
        }
    }
    return true;
}

namespace {

// Shared engine for find/enumerate: backtracking over the type-tagged
// elements in lexicographic order with generalized arc pruning.
struct HomSearch {
    const Structure& x;
    const Structure& a;
    std::vector<ElemRef> order;
    std::vector<std::vector<std::vector<char>>> cand; // [type][elem][value]
    // tuples touching each element
    std::vector<std::vector<std::vector<std::pair<int, int>>>> touching; // [type][elem] -> (sym, tupidx)
    bool enumerate_all = false;
    std::vector<Homomorphism>* results = nullptr;
    std::optional<Homomorphism> first;

    HomSearch(const Structure& x_, const Structure& a_) : x(x_), a(a_) {
        if (x.sig != a.sig) throw SignatureMismatch("homomorphism search needs a shared signature");
        cand.resize(x.domains.size());
        touching.resize(x.domains.size());
        for (int t = 0; t < (int)x.domains.size(); ++t) {
            cand[t].assign(x.domain_size(t), std::vector<char>(a.domain_size(t), 1));
            touching[t].resize(x.domain_size(t));
            for (int i = 0; i < x.domain_size(t); ++i) order.push_back({t, i});
        }
        for (int s = 0; s < (int)x.relations.size(); ++s) {
            const auto& ar = x.sig.symbols[s].arity;
            for (int j = 0; j < (int)x.relations[s].size(); ++j)
                for (size_t i = 0; i < ar.size(); ++i)
                    touching[ar[i]][x.relations[s][j][i]].push_back({s, j});
        }
    }

    // prune candidate sets of the elements of one tuple against the target
    // relation; returns false when some candidate set empties
    bool revise(int s, int tupidx, std::vector<ElemRef>& changed) {
        const auto& ar = x.sig.symbols[s].arity;
        const auto& tup = x.relations[s][tupidx];
        int k = (int)tup.size();
        if (k == 0) return !a.relations[s].empty();
        std::vector<std::vector<char>> support(k);
        for (int i = 0; i < k; ++i) support[i].assign(a.domain_size(ar[i]), 0);
        for (const auto& target : a.relations[s]) {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i) ok = cand[ar[i]][tup[i]][target[i]];
            if (!ok) continue;
            for (int i = 0; i < k; ++i) support[i][target[i]] = 1;
        }
        for (int i = 0; i < k; ++i) {
            auto& cs = cand[ar[i]][tup[i]];
            bool shrunk = false, any = false;
            for (int v = 0; v < (int)cs.size(); ++v) {
                if (cs[v] && !support[i][v]) { cs[v] = 0; shrunk = true; }
                any = any || cs[v];
            }
            if (!any) return false;
            if (shrunk) changed.push_back({ar[i], tup[i]});
        }
        return true;
    }

    bool propagate(std::vector<ElemRef> dirty) {
        std::vector<std::pair<int, int>> queue;
        std::set<std::pair<int, int>> queued;
        auto push_touching = [&](ElemRef e) {
            for (auto& st : touching[e.type][e.elem])
                if (queued.insert(st).second) queue.push_back(st);
        };
        if (dirty.empty()) {
            for (int s = 0; s < (int)x.relations.size(); ++s)
                for (int j = 0; j < (int)x.relations[s].size(); ++j) {
                    queue.push_back({s, j});
                    queued.insert({s, j});
                }
        } else {
            for (auto e : dirty) push_touching(e);
        }
        while (!queue.empty()) {
            auto st = queue.back();
            queue.pop_back();
            queued.erase(st);
            std::vector<ElemRef> changed;
            if (!revise(st.first, st.second, changed)) return false;
            for (auto e : changed) push_touching(e);
        }
        return true;
    }

    bool search(size_t pos) {
        if (pos == order.size()) {
            Homomorphism h;
            h.map.resize(x.domains.size());
            for (int t = 0; t < (int)x.domains.size(); ++t) {
                h.map[t].resize(x.domain_size(t));
                for (int i = 0; i < x.domain_size(t); ++i) {
                    int v = -1;
                    for (int w = 0; w < (int)cand[t][i].size(); ++w)
                        if (cand[t][i][w]) { v = w; break; }
                    h.map[t][i] = v;
                }
            }
            if (enumerate_all) {
                results->push_back(std::move(h));
                return false; // keep searching
            }
            first = std::move(h);
            return true;
        }
        ElemRef e = order[pos];
        auto saved = cand;
        for (int v = 0; v < (int)cand[e.type][e.elem].size(); ++v) {
            if (!saved[e.type][e.elem][v]) continue;
            cand = saved;
            for (int w = 0; w < (int)cand[e.type][e.elem].size(); ++w)
                cand[e.type][e.elem][w] = (w == v);
            if (propagate({e}) && search(pos + 1)) return true;
        }
        cand = saved;
        return false;
    }

    bool run() {
        // a nullary relation asserted in x must be asserted in a
        if (!propagate({})) return false;
        return search(0);
    }
};

} // namespace

std::optional<Homomorphism> find_homomorphism(const Structure& x, const Structure& a) {
    HomSearch s(x, a);
    s.run();
    return s.first;
}

std::vector<Homomorphism> enumerate_homomorphisms(const Structure& x, const Structure& a) {
    std::vector<Homomorphism> out;
    HomSearch s(x, a);
    s.enumerate_all = true;
    s.results = &out;
    s.run();
    return out;
}

namespace {

// (symbol, position, direction) incidence counts, the cheap invariant used
// to prune isomorphism candidates
std::vector<std::vector<int>> degree_profiles(const Structure& a, int type) {
    std::vector<std::vector<int>> prof(a.domain_size(type));
    for (int s = 0; s < (int)a.relations.size(); ++s) {
        const auto& ar = a.sig.symbols[s].arity;
        for (const auto& tup : a.relations[s])
            for (size_t i = 0; i < tup.size(); ++i)
                if (ar[i] == type) {
                    auto& p = prof[tup[i]];
                    size_t slot = (size_t)s * 8 + i;
                    if (p.size() <= slot) p.resize(slot + 1, 0);
                    p[slot]++;
                }
    }
    return prof;
}

struct IsoSearch {
    const Structure& a;
    const Structure& b;
    std::vector<std::vector<std::vector<int>>> prof_a, prof_b;
    std::vector<std::vector<int>> map;     // a -> b
    std::vector<std::vector<char>> used;   // per type, b elements
    std::vector<ElemRef> order;

    IsoSearch(const Structure& a_, const Structure& b_) : a(a_), b(b_) {
        map.resize(a.domains.size());
        used.resize(a.domains.size());
        for (int t = 0; t < (int)a.domains.size(); ++t) {
            map[t].assign(a.domain_size(t), -1);
            used[t].assign(b.domain_size(t), 0);
            prof_a.push_back(degree_profiles(a, t));
            prof_b.push_back(degree_profiles(b, t));
            for (int i = 0; i < a.domain_size(t); ++i) order.push_back({t, i});
        }
    }

    bool partial_ok(int s) {
        const auto& ar = a.sig.symbols[s].arity;
        for (const auto& tup : a.relations[s]) {
            Tuple img(tup.size());
            bool total = true;
            for (size_t i = 0; i < tup.size() && total; ++i) {
                img[i] = map[ar[i]][tup[i]];
                total = img[i] >= 0;
            }
            if (total &&
                !std::binary_search(b.relations[s].begin(), b.relations[s].end(), img))
                return false;
        }
        return true;
    }

    bool consistent_after(ElemRef e) {
        for (int s = 0; s < (int)a.relations.size(); ++s) {
            const auto& ar = a.sig.symbols[s].arity;
            bool touches = false;
            for (int t : ar) touches = touches || (t == e.type);
            if (touches && !partial_ok(s)) return false;
        }
        return true;
    }

    bool search(size_t pos) {
        if (pos == order.size()) {
            // injective same-size map preserving all relations forward with
            // equal relation sizes is automatically an isomorphism
            return true;
        }
        ElemRef e = order[pos];
        for (int v = 0; v < b.domain_size(e.type); ++v) {
            if (used[e.type][v]) continue;
            if (prof_a[e.type][e.elem] != prof_b[e.type][v]) continue;
            map[e.type][e.elem] = v;
            used[e.type][v] = 1;
            if (consistent_after(e) && search(pos + 1)) return true;
            map[e.type][e.elem] = -1;
            used[e.type][v] = 0;
        }
        return false;
    }
};

} // namespace

bool is_isomorphic(const Structure& a, const Structure& b) {
    if (a.sig != b.sig) throw SignatureMismatch("isomorphism check needs a shared signature");
    for (int t = 0; t < (int)a.domains.size(); ++t)
        if (a.domain_size(t) != b.domain_size(t)) return false;
    for (int s = 0; s < (int)a.relations.size(); ++s)
        if (a.relations[s].size() != b.relations[s].size()) return false;
    IsoSearch search(a, b);
    for (int t = 0; t < (int)a.domains.size(); ++t) {
        auto pa = search.prof_a[t], pb = search.prof_b[t];
        std::sort(pa.begin(), pa.end());
        std::sort(pb.begin(), pb.end());
        if (pa != pb) return false;
    }
    return search.search(0);
}

bool is_hom_equivalent(const Structure& a, const Structure& b) {
    return find_homomorphism(a, b).has_value() && find_homomorphism(b, a).has_value();
}

Homomorphism compose(const Homomorphism& f, const Homomorphism& g, const Structure& x) {
    Homomorphism h;
    h.map.resize(x.domains.size());
    for (int t = 0; t < (int)x.domains.size(); ++t) {
        h.map[t].resize(x.domain_size(t));
        for (int i = 0; i < x.domain_size(t); ++i) h.map[t][i] = g.map[t][f.map[t][i]];
    }
    return h;
}

std::string tuple_name(const std::vector<std::string>& parts) {
    std::string out = "(";
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ",";
        out += parts[i];
    }
    out += ")";
    return out;
}

Structure power(const Structure& b, int n) {
    if (n < 0) throw ValidationError("power exponent must be nonnegative");
    Structure out;
    out.sig = b.sig;
    out.domains.resize(b.domains.size());
    out.relations.resize(b.relations.size());
    for (int t = 0; t < (int)b.domains.size(); ++t) {
        // all functions [n] -> B_t in lexicographic order; for n = 0 the
        // single empty function
        long long count = 1;
        for (int i = 0; i < n; ++i) {
            count *= b.domain_size(t);
            if (count > 2'000'000) throw ValidationError("power domain too large");
        }
        for (long long idx = 0; idx < count; ++idx) {
            std::vector<std::string> parts(n);
            long long rem = idx;
            for (int i = n - 1; i >= 0; --i) {
                parts[i] = b.domains[t][rem % b.domain_size(t)];
                rem /= b.domain_size(t);
            }
            out.domains[t].push_back(tuple_name(parts));
        }
    }
    for (int s = 0; s < (int)b.relations.size(); ++s) {
        const auto& ar = b.sig.symbols[s].arity;
        int k = (int)ar.size();
        long long count = 1;
        for (int i = 0; i < n; ++i) {
            count *= (long long)b.relations[s].size();
            if (count > 4'000'000) throw ValidationError("power relation too large");
        }
        // a tuple of the power is a choice of a base tuple per coordinate
        if (b.relations[s].empty() && n > 0) continue;
        for (long long idx = 0; idx < count; ++idx) {
            std::vector<int> choice(n);
            long long rem = idx;
            for (int i = n - 1; i >= 0; --i) {
                choice[i] = (int)(rem % std::max<size_t>(b.relations[s].size(), 1));
                rem /= std::max<size_t>(b.relations[s].size(), 1);
            }
            Tuple tup(k);
            for (int j = 0; j < k; ++j) {
                long long fidx = 0;
                for (int i = 0; i < n; ++i)
                    fidx = fidx * b.domain_size(ar[j]) + b.relations[s][choice[i]][j];
                tup[j] = (int)fidx;
            }
            out.relations[s].push_back(tup);
        }
    }
    canonicalize_relations(out);
    return out;
}

Structure quotient(const Structure& a, const Partition& part,
                   std::vector<std::vector<int>>* class_of_out) {
    auto classes = part.classes();
    std::vector<std::vector<int>> class_of(a.domains.size());
    for (int t = 0; t < (int)a.domains.size(); ++t) class_of[t].assign(a.domain_size(t), -1);

    Structure out;
    out.sig = a.sig;
    out.domains.resize(a.domains.size());
    out.relations.resize(a.relations.size());

    // group classes per type, order by minimal member name
    std::vector<std::vector<std::pair<std::string, std::vector<ElemRef>>>> per_type(a.domains.size());
    for (auto& cls : classes) {
        std::string min_name = a.element_name(cls[0].type, cls[0].elem);
        for (auto& e : cls) min_name = std::min(min_name, a.element_name(e.type, e.elem));
        per_type[cls[0].type].push_back({min_name, cls});
    }
    for (int t = 0; t < (int)a.domains.size(); ++t) {
        std::sort(per_type[t].begin(), per_type[t].end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        for (auto& [name, members] : per_type[t]) {
            int idx = (int)out.domains[t].size();
            out.domains[t].push_back(name);
            for (auto& e : members) class_of[t][e.elem] = idx;
        }
    }
    for (int s = 0; s < (int)a.relations.size(); ++s) {
        const auto& ar = a.sig.symbols[s].arity;
        for (const auto& tup : a.relations[s]) {
            Tuple img(tup.size());
            for (size_t i = 0; i < tup.size(); ++i) img[i] = class_of[ar[i]][tup[i]];
            out.relations[s].push_back(img);
        }
    }
    canonicalize_relations(out);
    if (class_of_out) *class_of_out = std::move(class_of);
    return out;
}

Structure quotient(const Structure& a, const std::vector<std::pair<ElemRef, ElemRef>>& eqs) {
    Partition part(a);
    for (auto& [x, y] : eqs) {
        if (x.type != y.type) throw ValidationError("quotient: cross-type equation");
        part.unite(x, y);
    }
    return quotient(a, part);
}

Structure disjoint_union(const std::vector<Structure>& parts) {
    if (parts.empty()) throw ValidationError("disjoint_union needs at least one structure");
    const Signature& sig = parts[0].sig;
    for (auto& p : parts)
        if (p.sig != sig) throw SignatureMismatch("disjoint_union needs a shared signature");
    Structure out;
    out.sig = sig;
    out.domains.resize(sig.types.size());
    out.relations.resize(sig.symbols.size());
    std::vector<std::vector<int>> offset(parts.size(), std::vector<int>(sig.types.size()));
    for (size_t p = 0; p < parts.size(); ++p) {
        for (int t = 0; t < (int)sig.types.size(); ++t) {
            offset[p][t] = (int)out.domains[t].size();
            for (auto& name : parts[p].domains[t])
                out.domains[t].push_back("u" + std::to_string(p) + ":" + name);
        }
        for (int s = 0; s < (int)sig.symbols.size(); ++s) {
            const auto& ar = sig.symbols[s].arity;
            for (const auto& tup : parts[p].relations[s]) {
                Tuple img(tup.size());
                for (size_t i = 0; i < tup.size(); ++i) img[i] = tup[i] + offset[p][ar[i]];
                out.relations[s].push_back(img);
            }
        }
    }
    canonicalize_relations(out);
    return out;
}

Signature trivial_signature() {
    Signature sig;
    sig.add_symbol("C", {});
    return sig;
}

Structure bot_structure() {
    return make_structure(trivial_signature(), {}, {{}});
}

Structure top_structure() {
    return make_structure(trivial_signature(), {}, {{Tuple{}}});
}

} // namespace cspforge
