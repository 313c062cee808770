#pragma once

// Test-only oracles, independent of the library implementation paths they
// check: plain exhaustive enumeration and textbook fixed points.

#include "cspforge/datalog.hpp"
#include "cspforge/relax.hpp"
#include "cspforge/structures.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace oracles {

using namespace cspforge;

// enumerate every type-respecting map and check the relations directly
inline bool brute_force_hom_exists(const Structure& x, const Structure& a) {
    std::vector<std::pair<int, int>> elems;
    for (int t = 0; t < (int)x.domains.size(); ++t)
        for (int i = 0; i < x.domain_size(t); ++i) elems.push_back({t, i});
    std::vector<std::vector<int>> map(x.domains.size());
    for (int t = 0; t < (int)x.domains.size(); ++t) map[t].assign(x.domain_size(t), 0);
    std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
        if (pos == elems.size()) {
            for (int s = 0; s < (int)x.relations.size(); ++s) {
                const auto& ar = x.sig.symbols[s].arity;
                for (const auto& tup : x.relations[s]) {
                    Tuple img(tup.size());
                    for (size_t i = 0; i < tup.size(); ++i) img[i] = map[ar[i]][tup[i]];
                    if (!std::binary_search(a.relations[s].begin(), a.relations[s].end(), img))
                        return false;
                }
            }
            return true;
        }
        auto [t, i] = elems[pos];
        for (int v = 0; v < a.domain_size(t); ++v) {
            map[t][i] = v;
            if (rec(pos + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

// naive bottom-up fixed point: every rule over every assignment, repeated
// until nothing changes
inline std::vector<Tuple> naive_eval(const DatalogProgram& p, const Structure& x) {
    std::vector<std::set<Tuple>> db(p.pred_count());
    for (int s = 0; s < p.edb_count(); ++s)
        db[s] = std::set<Tuple>(x.relations[s].begin(), x.relations[s].end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : p.rules) {
            std::vector<int> binding(rule.var_types.size());
            std::function<void(size_t)> assign = [&](size_t v) {
                if (v == rule.var_types.size()) {
                    for (const auto& atom : rule.body) {
                        if (atom.pred == Atom::kEquality) {
                            if (binding[atom.vars[0]] != binding[atom.vars[1]]) return;
                        } else {
                            Tuple t(atom.vars.size());
                            for (size_t i = 0; i < atom.vars.size(); ++i)
                                t[i] = binding[atom.vars[i]];
                            if (!db[atom.pred].count(t)) return;
                        }
                    }
                    Tuple head(rule.head.vars.size());
                    for (size_t i = 0; i < head.size(); ++i) head[i] = binding[rule.head.vars[i]];
                    changed = db[rule.head.pred].insert(head).second || changed;
                    return;
                }
                for (int val = 0; val < x.domain_size(rule.var_types[v]); ++val) {
                    binding[v] = val;
                    assign(v + 1);
                }
            };
            assign(0);
        }
    }
    const auto& out = db[p.edb_count() + p.output];
    return std::vector<Tuple>(out.begin(), out.end());
}

// literal steps (1)-(3) of the k-consistency procedure over subset pairs
struct DirectKConsistency {
    std::vector<std::vector<ElemRef>> subsets;
    std::vector<std::vector<std::vector<int>>> families; // surviving partial homs
    bool accepted;
};

inline DirectKConsistency direct_k_consistency(const Structure& a, const Structure& x, int k) {
    DirectKConsistency out;
    out.subsets = subsets_upto(x, k);
    for (const auto& kset : out.subsets)
        out.families.push_back(partial_homomorphisms(a, x, kset));
    auto restricts_to = [&](const std::vector<ElemRef>& kset, const std::vector<int>& f,
                            const std::vector<ElemRef>& lset) {
        std::vector<int> g(lset.size());
        for (size_t j = 0; j < lset.size(); ++j) {
            auto it = std::find(kset.begin(), kset.end(), lset[j]);
            g[j] = f[it - kset.begin()];
        }
        return g;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t ki = 0; ki < out.subsets.size(); ++ki)
            for (size_t li = 0; li < out.subsets.size(); ++li) {
                const auto& kset = out.subsets[ki];
                const auto& lset = out.subsets[li];
                if (lset.size() >= kset.size()) continue;
                bool sub = true;
                for (const auto& e : lset)
                    sub = sub && std::find(kset.begin(), kset.end(), e) != kset.end();
                if (!sub) continue;
                // drop g in F_L with no extension, f in F_K with missing restriction
                auto& fk = out.families[ki];
                auto& fl = out.families[li];
                for (size_t gi = 0; gi < fl.size();) {
                    bool extends = false;
                    for (const auto& f : fk)
                        extends = extends || restricts_to(kset, f, lset) == fl[gi];
                    if (!extends) {
                        fl.erase(fl.begin() + gi);
                        changed = true;
                    } else {
                        ++gi;
                    }
                }
                for (size_t fi = 0; fi < fk.size();) {
                    auto g = restricts_to(kset, fk[fi], lset);
                    if (std::find(fl.begin(), fl.end(), g) == fl.end()) {
                        fk.erase(fk.begin() + fi);
                        changed = true;
                    } else {
                        ++fi;
                    }
                }
            }
    }
    out.accepted = true;
    for (const auto& fam : out.families) out.accepted = out.accepted && !fam.empty();
    return out;
}

// Gaussian elimination feasibility over the field Z_p, p prime
inline bool gauss_mod_p_feasible(const GroupSystem& s, unsigned p) {
    int n = (int)s.vars.size();
    std::vector<std::vector<long long>> m;
    for (const auto& row : s.rows) {
        std::vector<long long> r(n + 1, 0);
        for (const auto& [v, c] : row.terms)
            r[v] = (((r[v] + c.get_si()) % (long long)p) + p) % p;
        r[n] = ((row.rhs.get_si() % (long long)p) + p) % p;
        m.push_back(std::move(r));
    }
    auto inv = [&](long long a) {
        long long r = 1, b = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    int rank = 0;
    for (int col = 0; col < n && rank < (int)m.size(); ++col) {
        int piv = -1;
        for (int i = rank; i < (int)m.size(); ++i)
            if (m[i][col]) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        long long iv = inv(m[rank][col]);
        for (auto& v : m[rank]) v = v * iv % p;
        for (int i = 0; i < (int)m.size(); ++i) {
            if (i == rank || !m[i][col]) continue;
            long long f = m[i][col];
            for (int j = 0; j <= n; ++j) m[i][j] = ((m[i][j] - f * m[rank][j]) % p + p) % p;
        }
        ++rank;
    }
    for (const auto& row : m) {
        bool allzero = true;
        for (int j = 0; j < n; ++j) allzero = allzero && row[j] == 0;
        if (allzero && row[n] != 0) return false;
    }
    return true;
}

// exhaustive search over Z_n^vars
inline bool enumerate_mod_n_feasible(const GroupSystem& s, unsigned n) {
    int nv = (int)s.vars.size();
    std::vector<Integer> w(nv, Integer(0));
    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == nv) return group_witness_ok(s, w);
        for (unsigned val = 0; val < n; ++val) {
            w[v] = (int)val;
            if (rec(v + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

// exhaustive search over a centered integer box
inline bool box_search_feasible(const GroupSystem& s, int bound) {
    int nv = (int)s.vars.size();
    std::vector<Integer> w(nv, Integer(0));
    std::function<bool(int)> rec = [&](int v) -> bool {
        if (v == nv) return group_witness_ok(s, w);
        for (int val = -bound; val <= bound; ++val) {
            w[v] = val;
            if (rec(v + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

} // namespace oracles
