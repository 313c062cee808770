#include "cspforge/labelcover.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace cspforge {

int LabelCoverInstance::var_index(const std::string& name) const {
    for (int i = 0; i < (int)vars.size(); ++i)
        if (vars[i].name == name) return i;
    return -1;
}

void validate_label_cover(const LabelCoverInstance& s) {
    std::set<std::string> names;
    for (const auto& v : s.vars) {
        if (!names.insert(v.name).second)
            throw ValidationError("duplicate label cover variable: " + v.name);
        std::set<std::string> labels(v.labels.begin(), v.labels.end());
        if (labels.size() != v.labels.size())
            throw ValidationError("duplicate label in variable " + v.name);
    }
    for (const auto& c : s.cons) {
        if (c.u < 0 || c.u >= (int)s.vars.size() || c.v < 0 || c.v >= (int)s.vars.size())
            throw ValidationError("label cover constraint references unknown variable");
        if ((int)c.pi.size() != (int)s.vars[c.u].labels.size())
            throw ValidationError("constraint map is not total on the source labels");
        for (int img : c.pi)
            if (img < 0 || img >= (int)s.vars[c.v].labels.size())
                throw ValidationError("constraint map lands outside the target labels");
    }
}

LabelCoverInstance enforce_arc_consistency(const LabelCoverInstance& s) {
    validate_label_cover(s);
    int n = (int)s.vars.size();
    std::vector<std::vector<char>> alive(n);
    for (int v = 0; v < n; ++v) alive[v].assign(s.vars[v].labels.size(), 1);

    std::vector<std::vector<int>> incident(n);
    for (int c = 0; c < (int)s.cons.size(); ++c) {
        incident[s.cons[c].u].push_back(c);
        incident[s.cons[c].v].push_back(c);
    }
    std::deque<int> work;
    std::vector<char> queued(s.cons.size(), 0);
    for (int c = 0; c < (int)s.cons.size(); ++c) {
        work.push_back(c);
        queued[c] = 1;
    }
    auto wake = [&](int var) {
        for (int c : incident[var])
            if (!queued[c]) {
                queued[c] = 1;
                work.push_back(c);
            }
    };
    while (!work.empty()) {
        int c = work.front();
        work.pop_front();
        queued[c] = 0;
        const auto& con = s.cons[c];
        // prune target labels outside the image, then source labels that
        // map outside the surviving target
        std::vector<char> in_image(s.vars[con.v].labels.size(), 0);
        for (int i = 0; i < (int)con.pi.size(); ++i)
            if (alive[con.u][i]) in_image[con.pi[i]] = 1;
        bool vchanged = false, uchanged = false;
        for (int j = 0; j < (int)in_image.size(); ++j)
            if (alive[con.v][j] && !in_image[j]) {
                alive[con.v][j] = 0;
                vchanged = true;
            }
        for (int i = 0; i < (int)con.pi.size(); ++i)
            if (alive[con.u][i] && !alive[con.v][con.pi[i]]) {
                alive[con.u][i] = 0;
                uchanged = true;
            }
        if (vchanged) wake(con.v);
        if (uchanged) wake(con.u);
    }

    LabelCoverInstance out;
    std::vector<std::vector<int>> new_index(n);
    for (int v = 0; v < n; ++v) {
        LabelCoverInstance::Var nv;
        nv.name = s.vars[v].name;
        new_index[v].assign(s.vars[v].labels.size(), -1);
        for (int i = 0; i < (int)s.vars[v].labels.size(); ++i)
            if (alive[v][i]) {
                new_index[v][i] = (int)nv.labels.size();
                nv.labels.push_back(s.vars[v].labels[i]);
            }
        out.vars.push_back(std::move(nv));
    }
    for (const auto& con : s.cons) {
        LabelCoverInstance::Con nc;
        nc.u = con.u;
        nc.v = con.v;
        for (int i = 0; i < (int)con.pi.size(); ++i)
            if (new_index[con.u][i] >= 0) nc.pi.push_back(new_index[con.v][con.pi[i]]);
        out.cons.push_back(std::move(nc));
    }
    return out;
}

bool has_empty_type(const LabelCoverInstance& s) {
    for (const auto& v : s.vars)
        if (v.labels.empty()) return true;
    return false;
}

// all subsets of the type-tagged elements of x with size <= k, ordered by
// size then lexicographically
std::vector<std::vector<ElemRef>> subsets_upto(const Structure& x, int k) {
    std::vector<ElemRef> elems;
    for (int t = 0; t < (int)x.domains.size(); ++t)
        for (int i = 0; i < x.domain_size(t); ++i) elems.push_back({t, i});
    std::vector<std::vector<ElemRef>> out;
    std::vector<ElemRef> cur;
    std::function<void(size_t)> rec = [&](size_t from) {
        out.push_back(cur);
        if ((int)cur.size() == k) return;
        for (size_t i = from; i < elems.size(); ++i) {
            cur.push_back(elems[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& l, const auto& r) { return l.size() < r.size(); });
    return out;
}

std::string subset_name(const Structure& x, const std::vector<ElemRef>& k) {
    std::string name = "{";
    for (size_t i = 0; i < k.size(); ++i) {
        if (i) name += ",";
        name += x.element_name(k[i].type, k[i].elem);
    }
    return name + "}";
}

namespace {

// tuples of x lying entirely inside the subset; nullary tuples always do
std::vector<std::pair<int, const Tuple*>> tuples_within(const Structure& x,
                                                        const std::vector<ElemRef>& k) {
    std::vector<std::pair<int, const Tuple*>> out;
    auto inside = [&](int type, int elem) {
        for (const auto& e : k)
            if (e.type == type && e.elem == elem) return true;
        return false;
    };
    for (int s = 0; s < (int)x.relations.size(); ++s) {
        const auto& ar = x.sig.symbols[s].arity;
        for (const auto& tup : x.relations[s]) {
            bool in = true;
            for (size_t i = 0; i < tup.size() && in; ++i) in = inside(ar[i], tup[i]);
            if (in) out.push_back({s, &tup});
        }
    }
    return out;
}

} // namespace

// partial homomorphisms K -> A in lexicographic order of value vectors
std::vector<std::vector<int>> partial_homomorphisms(const Structure& a, const Structure& x,
                                                    const std::vector<ElemRef>& k) {
    auto tuples = tuples_within(x, k);
    std::vector<std::vector<int>> out;
    std::vector<int> assign(k.size(), -1);
    auto value_of = [&](int type, int elem) {
        for (size_t i = 0; i < k.size(); ++i)
            if (k[i].type == type && k[i].elem == elem) return assign[i];
        return -1;
    };
    auto consistent = [&]() {
        for (auto& [s, tup] : tuples) {
            const auto& ar = x.sig.symbols[s].arity;
            Tuple img(tup->size());
            bool total = true;
            for (size_t i = 0; i < tup->size() && total; ++i) {
                img[i] = value_of(ar[i], (*tup)[i]);
                total = img[i] >= 0;
            }
            if (total &&
                !std::binary_search(a.relations[s].begin(), a.relations[s].end(), img))
                return false;
        }
        return true;
    };
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == k.size()) {
            out.push_back(assign);
            return;
        }
        for (int v = 0; v < a.domain_size(k[i].type); ++v) {
            assign[i] = v;
            if (consistent()) rec(i + 1);
        }
        assign[i] = -1;
    };
    rec(0);
    return out;
}

std::string partial_hom_name(const Structure& a, const Structure& x,
                             const std::vector<ElemRef>& k, const std::vector<int>& f) {
    if (k.empty()) return "{}";
    std::string name;
    for (size_t i = 0; i < k.size(); ++i) {
        if (i) name += ",";
        name += x.element_name(k[i].type, k[i].elem) + ">" + a.element_name(k[i].type, f[i]);
    }
    return name;
}

LabelCoverInstance sigma_k(const Structure& a, const Structure& x, int k, int* ignored_count) {
    if (a.sig != x.sig) throw SignatureMismatch("sigma_k needs template and instance over one signature");
    if (k < 1) throw ValidationError("sigma_k needs k >= 1");
    if (ignored_count) {
        *ignored_count = 0;
        for (int s = 0; s < (int)x.relations.size(); ++s) {
            const auto& ar = x.sig.symbols[s].arity;
            for (const auto& tup : x.relations[s]) {
                std::set<ElemRef> support;
                for (size_t i = 0; i < tup.size(); ++i) support.insert({ar[i], tup[i]});
                if ((int)support.size() > k) ++*ignored_count;
            }
        }
    }
    auto subsets = subsets_upto(x, k);
    LabelCoverInstance out;
    std::map<std::vector<ElemRef>, int> var_of;
    std::vector<std::vector<std::vector<int>>> homs;
    for (const auto& kset : subsets) {
        LabelCoverInstance::Var v;
        v.name = "v" + subset_name(x, kset);
        auto fs = partial_homomorphisms(a, x, kset);
        for (const auto& f : fs) v.labels.push_back(partial_hom_name(a, x, kset, f));
        var_of[kset] = (int)out.vars.size();
        out.vars.push_back(std::move(v));
        homs.push_back(std::move(fs));
    }
    // restriction constraint per proper subset pair
    for (size_t ki = 0; ki < subsets.size(); ++ki) {
        const auto& kset = subsets[ki];
        for (size_t li = 0; li < subsets.size(); ++li) {
            if (li == ki) continue;
            const auto& lset = subsets[li];
            if (lset.size() >= kset.size()) continue;
            bool subset = true;
            for (const auto& e : lset)
                subset = subset && std::find(kset.begin(), kset.end(), e) != kset.end();
            if (!subset) continue;
            LabelCoverInstance::Con con;
            con.u = (int)ki;
            con.v = (int)li;
            for (const auto& f : homs[ki]) {
                // restrict f to L, then locate it among L's partial homs
                std::vector<int> g(lset.size());
                for (size_t j = 0; j < lset.size(); ++j) {
                    auto it = std::find(kset.begin(), kset.end(), lset[j]);
                    g[j] = f[it - kset.begin()];
                }
                auto it = std::find(homs[li].begin(), homs[li].end(), g);
                if (it == homs[li].end())
                    throw Error("internal: restriction of a partial homomorphism is missing");
                con.pi.push_back((int)(it - homs[li].begin()));
            }
            out.cons.push_back(std::move(con));
        }
    }
    validate_label_cover(out);
    return out;
}

bool k_consistency_test(const Structure& a, int k, const Structure& x) {
    return !has_empty_type(enforce_arc_consistency(sigma_k(a, x, k)));
}

UniversalApplication apply_universal_gadget_detailed(const Structure& b,
                                                     const LabelCoverInstance& s) {
    validate_label_cover(s);
    int nvars = (int)s.vars.size();
    std::vector<Structure> copies;
    copies.reserve(nvars);
    for (int v = 0; v < nvars; ++v) copies.push_back(power(b, (int)s.vars[v].labels.size()));

    // a scratch structure holding every copy side by side, so one Partition
    // can collapse across copies
    Structure big;
    big.sig = b.sig;
    big.domains.resize(b.domains.size());
    big.relations.resize(b.relations.size());
    std::vector<std::vector<int>> offset(nvars, std::vector<int>(b.domains.size()));
    for (int v = 0; v < nvars; ++v)
        for (int t = 0; t < (int)b.domains.size(); ++t) {
            offset[v][t] = (int)big.domains[t].size();
            for (const auto& fname : copies[v].domains[t])
                big.domains[t].push_back("[" + s.vars[v].name + ";" + fname + "]");
        }
    for (int v = 0; v < nvars; ++v)
        for (int rs = 0; rs < (int)b.relations.size(); ++rs) {
            const auto& ar = b.sig.symbols[rs].arity;
            for (const auto& tup : copies[v].relations[rs]) {
                Tuple img(tup.size());
                for (size_t i = 0; i < tup.size(); ++i) img[i] = tup[i] + offset[v][ar[i]];
                big.relations[rs].push_back(img);
            }
        }
    canonicalize_relations(big);

    Partition part(big);
    for (const auto& con : s.cons) {
        int nu = (int)s.vars[con.u].labels.size();
        int nv = (int)s.vars[con.v].labels.size();
        for (int t = 0; t < (int)b.domains.size(); ++t) {
            int bt = b.domain_size(t);
            // every d : F_v -> B_t, glue (u; d o pi) = (v; d)
            long long count = 1;
            for (int i = 0; i < nv; ++i) count *= bt;
            for (long long idx = 0; idx < count; ++idx) {
                std::vector<int> d(nv);
                long long rem = idx;
                for (int i = nv - 1; i >= 0; --i) {
                    d[i] = (int)(rem % bt);
                    rem /= bt;
                }
                long long pre = 0;
                for (int i = 0; i < nu; ++i) pre = pre * bt + d[con.pi[i]];
                part.unite({t, offset[con.u][t] + (int)pre}, {t, offset[con.v][t] + (int)idx});
            }
        }
    }
    UniversalApplication out;
    out.offset = offset;
    out.result = quotient(big, part, &out.class_of);
    out.big = std::move(big);
    return out;
}

Structure apply_universal_gadget(const Structure& b, const LabelCoverInstance& s) {
    return apply_universal_gadget_detailed(b, s).result;
}

Structure k_consistency_reduce(const Structure& a, const Structure& b, int k, const Structure& x) {
    return apply_universal_gadget(b, enforce_arc_consistency(sigma_k(a, x, k)));
}

Structure arc_consistency_reduce(const Structure& a, const Structure& b, const Structure& x) {
    return apply_universal_gadget(b, enforce_arc_consistency(reify_to_label_cover(a, x)));
}

int LabelCoverReduct::type_of(const std::vector<std::string>& labels) const {
    for (int t = 0; t < (int)type_labels.size(); ++t)
        if (type_labels[t] == labels) return t;
    return -1;
}

int LabelCoverReduct::symbol_of(int type_u, int type_v, const std::vector<int>& pi) const {
    for (int s = 0; s < (int)symbol_maps.size(); ++s)
        if (sig.symbols[s].arity[0] == type_u && sig.symbols[s].arity[1] == type_v &&
            symbol_maps[s] == pi)
            return s;
    return -1;
}

LabelCoverReduct label_cover_reduct(const std::vector<const LabelCoverInstance*>& instances) {
    LabelCoverReduct red;
    for (const auto* inst : instances)
        for (const auto& v : inst->vars)
            if (red.type_of(v.labels) < 0) {
                red.sig.add_type("X" + std::to_string(red.type_labels.size()));
                red.type_labels.push_back(v.labels);
            }
    for (const auto* inst : instances)
        for (const auto& c : inst->cons) {
            int tu = red.type_of(inst->vars[c.u].labels);
            int tv = red.type_of(inst->vars[c.v].labels);
            if (red.symbol_of(tu, tv, c.pi) < 0) {
                red.sig.add_symbol("E" + std::to_string(red.symbol_maps.size()), {tu, tv});
                red.symbol_maps.push_back(c.pi);
            }
        }
    return red;
}

Structure lc_as_structure(const LabelCoverInstance& s, const LabelCoverReduct& red) {
    Structure out;
    out.sig = red.sig;
    out.domains.resize(red.sig.types.size());
    out.relations.resize(red.sig.symbols.size());
    std::vector<int> type_of_var(s.vars.size()), index_of_var(s.vars.size());
    for (int v = 0; v < (int)s.vars.size(); ++v) {
        int t = red.type_of(s.vars[v].labels);
        if (t < 0) throw ValidationError("variable type missing from the reduct");
        type_of_var[v] = t;
        index_of_var[v] = (int)out.domains[t].size();
        out.domains[t].push_back(s.vars[v].name);
    }
    for (const auto& c : s.cons) {
        int sym = red.symbol_of(type_of_var[c.u], type_of_var[c.v], c.pi);
        if (sym < 0) throw ValidationError("constraint map missing from the reduct");
        out.relations[sym].push_back({index_of_var[c.u], index_of_var[c.v]});
    }
    canonicalize_relations(out);
    return out;
}

Structure lc_template_structure(const LabelCoverReduct& red) {
    Structure out;
    out.sig = red.sig;
    out.domains = red.type_labels;
    out.relations.resize(red.sig.symbols.size());
    for (int s = 0; s < (int)red.symbol_maps.size(); ++s)
        for (int i = 0; i < (int)red.symbol_maps[s].size(); ++i)
            out.relations[s].push_back({i, red.symbol_maps[s][i]});
    canonicalize_relations(out);
    return out;
}

} // namespace cspforge
