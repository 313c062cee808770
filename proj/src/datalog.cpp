#include "cspforge/datalog.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace cspforge {

namespace {

struct TupleHash {
    size_t operator()(const Tuple& t) const {
        size_t h = 1469598103934665603ull;
        for (int v : t) {
            h ^= (size_t)(uint32_t)v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace

int DatalogProgram::idb_index(const std::string& name) const {
    for (int i = 0; i < (int)idbs.size(); ++i)
        if (idbs[i].name == name) return i;
    return -1;
}

int DatalogProgram::add_idb(std::string name, std::vector<int> arity) {
    if (idb_index(name) >= 0 || input.symbol_index(name) >= 0)
        throw ValidationError("duplicate predicate: " + name);
    idbs.push_back({std::move(name), std::move(arity)});
    return (int)idbs.size() - 1;
}

void validate_program(const DatalogProgram& p) {
    if (p.output < 0 || p.output >= (int)p.idbs.size())
        throw ValidationError("program output must be a declared IDB");
    for (const auto& rule : p.rules) {
        auto check_atom = [&](const Atom& atom, bool is_head) {
            if (atom.pred == Atom::kEquality) {
                if (is_head) throw ValidationError("equality may not appear in a rule head");
                if (atom.vars.size() != 2)
                    throw ValidationError("equality atom needs exactly two variables");
                if (rule.var_types[atom.vars[0]] != rule.var_types[atom.vars[1]])
                    throw ValidationError("equality relates variables of distinct types");
                return;
            }
            if (is_head && !p.is_idb(atom.pred))
                throw ValidationError("rule head must be an IDB");
            const auto& ar = p.pred_arity(atom.pred);
            if (ar.size() != atom.vars.size())
                throw ValidationError("atom arity mismatch for " + p.pred_name(atom.pred));
            for (size_t i = 0; i < ar.size(); ++i) {
                int v = atom.vars[i];
                if (v < 0 || v >= (int)rule.var_types.size())
                    throw ValidationError("atom uses undeclared variable");
                if (rule.var_types[v] != ar[i])
                    throw ValidationError("ill-typed variable in atom " + p.pred_name(atom.pred));
            }
        };
        check_atom(rule.head, true);
        for (const auto& atom : rule.body) check_atom(atom, false);
        std::vector<char> in_body(rule.var_types.size(), 0);
        for (const auto& atom : rule.body)
            for (int v : atom.vars) in_body[v] = 1;
        for (int v : rule.head.vars)
            if (!in_body[v]) throw ValidationError("range-unrestricted rule: head variable not in body");
    }
}

int width(const DatalogProgram& p) {
    int w = 0;
    for (const auto& rule : p.rules) w = std::max(w, (int)rule.var_types.size());
    return w;
}

namespace {

using TupleSet = std::unordered_set<Tuple, TupleHash>;

struct Evaluator {
    const DatalogProgram& p;
    const Structure& x;
    std::vector<std::vector<Tuple>> full;     // per pred
    std::vector<TupleSet> member;             // per pred
    // per-round join index: (pred, bound-position mask) -> key -> tuple ids
    std::map<std::pair<int, uint64_t>, std::unordered_map<Tuple, std::vector<int>, TupleHash>> index;

    Evaluator(const DatalogProgram& prog, const Structure& inst) : p(prog), x(inst) {
        full.resize(p.pred_count());
        member.resize(p.pred_count());
        for (int s = 0; s < p.edb_count(); ++s) {
            full[s] = x.relations[s];
            member[s] = TupleSet(full[s].begin(), full[s].end());
        }
    }

    const std::vector<int>& lookup(int pred, uint64_t mask, const Tuple& key) {
        static const std::vector<int> empty;
        auto it = index.find({pred, mask});
        if (it == index.end()) {
            auto& m = index[{pred, mask}];
            for (int id = 0; id < (int)full[pred].size(); ++id) {
                Tuple k;
                for (size_t i = 0; i < full[pred][id].size(); ++i)
                    if (mask & (1ull << i)) k.push_back(full[pred][id][i]);
                m[k].push_back(id);
            }
            it = index.find({pred, mask});
        }
        auto jt = it->second.find(key);
        return jt == it->second.end() ? empty : jt->second;
    }

    // joins the rule body, with atom `delta_at` (if >= 0) restricted to the
    // tuples in `delta`; calls emit for each satisfying head instantiation
    template <typename Emit>
    void fire(const Rule& rule, int delta_at, const std::vector<Tuple>* delta, Emit emit) {
        std::vector<int> binding(rule.var_types.size(), -1);
        std::vector<char> done(rule.body.size(), 0);
        size_t remaining = rule.body.size();

        auto bound_count = [&](const Atom& a) {
            int n = 0;
            for (int v : a.vars) n += binding[v] >= 0;
            return n;
        };

        std::function<void()> step = [&]() {
            if (remaining == 0) {
                Tuple head(rule.head.vars.size());
                for (size_t i = 0; i < head.size(); ++i) head[i] = binding[rule.head.vars[i]];
                emit(head);
                return;
            }
            // pick the most-bound remaining atom; delta atom first, loose
            // equality atoms last
            int best = -1;
            long best_score = std::numeric_limits<long>::min();
            for (int i = 0; i < (int)rule.body.size(); ++i) {
                if (done[i]) continue;
                const Atom& a = rule.body[i];
                long score;
                int nb = bound_count(a);
                if (i == delta_at && remaining == rule.body.size())
                    score = 1 << 20;
                else if (a.pred == Atom::kEquality)
                    score = nb >= 1 ? (1 << 16) : -(1 << 16);
                else
                    score = nb * 256 - (long)a.vars.size();
                if (score > best_score) { best_score = score; best = i; }
            }
            const Atom& a = rule.body[best];
            done[best] = 1;
            --remaining;
            auto saved = binding;

            auto try_tuple = [&](const Tuple& t) {
                bool ok = true;
                for (size_t i = 0; i < a.vars.size() && ok; ++i) {
                    int v = a.vars[i];
                    if (binding[v] >= 0)
                        ok = binding[v] == t[i];
                    else
                        binding[v] = t[i];
                }
                if (ok) step();
                binding = saved;
            };

            if (a.pred == Atom::kEquality) {
                int v0 = a.vars[0], v1 = a.vars[1];
                if (binding[v0] >= 0 && binding[v1] >= 0) {
                    if (binding[v0] == binding[v1]) step();
                } else if (binding[v0] >= 0 || binding[v1] >= 0) {
                    int val = binding[v0] >= 0 ? binding[v0] : binding[v1];
                    binding[v0] = binding[v1] = val;
                    step();
                    binding = saved;
                } else {
                    int dom = x.domain_size(rule.var_types[v0]);
                    for (int val = 0; val < dom; ++val) {
                        binding[v0] = binding[v1] = val;
                        step();
                    }
                    binding = saved;
                }
            } else if (best == delta_at) {
                for (const auto& t : *delta) try_tuple(t);
            } else {
                uint64_t mask = 0;
                Tuple key;
                for (size_t i = 0; i < a.vars.size(); ++i)
                    if (binding[a.vars[i]] >= 0) {
                        mask |= 1ull << i;
                        key.push_back(binding[a.vars[i]]);
                    }
                if (mask == 0 || a.vars.size() > 64) {
                    for (const auto& t : full[a.pred]) try_tuple(t);
                } else {
                    for (int id : lookup(a.pred, mask, key)) try_tuple(full[a.pred][id]);
                }
            }
            done[best] = 0;
            ++remaining;
        };
        step();
    }

    void run() {
        std::vector<std::vector<Tuple>> delta(p.pred_count());
        // round 0: IDBs are empty, so only rules without IDB body atoms fire
        for (const auto& rule : p.rules) {
            bool has_idb = false;
            for (const auto& a : rule.body) has_idb = has_idb || (a.pred != Atom::kEquality && p.is_idb(a.pred));
            if (has_idb) continue;
            fire(rule, -1, nullptr, [&](const Tuple& head) {
                if (member[rule.head.pred].insert(head).second) delta[rule.head.pred].push_back(head);
            });
        }
        for (int pr = 0; pr < p.pred_count(); ++pr)
            for (auto& t : delta[pr]) full[pr].push_back(t);

        while (true) {
            index.clear();
            std::vector<std::vector<Tuple>> next(p.pred_count());
            bool any = false;
            for (const auto& rule : p.rules) {
                for (int i = 0; i < (int)rule.body.size(); ++i) {
                    const Atom& a = rule.body[i];
                    if (a.pred == Atom::kEquality || !p.is_idb(a.pred)) continue;
                    if (delta[a.pred].empty()) continue;
                    fire(rule, i, &delta[a.pred], [&](const Tuple& head) {
                        if (member[rule.head.pred].insert(head).second) {
                            next[rule.head.pred].push_back(head);
                            any = true;
                        }
                    });
                }
            }
            for (int pr = 0; pr < p.pred_count(); ++pr)
                for (auto& t : next[pr]) full[pr].push_back(t);
            delta = std::move(next);
            if (!any) break;
        }
    }
};

} // namespace

std::vector<Tuple> evaluate_program(const DatalogProgram& p, const Structure& x) {
    if (p.input != x.sig)
        throw SignatureMismatch("program input signature does not match the structure");
    validate_program(p);
    Evaluator ev(p, x);
    ev.run();
    std::vector<Tuple> out = ev.full[p.edb_count() + p.output];
    std::sort(out.begin(), out.end());
    return out;
}

void validate_interpretation(const DatalogInterpretation& phi) {
    if ((int)phi.type_programs.size() != (int)phi.output.types.size())
        throw ValidationError("interpretation needs one program per output type");
    if ((int)phi.symbol_programs.size() != (int)phi.output.symbols.size())
        throw ValidationError("interpretation needs one program per output symbol");
    for (const auto& p : phi.type_programs) {
        if (p.input != phi.input) throw ValidationError("type program over wrong input signature");
        validate_program(p);
    }
    for (int s = 0; s < (int)phi.output.symbols.size(); ++s) {
        const auto& p = phi.symbol_programs[s];
        if (p.input != phi.input) throw ValidationError("symbol program over wrong input signature");
        validate_program(p);
        std::vector<int> expected;
        for (int t : phi.output.symbols[s].arity) {
            const auto& part = phi.type_programs[t].output_arity();
            expected.insert(expected.end(), part.begin(), part.end());
        }
        if (p.output_arity() != expected)
            throw ValidationError("symbol program arity is not the concatenation of its type arities");
    }
}

int width(const DatalogInterpretation& phi) {
    int w = 0;
    for (const auto& p : phi.type_programs) w = std::max(w, width(p));
    for (const auto& p : phi.symbol_programs) w = std::max(w, width(p));
    return w;
}

Structure apply_interpretation(const DatalogInterpretation& phi, const Structure& x) {
    validate_interpretation(phi);
    if (phi.input != x.sig)
        throw SignatureMismatch("interpretation input signature does not match the structure");
    Structure out;
    out.sig = phi.output;
    out.domains.resize(phi.output.types.size());
    out.relations.resize(phi.output.symbols.size());

    std::vector<std::map<Tuple, int>> dom_index(phi.output.types.size());
    for (int t = 0; t < (int)phi.output.types.size(); ++t) {
        auto tuples = evaluate_program(phi.type_programs[t], x);
        const auto& ar = phi.type_programs[t].output_arity();
        for (const auto& tup : tuples) {
            dom_index[t][tup] = (int)out.domains[t].size();
            if (tup.size() == 1) {
                out.domains[t].push_back(x.element_name(ar[0], tup[0]));
            } else {
                std::vector<std::string> parts;
                for (size_t i = 0; i < tup.size(); ++i)
                    parts.push_back(x.element_name(ar[i], tup[i]));
                out.domains[t].push_back(tuple_name(parts));
            }
        }
    }
    for (int s = 0; s < (int)phi.output.symbols.size(); ++s) {
        auto flat = evaluate_program(phi.symbol_programs[s], x);
        const auto& ar = phi.output.symbols[s].arity;
        for (const auto& tup : flat) {
            Tuple grouped;
            size_t off = 0;
            bool ok = true;
            for (int t : ar) {
                size_t len = phi.type_programs[t].output_arity().size();
                Tuple part(tup.begin() + off, tup.begin() + off + len);
                off += len;
                auto it = dom_index[t].find(part);
                if (it == dom_index[t].end()) { ok = false; break; }
                grouped.push_back(it->second);
            }
            if (ok) out.relations[s].push_back(grouped);
        }
    }
    canonicalize_relations(out);
    return out;
}

void validate_union_gadget(const UnionGadget& u) {
    if ((int)u.type_map.size() != (int)u.input.types.size() ||
        (int)u.symbol_map.size() != (int)u.input.symbols.size())
        throw ValidationError("union gadget maps do not cover the input signature");
    for (int s = 0; s < (int)u.input.symbols.size(); ++s) {
        const auto& in_ar = u.input.symbols[s].arity;
        const auto& out_ar = u.output.symbols[u.symbol_map[s]].arity;
        if (in_ar.size() != out_ar.size())
            throw ValidationError("union gadget symbol map changes arity length");
        for (size_t i = 0; i < in_ar.size(); ++i)
            if (u.type_map[in_ar[i]] != out_ar[i])
                throw ValidationError("union gadget violates ar_{r(R)} = d o ar_R");
    }
}

Structure apply_union_gadget(const UnionGadget& u, const Structure& a) {
    validate_union_gadget(u);
    if (u.input != a.sig)
        throw SignatureMismatch("union gadget input signature does not match the structure");
    Structure out;
    out.sig = u.output;
    out.domains.resize(u.output.types.size());
    out.relations.resize(u.output.symbols.size());
    std::vector<int> offset(u.input.types.size());
    for (int t = 0; t < (int)u.input.types.size(); ++t) {
        int ot = u.type_map[t];
        offset[t] = (int)out.domains[ot].size();
        for (const auto& name : a.domains[t])
            out.domains[ot].push_back(u.input.types[t] + ":" + name);
    }
    for (int s = 0; s < (int)u.input.symbols.size(); ++s) {
        const auto& ar = u.input.symbols[s].arity;
        for (const auto& tup : a.relations[s]) {
            Tuple img(tup.size());
            for (size_t i = 0; i < tup.size(); ++i) img[i] = tup[i] + offset[ar[i]];
            out.relations[u.symbol_map[s]].push_back(img);
        }
    }
    canonicalize_relations(out);
    return out;
}

Structure apply_reduction(const DDatalogReduction& r, const Structure& x) {
    return apply_union_gadget(r.un, apply_interpretation(r.interp, x));
}

DatalogInterpretation identity_interpretation(const Signature& sig) {
    DatalogInterpretation phi;
    phi.input = sig;
    phi.output = sig;
    for (int t = 0; t < (int)sig.types.size(); ++t) {
        DatalogProgram p;
        p.input = sig;
        p.add_idb("D_" + sig.types[t], {t});
        Rule r;
        r.var_types = {t};
        r.head = {p.edb_count() + 0, {0}};
        r.body = {{Atom::kEquality, {0, 0}}};
        p.rules.push_back(r);
        p.output = 0;
        phi.type_programs.push_back(std::move(p));
    }
    for (int s = 0; s < (int)sig.symbols.size(); ++s) {
        DatalogProgram p;
        p.input = sig;
        const auto& ar = sig.symbols[s].arity;
        p.add_idb("O_" + sig.symbols[s].name, ar);
        Rule r;
        r.var_types = ar;
        std::vector<int> vars(ar.size());
        for (size_t i = 0; i < ar.size(); ++i) vars[i] = (int)i;
        r.head = {p.edb_count() + 0, vars};
        r.body = {{s, vars}};
        p.rules.push_back(r);
        p.output = 0;
        phi.symbol_programs.push_back(std::move(p));
    }
    return phi;
}

UnionGadget identity_union_gadget(const Signature& sig) {
    UnionGadget u;
    u.input = sig;
    u.output = sig;
    u.type_map.resize(sig.types.size());
    u.symbol_map.resize(sig.symbols.size());
    for (int t = 0; t < (int)sig.types.size(); ++t) u.type_map[t] = t;
    for (int s = 0; s < (int)sig.symbols.size(); ++s) u.symbol_map[s] = s;
    return u;
}

UnionGadget compose_union_gadgets(const UnionGadget& u, const UnionGadget& v) {
    if (u.output != v.input)
        throw SignatureMismatch("union gadgets do not compose: signature mismatch");
    UnionGadget w;
    w.input = u.input;
    w.output = v.output;
    for (int t : u.type_map) w.type_map.push_back(v.type_map[t]);
    for (int s : u.symbol_map) w.symbol_map.push_back(v.symbol_map[s]);
    validate_union_gadget(w);
    return w;
}

namespace {

std::string fresh_name(std::string base, std::set<std::string>& used) {
    std::string name = base;
    int n = 2;
    while (used.count(name)) name = base + "_" + std::to_string(n++);
    used.insert(name);
    return name;
}

} // namespace

DatalogInterpretation compose_interpretations(const DatalogInterpretation& phi,
                                              const DatalogInterpretation& chi) {
    validate_interpretation(phi);
    validate_interpretation(chi);
    if (phi.output != chi.input)
        throw SignatureMismatch("interpretations do not compose: signature mismatch");

    // block of input-type positions every Sigma-type expands into
    std::vector<std::vector<int>> block(phi.output.types.size());
    for (int t = 0; t < (int)phi.output.types.size(); ++t)
        block[t] = phi.type_programs[t].output_arity();

    auto compose_one = [&](const DatalogProgram& cj) {
        DatalogProgram out;
        out.input = phi.input;
        std::set<std::string> used;
        for (const auto& sym : phi.input.symbols) used.insert(sym.name);

        // import every phi component, IDBs renamed per component
        std::vector<int> type_out(phi.output.types.size());
        std::vector<int> sym_out(phi.output.symbols.size());
        auto import = [&](const DatalogProgram& comp, const std::string& prefix) {
            std::vector<int> remap(comp.idbs.size());
            for (int j = 0; j < (int)comp.idbs.size(); ++j)
                remap[j] = out.add_idb(fresh_name(prefix + "__" + comp.idbs[j].name, used),
                                       comp.idbs[j].arity);
            for (const auto& rule : comp.rules) {
                Rule r = rule;
                auto fix = [&](Atom& a) {
                    if (a.pred == Atom::kEquality) return;
                    if (comp.is_idb(a.pred))
                        a.pred = out.edb_count() + remap[a.pred - comp.edb_count()];
                };
                fix(r.head);
                for (auto& a : r.body) fix(a);
                out.rules.push_back(std::move(r));
            }
            return remap[comp.output];
        };
        for (int t = 0; t < (int)phi.output.types.size(); ++t)
            type_out[t] = import(phi.type_programs[t], "d_" + phi.output.types[t]);
        for (int s = 0; s < (int)phi.output.symbols.size(); ++s)
            sym_out[s] = import(phi.symbol_programs[s], "r_" + phi.output.symbols[s].name);

        // translated IDBs of the outer program: flattened arities
        std::vector<int> chi_idb(cj.idbs.size());
        for (int j = 0; j < (int)cj.idbs.size(); ++j) {
            std::vector<int> flat;
            for (int t : cj.idbs[j].arity)
                flat.insert(flat.end(), block[t].begin(), block[t].end());
            chi_idb[j] = out.add_idb(fresh_name("q__" + cj.idbs[j].name, used), std::move(flat));
        }

        for (const auto& rule : cj.rules) {
            Rule r;
            // each outer variable of Sigma-type t becomes a block of fresh
            // variables typed by the arity of phi_t
            std::vector<std::vector<int>> vb(rule.var_types.size());
            for (size_t v = 0; v < rule.var_types.size(); ++v) {
                for (int ty : block[rule.var_types[v]]) {
                    vb[v].push_back((int)r.var_types.size());
                    r.var_types.push_back(ty);
                }
            }
            auto translate = [&](const Atom& a) {
                Atom na;
                if (cj.is_idb(a.pred))
                    na.pred = out.edb_count() + chi_idb[a.pred - cj.edb_count()];
                else
                    na.pred = out.edb_count() + sym_out[a.pred];
                for (int v : a.vars) na.vars.insert(na.vars.end(), vb[v].begin(), vb[v].end());
                return na;
            };
            r.head = translate(rule.head);
            for (const auto& a : rule.body) {
                if (a.pred == Atom::kEquality) {
                    for (size_t i = 0; i < vb[a.vars[0]].size(); ++i)
                        r.body.push_back({Atom::kEquality, {vb[a.vars[0]][i], vb[a.vars[1]][i]}});
                } else {
                    r.body.push_back(translate(a));
                }
            }
            // domain guards keep each variable ranging over phi's domains
            for (size_t v = 0; v < rule.var_types.size(); ++v)
                r.body.push_back({out.edb_count() + type_out[rule.var_types[v]], vb[v]});
            out.rules.push_back(std::move(r));
        }
        out.output = chi_idb[cj.output];
        return out;
    };

    DatalogInterpretation psi;
    psi.input = phi.input;
    psi.output = chi.output;
    for (const auto& p : chi.type_programs) psi.type_programs.push_back(compose_one(p));
    for (const auto& p : chi.symbol_programs) psi.symbol_programs.push_back(compose_one(p));
    validate_interpretation(psi);
    return psi;
}

std::pair<DatalogInterpretation, UnionGadget>
swap_union_interpretation(const UnionGadget& u, const DatalogInterpretation& phi) {
    validate_union_gadget(u);
    validate_interpretation(phi);
    if (u.output != phi.input)
        throw SignatureMismatch("union gadget and interpretation do not compose");

    const Signature& pi = u.input;     // Pi
    const Signature& delta = u.output; // Delta

    std::vector<std::vector<int>> preimage(delta.types.size());
    for (int t = 0; t < (int)pi.types.size(); ++t) preimage[u.type_map[t]].push_back(t);

    // all Pi-type tuples q with d o q equal to the given Delta-type tuple
    auto expansions = [&](const std::vector<int>& dar) {
        std::vector<std::vector<int>> result;
        std::vector<int> cur(dar.size());
        std::function<void(size_t)> rec = [&](size_t i) {
            if (i == dar.size()) { result.push_back(cur); return; }
            for (int t : preimage[dar[i]]) { cur[i] = t; rec(i + 1); }
        };
        rec(0);
        return result;
    };

    auto tuple_tag = [&](const std::vector<int>& q) {
        std::string tag;
        for (int t : q) tag += "_" + pi.types[t];
        return tag;
    };

    Signature sigma2;
    // (sigma type, q) -> new type index
    std::map<std::pair<int, std::vector<int>>, int> type_of;
    std::vector<std::pair<int, std::vector<int>>> type_list;
    for (int s = 0; s < (int)phi.output.types.size(); ++s)
        for (auto& q : expansions(phi.type_programs[s].output_arity())) {
            type_of[{s, q}] = sigma2.add_type(phi.output.types[s] + tuple_tag(q));
            type_list.push_back({s, q});
        }
    std::map<std::pair<int, std::vector<int>>, int> sym_of;
    std::vector<std::pair<int, std::vector<int>>> sym_list;
    for (int s = 0; s < (int)phi.output.symbols.size(); ++s)
        for (auto& q : expansions(phi.symbol_programs[s].output_arity())) {
            // split q along the argument blocks to type the new symbol
            std::vector<int> ar;
            size_t off = 0;
            for (int t : phi.output.symbols[s].arity) {
                size_t len = phi.type_programs[t].output_arity().size();
                std::vector<int> part(q.begin() + off, q.begin() + off + len);
                off += len;
                ar.push_back(type_of.at({t, part}));
            }
            sym_of[{s, q}] = sigma2.add_symbol(phi.output.symbols[s].name + tuple_tag(q), ar);
            sym_list.push_back({s, q});
        }

    // transforms one component program of phi into its (output, q) copy
    auto transform = [&](const DatalogProgram& comp, const std::vector<int>& out_q) {
        DatalogProgram np;
        np.input = pi;
        std::set<std::string> used;
        for (const auto& sym : pi.symbols) used.insert(sym.name);

        // a copy P^t for every predicate of the component (Delta-EDBs
        // included) and every Pi-typing t of its arity
        std::map<std::pair<int, std::vector<int>>, int> copy_of;
        for (int pr = 0; pr < comp.pred_count(); ++pr)
            for (auto& t : expansions(comp.pred_arity(pr)))
                copy_of[{pr, t}] = np.add_idb(fresh_name(comp.pred_name(pr) + tuple_tag(t), used), t);

        for (const auto& rule : comp.rules) {
            // one copy per Pi-typing of the rule's variables
            std::vector<std::vector<int>> choices(rule.var_types.size());
            for (size_t v = 0; v < rule.var_types.size(); ++v)
                choices[v] = preimage[rule.var_types[v]];
            std::vector<int> assign(rule.var_types.size());
            std::function<void(size_t)> rec = [&](size_t v) {
                if (v == rule.var_types.size()) {
                    Rule r;
                    r.var_types = assign;
                    bool ok = true;
                    auto retype = [&](const Atom& a) {
                        Atom na;
                        if (a.pred == Atom::kEquality) {
                            if (assign[a.vars[0]] != assign[a.vars[1]]) ok = false;
                            return Atom{Atom::kEquality, a.vars};
                        }
                        std::vector<int> t;
                        for (int var : a.vars) t.push_back(assign[var]);
                        na.pred = np.edb_count() + copy_of.at({a.pred, t});
                        na.vars = a.vars;
                        return na;
                    };
                    r.head = retype(rule.head);
                    for (const auto& a : rule.body) {
                        Atom na = retype(a);
                        if (!ok) return;
                        r.body.push_back(na);
                    }
                    if (ok) np.rules.push_back(std::move(r));
                    return;
                }
                for (int t : choices[v]) { assign[v] = t; rec(v + 1); }
            };
            rec(0);
        }

        // Pi relations feed the copies of the Delta symbols they merge into
        for (int rsym = 0; rsym < (int)pi.symbols.size(); ++rsym) {
            int dsym = u.symbol_map[rsym];
            const auto& ar = pi.symbols[rsym].arity;
            Rule r;
            r.var_types = ar;
            std::vector<int> vars(ar.size());
            for (size_t i = 0; i < ar.size(); ++i) vars[i] = (int)i;
            r.head = {np.edb_count() + copy_of.at({dsym, ar}), vars};
            r.body = {{rsym, vars}};
            np.rules.push_back(std::move(r));
        }
        np.output = copy_of.at({comp.edb_count() + comp.output, out_q});
        return np;
    };

    DatalogInterpretation phi2;
    phi2.input = pi;
    phi2.output = sigma2;
    for (auto& [s, q] : type_list) phi2.type_programs.push_back(transform(phi.type_programs[s], q));
    for (auto& [s, q] : sym_list) phi2.symbol_programs.push_back(transform(phi.symbol_programs[s], q));
    validate_interpretation(phi2);

    UnionGadget u2;
    u2.input = sigma2;
    u2.output = phi.output;
    for (auto& [s, q] : type_list) u2.type_map.push_back(s);
    for (auto& [s, q] : sym_list) u2.symbol_map.push_back(s);
    validate_union_gadget(u2);
    return {std::move(phi2), std::move(u2)};
}

DDatalogReduction compose_ddatalog(const DDatalogReduction& r1, const DDatalogReduction& r2) {
    auto [phi2, u2] = swap_union_interpretation(r1.un, r2.interp);
    DDatalogReduction out;
    out.interp = compose_interpretations(r1.interp, phi2);
    out.un = compose_union_gadgets(u2, r2.un);
    return out;
}

Signature digraph_signature() {
    Signature sig;
    int v = sig.add_type("v");
    sig.add_symbol("E", {v, v});
    return sig;
}

DatalogProgram two_colouring_program() {
    DatalogProgram p;
    p.input = digraph_signature();
    int P = p.add_idb("P", {0, 0});
    int C = p.add_idb("C", {});
    int e = 0; // EDB E
    int pi = p.edb_count() + P, ci = p.edb_count() + C;
    {
        Rule r;
        r.var_types = {0, 0};
        r.head = {pi, {0, 1}};
        r.body = {{e, {0, 1}}};
        p.rules.push_back(r);
    }
    {
        Rule r;
        r.var_types = {0, 0};
        r.head = {pi, {0, 1}};
        r.body = {{e, {1, 0}}};
        p.rules.push_back(r);
    }
    {
        Rule r;
        r.var_types = {0, 0, 0, 0};
        r.head = {pi, {0, 3}};
        r.body = {{pi, {0, 1}}, {pi, {1, 2}}, {pi, {2, 3}}};
        p.rules.push_back(r);
    }
    {
        Rule r;
        r.var_types = {0};
        r.head = {ci, {}};
        r.body = {{pi, {0, 0}}};
        p.rules.push_back(r);
    }
    p.output = C;
    validate_program(p);
    return p;
}

DatalogInterpretation line_digraph_interpretation() {
    Signature in = digraph_signature();
    DatalogInterpretation phi;
    phi.input = in;
    phi.output = digraph_signature();
    {
        DatalogProgram p;
        p.input = in;
        p.add_idb("V'", {0, 0});
        Rule r;
        r.var_types = {0, 0};
        r.head = {p.edb_count(), {0, 1}};
        r.body = {{0, {0, 1}}};
        p.rules.push_back(r);
        p.output = 0;
        phi.type_programs.push_back(std::move(p));
    }
    {
        DatalogProgram p;
        p.input = in;
        p.add_idb("E'", {0, 0, 0, 0});
        Rule r;
        r.var_types = {0, 0, 0};
        r.head = {p.edb_count(), {0, 1, 1, 2}};
        r.body = {{0, {0, 1}}, {0, {1, 2}}};
        p.rules.push_back(r);
        p.output = 0;
        phi.symbol_programs.push_back(std::move(p));
    }
    validate_interpretation(phi);
    return phi;
}

} // namespace cspforge
