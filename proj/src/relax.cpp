#include "cspforge/relax.hpp"

#include "cspforge/gadgets.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace cspforge {

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (isspace((unsigned char)c) || c == '*' || c == '+' || c == '=') ? '_' : c;
    return out;
}

int add_var(LinearSystem& l, std::string name, bool nonneg, bool ub1) {
    name = sanitize(name);
    for (const auto& v : l.vars)
        if (v.name == name) {
            name += "#" + std::to_string(l.vars.size());
            break;
        }
    l.vars.push_back({name, nonneg, ub1});
    return (int)l.vars.size() - 1;
}

} // namespace

bool lp_witness_ok(const LinearSystem& l, const std::vector<Rational>& w) {
    if (w.size() != l.vars.size()) return false;
    for (size_t i = 0; i < l.vars.size(); ++i) {
        if (l.vars[i].nonneg && w[i] < 0) return false;
        if (l.vars[i].ub1 && w[i] > 1) return false;
    }
    for (const auto& row : l.rows) {
        Rational sum = 0;
        for (const auto& [v, c] : row.terms) sum += c * w[v];
        if (sum != row.rhs) return false;
    }
    return true;
}

std::optional<std::vector<Rational>> lp_feasible(const LinearSystem& l) {
    // standard form: free variables split, [0,1] bounds become slack rows
    int ncols = 0;
    std::vector<int> pos_col(l.vars.size()), neg_col(l.vars.size(), -1);
    for (size_t i = 0; i < l.vars.size(); ++i) {
        pos_col[i] = ncols++;
        if (!l.vars[i].nonneg && !l.vars[i].ub1) neg_col[i] = ncols++;
    }
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    auto add_row = [&](const std::vector<std::pair<int, Rational>>& terms, const Rational& b) {
        std::vector<Rational> r(ncols, Rational(0));
        for (auto& [c, v] : terms) r[c] += v;
        rows.push_back(std::move(r));
        rhs.push_back(b);
    };
    for (const auto& row : l.rows) {
        std::vector<std::pair<int, Rational>> terms;
        for (const auto& [v, c] : row.terms) {
            terms.push_back({pos_col[v], c});
            if (neg_col[v] >= 0) terms.push_back({neg_col[v], -c});
        }
        add_row(terms, row.rhs);
    }
    // x <= 1 slack rows appended after sizing ncols
    std::vector<std::pair<int, int>> ub_slack;
    for (size_t i = 0; i < l.vars.size(); ++i)
        if (l.vars[i].ub1) ub_slack.push_back({(int)i, ncols++});
    for (auto& r : rows) r.resize(ncols, Rational(0));
    for (auto& [v, s] : ub_slack) {
        std::vector<Rational> r(ncols, Rational(0));
        r[pos_col[v]] = 1;
        r[s] = 1;
        rows.push_back(std::move(r));
        rhs.push_back(1);
    }

    int m = (int)rows.size();
    int total = ncols + m; // artificial per row
    for (int i = 0; i < m; ++i)
        if (rhs[i] < 0) {
            for (auto& c : rows[i]) c = -c;
            rhs[i] = -rhs[i];
        }
    // tableau: m rows + objective; minimize sum of artificials
    std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(total + 1, Rational(0)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < ncols; ++j) t[i][j] = rows[i][j];
        t[i][ncols + i] = 1;
        t[i][total] = rhs[i];
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = ncols + i;
    // objective row: w + sum_j obj[j] x_j = obj_rhs with artificials priced out
    for (int j = 0; j <= total; ++j) {
        Rational s = 0;
        for (int i = 0; i < m; ++i) s += t[i][j];
        t[m][j] = (j < ncols) ? -s : Rational(0);
        if (j == total) t[m][j] = -s;
    }

    auto pivot = [&](int pr, int pc) {
        Rational inv = 1 / t[pr][pc];
        for (int j = 0; j <= total; ++j) t[pr][j] *= inv;
        for (int i = 0; i <= m; ++i) {
            if (i == pr || t[i][pc] == 0) continue;
            Rational f = t[i][pc];
            for (int j = 0; j <= total; ++j) t[i][j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    };

    while (true) {
        int pc = -1;
        for (int j = 0; j < total; ++j)
            if (t[m][j] < 0) { pc = j; break; } // Bland
        if (pc < 0) break;
        int pr = -1;
        for (int i = 0; i < m; ++i) {
            if (t[i][pc] <= 0) continue;
            if (pr < 0) { pr = i; continue; }
            Rational cur = t[i][total] / t[i][pc];
            Rational best = t[pr][total] / t[pr][pc];
            if (cur < best || (cur == best && basis[i] < basis[pr])) pr = i;
        }
        if (pr < 0) return std::nullopt; // unbounded phase-1 cannot happen
        pivot(pr, pc);
    }
    if (t[m][total] != 0) return std::nullopt; // leftover artificial mass

    std::vector<Rational> cols(ncols, Rational(0));
    for (int i = 0; i < m; ++i)
        if (basis[i] < ncols) cols[basis[i]] = t[i][total];
    std::vector<Rational> w(l.vars.size());
    for (size_t i = 0; i < l.vars.size(); ++i) {
        w[i] = cols[pos_col[i]];
        if (neg_col[i] >= 0) w[i] -= cols[neg_col[i]];
    }
    if (!lp_witness_ok(l, w)) throw Error("internal: simplex produced an invalid witness");
    return w;
}

std::string export_text(const LinearSystem& l) {
    std::ostringstream out;
    for (const auto& v : l.vars) {
        out << "var " << v.name;
        if (v.nonneg && v.ub1)
            out << " [0,1]";
        else if (v.nonneg)
            out << " >=0";
        else
            out << " free";
        out << "\n";
    }
    for (const auto& row : l.rows) {
        if (row.terms.empty()) out << "0*_";
        for (size_t i = 0; i < row.terms.size(); ++i) {
            if (i) out << " + ";
            out << to_string(row.terms[i].second) << "*" << l.vars[row.terms[i].first].name;
        }
        out << " = " << to_string(row.rhs) << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

// terms "c*name" joined by "+", then "= rhs"
template <typename Num, typename Lookup>
std::pair<std::vector<std::pair<int, Num>>, Num>
parse_row_tokens(const std::vector<std::string>& toks, Num (*parse_num)(const std::string&),
                 Lookup lookup) {
    std::vector<std::pair<int, Num>> terms;
    size_t i = 0;
    while (i < toks.size() && toks[i] != "=") {
        if (toks[i] == "+") {
            ++i;
            continue;
        }
        auto star = toks[i].find('*');
        if (star == std::string::npos) throw Error("bad term in system row: " + toks[i]);
        Num coeff = parse_num(toks[i].substr(0, star));
        std::string name = toks[i].substr(star + 1);
        ++i;
        if (name == "_") continue; // zero placeholder for empty rows
        int var = lookup(name);
        if (var < 0) throw Error("row references undeclared variable " + name);
        terms.push_back({var, coeff});
    }
    if (i + 1 >= toks.size() || toks[i] != "=") throw Error("system row lacks '= rhs'");
    return {std::move(terms), parse_num(toks[i + 1])};
}

} // namespace

LinearSystem parse_linear_system(const std::string& text) {
    LinearSystem l;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "var") {
            if (toks.size() < 2) throw Error("var line lacks a name");
            bool nonneg = false, ub1 = false;
            if (toks.size() > 2) {
                if (toks[2] == "[0,1]") nonneg = ub1 = true;
                else if (toks[2] == ">=0") nonneg = true;
                else if (toks[2] != "free") throw Error("bad var bound: " + toks[2]);
            }
            l.vars.push_back({toks[1], nonneg, ub1});
        } else {
            auto [terms, rhs] = parse_row_tokens<Rational>(toks, &parse_rational, [&](const std::string& n) {
                for (int v = 0; v < (int)l.vars.size(); ++v)
                    if (l.vars[v].name == n) return v;
                return -1;
            });
            l.rows.push_back({std::move(terms), std::move(rhs)});
        }
    }
    return l;
}

std::string export_text(const GroupSystem& s) {
    std::ostringstream out;
    out << "mod " << (s.modulus ? std::to_string(*s.modulus) : std::string("Z")) << "\n";
    for (const auto& v : s.vars) out << "var " << v << "\n";
    for (const auto& row : s.rows) {
        if (row.terms.empty()) out << "0*_";
        for (size_t i = 0; i < row.terms.size(); ++i) {
            if (i) out << " + ";
            out << to_string(row.terms[i].second) << "*" << s.vars[row.terms[i].first];
        }
        out << " = " << to_string(row.rhs) << "\n";
    }
    return out.str();
}

GroupSystem parse_group_system(const std::string& text) {
    GroupSystem s;
    std::istringstream in(text);
    std::string line;
    bool saw_mod = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "mod") {
            if (toks.size() < 2) throw Error("mod line lacks a value");
            if (toks[1] == "Z")
                s.modulus = std::nullopt;
            else
                s.modulus = (unsigned)std::stoul(toks[1]);
            saw_mod = true;
        } else if (toks[0] == "var") {
            if (toks.size() < 2) throw Error("var line lacks a name");
            s.vars.push_back(toks[1]);
        } else {
            auto [terms, rhs] = parse_row_tokens<Integer>(toks, &parse_integer, [&](const std::string& n) {
                for (int v = 0; v < (int)s.vars.size(); ++v)
                    if (s.vars[v] == n) return v;
                return -1;
            });
            s.rows.push_back({std::move(terms), std::move(rhs)});
        }
    }
    if (!saw_mod) throw Error("group system lacks a mod header");
    return s;
}

bool group_witness_ok(const GroupSystem& s, const std::vector<Integer>& w) {
    if (w.size() != s.vars.size()) return false;
    for (const auto& row : s.rows) {
        Integer sum = 0;
        for (const auto& [v, c] : row.terms) sum += c * w[v];
        Integer diff = sum - row.rhs;
        if (s.modulus) {
            if (diff % Integer(*s.modulus) != 0) return false;
        } else if (diff != 0) {
            return false;
        }
    }
    return true;
}

namespace {

// diagonalize via unimodular row/column operations (the Smith normal form
// working loop, minimal-absolute-value pivoting), tracking V and U b
std::optional<std::vector<Integer>> solve_over_z(std::vector<std::vector<Integer>> m,
                                                 std::vector<Integer> b) {
    int rows = (int)m.size();
    int cols = rows ? (int)m[0].size() : 0;
    std::vector<std::vector<Integer>> v(cols, std::vector<Integer>(cols, Integer(0)));
    for (int j = 0; j < cols; ++j) v[j][j] = 1;

    auto col_addmul = [&](int dst, int src, const Integer& q) {
        for (int i = 0; i < rows; ++i) m[i][dst] -= q * m[i][src];
        for (int i = 0; i < cols; ++i) v[i][dst] -= q * v[i][src];
    };
    auto col_swap = [&](int a2, int b2) {
        for (int i = 0; i < rows; ++i) std::swap(m[i][a2], m[i][b2]);
        for (int i = 0; i < cols; ++i) std::swap(v[i][a2], v[i][b2]);
    };
    auto row_addmul = [&](int dst, int src, const Integer& q) {
        for (int j = 0; j < cols; ++j) m[dst][j] -= q * m[src][j];
        b[dst] -= q * b[src];
    };
    auto row_swap = [&](int a2, int b2) {
        std::swap(m[a2], m[b2]);
        std::swap(b[a2], b[b2]);
    };

    int rank = std::min(rows, cols);
    for (int k = 0; k < rank; ++k) {
        while (true) {
            int pi = -1, pj = -1;
            for (int i = k; i < rows; ++i)
                for (int j = k; j < cols; ++j)
                    if (m[i][j] != 0 &&
                        (pi < 0 || abs(m[i][j]) < abs(m[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi < 0) break;
            if (pi != k) row_swap(pi, k);
            if (pj != k) col_swap(pj, k);
            bool clean = true;
            for (int i = k + 1; i < rows; ++i)
                if (m[i][k] != 0) {
                    Integer q = m[i][k] / m[k][k];
                    row_addmul(i, k, q);
                    if (m[i][k] != 0) clean = false;
                }
            for (int j = k + 1; j < cols; ++j)
                if (m[k][j] != 0) {
                    Integer q = m[k][j] / m[k][k];
                    col_addmul(j, k, q);
                    if (m[k][j] != 0) clean = false;
                }
            if (clean) break;
        }
    }
    // diagonal solve: y_k = c_k / d_k, zero rows need c = 0
    std::vector<Integer> y(cols, Integer(0));
    for (int k = 0; k < rank; ++k) {
        if (m[k][k] == 0) {
            if (b[k] != 0) return std::nullopt;
        } else {
            if (b[k] % m[k][k] != 0) return std::nullopt;
            y[k] = b[k] / m[k][k];
        }
    }
    for (int i = rank; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Integer> x(cols, Integer(0));
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < cols; ++j) x[i] += v[i][j] * y[j];
    return x;
}

} // namespace

std::optional<std::vector<Integer>> solve_group_system(const GroupSystem& s) {
    int n = (int)s.vars.size();
    int rows = (int)s.rows.size();
    int cols = n + (s.modulus ? rows : 0);
    std::vector<std::vector<Integer>> m(rows, std::vector<Integer>(cols, Integer(0)));
    std::vector<Integer> b(rows, Integer(0));
    for (int i = 0; i < rows; ++i) {
        for (const auto& [v, c] : s.rows[i].terms) m[i][v] += c;
        b[i] = s.rows[i].rhs;
        if (s.modulus) m[i][n + i] = Integer(*s.modulus);
    }
    auto sol = solve_over_z(std::move(m), std::move(b));
    if (!sol) return std::nullopt;
    std::vector<Integer> w(sol->begin(), sol->begin() + n);
    if (s.modulus) {
        Integer mod(*s.modulus);
        for (auto& x : w) {
            x %= mod;
            if (x < 0) x += mod;
        }
    }
    if (!group_witness_ok(s, w)) throw Error("internal: group solver produced an invalid witness");
    return w;
}

LinearSystem sherali_adams_system(const Structure& a, int k, const Structure& x) {
    if (a.sig != x.sig) throw SignatureMismatch("sherali_adams needs a shared signature");
    if (k < 1) throw ValidationError("sherali_adams needs k >= 1");
    auto subsets = subsets_upto(x, k);
    std::vector<std::vector<std::vector<int>>> homs;
    LinearSystem l;
    std::vector<std::vector<int>> var_of(subsets.size());
    for (size_t ki = 0; ki < subsets.size(); ++ki) {
        homs.push_back(partial_homomorphisms(a, x, subsets[ki]));
        for (const auto& f : homs[ki])
            var_of[ki].push_back(add_var(l,
                                         "x(" + subset_name(x, subsets[ki]) + ";" +
                                             partial_hom_name(a, x, subsets[ki], f) + ")",
                                         true, true));
    }
    // normalization per subset
    for (size_t ki = 0; ki < subsets.size(); ++ki) {
        LinearSystem::Row row;
        for (int v : var_of[ki]) row.terms.push_back({v, Rational(1)});
        row.rhs = 1;
        l.rows.push_back(std::move(row));
    }
    // marginal rows per proper subset pair and partial homomorphism below
    for (size_t ki = 0; ki < subsets.size(); ++ki)
        for (size_t li = 0; li < subsets.size(); ++li) {
            if (ki == li) continue;
            const auto& kset = subsets[ki];
            const auto& lset = subsets[li];
            if (lset.size() >= kset.size()) continue;
            bool subset = true;
            for (const auto& e : lset)
                subset = subset && std::find(kset.begin(), kset.end(), e) != kset.end();
            if (!subset) continue;
            for (size_t gi = 0; gi < homs[li].size(); ++gi) {
                LinearSystem::Row row;
                for (size_t fi = 0; fi < homs[ki].size(); ++fi) {
                    bool agrees = true;
                    for (size_t j = 0; j < lset.size() && agrees; ++j) {
                        auto it = std::find(kset.begin(), kset.end(), lset[j]);
                        agrees = homs[ki][fi][it - kset.begin()] == homs[li][gi][j];
                    }
                    if (agrees) row.terms.push_back({var_of[ki][fi], Rational(1)});
                }
                row.terms.push_back({var_of[li][gi], Rational(-1)});
                row.rhs = 0;
                l.rows.push_back(std::move(row));
            }
        }
    return l;
}

LinearSystem lambda_conv(const LabelCoverInstance& s, bool literal_zero_rhs) {
    validate_label_cover(s);
    LinearSystem l;
    std::vector<std::vector<int>> var_of(s.vars.size());
    for (size_t v = 0; v < s.vars.size(); ++v)
        for (const auto& label : s.vars[v].labels)
            var_of[v].push_back(add_var(l, "x(" + s.vars[v].name + ";" + label + ")", true, false));
    for (size_t v = 0; v < s.vars.size(); ++v) {
        LinearSystem::Row row;
        for (int var : var_of[v]) row.terms.push_back({var, Rational(1)});
        row.rhs = literal_zero_rhs ? 0 : 1;
        l.rows.push_back(std::move(row));
    }
    for (const auto& con : s.cons)
        for (int j = 0; j < (int)s.vars[con.v].labels.size(); ++j) {
            LinearSystem::Row row;
            for (int i = 0; i < (int)con.pi.size(); ++i)
                if (con.pi[i] == j) row.terms.push_back({var_of[con.u][i], Rational(1)});
            row.terms.push_back({var_of[con.v][j], Rational(-1)});
            row.rhs = 0;
            l.rows.push_back(std::move(row));
        }
    return l;
}

GroupSystem affine_system(const Structure& a, int k, const Structure& x,
                          std::optional<unsigned> modulus) {
    LabelCoverInstance pruned = enforce_arc_consistency(sigma_k(a, x, k));
    GroupSystem s;
    s.modulus = modulus;
    std::vector<std::vector<int>> var_of(pruned.vars.size());
    for (size_t v = 0; v < pruned.vars.size(); ++v)
        for (const auto& label : pruned.vars[v].labels) {
            var_of[v].push_back((int)s.vars.size());
            s.vars.push_back(sanitize("x(" + pruned.vars[v].name + ";" + label + ")"));
        }
    for (size_t v = 0; v < pruned.vars.size(); ++v) {
        GroupSystem::Row row;
        for (int var : var_of[v]) row.terms.push_back({var, Integer(1)});
        row.rhs = 1;
        s.rows.push_back(std::move(row));
    }
    for (const auto& con : pruned.cons)
        for (int j = 0; j < (int)pruned.vars[con.v].labels.size(); ++j) {
            GroupSystem::Row row;
            for (int i = 0; i < (int)con.pi.size(); ++i)
                if (con.pi[i] == j) row.terms.push_back({var_of[con.u][i], Integer(1)});
            row.terms.push_back({var_of[con.v][j], Integer(-1)});
            row.rhs = 0;
            s.rows.push_back(std::move(row));
        }
    return s;
}

Structure group_template(unsigned modulus, const std::vector<unsigned>& generators) {
    if (modulus == 0) throw ValidationError("group template needs a finite modulus");
    Signature sig;
    int g = sig.add_type("g");
    sig.add_symbol("Add", {g, g, g});
    for (unsigned b : generators) {
        if (b >= modulus) throw ValidationError("generator outside the group");
        sig.add_symbol("C" + std::to_string(b), {g});
    }
    std::vector<std::string> dom;
    for (unsigned i = 0; i < modulus; ++i) dom.push_back(std::to_string(i));
    std::vector<std::vector<Tuple>> rels(1 + generators.size());
    for (unsigned x = 0; x < modulus; ++x)
        for (unsigned y = 0; y < modulus; ++y)
            rels[0].push_back({(int)x, (int)y, (int)((x + y) % modulus)});
    for (size_t i = 0; i < generators.size(); ++i) rels[1 + i].push_back({(int)generators[i]});
    return make_structure(sig, {dom}, rels);
}

GroupSystem group_instance_system(const Structure& g_template, const Structure& x,
                                  std::optional<unsigned> modulus,
                                  const std::vector<unsigned>& generators) {
    if (g_template.sig != x.sig)
        throw SignatureMismatch("group instance over wrong signature");
    GroupSystem s;
    s.modulus = modulus;
    for (int i = 0; i < x.domain_size(0); ++i) s.vars.push_back(sanitize(x.element_name(0, i)));
    for (const auto& tup : x.relations[0]) {
        GroupSystem::Row row;
        row.terms = {{tup[0], Integer(1)}, {tup[1], Integer(1)}, {tup[2], Integer(-1)}};
        row.rhs = 0;
        s.rows.push_back(std::move(row));
    }
    for (size_t gi = 0; gi < generators.size(); ++gi)
        for (const auto& tup : x.relations[1 + gi]) {
            GroupSystem::Row row;
            row.terms = {{tup[0], Integer(1)}};
            row.rhs = Integer(generators[gi]);
            s.rows.push_back(std::move(row));
        }
    return s;
}

DatalogInterpretation tensor_interpretation(const Signature& sigma, int k) {
    if (sigma.types.size() != 1)
        throw ValidationError("tensor interpretation needs a single-sorted signature");
    if (k < 1) throw ValidationError("tensor interpretation needs k >= 1");
    Signature out;
    out.add_type(sigma.types[0]);
    auto fresh = [&](std::string name) {
        while (out.symbol_index(name) >= 0) name += "'";
        return name;
    };
    DatalogInterpretation tau;
    tau.input = sigma;
    {
        DatalogProgram p;
        p.input = sigma;
        std::vector<int> ar(k, 0);
        p.add_idb("D", ar);
        Rule r;
        r.var_types.assign(k, 0);
        std::vector<int> vars(k);
        std::iota(vars.begin(), vars.end(), 0);
        r.head = {p.edb_count(), vars};
        for (int i = 0; i < k; ++i) r.body.push_back({Atom::kEquality, {i, i}});
        p.rules.push_back(r);
        p.output = 0;
        tau.type_programs.push_back(std::move(p));
    }
    // e_m : [k] x [m]^k -> [m], (i, f) -> f(i); functions ordered
    // lexicographically, giving one k-block of head slots per function
    auto functions = [&](int m) {
        std::vector<std::vector<int>> fs;
        long long count = 1;
        for (int i = 0; i < k; ++i) count *= m;
        for (long long idx = 0; idx < count; ++idx) {
            std::vector<int> f(k);
            long long rem = idx;
            for (int i = k - 1; i >= 0; --i) {
                f[i] = (int)(rem % m);
                rem /= m;
            }
            fs.push_back(std::move(f));
        }
        return fs;
    };
    for (int s = 0; s < (int)sigma.symbols.size(); ++s) {
        int m = (int)sigma.symbols[s].arity.size();
        auto fs = functions(m); // empty for nullary symbols: R_k stays nullary
        out.add_symbol(fresh(sigma.symbols[s].name + "_" + std::to_string(k)),
                       std::vector<int>(fs.size(), 0));
        DatalogProgram p;
        p.input = sigma;
        p.add_idb("R", std::vector<int>(fs.size() * k, 0));
        Rule r;
        r.var_types.assign(m, 0);
        std::vector<int> head_vars;
        for (const auto& f : fs)
            for (int i = 0; i < k; ++i) head_vars.push_back(f[i]);
        r.head = {p.edb_count(), head_vars};
        std::vector<int> body_vars(m);
        std::iota(body_vars.begin(), body_vars.end(), 0);
        r.body.push_back({s, body_vars});
        p.rules.push_back(r);
        p.output = 0;
        tau.symbol_programs.push_back(std::move(p));
    }
    {
        auto fs = functions(k);
        out.add_symbol(fresh("T"), std::vector<int>(fs.size(), 0));
        DatalogProgram p;
        p.input = sigma;
        p.add_idb("T", std::vector<int>(fs.size() * k, 0));
        Rule r;
        r.var_types.assign(k, 0);
        std::vector<int> head_vars;
        for (const auto& f : fs)
            for (int i = 0; i < k; ++i) head_vars.push_back(f[i]);
        r.head = {p.edb_count(), head_vars};
        for (int i = 0; i < k; ++i) r.body.push_back({Atom::kEquality, {i, i}});
        p.rules.push_back(r);
        p.output = 0;
        tau.symbol_programs.push_back(std::move(p));
    }
    tau.output = out;
    validate_interpretation(tau);
    return tau;
}

bool tensor_test(const Structure& a, const Minion& m, int k, const Structure& x) {
    if (a.sig != x.sig) throw SignatureMismatch("tensor test needs a shared signature");
    auto tau = tensor_interpretation(a.sig, k);
    Structure ta = apply_interpretation(tau, a);
    Structure tx = apply_interpretation(tau, x);
    return lc_maps_to_minion(reify_to_label_cover(ta, tx), m);
}

} // namespace cspforge
