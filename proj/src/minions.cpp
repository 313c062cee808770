#include "cspforge/minions.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>

namespace cspforge {

int pi_code(const std::vector<int>& pi, int m) {
    int code = 0;
    for (int v : pi) code = code * m + v;
    return code;
}

std::vector<int> pi_decode(int code, int n, int m) {
    std::vector<int> pi(n);
    for (int i = n - 1; i >= 0; --i) {
        pi[i] = code % m;
        code /= m;
    }
    return pi;
}

int Minion::minor(int n, int elem, const std::vector<int>& pi, int m) const {
    return minor_tab[n - 1][m - 1][pi_code(pi, m)][elem];
}

namespace {

long long pow_ll(int b, int e) {
    long long r = 1;
    while (e--) r *= b;
    return r;
}

// fills minor_tab from a callback (n, elem, pi, m) -> elem
template <typename Fn>
void finalize_minors(Minion& m, Fn minor_of) {
    m.minor_tab.assign(m.max_arity, {});
    for (int n = 1; n <= m.max_arity; ++n) {
        m.minor_tab[n - 1].resize(m.max_arity);
        for (int mm = 1; mm <= m.max_arity; ++mm) {
            long long codes = pow_ll(mm, n);
            m.minor_tab[n - 1][mm - 1].resize(codes);
            for (long long c = 0; c < codes; ++c) {
                auto pi = pi_decode((int)c, n, mm);
                auto& row = m.minor_tab[n - 1][mm - 1][c];
                row.resize(m.size(n));
                for (int e = 0; e < m.size(n); ++e) row[e] = minor_of(n, e, pi, mm);
            }
        }
    }
}

} // namespace

bool check_minion_laws(const Minion& m, std::string* why) {
    for (int n = 1; n <= m.max_arity; ++n) {
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        for (int e = 0; e < m.size(n); ++e)
            if (m.minor(n, e, id, n) != e) {
                if (why) *why = "identity law fails at arity " + std::to_string(n);
                return false;
            }
        if (m.size(n) == 0) {
            if (why) *why = "empty element set at arity " + std::to_string(n);
            return false;
        }
    }
    for (int n = 1; n <= m.max_arity; ++n)
        for (int mid = 1; mid <= m.max_arity; ++mid)
            for (int l = 1; l <= m.max_arity; ++l)
                for (int cs = 0; cs < pow_ll(mid, n); ++cs)
                    for (int cp = 0; cp < pow_ll(l, mid); ++cp) {
                        auto sigma = pi_decode(cs, n, mid);
                        auto pi = pi_decode(cp, mid, l);
                        std::vector<int> comp(n);
                        for (int i = 0; i < n; ++i) comp[i] = pi[sigma[i]];
                        for (int e = 0; e < m.size(n); ++e)
                            if (m.minor(mid, m.minor(n, e, sigma, mid), pi, l) !=
                                m.minor(n, e, comp, l)) {
                                if (why)
                                    *why = "composition law fails at arity " + std::to_string(n);
                                return false;
                            }
                    }
    return true;
}

namespace {

std::string hom_rendering(const Homomorphism& h, const Structure& target) {
    std::string out;
    for (int t = 0; t < (int)h.map.size(); ++t) {
        if (t) out += ";";
        out += "(";
        for (size_t i = 0; i < h.map[t].size(); ++i) {
            if (i) out += ",";
            out += target.element_name(t, h.map[t][i]);
        }
        out += ")";
    }
    return out;
}

} // namespace

Minion polymorphism_minion(const Structure& a, const Structure& b, int max_arity) {
    if (a.sig != b.sig)
        throw SignatureMismatch("polymorphism minion needs a promise template over one signature");
    if (max_arity < 1) throw ValidationError("polymorphism minion needs max_arity >= 1");
    Minion m;
    m.max_arity = max_arity;
    m.elems.resize(max_arity);
    std::vector<std::vector<Homomorphism>> homs(max_arity);
    std::vector<Structure> powers;
    for (int n = 1; n <= max_arity; ++n) {
        powers.push_back(power(a, n));
        homs[n - 1] = enumerate_homomorphisms(powers.back(), b);
        if (homs[n - 1].empty())
            throw ValidationError("no homomorphisms A^[" + std::to_string(n) +
                                  "] -> B; minion nonemptiness fails");
        for (const auto& h : homs[n - 1]) m.elems[n - 1].push_back(hom_rendering(h, b));
    }
    std::vector<std::map<std::vector<std::vector<int>>, int>> locate(max_arity);
    for (int n = 1; n <= max_arity; ++n)
        for (int e = 0; e < (int)homs[n - 1].size(); ++e)
            locate[n - 1][homs[n - 1][e].map] = e;

    finalize_minors(m, [&](int n, int e, const std::vector<int>& pi, int mm) {
        // f^pi(x) = f(x o pi) computed on the value tables
        const Homomorphism& f = homs[n - 1][e];
        std::vector<std::vector<int>> table(a.domains.size());
        for (int t = 0; t < (int)a.domains.size(); ++t) {
            int base = a.domain_size(t);
            long long count = pow_ll(base, mm);
            table[t].resize(count);
            for (long long x = 0; x < count; ++x) {
                std::vector<int> digits(mm);
                long long rem = x;
                for (int i = mm - 1; i >= 0; --i) {
                    digits[i] = (int)(rem % base);
                    rem /= base;
                }
                long long pre = 0;
                for (int i = 0; i < n; ++i) pre = pre * base + digits[pi[i]];
                table[t][x] = f.map[t][pre];
            }
        }
        auto it = locate[mm - 1].find(table);
        if (it == locate[mm - 1].end()) throw Error("internal: minor is not a polymorphism");
        return it->second;
    });
    return m;
}

Minion polymorphism_minion(const Structure& a, int max_arity) {
    return polymorphism_minion(a, a, max_arity);
}

Minion projections_minion(int max_arity) {
    Minion m;
    m.max_arity = max_arity;
    m.elems.resize(max_arity);
    for (int n = 1; n <= max_arity; ++n)
        for (int i = 1; i <= n; ++i) m.elems[n - 1].push_back("p" + std::to_string(i));
    finalize_minors(m, [](int, int e, const std::vector<int>& pi, int) { return pi[e]; });
    return m;
}

int omega_index(const Minion& inner, int n, uint32_t mask, int elem) {
    int idx = 0;
    for (uint32_t m2 = 1; m2 < mask; ++m2)
        if (m2 < (1u << n)) idx += inner.size(std::popcount(m2));
    return idx + elem;
}

std::pair<uint32_t, int> omega_decompose(const Minion& inner, int n, int idx) {
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        int sz = inner.size(std::popcount(mask));
        if (idx < sz) return {mask, idx};
        idx -= sz;
    }
    throw Error("internal: omega element index out of range");
}

Minion omega(const Minion& inner) {
    Minion m;
    m.max_arity = inner.max_arity;
    m.elems.resize(m.max_arity);
    for (int n = 1; n <= m.max_arity; ++n)
        for (uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::string set = "{";
            bool first = true;
            for (int b = 0; b < n; ++b)
                if (mask & (1u << b)) {
                    if (!first) set += ",";
                    set += std::to_string(b + 1);
                    first = false;
                }
            set += "}";
            int p = std::popcount(mask);
            for (int e = 0; e < inner.size(p); ++e)
                m.elems[n - 1].push_back("(" + set + "," + inner.elems[p - 1][e] + ")");
        }
    finalize_minors(m, [&](int n, int idx, const std::vector<int>& pi, int mm) {
        auto [mask, e] = omega_decompose(inner, n, idx);
        uint32_t mask2 = 0;
        for (int b = 0; b < n; ++b)
            if (mask & (1u << b)) mask2 |= 1u << pi[b];
        // pi restricted to the subset, re-indexed canonically on both sides
        std::vector<int> bits, bits2;
        for (int b = 0; b < n; ++b)
            if (mask & (1u << b)) bits.push_back(b);
        for (int b = 0; b < mm; ++b)
            if (mask2 & (1u << b)) bits2.push_back(b);
        std::vector<int> q(bits.size());
        for (size_t j = 0; j < bits.size(); ++j)
            q[j] = (int)(std::find(bits2.begin(), bits2.end(), pi[bits[j]]) - bits2.begin());
        int e2 = inner.minor((int)bits.size(), e, q, (int)bits2.size());
        return omega_index(inner, mm, mask2, e2);
    });
    return m;
}

bool minion_hom_is_natural(const Minion& m, const Minion& n, const MinionHom& h) {
    if (m.max_arity != n.max_arity) return false;
    for (int a = 1; a <= m.max_arity; ++a) {
        if ((int)h.xi[a - 1].size() != m.size(a)) return false;
        for (int b = 1; b <= m.max_arity; ++b)
            for (int c = 0; c < pow_ll(b, a); ++c) {
                auto pi = pi_decode(c, a, b);
                for (int e = 0; e < m.size(a); ++e)
                    if (h.xi[b - 1][m.minor(a, e, pi, b)] != n.minor(a, h.xi[a - 1][e], pi, b))
                        return false;
            }
    }
    return true;
}

bool arrow_is_natural(const CoKleisliArrow& a) {
    MinionHom h{a.xi};
    return minion_hom_is_natural(omega(a.source), a.target, h);
}

CoKleisliArrow counit(const Minion& m) {
    CoKleisliArrow a;
    a.source = m;
    a.target = m;
    Minion om = omega(m);
    a.xi.resize(m.max_arity);
    for (int n = 1; n <= m.max_arity; ++n) {
        a.xi[n - 1].resize(om.size(n));
        for (int idx = 0; idx < om.size(n); ++idx) {
            auto [mask, e] = omega_decompose(m, n, idx);
            std::vector<int> incl;
            for (int b = 0; b < n; ++b)
                if (mask & (1u << b)) incl.push_back(b);
            a.xi[n - 1][idx] = m.minor((int)incl.size(), e, incl, n);
        }
    }
    return a;
}

CoKleisliArrow cokleisli_compose(const CoKleisliArrow& xi, const CoKleisliArrow& zeta) {
    if (!(zeta.target == xi.source))
        throw ValidationError("co-Kleisli arrows do not compose: middle minions differ");
    if (zeta.source.max_arity != xi.source.max_arity)
        throw ValidationError("co-Kleisli arrows over distinct truncations");
    CoKleisliArrow out;
    out.source = zeta.source;
    out.target = xi.target;
    const Minion& l = zeta.source;
    const Minion& mid = xi.source;
    out.xi.resize(l.max_arity);
    for (int n = 1; n <= l.max_arity; ++n) {
        int count = 0;
        for (uint32_t mask = 1; mask < (1u << n); ++mask) count += l.size(std::popcount(mask));
        out.xi[n - 1].resize(count);
        for (int idx = 0; idx < count; ++idx) {
            auto [mask, f] = omega_decompose(l, n, idx);
            int p = std::popcount(mask);
            // bind: (X, f) -> (X, zeta_X(X, f)), with X full at arity |X|
            int full = omega_index(l, p, (1u << p) - 1, f);
            int g = zeta.xi[p - 1][full];
            out.xi[n - 1][idx] = xi.xi[n - 1][omega_index(mid, n, mask, g)];
        }
    }
    return out;
}

namespace {

struct SplitMix {
    uint64_t s;
    uint64_t next() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
};

} // namespace

std::optional<MinionHom> find_minion_homomorphism(const Minion& m, const Minion& n, uint64_t seed) {
    if (m.max_arity != n.max_arity)
        throw ValidationError("minion homomorphism search needs equal truncation arity");
    int top = m.max_arity;
    std::vector<std::vector<int>> xi(top);
    for (int a = 1; a <= top; ++a) xi[a - 1].assign(m.size(a), -1);

    std::vector<std::pair<int, int>> order; // (arity, elem)
    for (int a = 1; a <= top; ++a)
        for (int e = 0; e < m.size(a); ++e) order.push_back({a, e});

    // propagate xi(f^pi) = xi(f)^pi from one assignment; records what it set
    std::function<bool(int, int, std::vector<std::pair<int, int>>&)> propagate =
        [&](int a, int e, std::vector<std::pair<int, int>>& trail) {
            std::vector<std::pair<int, int>> queue{{a, e}};
            while (!queue.empty()) {
                auto [aa, ee] = queue.back();
                queue.pop_back();
                int val = xi[aa - 1][ee];
                for (int b = 1; b <= top; ++b)
                    for (int c = 0; c < pow_ll(b, aa); ++c) {
                        auto pi = pi_decode(c, aa, b);
                        int img = m.minor(aa, ee, pi, b);
                        int forced = n.minor(aa, val, pi, b);
                        int& slot = xi[b - 1][img];
                        if (slot < 0) {
                            slot = forced;
                            trail.push_back({b, img});
                            queue.push_back({b, img});
                        } else if (slot != forced) {
                            return false;
                        }
                    }
            }
            return true;
        };

    SplitMix rng{seed ? seed : 1};
    std::function<bool(size_t)> dfs = [&](size_t pos) {
        while (pos < order.size() && xi[order[pos].first - 1][order[pos].second] >= 0) ++pos;
        if (pos == order.size()) return true;
        auto [a, e] = order[pos];
        std::vector<int> values(n.size(a));
        std::iota(values.begin(), values.end(), 0);
        if (seed)
            for (size_t i = values.size(); i > 1; --i)
                std::swap(values[i - 1], values[rng.below(i)]);
        for (int v : values) {
            std::vector<std::pair<int, int>> trail;
            xi[a - 1][e] = v;
            trail.push_back({a, e});
            if (propagate(a, e, trail) && dfs(pos + 1)) return true;
            for (auto& [ta, te] : trail) xi[ta - 1][te] = -1;
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;
    return MinionHom{xi};
}

bool lc_maps_to_minion(const LabelCoverInstance& s, const Minion& m) {
    validate_label_cover(s);
    int nv = (int)s.vars.size();
    for (const auto& v : s.vars) {
        if (v.labels.empty()) return false;
        if ((int)v.labels.size() > m.max_arity)
            throw ValidationError("label set of " + v.name + " exceeds the minion truncation");
    }
    std::vector<std::vector<int>> incident(nv);
    for (int c = 0; c < (int)s.cons.size(); ++c) {
        incident[s.cons[c].u].push_back(c);
        incident[s.cons[c].v].push_back(c);
    }
    std::vector<int> assign(nv, -1);
    // assignments propagate along constraints: g(v) = g(u)^pi
    std::function<bool(int, std::vector<int>&)> propagate = [&](int start, std::vector<int>& trail) {
        std::vector<int> queue{start};
        while (!queue.empty()) {
            int u = queue.back();
            queue.pop_back();
            for (int c : incident[u]) {
                const auto& con = s.cons[c];
                if (assign[con.u] < 0) continue;
                int forced = m.minor((int)s.vars[con.u].labels.size(), assign[con.u], con.pi,
                                     (int)s.vars[con.v].labels.size());
                if (assign[con.v] < 0) {
                    assign[con.v] = forced;
                    trail.push_back(con.v);
                    queue.push_back(con.v);
                } else if (assign[con.v] != forced) {
                    return false;
                }
            }
        }
        return true;
    };
    std::function<bool(int)> dfs = [&](int pos) {
        while (pos < nv && assign[pos] >= 0) ++pos;
        if (pos == nv) return true;
        int arity = (int)s.vars[pos].labels.size();
        for (int v = 0; v < m.size(arity); ++v) {
            std::vector<int> trail{pos};
            assign[pos] = v;
            if (propagate(pos, trail) && dfs(pos + 1)) return true;
            for (int t : trail) assign[t] = -1;
        }
        return false;
    };
    return dfs(0);
}

std::pair<bool, bool> arc_adjunction_sides(const LabelCoverInstance& x, const Minion& m) {
    bool left = lc_maps_to_minion(enforce_arc_consistency(x), m);
    bool right = lc_maps_to_minion(x, omega(m));
    return {left, right};
}

bool check_arc_adjunction(const LabelCoverInstance& x, const Minion& m) {
    auto [left, right] = arc_adjunction_sides(x, m);
    return left == right;
}

void validate_distribution(const RationalDistribution& d) {
    Rational sum = 0;
    for (const auto& w : d.weights) {
        if (w < 0) throw ValidationError("distribution has a negative weight");
        sum += w;
    }
    if (sum != 1) throw ValidationError("distribution weights do not sum to 1");
}

RationalDistribution qconv_minor(const RationalDistribution& d, const std::vector<int>& pi, int m) {
    if (pi.size() != d.weights.size())
        throw ValidationError("pushforward map is not total on the support set");
    RationalDistribution out;
    out.weights.assign(m, Rational(0));
    for (size_t i = 0; i < pi.size(); ++i) {
        if (pi[i] < 0 || pi[i] >= m) throw ValidationError("pushforward map lands out of range");
        out.weights[pi[i]] += d.weights[i];
    }
    return out;
}

std::pair<std::vector<int>, RationalDistribution> qconv_to_omega(const RationalDistribution& d) {
    validate_distribution(d);
    std::vector<int> supp;
    RationalDistribution restricted;
    for (int i = 0; i < (int)d.weights.size(); ++i)
        if (d.weights[i] != 0) {
            supp.push_back(i);
            restricted.weights.push_back(d.weights[i]);
        }
    return {supp, restricted};
}

} // namespace cspforge
