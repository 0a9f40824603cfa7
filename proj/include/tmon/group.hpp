#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "tmon/error.hpp"
#include "tmon/finset.hpp"

namespace tmon {

/// A finite group on the elements 0..n-1 given by its multiplication table.
/// Group laws are checked on construction; groups need not be abelian.
class Group {
public:
    Group() : Group(1, {0}) {}

    /// `table[a * n + b]` is the product a·b.
    Group(std::size_t n, std::vector<Elem> table) : n_(n), mul_(std::move(table)) {
        if (n == 0) throw StructuralError("a group has at least one element");
        if (mul_.size() != n * n) throw StructuralError("group table must be n x n");
        for (auto v : mul_)
            if (v >= n) throw StructuralError("group table entry out of range");
        find_identity();
        inv_.assign(n, n);
        for (Elem a = 0; a < n; ++a)
            for (Elem b = 0; b < n; ++b)
                if (mul(a, b) == e_ && mul(b, a) == e_) inv_[a] = b;
        for (Elem a = 0; a < n; ++a)
            if (inv_[a] == n) throw StructuralError("group element without inverse");
        for (Elem a = 0; a < n; ++a)
            for (Elem b = 0; b < n; ++b)
                for (Elem c = 0; c < n; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw StructuralError("group table is not associative");
    }

    std::size_t size() const { return n_; }
    Elem identity() const { return e_; }
    Elem mul(Elem a, Elem b) const { return mul_[a * n_ + b]; }
    Elem inverse(Elem a) const { return inv_[a]; }
    const std::vector<Elem>& table() const { return mul_; }

    std::size_t order_of(Elem g) const {
        std::size_t k = 1;
        for (Elem x = g; x != e_; x = mul(x, g)) ++k;
        return k;
    }

    /// lcm of the orders of all elements.
    std::size_t exponent() const {
        std::size_t l = 1;
        for (Elem g = 0; g < n_; ++g) l = std::lcm(l, order_of(g));
        return l;
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    std::vector<Elem> generated(const std::vector<Elem>& gens) const {
        std::vector<char> in(n_, 0);
        std::vector<Elem> frontier{e_};
        in[e_] = 1;
        while (!frontier.empty()) {
            auto g = frontier.back();
            frontier.pop_back();
            for (auto s : gens) {
                auto h = mul(g, s);
                if (!in[h]) {
                    in[h] = 1;
                    frontier.push_back(h);
                }
            }
        }
        std::vector<Elem> out;
        for (Elem g = 0; g < n_; ++g)
            if (in[g]) out.push_back(g);
        return out;
    }

    /// A generating set found greedily by smallest element outside the
    /// current subgroup.
    std::vector<Elem> generators() const {
        std::vector<Elem> gens;
        auto sub = generated(gens);
        for (Elem g = 0; g < n_ && sub.size() < n_; ++g)
            if (!std::binary_search(sub.begin(), sub.end(), g)) {
                gens.push_back(g);
                sub = generated(gens);
            }
        return gens;
    }

    bool is_homomorphism_to(const Group& target, const FinMap& f) const {
        if (f.dom != n_ || f.cod != target.size()) return false;
        for (Elem a = 0; a < n_; ++a)
            for (Elem b = 0; b < n_; ++b)
                if (f(mul(a, b)) != target.mul(f(a), f(b))) return false;
        return true;
    }

    bool operator==(const Group& o) const { return n_ == o.n_ && mul_ == o.mul_; }

private:
    std::size_t n_ = 0;
    std::vector<Elem> mul_;
    std::vector<Elem> inv_;
    Elem e_ = 0;

    void find_identity() {
        for (Elem e = 0; e < n_; ++e) {
            bool ok = true;
            for (Elem a = 0; a < n_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
            if (ok) {
                e_ = e;
                return;
            }
        }
        throw StructuralError("group table has no identity");
    }
};

inline Group cyclic_group(std::size_t n) {
    std::vector<Elem> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t[a * n + b] = static_cast<Elem>((a + b) % n);
    return Group(n, std::move(t));
}

/// G × H with (g, h) encoded as g * |H| + h.
inline Group direct_product(const Group& g, const Group& h) {
    const auto n = g.size() * h.size();
    std::vector<Elem> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto ga = a / h.size(), ha = a % h.size(), gb = b / h.size(), hb = b % h.size();
            t[a * n + b] = static_cast<Elem>(g.mul(ga, gb) * h.size() + h.mul(ha, hb));
        }
    return Group(n, std::move(t));
}

/// S_n on permutations of {0..n-1} in lexicographic order; (σ·τ)(i) = σ(τ(i)).
inline Group symmetric_group(std::size_t n) {
    std::vector<std::vector<Elem>> perms;
    std::vector<Elem> p(n);
    std::iota(p.begin(), p.end(), Elem{0});
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const auto m = perms.size();
    std::vector<Elem> t(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            std::vector<Elem> c(n);
            for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
            t[a * m + b] = static_cast<Elem>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    return Group(m, std::move(t));
}

/// Parses names such as "C4", "S3", "C2xC2" or "C2xS3".
inline Group group_by_name(const std::string& name) {
    if (name.empty()) throw StructuralError("empty group name");
    const auto x = name.find('x');
    if (x != std::string::npos) return direct_product(group_by_name(name.substr(0, x)), group_by_name(name.substr(x + 1)));
    if (name.size() < 2 || (name[0] != 'C' && name[0] != 'S'))
        throw StructuralError("unknown group name '" + name + "'");
    std::size_t k = 0;
    try {
        k = std::stoul(name.substr(1));
    } catch (const std::exception&) {
        throw StructuralError("unknown group name '" + name + "'");
    }
    if (k == 0 || k > 64) throw StructuralError("group order out of range in '" + name + "'");
    if (name[0] == 'C') return cyclic_group(k);
    if (k > 4) throw StructuralError("symmetric groups above S4 are out of range");
    return symmetric_group(k);
}

/// Homomorphisms by exhaustive search over set maps, assigning images in
/// element order and rejecting a partial map as soon as some product of
/// assigned elements lands on an assigned element inconsistently.
inline std::vector<FinMap> group_homs_by_set_maps(const Group& g, const Group& h) {
    const auto n = g.size();
    std::vector<FinMap> out;
    std::vector<Elem> f(n, 0);
    auto consistent_upto = [&](std::size_t i) {
        for (Elem a = 0; a <= i; ++a)
            for (Elem b = 0; b <= i; ++b) {
                const auto ab = g.mul(a, b);
                if (ab <= i && f[ab] != h.mul(f[a], f[b])) return false;
            }
        return true;
    };
    // Iterative depth-first enumeration in lexicographic order of tables.
    std::size_t depth = 0;
    std::vector<Elem> next(n + 1, 0);
    while (true) {
        if (depth == n) {
            out.emplace_back(n, h.size(), f);
            --depth;
            continue;
        }
        if (next[depth] >= h.size()) {
            next[depth] = 0;
            if (depth == 0) break;
            --depth;
            continue;
        }
        f[depth] = next[depth]++;
        if (consistent_upto(depth)) ++depth;
    }
    return out;
}

/// Homomorphisms by choosing images of a generating set and extending along
/// right multiplication by generators, rejecting inconsistent extensions.
inline std::vector<FinMap> group_homs_by_generators(const Group& g, const Group& h) {
    const auto gens = g.generators();
    std::vector<FinMap> out;
    const auto combos = saturating_pow(h.size(), gens.size());
    check_cap(combos, "generator images");
    std::vector<Elem> img(gens.size(), 0);
    for (std::uint64_t c = 0; c < combos; ++c) {
        std::vector<Elem> f(g.size(), 0);
        std::vector<char> known(g.size(), 0);
        known[g.identity()] = 1;
        f[g.identity()] = h.identity();
        std::vector<Elem> stack{g.identity()};
        bool ok = true;
        while (!stack.empty() && ok) {
            auto x = stack.back();
            stack.pop_back();
            for (std::size_t i = 0; i < gens.size() && ok; ++i) {
                const auto y = g.mul(x, gens[i]);
                const auto fy = h.mul(f[x], img[i]);
                if (!known[y]) {
                    known[y] = 1;
                    f[y] = fy;
                    stack.push_back(y);
                } else if (f[y] != fy) {
                    ok = false;
                }
            }
        }
        if (ok) out.emplace_back(g.size(), h.size(), std::move(f));
        for (std::size_t p = gens.size(); p-- > 0;) {
            if (++img[p] < h.size()) break;
            img[p] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All homomorphisms g -> h in lexicographic order of tables. Small domains
/// use the set-map search, larger ones the generator route.
inline std::vector<FinMap> group_homs(const Group& g, const Group& h) {
    if (g.size() <= 8) return group_homs_by_set_maps(g, h);
    return group_homs_by_generators(g, h);
}

}  // namespace tmon
