#pragma once

// Hom-objects over monoid and operad actions, the endomorphism operad of a
// finite set, and the structured double duals of groups and vector spaces.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tmon/category.hpp"
#include "tmon/codensity.hpp"
#include "tmon/csp.hpp"
#include "tmon/error.hpp"
#include "tmon/field.hpp"
#include "tmon/finset.hpp"
#include "tmon/group.hpp"
#include "tmon/report.hpp"
#include "tmon/vect.hpp"

namespace tmon {

// ---------------------------------------------------------------------------
// Monoid actions.

struct Monoid {
    std::size_t size = 1;
    std::vector<Elem> mul{0};  // mul[a * size + b] = a·b
    Elem unit = 0;

    Elem operator()(Elem a, Elem b) const { return mul[a * size + b]; }

    void validate() const {
        if (size == 0 || mul.size() != size * size || unit >= size)
            throw StructuralError("malformed monoid table");
        for (auto v : mul)
            if (v >= size) throw StructuralError("monoid table entry out of range");
        for (Elem a = 0; a < size; ++a) {
            if ((*this)(a, unit) != a || (*this)(unit, a) != a) throw StructuralError("monoid unit is not neutral");
            for (Elem b = 0; b < size; ++b)
                for (Elem c = 0; c < size; ++c)
                    if ((*this)((*this)(a, b), c) != (*this)(a, (*this)(b, c)))
                        throw StructuralError("monoid table is not associative");
        }
    }
};

/// Self-maps of one set closed under composition, as a monoid with
/// a·b = a ∘ b. The list must contain the identity.
inline Monoid composition_monoid(const std::vector<FinMap>& maps) {
    if (maps.empty()) throw StructuralError("a monoid has at least one element");
    std::map<std::vector<Elem>, Elem> index;
    for (Elem i = 0; i < maps.size(); ++i) index.emplace(maps[i].table, i);
    Monoid m;
    m.size = maps.size();
    m.mul.assign(m.size * m.size, 0);
    for (Elem a = 0; a < m.size; ++a)
        for (Elem b = 0; b < m.size; ++b) {
            auto it = index.find(compose(maps[a], maps[b]).table);
            if (it == index.end()) throw StructuralError("maps are not closed under composition");
            m.mul[a * m.size + b] = it->second;
        }
    auto id = index.find(identity(maps.front().dom).table);
    if (id == index.end()) throw StructuralError("maps do not contain the identity");
    m.unit = id->second;
    m.validate();
    return m;
}

/// A finite set on which a monoid acts: act[m] is x ↦ m·x.
struct MonoidAction {
    std::shared_ptr<const Monoid> monoid;
    std::size_t carrier = 0;
    std::vector<FinMap> act;

    void validate() const {
        if (!monoid || act.size() != monoid->size) throw StructuralError("one action map per monoid element");
        for (const auto& a : act)
            if (a.dom != carrier || a.cod != carrier) throw StructuralError("action map off the carrier");
        if (act[monoid->unit] != identity(carrier)) throw StructuralError("unit acts nontrivially");
        for (Elem a = 0; a < monoid->size; ++a)
            for (Elem b = 0; b < monoid->size; ++b)
                if (act[(*monoid)(a, b)] != compose(act[a], act[b]))
                    throw StructuralError("action does not respect composition");
    }
};

/// Equivariant maps φ : X -> c, φ(m·x) = m·φ(x), sorted by table.
inline std::vector<FinMap> hom_monoid(const MonoidAction& X, const MonoidAction& c) {
    X.validate();
    c.validate();
    if (X.monoid->size != c.monoid->size || X.monoid->mul != c.monoid->mul)
        throw StructuralError("actions of different monoids");
    FunctionalCsp csp;
    for (std::size_t x = 0; x < X.carrier; ++x) csp.add_variable(c.carrier);
    for (std::size_t m = 0; m < X.act.size(); ++m)
        for (Elem x = 0; x < X.carrier; ++x) csp.add_map_constraint(x, X.act[m](x), c.act[m].table);
    std::vector<FinMap> out;
    for (auto& t : csp.solve_all()) out.emplace_back(X.carrier, c.carrier, std::move(t));
    return out;
}

// ---------------------------------------------------------------------------
// Operad actions.

/// An n-ary operation on a carrier; table is row-major over carrier^arity,
/// first argument most significant.
struct Operation {
    std::size_t arity = 0;
    std::vector<Elem> table;
};

/// Interpretations of a truncated operad: ops[k][i] is the i-th formal
/// operation of arity k.
struct OperadAlgebra {
    std::size_t carrier = 0;
    std::vector<std::vector<Operation>> ops;

    void validate() const {
        for (std::size_t k = 0; k < ops.size(); ++k)
            for (const auto& o : ops[k]) {
                if (o.arity != k) throw StructuralError("operation filed under the wrong arity");
                if (o.table.size() != saturating_pow(carrier, k))
                    throw StructuralError("operation table has wrong length");
                for (auto v : o.table)
                    if (v >= carrier) throw StructuralError("operation lands outside the carrier");
            }
    }
};

/// Maps φ : X -> c with φ(o(x_1..x_k)) = o(φ(x_1)..φ(x_k)) for every
/// operation of arity lo..hi. Sorted by table.
inline std::vector<std::vector<Elem>> hom_operad(const OperadAlgebra& X, const OperadAlgebra& c, std::size_t lo,
                                                 std::size_t hi) {
    X.validate();
    c.validate();
    FunctionalCsp csp;
    for (std::size_t x = 0; x < X.carrier; ++x) csp.add_variable(c.carrier);
    for (std::size_t k = lo; k <= hi; ++k) {
        const std::size_t nx = k < X.ops.size() ? X.ops[k].size() : 0;
        const std::size_t nc = k < c.ops.size() ? c.ops[k].size() : 0;
        if (nx != nc) throw StructuralError("algebras interpret different operads at arity " + std::to_string(k));
        if (nx == 0) continue;
        IndexedProduct tuples(std::vector<std::size_t>(k, X.carrier));
        for (std::size_t i = 0; i < nx; ++i)
            for (std::uint64_t t = 0; t < tuples.cardinality(); ++t) {
                auto args = tuples.tuple(t);
                std::vector<std::size_t> sources(args.begin(), args.end());
                csp.add_constraint(std::move(sources), X.ops[k][i].table[t], c.ops[k][i].table);
            }
    }
    return csp.solve_all();
}

/// The endomorphism operad of a finite set d, truncated at max_arity:
/// O(d)_k = Set(d^k, d), and O+(d) drops the constants of arity 0.
class EndomorphismOperad {
public:
    EndomorphismOperad(std::size_t d, std::size_t max_arity, bool positive)
        : d_(d), max_arity_(max_arity), positive_(positive) {
        if (d == 0) throw PreconditionViolation("the endomorphism operad needs a nonempty set");
        ops_.resize(max_arity + 1);
        for (std::size_t k = positive ? 1 : 0; k <= max_arity; ++k)
            for (auto& f : all_maps(saturating_pow(d, k), d)) ops_[k].push_back(std::move(f.table));
    }

    std::size_t base() const { return d_; }
    std::size_t max_arity() const { return max_arity_; }
    bool positive() const { return positive_; }
    std::size_t count(std::size_t k) const { return k < ops_.size() ? ops_[k].size() : 0; }

    OperadAlgebra on_base() const {
        OperadAlgebra a{d_, {}};
        a.ops.resize(ops_.size());
        for (std::size_t k = 0; k < ops_.size(); ++k)
            for (const auto& t : ops_[k]) a.ops[k].push_back({k, t});
        return a;
    }

    /// Pointwise action on C(c, d) = maps c -> d, indexed as in all_maps.
    OperadAlgebra on_maps(std::size_t c) const {
        const auto maps = all_maps(c, d_);
        const std::size_t n = maps.size();
        OperadAlgebra a{n, {}};
        a.ops.resize(ops_.size());
        for (std::size_t k = 0; k < ops_.size(); ++k) {
            if (ops_[k].empty()) continue;
            check_cap(Nat(saturating_pow(n, k)) * ops_[k].size(), "operad action table");
            IndexedProduct tuples(std::vector<std::size_t>(k, n));
            IndexedProduct values(std::vector<std::size_t>(k, d_));
            for (const auto& o : ops_[k]) {
                Operation op{k, std::vector<Elem>(tuples.cardinality())};
                std::vector<Elem> at(k), image(c);
                for (std::uint64_t t = 0; t < tuples.cardinality(); ++t) {
                    const auto fs = tuples.tuple(t);
                    for (Elem x = 0; x < c; ++x) {
                        for (std::size_t j = 0; j < k; ++j) at[j] = maps[fs[j]](x);
                        image[x] = o[values.index(at)];
                    }
                    op.table[t] = static_cast<Elem>(map_index(FinMap(c, d_, image)));
                }
                a.ops[k].push_back(std::move(op));
            }
        }
        return a;
    }

private:
    std::size_t d_, max_arity_;
    bool positive_;
    std::vector<std::vector<std::vector<Elem>>> ops_;
};

/// Evaluation at a point, as an element of hom(C(c,d), d).
inline std::vector<Elem> evaluation_family(std::size_t c, std::size_t d, Elem x) {
    std::vector<Elem> phi;
    for (const auto& g : all_maps(c, d)) phi.push_back(g(x));
    return phi;
}

/// φ_{α∘β} = α(φ_{β_1}, ..., φ_{β_n}) for φ a function on C(c,d) indexed
/// as in all_maps, α : d^n -> d and β_i : c -> d.
inline bool lemma_phi_equal_check(std::size_t c, std::size_t d, const std::vector<Elem>& phi, const Operation& alpha,
                                  const std::vector<FinMap>& beta) {
    if (beta.size() != alpha.arity) throw StructuralError("alpha arity differs from the number of components");
    if (phi.size() != saturating_pow(d, c)) throw StructuralError("phi is not indexed by C(c,d)");
    IndexedProduct values(std::vector<std::size_t>(alpha.arity, d));
    std::vector<Elem> composite(c), at(alpha.arity);
    for (Elem x = 0; x < c; ++x) {
        for (std::size_t i = 0; i < beta.size(); ++i) at[i] = beta[i](x);
        composite[x] = alpha.table[values.index(at)];
    }
    for (std::size_t i = 0; i < beta.size(); ++i) at[i] = phi[map_index(beta[i])];
    return phi[map_index(FinMap(c, d, composite))] == alpha.table[values.index(at)];
}

// ---------------------------------------------------------------------------
// Powers of d against hom-objects over its endomorphism operad.

namespace detail {

// φ(g) = pr_1(t_{Δ∘g}); the D-component at d_index of the comma category.
inline std::vector<Elem> family_to_phi(const CodensityObject& T, const Family& t, std::size_t d_index, std::size_t d,
                                       std::size_t n) {
    const auto c = T.base().size();
    IndexedProduct power(std::vector<std::size_t>(n, d));
    std::vector<Elem> phi;
    for (const auto& g : all_maps(c, d)) {
        std::vector<Elem> diag(c);
        for (Elem x = 0; x < c; ++x) diag[x] = static_cast<Elem>(power.index(std::vector<Elem>(n, g(x))));
        const auto j = T.comma->find(d_index, FinMap(c, power.cardinality(), diag));
        if (!j) throw InternalConsistencyError("diagonal map missing from the comma category");
        phi.push_back(power.tuple(t[*j])[0]);
    }
    return phi;
}

// t_f = (φ(pr_1 f), ..., φ(pr_n f)) at every comma object over d^n; the
// terminal component (if any) is 0.
inline Family phi_to_family(const CodensityObject& T, const std::vector<Elem>& phi, std::size_t d, std::size_t n) {
    const auto c = T.base().size();
    IndexedProduct power(std::vector<std::size_t>(n, d));
    Family t;
    for (const auto& o : T.comma->objects()) {
        if (T.targets()[o.d_index].size() != power.cardinality()) {
            t.push_back(0);
            continue;
        }
        std::vector<Elem> value(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<Elem> pr(c);
            for (Elem x = 0; x < c; ++x) pr[x] = power.tuple(o.f(x))[i];
            value[i] = phi[map_index(FinMap(c, d, pr))];
        }
        t.push_back(static_cast<Elem>(power.index(value)));
    }
    return t;
}

struct TransportResult {
    bool bijective = true;
    bool unit_compatible = true;
    std::string witness;
    nlohmann::json bijection = nlohmann::json::array();
};

inline TransportResult transport(const CodensityObject& T, std::size_t d_index, std::size_t d, std::size_t n,
                                 const std::vector<std::vector<Elem>>& hom) {
    TransportResult r;
    const auto c = T.base().size();
    std::set<std::vector<Elem>> seen;
    for (const auto& t : T.families) {
        auto phi = family_to_phi(T, t, d_index, d, n);
        if (!std::binary_search(hom.begin(), hom.end(), phi)) {
            r.bijective = false;
            r.witness = "a family maps outside the hom-object";
        } else if (phi_to_family(T, phi, d, n) != t) {
            r.bijective = false;
            r.witness = "round trip through the hom-object changes a family";
        }
        seen.insert(phi);
        r.bijection.push_back({{"family", t}, {"phi", phi}});
    }
    if (seen.size() != T.size() || seen.size() != hom.size()) {
        r.bijective = false;
        if (r.witness.empty())
            r.witness = std::to_string(T.size()) + " families vs " + std::to_string(hom.size()) + " hom elements";
    }
    for (Elem x = 0; x < c; ++x)
        if (family_to_phi(T, unit_family(*T.comma, x), d_index, d, n) != evaluation_family(c, d, x)) {
            r.unit_compatible = false;
            r.witness = "unit at x=" + std::to_string(x);
        }
    return r;
}

}  // namespace detail

inline std::vector<std::vector<Elem>> hom_window(const EndomorphismOperad& O, std::size_t c, std::size_t lo,
                                                 std::size_t hi) {
    return hom_operad(O.on_maps(c), O.on_base(), lo, hi);
}

/// T_{d^n} against hom^n and hom^{<=n} over O+(d), and T_{1,d^n} against
/// hom^{<=n} over O(d), at every object of the universe.
inline Report verify_powers_theorem(std::size_t d, std::size_t n, const std::vector<std::uint64_t>& universe) {
    if (n == 0) throw PreconditionViolation("powers start at n = 1");
    Report r;
    r.title = "powers of " + std::to_string(d) + " up to n=" + std::to_string(n);
    const EndomorphismOperad Op(d, n, true), O(d, n, false);
    const auto dn = saturating_pow(d, n);
    std::vector<std::string> arity0_cuts;
    for (auto c : universe) {
        const std::string at = " at c=" + std::to_string(c);
        const auto Xp = Op.on_maps(c), X = O.on_maps(c);
        const auto hn = hom_operad(Xp, Op.on_base(), n, n);
        std::vector<std::vector<std::vector<Elem>>> upto(n + 1);  // O+ truncations hom^{<=k}
        for (std::size_t k = 1; k <= n; ++k) upto[k] = hom_operad(Xp, Op.on_base(), 1, k);
        const auto full = hom_operad(X, O.on_base(), 0, n);

        const auto T = codensity_object(Object::set(c), {Object::set(dn)});
        const auto tr = detail::transport(T, 0, d, n, hn);
        r.add("T_{d^n}(c) = hom^n_{O+}" + at, tr.bijective, tr.witness,
              std::to_string(T.size()) + " elements");
        r.add("transport respects units" + at, tr.unit_compatible, tr.witness);
        r.add("hom^n = hom^{<=n} over O+" + at, hn == upto[n]);

        bool nested = true, unit_in = true;
        for (std::size_t k = 1; k <= n; ++k) {
            if (k > 1)
                for (const auto& phi : upto[k]) nested = nested && std::binary_search(upto[k - 1].begin(), upto[k - 1].end(), phi);
            for (Elem x = 0; x < c; ++x)
                unit_in = unit_in && std::binary_search(upto[k].begin(), upto[k].end(), evaluation_family(c, d, x));
        }
        r.add("hom^{<=k} decreasing in k" + at, nested);
        r.add("evaluations lie in every hom^{<=k}" + at, unit_in);

        const auto T1 = codensity_object(Object::set(c), {Object::set(1), Object::set(dn)});
        const auto tr1 = detail::transport(T1, 1, d, n, full);
        r.add("T_{1,d^n}(c) = hom^{<=n}_O" + at, tr1.bijective && tr1.unit_compatible, tr1.witness,
              std::to_string(T1.size()) + " elements");

        if (full.size() < upto[n].size()) arity0_cuts.push_back(std::to_string(c));
        nlohmann::json sizes = nlohmann::json::array();
        for (std::size_t k = 1; k <= n; ++k) sizes.push_back(upto[k].size());
        r.data["objects"].push_back({{"c", c},
                                     {"T_dn", T.size()},
                                     {"hom_n", hn.size()},
                                     {"hom_upto_by_arity", sizes},
                                     {"T_1_dn", T1.size()},
                                     {"hom_O_upto_n", full.size()},
                                     {"transport", tr.bijection}});
    }

    // At c = d^n the hom-object is exactly the unit image.
    if (saturating_pow(d, dn) <= (1U << 12)) {
        const auto sol = hom_window(Op, dn, n, n);
        std::vector<std::vector<Elem>> ev;
        for (Elem x = 0; x < dn; ++x) ev.push_back(evaluation_family(dn, d, x));
        std::sort(ev.begin(), ev.end());
        r.add("at c = d^n the solutions are the evaluations", sol == ev, {},
              std::to_string(sol.size()) + " solutions");
    } else {
        r.skip("at c = d^n the solutions are the evaluations", "C(d^n, d) is too large");
    }

    r.data["arity0_cuts_at"] = arity0_cuts;
    if (arity0_cuts.empty())
        r.note("arity-0 constants cut nothing on this universe: the constant operations of arity 1 already force "
               "them, so T_{1,d^n} = T_{d^n} here");
    else
        r.note("arity-0 constants cut solutions at c in {" + nlohmann::json(arity0_cuts).dump() + "}");
    return r;
}

// ---------------------------------------------------------------------------
// Groups: T_G(Z) as End(G)-equivariant self-maps of G = hom(Z, G).

struct GroupDoubleDual {
    std::vector<FinMap> endomorphisms;
    std::vector<FinMap> hom;  // equivariant self-maps
    std::size_t unit_subgroup_order = 0;
    std::size_t exponent = 0;
    Report report;
};

inline GroupDoubleDual group_double_dual(const Group& G, const std::string& name = "G") {
    if (G.size() > 8) throw PreconditionViolation("the brute-force route needs |G| <= 8");
    GroupDoubleDual out;
    auto& r = out.report;
    r.title = "double dual of " + name;
    out.endomorphisms = group_homs_by_set_maps(G, G);
    auto by_gens = group_homs_by_generators(G, G);
    std::sort(by_gens.begin(), by_gens.end());
    std::sort(out.endomorphisms.begin(), out.endomorphisms.end());
    r.add("End(G) by set maps = End(G) by generator images", out.endomorphisms == by_gens, {},
          std::to_string(out.endomorphisms.size()) + " endomorphisms");

    // hom(Z, G) ≅ G via β ↦ β(1); End(G) acts on it by α·g = α(g).
    MonoidAction act{std::make_shared<const Monoid>(composition_monoid(out.endomorphisms)), G.size(),
                     out.endomorphisms};
    out.hom = hom_monoid(act, act);

    std::set<std::vector<Elem>> members;
    for (const auto& f : out.hom) members.insert(f.table);
    bool closed = true;
    for (const auto& a : out.hom)
        for (const auto& b : out.hom) {
            std::vector<Elem> t(G.size());
            for (Elem g = 0; g < G.size(); ++g) t[g] = G.mul(a(g), b(g));
            closed = closed && members.count(t);
        }
    r.add("equivariant maps form a subgroup of G^G", closed, {}, std::to_string(out.hom.size()) + " maps");

    // The unit sends 1 to the identity map; its cyclic subgroup consists of
    // the pointwise powers g ↦ g^k.
    std::set<std::vector<Elem>> powers;
    std::vector<Elem> p(G.size(), G.identity());
    bool contained = true;
    while (powers.insert(p).second) {
        contained = contained && members.count(p);
        for (Elem g = 0; g < G.size(); ++g) p[g] = G.mul(p[g], g);
    }
    out.unit_subgroup_order = powers.size();
    out.exponent = G.exponent();
    r.add("g -> g^k is equivariant for every k", contained);
    r.add("unit subgroup order = lcm of element orders", out.unit_subgroup_order == out.exponent,
          std::to_string(out.unit_subgroup_order) + " vs " + std::to_string(out.exponent));
    r.data = {{"group", name},
              {"order", G.size()},
              {"endomorphisms", out.endomorphisms.size()},
              {"hom", out.hom.size()},
              {"unit_subgroup_order", out.unit_subgroup_order},
              {"exponent", out.exponent}};
    return out;
}

// ---------------------------------------------------------------------------
// Vector spaces: maps V* -> K respecting scalars only, or all of O(K).

namespace detail {

// Basis of the common kernel of linear forms, shrunk one form at a time.
class KernelTracker {
public:
    KernelTracker(const FiniteField& k, std::size_t n) : k_(k), n_(n) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> e(n, 0);
            e[i] = 1;
            basis_.push_back(std::move(e));
        }
    }

    /// Imposes Σ coef_j φ(var_j) = 0.
    void add(const std::vector<std::pair<std::size_t, std::uint32_t>>& form) {
        std::vector<std::uint32_t> val(basis_.size());
        std::size_t pivot = basis_.size();
        for (std::size_t b = 0; b < basis_.size(); ++b) {
            std::uint32_t s = 0;
            for (auto [j, a] : form) s = k_.add(s, k_.mul(a, basis_[b][j]));
            val[b] = s;
            if (s != 0 && pivot == basis_.size()) pivot = b;
        }
        if (pivot == basis_.size()) return;
        const auto inv = k_.inv(val[pivot]);
        for (std::size_t b = 0; b < basis_.size(); ++b) {
            if (b == pivot || val[b] == 0) continue;
            const auto f = k_.mul(val[b], inv);
            for (std::size_t j = 0; j < n_; ++j) basis_[b][j] = k_.sub(basis_[b][j], k_.mul(f, basis_[pivot][j]));
        }
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(pivot));
    }

    std::size_t dim() const { return basis_.size(); }

private:
    const FiniteField& k_;
    std::size_t n_;
    std::vector<std::vector<std::uint32_t>> basis_;
};

}  // namespace detail

namespace detail {

// A nonempty set S of vectors is a subspace iff S + g ⊆ S for a set of
// generators g of span(S) drawn from S, and S = span(S).
inline bool is_subspace(const FiniteField& k, const std::vector<std::vector<Elem>>& S) {
    if (S.empty()) return false;
    const std::size_t n = S.front().size();
    auto axpy = [&](std::uint32_t a, const std::vector<Elem>& x, const std::vector<Elem>& y) {
        std::vector<Elem> z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = k.add(k.mul(a, x[i]), y[i]);
        return z;
    };
    std::set<std::vector<Elem>> members(S.begin(), S.end()), span{std::vector<Elem>(n, 0)};
    std::vector<std::vector<Elem>> gens;
    for (const auto& s : S) {
        if (span.count(s)) continue;
        gens.push_back(s);
        std::set<std::vector<Elem>> grown;
        for (const auto& v : span)
            for (std::uint32_t a = 0; a < k.order(); ++a) grown.insert(axpy(a, s, v));
        span = std::move(grown);
    }
    if (span != members) return false;
    for (const auto& s : S)
        for (const auto& g : gens)
            if (!members.count(axpy(1, g, s))) return false;
    return true;
}

}  // namespace detail

struct VectDoubleDual {
    std::size_t dim_V = 0;
    std::size_t single_dim = 0;    // hom over End(K)
    std::size_t operadic_dim = 0;  // hom over O(K), arities 0..2
    Report report;
};

inline VectDoubleDual vect_double_dual_experiment(std::uint32_t q, std::size_t dim) {
    auto k = std::make_shared<const FiniteField>(q);
    if (saturating_pow(q, dim) > (1U << 10)) throw PreconditionViolation("needs q^dim <= 2^10");
    VectDoubleDual out;
    auto& r = out.report;
    r.title = "double dual of F_" + std::to_string(q) + "^" + std::to_string(dim);
    const auto V = VectSpace::coordinate(k, dim);
    const auto K = VectSpace::coordinate(k, 1);
    const auto duals = V.linear_maps_to(K);  // V* as a set
    const std::size_t N = duals.size();
    std::map<std::vector<Elem>, std::size_t> index;
    for (std::size_t i = 0; i < N; ++i) index.emplace(duals[i].table, i);
    auto combine = [&](std::uint32_t a, std::size_t u, std::uint32_t b, std::size_t v) {
        std::vector<Elem> t(V.size());
        for (Elem x = 0; x < V.size(); ++x) t[x] = K.add(K.scale(a, duals[u](x)), K.scale(b, duals[v](x)));
        return index.at(t);
    };
    const auto zero = index.at(std::vector<Elem>(V.size(), K.zero()));

    detail::KernelTracker single(*k, N), full(*k, N);
    for (std::uint32_t s = 0; s < q; ++s)
        for (std::size_t v = 0; v < N; ++v) {
            // φ(s v) - s φ(v) = 0
            std::vector<std::pair<std::size_t, std::uint32_t>> form{{combine(s, v, 0, v), 1}, {v, k->neg(s)}};
            single.add(form);
            full.add(form);
        }
    full.add({{zero, 1}});
    for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b)
            for (std::size_t u = 0; u < N; ++u)
                for (std::size_t v = 0; v < N; ++v)
                    full.add({{combine(a, u, b, v), 1}, {u, k->neg(a)}, {v, k->neg(b)}});
    out.dim_V = V.dim();
    out.single_dim = single.dim();
    out.operadic_dim = full.dim();

    // Enumeration cross-check: the same constraints as a functional CSP.
    if (N <= 16) {
        auto count = [&](bool operadic) {
            FunctionalCsp csp;
            for (std::size_t v = 0; v < N; ++v) csp.add_variable(q);
            for (std::uint32_t s = 0; s < q; ++s) {
                std::vector<Elem> t(q);
                for (std::uint32_t y = 0; y < q; ++y) t[y] = k->mul(s, y);
                for (std::size_t v = 0; v < N; ++v) csp.add_map_constraint(v, combine(s, v, 0, v), t);
            }
            if (operadic) {
                csp.add_constraint({}, zero, {0});
                for (std::uint32_t a = 0; a < q; ++a)
                    for (std::uint32_t b = 0; b < q; ++b) {
                        std::vector<Elem> t(q * q);
                        for (std::uint32_t y = 0; y < q; ++y)
                            for (std::uint32_t z = 0; z < q; ++z) t[y * q + z] = k->add(k->mul(a, y), k->mul(b, z));
                        for (std::size_t u = 0; u < N; ++u)
                            for (std::size_t v = 0; v < N; ++v) csp.add_constraint({u, v}, combine(a, u, b, v), t);
                    }
            }
            const auto sols = csp.solve_all();
            return std::make_pair(sols.size(), detail::is_subspace(*k, sols));
        };
        const auto [cs, ss] = count(false);
        const auto [cf, sf] = count(true);
        r.add("single-object: elimination agrees with enumeration", cs == saturating_pow(q, out.single_dim),
              std::to_string(cs) + " maps enumerated");
        r.add("operadic: elimination agrees with enumeration", cf == saturating_pow(q, out.operadic_dim),
              std::to_string(cf) + " maps enumerated");
        r.add("solution sets are subspaces", ss && sf);
        r.data["single_elements"] = cs;
        r.data["operadic_elements"] = cf;
    } else {
        r.skip("single-object: elimination agrees with enumeration", "q^dim > 16");
        r.skip("operadic: elimination agrees with enumeration", "q^dim > 16");
        r.data["single_elements"] = saturating_pow(q, out.single_dim);
        r.data["operadic_elements"] = saturating_pow(q, out.operadic_dim);
    }
    r.add("operadic completion has dimension dim V", out.operadic_dim == out.dim_V,
          std::to_string(out.operadic_dim) + " vs " + std::to_string(out.dim_V));
    r.data["q"] = q;
    r.data["dim_V"] = out.dim_V;
    r.data["single_dim"] = out.single_dim;
    r.data["operadic_dim"] = out.operadic_dim;
    r.data["single_equals_double_dual"] = out.single_dim == out.dim_V;
    r.data["operadic_equals_double_dual"] = out.operadic_dim == out.dim_V;
    if (out.single_dim != out.dim_V)
        r.note("the single-object completion over K has dimension " + std::to_string(out.single_dim) +
               ", not dim V** = " + std::to_string(out.dim_V) +
               "; reading the double dual as the terminal monad of K alone needs the full operad");
    return out;
}

}  // namespace tmon
