#pragma once

// D-completion T_D(c): the limit of the projection c ↓ D -> D.
//
// An element of T_D(c) is a family x assigning x_(d,f) ∈ d to every comma
// object (d, f : c -> d) such that α(x_(d1,f)) = x_(d2, α∘f) for every
// α : d1 -> d2. Families are stored as vectors indexed by comma objects in
// canonical order, and T_D(c) is the sorted list of all of them.

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmon/category.hpp"
#include "tmon/csp.hpp"
#include "tmon/error.hpp"
#include "tmon/functor.hpp"
#include "tmon/report.hpp"

namespace tmon {

using Family = std::vector<Elem>;

inline constexpr Elem kNoValue = ~Elem{0};

struct CodensityObject {
    std::shared_ptr<const CommaCategory> comma;
    std::vector<Family> families;  // lexicographically sorted
    Object structured;             // T_D(c) with its pointwise structure

    const Object& base() const { return comma->base(); }
    const std::vector<Object>& targets() const { return comma->targets(); }
    std::size_t size() const { return families.size(); }

    std::optional<std::size_t> find(const Family& x) const {
        auto it = std::lower_bound(families.begin(), families.end(), x);
        if (it == families.end() || *it != x) return std::nullopt;
        return static_cast<std::size_t>(it - families.begin());
    }

    std::size_t index_of(const Family& x, const char* what) const {
        auto i = find(x);
        if (!i) throw InternalConsistencyError(std::string(what) + " left T_D(c)");
        return *i;
    }

    /// ev_(d,f) : T_D(c) -> d, reading each family at one comma object.
    FinMap evaluation(std::size_t comma_index) const {
        std::vector<Elem> t(families.size());
        for (std::size_t i = 0; i < families.size(); ++i) t[i] = families[i][comma_index];
        return {families.size(), targets()[comma->objects()[comma_index].d_index].size(), std::move(t)};
    }
};

namespace detail {

inline FunctionalCsp diagram_csp(const DiagramInstance& d) {
    FunctionalCsp csp;
    for (auto n : d.nodes) csp.add_variable(n);
    for (const auto& a : d.arrows) csp.add_map_constraint(a.source, a.target, a.map.table);
    return csp;
}

}  // namespace detail

/// T_D(c) by solving the comma-limit constraint problem.
inline CodensityObject codensity_object(const Object& c, const std::vector<Object>& D) {
    auto comma = std::make_shared<const CommaCategory>(c, D);
    auto lim = limit_in_category(comma->projection_diagram(), c.kind(),
                                 c.kind() == Kind::vect ? c.as_vect().field_ptr() : nullptr);
    return {std::move(comma), std::move(lim.cone.tuples), std::move(lim.object)};
}

/// T_D(c) as the equalizer of ∏_d d^{C(c,d)} ⇉ ∏_{α:d1->d2} d2^{C(c,d1)}.
/// Walks the whole product, so only usable at small scale.
inline CodensityObject end_equalizer_object(const Object& c, const std::vector<Object>& D) {
    auto comma = std::make_shared<const CommaCategory>(c, D);
    const auto& objs = comma->objects();
    std::vector<std::size_t> factors;
    for (const auto& o : objs) factors.push_back(D[o.d_index].size());
    IndexedProduct product(factors);

    // Each α : d1 -> d2 and f : c -> d1 contributes one coordinate on each
    // side: σ reads α(x_(d1,f)), τ reads x_(d2,α∘f).
    struct Coord {
        std::size_t src, dst;
        const FinMap* alpha;
    };
    std::vector<Coord> coords;
    for (const auto& a : comma->arrows()) coords.push_back({a.source, a.target, &comma->alpha(a)});

    std::vector<Family> out;
    Family x(objs.size(), 0);
    for (std::uint64_t i = 0; i < product.cardinality(); ++i) {
        bool eq = true;
        for (const auto& k : coords)
            if ((*k.alpha)(x[k.src]) != x[k.dst]) {
                eq = false;
                break;
            }
        if (eq) out.push_back(x);
        for (std::size_t p = x.size(); p-- > 0;) {
            if (++x[p] < factors[p]) break;
            x[p] = 0;
        }
    }
    DiagramInstance shape;
    for (auto f : factors) shape.nodes.push_back(f);
    auto lim = detail::make_limit(shape, out);
    Object structured = Object::set(out.size());
    if (c.kind() == Kind::group) {
        std::vector<Object> nodes;
        for (const auto& o : objs) nodes.push_back(D[o.d_index]);
        structured = detail::pointwise_group(nodes, lim);
    } else if (c.kind() == Kind::vect) {
        std::vector<Object> nodes;
        for (const auto& o : objs) nodes.push_back(D[o.d_index]);
        structured = detail::pointwise_vect(nodes, lim, c.as_vect().field_ptr());
    }
    return {std::move(comma), std::move(out), std::move(structured)};
}

/// η(x)_(d,f) = f(x).
inline Family unit_family(const CommaCategory& comma, Elem x) {
    Family fam;
    fam.reserve(comma.objects().size());
    for (const auto& o : comma.objects()) fam.push_back(o.f(x));
    return fam;
}

/// η : c -> T_D(c).
inline FinMap unit(const CodensityObject& T) {
    std::vector<Elem> t;
    for (Elem x = 0; x < T.base().size(); ++x)
        t.push_back(static_cast<Elem>(T.index_of(unit_family(*T.comma, x), "unit family")));
    return {T.base().size(), T.size(), std::move(t)};
}

/// T(g)(x)_(d,f') = x_(d, f'∘g) for g : c -> c'.
inline Family map_family(const CodensityObject& source, const CommaCategory& target_comma, const FinMap& g,
                         const Family& x) {
    Family y;
    y.reserve(target_comma.objects().size());
    for (const auto& o : target_comma.objects()) {
        auto idx = source.comma->find(o.d_index, compose(o.f, g));
        if (!idx) throw StructuralError("functor action: argument is not a morphism of the category");
        y.push_back(x[*idx]);
    }
    return y;
}

/// T(g) : T_D(c) -> T_D(c').
inline FinMap functor_action(const FinMap& g, const CodensityObject& source, const CodensityObject& target) {
    if (g.dom != source.base().size() || g.cod != target.base().size())
        throw StructuralError("functor action: map does not match the base objects");
    std::vector<Elem> t;
    for (const auto& x : source.families)
        t.push_back(static_cast<Elem>(target.index_of(map_family(source, *target.comma, g, x), "functor action")));
    return {source.size(), target.size(), std::move(t)};
}

/// μ(y)_(d,f) = y_(d, ev_f) for y ∈ T_D(T_D(c)), given over the comma
/// category of T_D(c).
inline Family multiply_family(const CodensityObject& T, const CommaCategory& outer, const Family& y) {
    Family out;
    out.reserve(T.comma->objects().size());
    for (std::size_t i = 0; i < T.comma->objects().size(); ++i) {
        const auto d = T.comma->objects()[i].d_index;
        auto idx = outer.find(d, T.evaluation(i));
        if (!idx) throw InternalConsistencyError("evaluation map is not a morphism");
        out.push_back(y[*idx]);
    }
    return out;
}

/// μ : T_D(T_D(c)) -> T_D(c), for TT = codensity_object(T.structured, D).
inline FinMap multiplication(const CodensityObject& T, const CodensityObject& TT) {
    std::vector<Elem> t;
    for (const auto& y : TT.families)
        t.push_back(static_cast<Elem>(T.index_of(multiply_family(T, *TT.comma, y), "multiplication")));
    return {TT.size(), T.size(), std::move(t)};
}

/// Checks unit laws on all of T_D(c), and landing and associativity of μ
/// where T_D(T_D(c)) has at most `exhaustive` elements (and the cap allows);
/// otherwise μ is exercised on `samples` random elements of T_D(T_D(c)).
inline Report check_codensity_monad(const Object& c, const std::vector<Object>& D, std::uint64_t seed = 1,
                                    std::size_t samples = 64, std::uint64_t exhaustive = std::uint64_t{1} << 14) {
    Report r;
    r.title = "D-completion monad laws at " + c.describe();
    const auto T = codensity_object(c, D);
    const CommaCategory outer(T.structured, D);
    const auto eta = unit(T);

    bool left = true, right = true;
    std::string wl, wr;
    for (std::size_t i = 0; i < T.size() && (left || right); ++i) {
        const auto& x = T.families[i];
        // μ ∘ η_T
        Family ex;
        for (const auto& o : outer.objects()) ex.push_back(o.f(static_cast<Elem>(i)));
        if (left && multiply_family(T, outer, ex) != x) {
            left = false;
            wl = "family #" + std::to_string(i);
        }
        // μ ∘ T(η)
        if (right && multiply_family(T, outer, map_family(T, outer, eta, x)) != x) {
            right = false;
            wr = "family #" + std::to_string(i);
        }
    }
    r.add("mu . eta_T = id", left, wl, std::to_string(T.size()) + " families");
    r.add("mu . T(eta) = id", right, wr, std::to_string(T.size()) + " families");

    std::optional<CodensityObject> TT;
    try {
        ScopedEnumerationCap budget(std::min(enumeration_cap(), exhaustive));
        TT = codensity_object(T.structured, D);
    } catch (const EnumerationTooLarge& e) {
        r.note(std::string("T(T(c)) not enumerable: ") + e.what());
    }
    if (TT) {
        bool lands = true;
        std::string w;
        FinMap mu;
        try {
            mu = multiplication(T, *TT);
        } catch (const InternalConsistencyError& e) {
            lands = false;
            w = e.what();
        }
        r.add("mu lands in T(c)", lands, w, std::to_string(TT->size()) + " elements of T(T(c))");
        if (lands) {
            try {
                const auto TTT = codensity_object(TT->structured, D);
                const auto mu_T = multiplication(*TT, TTT);
                const auto T_mu = functor_action(mu, TTT, *TT);
                bool assoc = true;
                std::string wa;
                for (std::size_t z = 0; z < TTT.size() && assoc; ++z)
                    if (mu(mu_T(z)) != mu(T_mu(z))) {
                        assoc = false;
                        wa = "element #" + std::to_string(z) + " of T(T(T(c)))";
                    }
                r.add("mu . mu_T = mu . T(mu)", assoc, wa, std::to_string(TTT.size()) + " elements");
            } catch (const EnumerationTooLarge& e) {
                r.skip("mu . mu_T = mu . T(mu)", e.what());
            }
        }
    } else {
        auto csp = detail::diagram_csp(outer.projection_diagram().underlying());
        std::mt19937_64 rng(seed);
        bool lands = true;
        std::string w;
        for (std::size_t s = 0; s < samples && lands; ++s) {
            auto y = csp.solve_one(&rng);
            if (!y) break;
            if (!T.find(multiply_family(T, outer, *y))) {
                lands = false;
                w = "sample " + std::to_string(s);
            }
        }
        r.add("mu lands in T(c) (sampled)", lands, w, std::to_string(samples) + " random elements of T(T(c))");
        r.skip("mu . mu_T = mu . T(mu)", "T(T(c)) is not enumerable at this size");
    }
    return r;
}

// ---------------------------------------------------------------------------
// T_D on finite sets as a monad with element codes.

/// T_D restricted to FinSet, with element codes = family indices. Objects
/// are computed on demand and cached.
class CodensityMonad final : public Monad {
public:
    explicit CodensityMonad(std::vector<std::size_t> D) : D_(std::move(D)) {
        if (D_.empty()) throw PreconditionViolation("D must be nonempty");
    }

    std::string name() const override {
        std::string s = "T{";
        for (std::size_t i = 0; i < D_.size(); ++i) s += (i ? "," : "") + std::to_string(D_[i]);
        return s + "}";
    }

    const std::vector<std::size_t>& targets() const { return D_; }

    const CodensityObject& at(std::uint64_t n) const {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(n);
        if (it == cache_.end()) {
            std::vector<Object> D;
            for (auto d : D_) D.push_back(Object::set(d));
            it = cache_.emplace(n, codensity_object(Object::set(n), D)).first;
        }
        return it->second;
    }

    std::optional<Nat> size(std::uint64_t n) const override { return Nat(at(n).size()); }

    Nat unit(std::uint64_t n, Elem x) const override {
        const auto& T = at(n);
        return T.index_of(unit_family(*T.comma, x), "unit family");
    }

    Nat map(const FinMap& g, const Nat& m) const override {
        const auto& S = at(g.dom);
        const auto& T = at(g.cod);
        return T.index_of(map_family(S, *T.comma, g, S.families[static_cast<std::size_t>(m)]), "functor action");
    }

    /// (μ ∘ T(k))(m)_(d,f) = m_(d, s ↦ k(s)_(d,f)); never builds T(T(dst)).
    Nat bind(std::uint64_t src, const Nat& m, const std::vector<Nat>& k, std::uint64_t dst) const override {
        const auto& S = at(src);
        const auto& T = at(dst);
        const auto& x = S.families[static_cast<std::size_t>(m)];
        Family out;
        for (const auto& o : T.comma->objects()) {
            const auto i = static_cast<std::size_t>(&o - T.comma->objects().data());
            std::vector<Elem> t(src);
            for (std::size_t s = 0; s < src; ++s) t[s] = T.families[static_cast<std::size_t>(k[s])][i];
            out.push_back(x[*S.comma->find(o.d_index, FinMap(src, D_[o.d_index], std::move(t)))]);
        }
        return T.index_of(out, "bind");
    }

private:
    std::vector<std::size_t> D_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, CodensityObject> cache_;
};

/// The naive double dual X ↦ d^{Set(X,d)} with evaluation unit.
inline std::shared_ptr<const ContinuationMonad> continuation_monad(const Object& d) {
    if (d.kind() != Kind::set) throw PreconditionViolation("double dual is provided for finite sets only");
    if (d.size() > 3) throw PreconditionViolation("double dual is limited to |d| <= 3");
    return std::make_shared<ContinuationMonad>(static_cast<std::uint32_t>(d.size()));
}

// ---------------------------------------------------------------------------
// Terminality.

/// δ_c : F(c) -> T_D(c), δ_c(u)_(d,f) = (η^F_d)^{-1}(F(f)(u)). Requires η^F
/// to be bijective on every d in D.
inline FinMap terminal_map(const CoaugmentedFunctor& F, const CodensityMonad& T, std::uint64_t c) {
    std::map<std::size_t, std::map<Nat, Elem>> inverse;
    for (auto d : T.targets()) {
        const auto s = F.size(d);
        if (!s || *s != d) throw PreconditionViolation("D not preserved by " + F.name() + ": |F(" +
                                                       std::to_string(d) + ")| != " + std::to_string(d));
        auto& inv = inverse[d];
        for (Elem x = 0; x < d; ++x) inv[F.unit(d, x)] = x;
        if (inv.size() != d) throw PreconditionViolation("D not preserved by " + F.name() + ": unit not injective");
    }
    const auto& Tc = T.at(c);
    const auto n = F.enumerable_size(c);
    std::vector<Elem> t(n);
    for (std::uint64_t u = 0; u < n; ++u) {
        Family x;
        for (const auto& o : Tc.comma->objects()) {
            const auto d = T.targets()[o.d_index];
            x.push_back(inverse[d].at(F.map(o.f, Nat(u))));
        }
        auto idx = Tc.find(x);
        if (!idx) throw PreconditionViolation(F.name() + " is not natural: delta(" + std::to_string(u) + ") is not a family");
        t[u] = static_cast<Elem>(*idx);
    }
    return {n, Tc.size(), std::move(t)};
}

/// Naturality of δ over every map between universe objects and δ ∘ η^F = η^T.
inline Report check_terminal_map(const CoaugmentedFunctor& F, const CodensityMonad& T,
                                 const std::vector<std::uint64_t>& universe) {
    Report r;
    r.title = "terminal map " + F.name() + " -> " + T.name();
    std::map<std::uint64_t, FinMap> delta;
    for (auto c : universe) delta.emplace(c, terminal_map(F, T, c));
    bool unit_ok = true, natural = true;
    std::string wu, wn;
    for (auto c : universe) {
        for (Elem x = 0; x < c && unit_ok; ++x)
            if (Nat(delta[c](static_cast<std::size_t>(F.unit(c, x)))) != T.unit(c, x)) {
                unit_ok = false;
                wu = "c=" + std::to_string(c) + ", x=" + std::to_string(x);
            }
        for (auto c2 : universe)
            for (const auto& g : all_maps(c, c2)) {
                if (!natural) break;
                const auto Fg = F.map_table(g);
                for (std::size_t u = 0; u < Fg.dom && natural; ++u)
                    if (Nat(delta[c2](Fg(u))) != T.map(g, delta[c](u))) {
                        natural = false;
                        wn = "g:" + std::to_string(c) + "->" + std::to_string(c2) + ", u=" + std::to_string(u);
                    }
            }
    }
    r.add("delta . eta_F = eta_T", unit_ok, wu);
    r.add("delta natural", natural, wn);
    return r;
}

/// Counts every natural transformation F -> T_D that commutes with the
/// coaugmentations, over all maps between universe objects. The count is
/// stored in data["count"]; the check passes iff it is exactly one.
inline Report uniqueness_audit(const CoaugmentedFunctor& F, const CodensityMonad& T,
                               const std::vector<std::uint64_t>& universe, std::uint64_t budget = 1U << 20) {
    Report r;
    r.title = "uniqueness audit " + F.name() + " -> " + T.name();
    Nat candidates = 1;
    std::vector<std::uint64_t> fsize, tsize;
    for (auto c : universe) {
        fsize.push_back(F.enumerable_size(c));
        tsize.push_back(T.at(c).size());
        candidates *= boost::multiprecision::pow(Nat(tsize.back()), static_cast<unsigned>(fsize.back()));
    }
    r.data["candidates"] = candidates.str();
    if (candidates > budget) {
        r.skip("exactly one natural transformation", "candidate space " + candidates.str() + " exceeds " +
                                                         std::to_string(budget));
        return r;
    }
    FunctionalCsp csp;
    std::vector<std::size_t> first;  // variable of (c, u) is first[c] + u
    for (std::size_t i = 0; i < universe.size(); ++i) {
        first.push_back(csp.variable_count());
        for (std::uint64_t u = 0; u < fsize[i]; ++u) csp.add_variable(tsize[i]);
    }
    for (std::size_t i = 0; i < universe.size(); ++i) {
        const auto c = universe[i];
        for (Elem x = 0; x < c; ++x)
            csp.fix(first[i] + static_cast<std::size_t>(F.unit(c, x)), static_cast<Elem>(T.unit(c, x)));
        for (std::size_t j = 0; j < universe.size(); ++j)
            for (const auto& g : all_maps(c, universe[j])) {
                const auto Fg = F.map_table(g);
                std::vector<Elem> Tg(tsize[i]);
                for (std::size_t m = 0; m < tsize[i]; ++m) Tg[m] = static_cast<Elem>(T.map(g, Nat(m)));
                for (std::size_t u = 0; u < fsize[i]; ++u) csp.add_map_constraint(first[i] + u, first[j] + Fg(u), Tg);
            }
    }
    const auto solutions = csp.solve_all();
    r.data["count"] = solutions.size();
    r.add("exactly one natural transformation", solutions.size() == 1,
          std::to_string(solutions.size()) + " coaugmentation-compatible natural transformations found",
          "universe of " + std::to_string(universe.size()) + " objects");
    return r;
}

// JSON family encoding: {"base": object, "D": [objects], "values": [[d_index, f_table, x], ...]}.

inline nlohmann::json family_to_json(const CodensityObject& T, const Family& x) {
    nlohmann::json j;
    j["base"] = object_to_json(T.base());
    j["D"] = nlohmann::json::array();
    for (const auto& d : T.targets()) j["D"].push_back(object_to_json(d));
    j["values"] = nlohmann::json::array();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& o = T.comma->objects()[i];
        j["values"].push_back({o.d_index, o.f.table, x[i]});
    }
    return j;
}

/// Inverse of family_to_json against an already computed T_D(c). Throws
/// StructuralError if the values do not form a family of T.
inline Family family_from_json(const CodensityObject& T, const nlohmann::json& j) {
    Family x(T.comma->objects().size(), kNoValue);
    for (const auto& v : j.at("values")) {
        const auto d = v.at(0).get<std::size_t>();
        if (d >= T.targets().size()) throw StructuralError("family value names a missing object of D");
        FinMap f(T.base().size(), T.targets()[d].size(), v.at(1).get<std::vector<Elem>>());
        auto idx = T.comma->find(d, f);
        if (!idx) throw StructuralError("family value at a non-morphism");
        x[*idx] = v.at(2).get<Elem>();
    }
    if (std::find(x.begin(), x.end(), kNoValue) != x.end()) throw StructuralError("family is missing values");
    if (!T.find(x)) throw StructuralError("values do not form a natural family");
    return x;
}

}  // namespace tmon
