#pragma once

// Monad-law checking, the terminal monad T_M as the pointwise equalizer of
// M(η), η_M : M ⇉ M², and monad morphisms.
//
// Laws are checked on a finite universe of objects with all maps between
// them. Where M(M(X)) has representable codes the unit laws are checked in
// μ-form on every element; otherwise they are checked in bind form.
// Associativity and multiplicativity quantify over Kleisli arrows, and are
// exhaustive under a budget and sampled above it.

#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "tmon/error.hpp"
#include "tmon/finset.hpp"
#include "tmon/functor.hpp"
#include "tmon/report.hpp"

namespace tmon {

using Universe = std::vector<std::uint64_t>;

inline Universe default_universe() { return {0, 1, 2, 3}; }

inline std::string universe_string(const Universe& u) {
    std::string s = "{";
    for (std::size_t i = 0; i < u.size(); ++i) s += (i ? "," : "") + std::to_string(u[i]);
    return s + "}";
}

struct LawOptions {
    std::uint64_t seed = 1;
    std::size_t samples = 64;                        // per object triple, when not exhaustive
    std::uint64_t exhaustive_budget = 1U << 14;      // Kleisli instances per object triple
};

namespace detail {

/// Uniform code in [0, bound).
inline Nat random_below(std::mt19937_64& rng, const Nat& bound) {
    if (bound <= std::numeric_limits<std::uint64_t>::max()) {
        std::uniform_int_distribution<std::uint64_t> d(0, static_cast<std::uint64_t>(bound - 1));
        return d(rng);
    }
    const auto bits = msb(bound) + 1;
    while (true) {
        Nat v = 0;
        for (unsigned b = 0; b < bits; b += 64) v |= Nat(rng()) << b;
        v &= (Nat(1) << bits) - 1;
        if (v < bound) return v;
    }
}

inline std::string code_string(const Nat& m) {
    auto s = m.str();
    return s.size() > 24 ? s.substr(0, 10) + "..(" + std::to_string(s.size()) + " digits)" : s;
}

/// Calls `visit(k)` for Kleisli arrows k : a -> M(b): every one when there
/// are at most `budget`, otherwise `samples` random ones.
inline bool for_kleisli(std::uint64_t a, std::uint64_t mb, std::uint64_t budget, std::size_t samples,
                        std::mt19937_64& rng, const std::function<bool(const std::vector<Nat>&)>& visit) {
    const auto count = saturating_pow(mb, a);
    std::vector<Nat> k(a, 0);
    if (mb == 0) return a == 0 ? visit(k) : true;
    if (count <= budget) {
        for (std::uint64_t c = 0; c < count; ++c) {
            if (!visit(k)) return false;
            for (std::size_t p = a; p-- > 0;) {
                if (++k[p] < mb) break;
                k[p] = 0;
            }
        }
        return true;
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, mb - 1);
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& v : k) v = pick(rng);
        if (!visit(k)) return false;
    }
    return true;
}

/// |M(n)| when M(n) has representable codes, without letting an oversized
/// computation escape.
inline std::optional<Nat> representable_size(const CoaugmentedFunctor& M, std::uint64_t n) {
    try {
        return M.size(n);
    } catch (const EnumerationTooLarge&) {
        return std::nullopt;
    }
}

inline std::vector<Nat> random_kleisli(std::mt19937_64& rng, std::uint64_t a, std::uint64_t mb) {
    std::vector<Nat> k(a);
    for (auto& v : k) v = random_below(rng, mb);
    return k;
}

struct UniverseTables {
    std::map<std::uint64_t, std::uint64_t> size;  // |M(X)|
    struct Arrow {
        FinMap g;
        FinMap Mg;
    };
    std::vector<Arrow> arrows;
};

inline UniverseTables tabulate(const CoaugmentedFunctor& M, const Universe& universe) {
    UniverseTables t;
    for (auto n : universe) t.size[n] = M.enumerable_size(n);
    for (auto a : universe)
        for (auto b : universe)
            for (auto& g : all_maps(a, b)) t.arrows.push_back({g, M.map_table(g)});
    return t;
}

}  // namespace detail

/// Functor laws and naturality of the unit over all maps between universe
/// objects.
inline Report check_functor_laws(const CoaugmentedFunctor& M, const Universe& universe) {
    Report r;
    r.title = M.name() + " functor laws on " + universe_string(universe);
    const auto t = detail::tabulate(M, universe);
    bool ident = true, comp = true, nat = true;
    std::string wi, wc, wn;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<const detail::UniverseTables::Arrow*>> by_ends;
    for (const auto& a : t.arrows) by_ends[{a.g.dom, a.g.cod}].push_back(&a);
    for (auto n : universe) {
        const auto& Mid = by_ends[{n, n}];
        for (const auto* a : Mid)
            if (a->g == identity(n) && a->Mg != identity(t.size.at(n))) {
                ident = false;
                wi = "M(id_" + std::to_string(n) + ") != id";
            }
    }
    for (const auto& f : t.arrows)
        for (auto c : universe)
            for (const auto* g : by_ends[{f.g.cod, c}]) {
                if (!comp) break;
                const auto gf = compose(g->g, f.g);
                const auto* Mgf = *std::find_if(by_ends[{f.g.dom, c}].begin(), by_ends[{f.g.dom, c}].end(),
                                                [&](const auto* a) { return a->g == gf; });
                if (Mgf->Mg != compose(g->Mg, f.Mg)) {
                    comp = false;
                    wc = "f=" + nlohmann::json(f.g.table).dump() + ", g=" + nlohmann::json(g->g.table).dump();
                }
            }
    for (const auto& a : t.arrows)
        for (Elem x = 0; x < a.g.dom && nat; ++x)
            if (Nat(a.Mg(static_cast<std::size_t>(M.unit(a.g.dom, x)))) != M.unit(a.g.cod, a.g(x))) {
                nat = false;
                wn = "g=" + nlohmann::json(a.g.table).dump() + ", x=" + std::to_string(x);
            }
    r.add("M(id) = id", ident, wi);
    r.add("M(g . f) = M(g) . M(f)", comp, wc, std::to_string(t.arrows.size()) + " maps");
    r.add("eta natural", nat, wn);
    return r;
}

/// All monad laws on the universe; failures name law, object and element.
inline Report check_monad_laws(const Monad& M, const Universe& universe = default_universe(), LawOptions opt = {}) {
    Report r = check_functor_laws(M, universe);
    r.title = M.name() + " monad laws on " + universe_string(universe);
    const auto t = detail::tabulate(M, universe);
    std::mt19937_64 rng(opt.seed);

    // bind(m, η ∘ f) = M(f)(m) ties the Kleisli extension to the arrow action.
    bool coherent = true;
    std::string wcoh;
    for (const auto& a : t.arrows) {
        std::vector<Nat> k;
        for (Elem x = 0; x < a.g.dom; ++x) k.push_back(M.unit(a.g.cod, a.g(x)));
        for (std::uint64_t m = 0; m < t.size.at(a.g.dom) && coherent; ++m)
            if (M.bind(a.g.dom, m, k, a.g.cod) != Nat(a.Mg(m))) {
                coherent = false;
                wcoh = "g=" + nlohmann::json(a.g.table).dump() + ", m=" + std::to_string(m);
            }
    }
    r.add("bind(m, eta . f) = M(f)(m)", coherent, wcoh);

    // Unit laws.
    bool left = true, right = true;
    std::string wl, wr;
    std::vector<std::string> forms;
    for (auto n : universe) {
        const auto s = t.size.at(n);
        std::vector<Nat> eta;
        for (Elem x = 0; x < n; ++x) eta.push_back(M.unit(n, x));
        const bool mu_form = detail::representable_size(M, s).has_value();
        forms.push_back(std::to_string(n) + (mu_form ? ":mu" : ":bind"));
        for (std::uint64_t m = 0; m < s && right; ++m) {
            // μ ∘ M(η) = id is bind(m, η) = m in either form.
            const Nat got = mu_form ? M.multiply(n, M.map(M.unit_map(n), m)) : M.bind(n, m, eta, n);
            if (got != m) {
                right = false;
                wr = "X=" + std::to_string(n) + ", m=" + std::to_string(m);
            }
        }
        if (mu_form) {
            for (std::uint64_t m = 0; m < s && left; ++m)
                if (M.multiply(n, M.unit(s, static_cast<Elem>(m))) != m) {
                    left = false;
                    wl = "X=" + std::to_string(n) + ", m=" + std::to_string(m);
                }
        } else {
            // bind(η(x), k) = k(x) for every x and every value of k(x).
            for (auto b : universe)
                for (Elem x = 0; x < n && left; ++x)
                    for (std::uint64_t v = 0; v < t.size.at(b) && left; ++v) {
                        std::vector<Nat> k(n);
                        for (auto& e : k) e = detail::random_below(rng, t.size.at(b));
                        k[x] = v;
                        if (M.bind(n, eta[x], k, b) != v) {
                            left = false;
                            wl = "X=" + std::to_string(n) + ", x=" + std::to_string(x) + ", k(x)=" + std::to_string(v);
                        }
                    }
        }
    }
    std::string form_detail;
    for (const auto& f : forms) form_detail += (form_detail.empty() ? "" : " ") + f;
    r.add("mu . eta_M = id", left, wl, form_detail);
    r.add("mu . M(eta) = id", right, wr, form_detail);

    // Associativity: bind(bind(m, k), l) = bind(m, y ↦ bind(k(y), l)), and
    // naturality of μ: M(f)(bind(m, k)) = bind(m, M(f) ∘ k).
    constexpr auto kAll = std::numeric_limits<std::uint64_t>::max();
    bool assoc = true, mu_nat = true, sampled = false;
    std::string wa, wm;
    auto assoc_at = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c, const Nat& m, const std::vector<Nat>& k,
                        const std::vector<Nat>& l) {
        std::vector<Nat> kl(a);
        for (std::size_t y = 0; y < a; ++y) kl[y] = M.bind(b, k[y], l, c);
        if (M.bind(b, M.bind(a, m, k, b), l, c) == M.bind(a, m, kl, c)) return true;
        assoc = false;
        wa = "X=" + std::to_string(a) + ", Y=" + std::to_string(b) + ", Z=" + std::to_string(c) +
             ", m=" + detail::code_string(m);
        return false;
    };
    for (auto a : universe)
        for (auto b : universe)
            for (auto c : universe) {
                if (!assoc) break;
                const auto sa = t.size.at(a), sb = t.size.at(b), sc = t.size.at(c);
                if (sa == 0 || (a > 0 && sb == 0) || (b > 0 && sc == 0)) continue;
                const Nat instances = Nat(sa) * saturating_pow(sb, a) * saturating_pow(sc, b);
                if (instances <= opt.exhaustive_budget) {
                    detail::for_kleisli(a, sb, kAll, 0, rng, [&](const std::vector<Nat>& k) {
                        return detail::for_kleisli(b, sc, kAll, 0, rng, [&](const std::vector<Nat>& l) {
                            for (std::uint64_t m = 0; m < sa; ++m)
                                if (!assoc_at(a, b, c, m, k, l)) return false;
                            return true;
                        });
                    });
                    continue;
                }
                sampled = true;
                for (std::size_t i = 0; i < opt.samples && assoc; ++i)
                    assoc_at(a, b, c, detail::random_below(rng, sa), detail::random_kleisli(rng, a, sb),
                             detail::random_kleisli(rng, b, sc));
            }
    for (const auto& f : t.arrows)
        for (auto src : universe) {
            if (!mu_nat) break;
            const auto ss = t.size.at(src), sa = t.size.at(f.g.dom);
            if (ss == 0 || (src > 0 && sa == 0)) continue;
            auto check = [&](const Nat& m, const std::vector<Nat>& k) {
                std::vector<Nat> fk;
                for (const auto& v : k) fk.push_back(f.Mg(static_cast<std::size_t>(v)));
                if (Nat(f.Mg(static_cast<std::size_t>(M.bind(src, m, k, f.g.dom)))) == M.bind(src, m, fk, f.g.cod))
                    return true;
                mu_nat = false;
                wm = "f=" + nlohmann::json(f.g.table).dump() + ", m=" + detail::code_string(m);
                return false;
            };
            if (Nat(ss) * saturating_pow(sa, src) <= opt.exhaustive_budget) {
                detail::for_kleisli(src, sa, kAll, 0, rng, [&](const std::vector<Nat>& k) {
                    for (std::uint64_t m = 0; m < ss; ++m)
                        if (!check(m, k)) return false;
                    return true;
                });
            } else {
                sampled = true;
                for (std::size_t i = 0; i < opt.samples && mu_nat; ++i)
                    check(detail::random_below(rng, ss), detail::random_kleisli(rng, src, sa));
            }
        }
    const std::string how = sampled ? "bind form, sampled above budget" : "bind form, exhaustive";
    r.add("mu . mu_M = mu . M(mu)", assoc, wa, how);
    r.add("mu natural", mu_nat, wm, how);
    return r;
}

// ---------------------------------------------------------------------------
// Terminal monad.

/// T_M(X) = {m ∈ M(X) | M(η_X)(m) = η_{M(X)}(m)}, with the arrow action,
/// unit and multiplication restricted from M. Element codes of T_M(X) index
/// the sorted member codes of M(X). Every restriction is checked to land and
/// throws StructureTransportFailed otherwise.
class TerminalMonad final : public Monad {
public:
    explicit TerminalMonad(MonadPtr base) : base_(std::move(base)) {}

    std::string name() const override { return "T[" + base_->name() + "]"; }
    const Monad& base() const { return *base_; }
    MonadPtr base_ptr() const { return base_; }

    /// Codes in M(n) of the elements of T_M(n), ascending.
    const std::vector<Nat>& members(std::uint64_t n) const {
        {
            std::lock_guard lock(mutex_);
            auto it = cache_.find(n);
            if (it != cache_.end()) return it->second;
        }
        const auto s = base_->enumerable_size(n);
        std::vector<Nat> out;
        for (std::uint64_t m = 0; m < s; ++m) {
            const auto eq = base_->equalizes(n, m);
            if (!eq)
                throw EnumerationTooLarge("equalizer of " + base_->name() + " at " + std::to_string(n) +
                                          " cannot be evaluated");
            if (*eq) out.push_back(m);
        }
        std::lock_guard lock(mutex_);
        return cache_.emplace(n, std::move(out)).first->second;
    }

    std::optional<Nat> size(std::uint64_t n) const override {
        try {
            return Nat(members(n).size());
        } catch (const EnumerationTooLarge&) {
            return std::nullopt;
        }
    }

    Nat unit(std::uint64_t n, Elem x) const override {
        return locate(n, base_->unit(n, x), "unit at " + std::to_string(n) + ", x=" + std::to_string(x));
    }

    Nat map(const FinMap& g, const Nat& m) const override {
        return locate(g.cod, base_->map(g, member(g.dom, m)),
                      "arrow action of " + nlohmann::json(g.table).dump() + " at element " + m.str());
    }

    Nat bind(std::uint64_t src, const Nat& m, const std::vector<Nat>& k, std::uint64_t dst) const override {
        std::vector<Nat> kc;
        kc.reserve(k.size());
        for (const auto& v : k) kc.push_back(member(dst, v));
        return locate(dst, base_->bind(src, member(src, m), kc, dst),
                      "multiplication at " + std::to_string(src) + " -> " + std::to_string(dst));
    }

    Nat member(std::uint64_t n, const Nat& code) const { return members(n).at(static_cast<std::size_t>(code)); }

private:
    MonadPtr base_;
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::vector<Nat>> cache_;

    Nat locate(std::uint64_t n, const Nat& code, const std::string& what) const {
        const auto& mem = members(n);
        auto it = std::lower_bound(mem.begin(), mem.end(), code);
        if (it == mem.end() || *it != code)
            throw StructureTransportFailed(what + " leaves the equalizer (code " + detail::code_string(code) + ")");
        return static_cast<std::uint64_t>(it - mem.begin());
    }
};

inline std::shared_ptr<const TerminalMonad> terminal_monad(MonadPtr M) {
    return std::make_shared<const TerminalMonad>(std::move(M));
}

// ---------------------------------------------------------------------------
// Monad morphisms.

struct MonadMorphism {
    std::string name;
    MonadPtr source;
    MonadPtr target;
    std::function<Nat(std::uint64_t, const Nat&)> component;  // f_X on codes
};

inline MonadMorphism inclusion_morphism(const std::shared_ptr<const TerminalMonad>& T) {
    return {T->name() + " -> " + T->base().name(), T, T->base_ptr(),
            [T](std::uint64_t n, const Nat& m) { return T->member(n, m); }};
}

inline MonadMorphism unit_morphism(MonadPtr M) {
    return {"Id -> " + M->name(), std::make_shared<IdentityMonad>(), M,
            [M](std::uint64_t n, const Nat& x) { return M->unit(n, static_cast<Elem>(x)); }};
}

inline MonadMorphism to_constant_morphism(MonadPtr M) {
    return {M->name() + " -> Const1", M, std::make_shared<ConstantMonad>(),
            [](std::uint64_t, const Nat&) { return Nat(0); }};
}

inline MonadMorphism identity_morphism(MonadPtr M) {
    return {"id " + M->name(), M, M, [](std::uint64_t, const Nat& m) { return m; }};
}

/// Naturality, f ∘ η_M = η_N, and f(bind_M(m, k)) = bind_N(f(m), f ∘ k).
inline Report check_monad_morphism(const MonadMorphism& f, const Universe& universe = default_universe(),
                                   LawOptions opt = {}) {
    Report r;
    r.title = "monad morphism " + f.name + " on " + universe_string(universe);
    const auto& M = *f.source;
    const auto& N = *f.target;
    std::mt19937_64 rng(opt.seed);
    std::map<std::uint64_t, std::vector<Nat>> comp;
    for (auto n : universe) {
        const auto s = M.enumerable_size(n);
        const auto t = N.size(n);
        for (std::uint64_t m = 0; m < s; ++m) {
            auto v = f.component(n, m);
            if (!t || v >= *t) throw StructuralError("morphism component leaves its target at " + std::to_string(n));
            comp[n].push_back(std::move(v));
        }
    }
    bool nat = true, unit_ok = true, mult = true;
    std::string wn, wu, wm;
    for (auto a : universe)
        for (auto b : universe)
            for (const auto& g : all_maps(a, b))
                for (std::size_t m = 0; m < comp[a].size() && nat; ++m)
                    if (comp[b][static_cast<std::size_t>(M.map(g, m))] != N.map(g, comp[a][m])) {
                        nat = false;
                        wn = "g=" + nlohmann::json(g.table).dump() + ", m=" + std::to_string(m);
                    }
    for (auto n : universe)
        for (Elem x = 0; x < n && unit_ok; ++x)
            if (comp[n][static_cast<std::size_t>(M.unit(n, x))] != N.unit(n, x)) {
                unit_ok = false;
                wu = "X=" + std::to_string(n) + ", x=" + std::to_string(x);
            }
    for (auto a : universe)
        for (auto b : universe) {
            if (!mult) break;
            detail::for_kleisli(a, comp[b].size(), opt.exhaustive_budget, opt.samples, rng, [&](const std::vector<Nat>& k) {
                std::vector<Nat> fk;
                for (const auto& v : k) fk.push_back(comp[b][static_cast<std::size_t>(v)]);
                for (std::size_t m = 0; m < comp[a].size(); ++m)
                    if (comp[b][static_cast<std::size_t>(M.bind(a, m, k, b))] != N.bind(a, comp[a][m], fk, b)) {
                        mult = false;
                        wm = "X=" + std::to_string(a) + " -> " + std::to_string(b) + ", m=" + std::to_string(m);
                        return false;
                    }
                return true;
            });
        }
    r.add("f natural", nat, wn);
    r.add("f . eta_M = eta_N", unit_ok, wu);
    r.add("f . mu_M = mu_N . (f*f)", mult, wm, "bind form");
    return r;
}

/// Whether η_{M(X)} : M(X) -> T_M(M(X)) is a bijection, i.e. the
/// equalizer at M(X) is exactly the unit image.
inline Check image_preservation(const Monad& M, std::uint64_t n) {
    const std::string name = "T(M(" + std::to_string(n) + ")) = M(" + std::to_string(n) + ") via unit";
    const auto s = M.enumerable_size(n);
    const auto ss = detail::representable_size(M, s);
    if (!ss) return {name, Verdict::skipped, {}, "M(M(X)) has unrepresentable elements"};
    if (*ss > enumeration_cap())
        return {name, Verdict::skipped, {}, "M(M(X)) has " + detail::code_string(*ss) + " elements"};
    const auto total = static_cast<std::uint64_t>(*ss);
    std::vector<Nat> eq;
    for (std::uint64_t w = 0; w < total; ++w) {
        auto e = M.equalizes(s, w);
        if (!e) return {name, Verdict::skipped, {}, "equalizer at M(X) cannot be evaluated"};
        if (*e) eq.push_back(w);
    }
    std::vector<Nat> img;
    for (std::uint64_t m = 0; m < s; ++m) img.push_back(M.unit(s, static_cast<Elem>(m)));
    std::sort(img.begin(), img.end());
    const bool ok = img == eq && std::adjacent_find(img.begin(), img.end()) == img.end();
    std::string w;
    if (!ok) w = "|T(M(X))| = " + std::to_string(eq.size()) + ", |M(X)| = " + std::to_string(s);
    return {name, ok ? Verdict::pass : Verdict::fail, w, std::to_string(total) + " candidates"};
}

/// Full terminal-monad report: equalizer tables, subfunctor closure, unit
/// factorization, laws of T_M, the inclusion as a monad morphism and image
/// preservation at every universe object.
inline Report terminal_monad_report(const MonadPtr& M, const Universe& universe = default_universe(),
                                    LawOptions opt = {}) {
    Report r;
    r.title = "terminal monad of " + M->name() + " on " + universe_string(universe);
    auto T = terminal_monad(M);
    bool idempotent_input = true;
    for (auto n : universe) {
        const auto& mem = T->members(n);
        std::vector<std::string> codes;
        for (const auto& m : mem) codes.push_back(detail::code_string(m));
        std::vector<std::string> units;
        for (Elem x = 0; x < n; ++x) units.push_back(detail::code_string(M->unit(n, x)));
        r.data["objects"].push_back({{"X", n},
                                     {"M", M->enumerable_size(n)},
                                     {"T", mem.size()},
                                     {"members", codes},
                                     {"unit_image", units}});
        if (Nat(mem.size()) != *M->size(n)) idempotent_input = false;
    }
    r.data["T_equals_M"] = idempotent_input;

    bool closed = true;
    std::string wc;
    for (auto a : universe)
        for (auto b : universe)
            for (const auto& g : all_maps(a, b))
                for (const auto& m : T->members(a)) {
                    if (!closed) break;
                    const auto img = M->map(g, m);
                    const auto& mb = T->members(b);
                    if (!std::binary_search(mb.begin(), mb.end(), img)) {
                        closed = false;
                        wc = "g=" + nlohmann::json(g.table).dump() + ", m=" + detail::code_string(m);
                    }
                }
    r.add("M(g) maps T(X) into T(Y)", closed, wc);

    bool unit_in = true;
    std::string wu;
    for (auto n : universe)
        for (Elem x = 0; x < n && unit_in; ++x) {
            const auto& mem = T->members(n);
            if (!std::binary_search(mem.begin(), mem.end(), M->unit(n, x))) {
                unit_in = false;
                wu = "X=" + std::to_string(n) + ", x=" + std::to_string(x);
            }
        }
    r.add("eta factors through T(X)", unit_in, wu);

    try {
        r.merge(check_monad_laws(*T, universe, opt), "T laws");
        r.merge(check_monad_morphism(inclusion_morphism(T), universe, opt), "inclusion");
    } catch (const StructureTransportFailed& e) {
        r.add("structure transport", false, e.what());
    }
    for (auto n : universe) {
        auto c = image_preservation(*M, n);
        r.checks.push_back(std::move(c));
    }
    return r;
}

}  // namespace tmon
