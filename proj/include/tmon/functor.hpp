#pragma once

// Coaugmented endofunctors and monads on finite sets.
//
// Objects are finite sets given by their cardinality. Elements of F(n) are
// coded by natural numbers 0..|F(n)|-1, so element codes double as indices
// in the canonical enumeration of F(n). Codes are arbitrary-precision: an
// element of P(P(P(3))) is a 256-bit number even though the set itself can
// never be enumerated.
//
// Monads are given as Kleisli triples (size, unit, bind); the functor action
// is independent data and the monad laws tie them together. Multiplication
// is bind along the identity of M(n).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmon/error.hpp"
#include "tmon/finset.hpp"
#include "tmon/group.hpp"

namespace tmon {

class CoaugmentedFunctor {
public:
    virtual ~CoaugmentedFunctor() = default;

    virtual std::string name() const = 0;

    /// |F(n)|, or nullopt when element codes of F(n) are too large to hold.
    virtual std::optional<Nat> size(std::uint64_t n) const = 0;

    /// η_n(x)
    virtual Nat unit(std::uint64_t n, Elem x) const = 0;

    /// F(g)(m)
    virtual Nat map(const FinMap& g, const Nat& m) const = 0;

    /// |F(n)| when it is under the enumeration cap; throws otherwise.
    std::uint64_t enumerable_size(std::uint64_t n) const {
        auto s = size(n);
        if (!s) throw EnumerationTooLarge(name() + "(" + std::to_string(n) + ") has unrepresentable elements");
        check_cap(*s, name() + "(" + std::to_string(n) + ")");
        return static_cast<std::uint64_t>(*s);
    }

    /// η_n as a map n -> F(n).
    FinMap unit_map(std::uint64_t n) const {
        const auto s = enumerable_size(n);
        std::vector<Elem> t(n);
        for (Elem x = 0; x < n; ++x) t[x] = static_cast<Elem>(unit(n, x));
        return {n, s, std::move(t)};
    }

    /// F(g) as a map F(dom) -> F(cod).
    FinMap map_table(const FinMap& g) const {
        const auto s = enumerable_size(g.dom);
        const auto t = enumerable_size(g.cod);
        std::vector<Elem> tab(s);
        for (std::uint64_t m = 0; m < s; ++m) tab[m] = static_cast<Elem>(map(g, Nat(m)));
        return {s, t, std::move(tab)};
    }
};

class Monad : public CoaugmentedFunctor {
public:
    /// μ_dst ∘ M(k) at m ∈ M(src), for k : src -> M(dst) given by codes.
    virtual Nat bind(std::uint64_t src, const Nat& m, const std::vector<Nat>& k, std::uint64_t dst) const = 0;

    /// μ_n(w) for w ∈ M(M(n)).
    Nat multiply(std::uint64_t n, const Nat& w) const {
        const auto s = enumerable_size(n);
        std::vector<Nat> id(s);
        for (std::uint64_t i = 0; i < s; ++i) id[i] = i;
        return bind(s, w, id, n);
    }

    /// Whether m ∈ M(n) is equalized by M(η_n), η_{M(n)} : M(n) ⇉ M(M(n)).
    /// nullopt when the comparison cannot be carried out at this size.
    virtual std::optional<bool> equalizes(std::uint64_t n, const Nat& m) const {
        const auto s = enumerable_size(n);
        if (!size(s)) return std::nullopt;
        return map(unit_map(n), m) == unit(s, static_cast<Elem>(m));
    }
};

using MonadPtr = std::shared_ptr<const Monad>;
using FunctorPtr = std::shared_ptr<const CoaugmentedFunctor>;

// Bit and digit helpers for codes that spell out functions.

namespace detail {

// Beyond this many digits a code is not considered representable.
inline constexpr std::uint64_t kMaxCodeDigits = std::uint64_t{1} << 17;

inline std::vector<std::uint8_t> digits(const Nat& code, std::uint32_t base, std::size_t count) {
    std::vector<std::uint8_t> out(count, 0);
    if (base == 2) {
        for (std::size_t i = 0; i < count; ++i) out[i] = bit_test(code, static_cast<unsigned>(i)) ? 1 : 0;
        return out;
    }
    Nat c = code;
    for (std::size_t i = 0; i < count && c != 0; ++i) {
        out[i] = static_cast<std::uint8_t>(static_cast<unsigned>(c % base));
        c /= base;
    }
    return out;
}

inline Nat from_digits(const std::vector<std::uint8_t>& ds, std::uint32_t base) {
    Nat c = 0;
    if (base == 2) {
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds[i]) bit_set(c, static_cast<unsigned>(i));
        return c;
    }
    for (std::size_t i = ds.size(); i-- > 0;) c = c * base + ds[i];
    return c;
}

inline std::uint64_t pow_u64(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace detail

class IdentityMonad final : public Monad {
public:
    std::string name() const override { return "Id"; }
    std::optional<Nat> size(std::uint64_t n) const override { return Nat(n); }
    Nat unit(std::uint64_t, Elem x) const override { return x; }
    Nat map(const FinMap& g, const Nat& m) const override { return g(static_cast<std::size_t>(m)); }
    Nat bind(std::uint64_t, const Nat& m, const std::vector<Nat>& k, std::uint64_t) const override {
        return k[static_cast<std::size_t>(m)];
    }
};

/// X ↦ X ⊔ {*}, with * coded as n.
class MaybeMonad final : public Monad {
public:
    std::string name() const override { return "Maybe"; }
    std::optional<Nat> size(std::uint64_t n) const override { return Nat(n + 1); }
    Nat unit(std::uint64_t, Elem x) const override { return x; }
    Nat map(const FinMap& g, const Nat& m) const override {
        return m < g.dom ? Nat(g(static_cast<std::size_t>(m))) : Nat(g.cod);
    }
    Nat bind(std::uint64_t src, const Nat& m, const std::vector<Nat>& k, std::uint64_t dst) const override {
        return m < src ? k[static_cast<std::size_t>(m)] : Nat(dst);
    }
};

/// X ↦ X × G with (x, g) coded as x·|G| + g.
class WriterMonad final : public Monad {
public:
    explicit WriterMonad(Group g, std::string label = "G") : g_(std::move(g)), label_(std::move(label)) {}
    std::string name() const override { return "Writer(" + label_ + ")"; }
    const Group& group() const { return g_; }
    std::optional<Nat> size(std::uint64_t n) const override { return Nat(n * g_.size()); }
    Nat unit(std::uint64_t, Elem x) const override { return Nat(x) * g_.size() + g_.identity(); }
    Nat map(const FinMap& f, const Nat& m) const override {
        const auto c = static_cast<std::uint64_t>(m);
        return Nat(f(c / g_.size())) * g_.size() + c % g_.size();
    }
    Nat bind(std::uint64_t, const Nat& m, const std::vector<Nat>& k, std::uint64_t) const override {
        const auto c = static_cast<std::uint64_t>(m);
        const auto inner = static_cast<std::uint64_t>(k[c / g_.size()]);
        const auto h = g_.mul(static_cast<Elem>(c % g_.size()), static_cast<Elem>(inner % g_.size()));
        return Nat(inner / g_.size()) * g_.size() + h;
    }

private:
    Group g_;
    std::string label_;
};

/// Covariant powerset with union as multiplication; subsets coded as
/// bitmasks. With `nonempty` set, only nonempty subsets, coded as mask - 1.
class PowersetMonad final : public Monad {
public:
    explicit PowersetMonad(bool nonempty = false) : nonempty_(nonempty) {}
    std::string name() const override { return nonempty_ ? "Powerset+" : "Powerset"; }
    std::optional<Nat> size(std::uint64_t n) const override {
        if (n > detail::kMaxCodeDigits) return std::nullopt;
        Nat s = Nat(1) << static_cast<unsigned>(n);
        return nonempty_ ? s - 1 : s;
    }
    Nat unit(std::uint64_t, Elem x) const override { return code(Nat(1) << x); }
    Nat map(const FinMap& g, const Nat& m) const override {
        const Nat mask = decode(m);
        Nat out = 0;
        for (std::size_t i = 0; i < g.dom; ++i)
            if (bit_test(mask, static_cast<unsigned>(i))) bit_set(out, g(i));
        return code(out);
    }
    Nat bind(std::uint64_t src, const Nat& m, const std::vector<Nat>& k, std::uint64_t) const override {
        const Nat mask = decode(m);
        Nat out = 0;
        for (std::size_t y = 0; y < src; ++y)
            if (bit_test(mask, static_cast<unsigned>(y))) out |= decode(k[y]);
        return code(out);
    }

private:
    bool nonempty_;
    Nat decode(const Nat& c) const { return nonempty_ ? c + 1 : c; }
    Nat code(const Nat& mask) const { return nonempty_ ? mask - 1 : mask; }
};

/// The naive double dual X ↦ d^{Set(X,d)}. An element φ is coded by the
/// base-d number whose digit at position map_index(h) is φ(h).
class ContinuationMonad final : public Monad {
public:
    explicit ContinuationMonad(std::uint32_t d) : d_(d) {
        if (d < 2) throw PreconditionViolation("double dual needs |d| >= 2");
    }
    std::string name() const override { return "DD" + std::to_string(d_); }
    std::uint32_t base() const { return d_; }

    std::optional<Nat> size(std::uint64_t n) const override {
        const auto maps = hom_count(n);
        if (!maps) return std::nullopt;
        return boost::multiprecision::pow(Nat(d_), static_cast<unsigned>(*maps));
    }

    Nat unit(std::uint64_t n, Elem x) const override {
        const auto maps = require_hom_count(n);
        std::vector<std::uint8_t> ds(maps);
        for (std::uint64_t h = 0; h < maps; ++h) ds[h] = static_cast<std::uint8_t>(value_at(h, n, x));
        return detail::from_digits(ds, d_);
    }

    Nat map(const FinMap& g, const Nat& m) const override {
        const auto src = detail::digits(m, d_, require_hom_count(g.dom));
        const auto maps = require_hom_count(g.cod);
        std::vector<std::uint8_t> ds(maps);
        for (std::uint64_t h = 0; h < maps; ++h) {
            std::uint64_t hg = 0;  // index of h ∘ g
            for (std::size_t x = 0; x < g.dom; ++x) hg = hg * d_ + value_at(h, g.cod, g(x));
            ds[h] = src[hg];
        }
        return detail::from_digits(ds, d_);
    }

    Nat bind(std::uint64_t src, const Nat& m, const std::vector<Nat>& k, std::uint64_t dst) const override {
        const auto outer = detail::digits(m, d_, require_hom_count(src));
        const auto maps = require_hom_count(dst);
        std::vector<std::vector<std::uint8_t>> inner;
        inner.reserve(src);
        for (std::size_t y = 0; y < src; ++y) inner.push_back(detail::digits(k[y], d_, maps));
        std::vector<std::uint8_t> ds(maps);
        for (std::uint64_t h = 0; h < maps; ++h) {
            std::uint64_t idx = 0;  // index of y ↦ k(y)(h)
            for (std::size_t y = 0; y < src; ++y) idx = idx * d_ + inner[y][h];
            ds[h] = outer[idx];
        }
        return detail::from_digits(ds, d_);
    }

    /// Exact without building M(M(n)): both M(η)(m) and η(m) are functions
    /// of H : M(n) -> d that read H only at the points η(x) and m, so they
    /// agree everywhere iff they agree on every assignment of those points.
    std::optional<bool> equalizes(std::uint64_t n, const Nat& m) const override {
        const auto maps = hom_count(n);
        if (!maps) return std::nullopt;
        const auto phi = detail::digits(m, d_, *maps);
        std::vector<Nat> points;
        std::vector<std::size_t> slot_of_x(n);
        for (Elem x = 0; x < n; ++x) {
            const auto u = unit(n, x);
            auto it = std::find(points.begin(), points.end(), u);
            slot_of_x[x] = static_cast<std::size_t>(it - points.begin());
            if (it == points.end()) points.push_back(u);
        }
        auto it = std::find(points.begin(), points.end(), m);
        const auto slot_of_m = static_cast<std::size_t>(it - points.begin());
        if (it == points.end()) points.push_back(m);
        const auto assignments = saturating_pow(d_, points.size());
        check_cap(assignments, "equalizer witness search");
        std::vector<std::uint32_t> a(points.size(), 0);
        for (std::uint64_t c = 0; c < assignments; ++c) {
            std::uint64_t h = 0;  // index of H ∘ η_n
            for (Elem x = 0; x < n; ++x) h = h * d_ + a[slot_of_x[x]];
            if (phi[h] != a[slot_of_m]) return false;
            for (std::size_t p = a.size(); p-- > 0;) {
                if (++a[p] < d_) break;
                a[p] = 0;
            }
        }
        return true;
    }

private:
    std::uint32_t d_;

    std::optional<std::uint64_t> hom_count(std::uint64_t n) const {
        Nat c = boost::multiprecision::pow(Nat(d_), static_cast<unsigned>(std::min<std::uint64_t>(n, 64)));
        if (n > 64 || c > detail::kMaxCodeDigits) return std::nullopt;
        return static_cast<std::uint64_t>(c);
    }
    std::uint64_t require_hom_count(std::uint64_t n) const {
        auto c = hom_count(n);
        if (!c) throw EnumerationTooLarge("Set(" + std::to_string(n) + "," + std::to_string(d_) + ") too large");
        return *c;
    }
    // h(x) where h is the map n -> d with lexicographic index h.
    std::uint32_t value_at(std::uint64_t h, std::uint64_t n, std::uint64_t x) const {
        for (std::uint64_t i = x + 1; i < n; ++i) h /= d_;
        return static_cast<std::uint32_t>(h % d_);
    }
};

/// X ↦ 1.
class ConstantMonad final : public Monad {
public:
    std::string name() const override { return "Const1"; }
    std::optional<Nat> size(std::uint64_t) const override { return Nat(1); }
    Nat unit(std::uint64_t, Elem) const override { return 0; }
    Nat map(const FinMap&, const Nat&) const override { return 0; }
    Nat bind(std::uint64_t, const Nat&, const std::vector<Nat>&, std::uint64_t) const override { return 0; }
};

/// Double powerset P(P(X)) with double-preimage action and principal-family
/// unit. A family is coded as the bitmask over subset masks of X.
class DoublePowersetFunctor final : public CoaugmentedFunctor {
public:
    std::string name() const override { return "PP"; }
    std::optional<Nat> size(std::uint64_t n) const override {
        if (n > 16) return std::nullopt;
        return Nat(1) << static_cast<unsigned>(std::uint64_t{1} << n);
    }
    Nat unit(std::uint64_t n, Elem x) const override {
        Nat out = 0;
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y)
            if ((y >> x) & 1U) bit_set(out, static_cast<unsigned>(y));
        return out;
    }
    Nat map(const FinMap& g, const Nat& a) const override {
        Nat out = 0;
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << g.cod); ++y) {
            std::uint64_t pre = 0;
            for (std::size_t x = 0; x < g.dom; ++x)
                if ((y >> g(x)) & 1U) pre |= std::uint64_t{1} << x;
            if (bit_test(a, static_cast<unsigned>(pre))) bit_set(out, static_cast<unsigned>(y));
        }
        return out;
    }
};

/// Perturbs μ at one element so law checks have something to catch.
class CorruptedMonad final : public Monad {
public:
    explicit CorruptedMonad(MonadPtr base) : base_(std::move(base)) {}
    std::string name() const override { return base_->name() + "[corrupted]"; }
    std::optional<Nat> size(std::uint64_t n) const override { return base_->size(n); }
    Nat unit(std::uint64_t n, Elem x) const override { return base_->unit(n, x); }
    Nat map(const FinMap& g, const Nat& m) const override { return base_->map(g, m); }
    Nat bind(std::uint64_t src, const Nat& m, const std::vector<Nat>& k, std::uint64_t dst) const override {
        auto r = base_->bind(src, m, k, dst);
        const auto s = base_->size(dst);
        if (m == 0 && s && *s >= 2 && Nat(src) == *s) r = (r + 1) % *s;
        return r;
    }

private:
    MonadPtr base_;
};

/// Built-in monads by name: identity, maybe, writer (params.group, default
/// C2), powerset, powerset+, dd (params.d, default 2), const1.
inline MonadPtr make_builtin_monad(const std::string& name, const nlohmann::json& params = nlohmann::json::object()) {
    if (name == "identity" || name == "id") return std::make_shared<IdentityMonad>();
    if (name == "maybe") return std::make_shared<MaybeMonad>();
    if (name == "writer") {
        const auto g = params.value("group", std::string("C2"));
        return std::make_shared<WriterMonad>(group_by_name(g), g);
    }
    if (name == "powerset") return std::make_shared<PowersetMonad>(false);
    if (name == "powerset+" || name == "nonempty-powerset") return std::make_shared<PowersetMonad>(true);
    if (name == "dd" || name == "dd2") return std::make_shared<ContinuationMonad>(params.value("d", 2U));
    if (name == "dd3") return std::make_shared<ContinuationMonad>(3U);
    if (name == "const1" || name == "constant") return std::make_shared<ConstantMonad>();
    throw StructuralError("unknown builtin monad '" + name + "'");
}

/// Accepts a bare builtin name or {"builtin": name, "params": {...}}.
inline MonadPtr monad_from_descriptor(const std::string& spec) {
    if (!spec.empty() && spec.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec);
        } catch (const nlohmann::json::exception& e) {
            throw StructuralError(std::string("monad descriptor is not valid JSON: ") + e.what());
        }
        if (!j.contains("builtin")) throw StructuralError("monad descriptor needs a builtin name");
        return make_builtin_monad(j.at("builtin").get<std::string>(), j.value("params", nlohmann::json::object()));
    }
    return make_builtin_monad(spec);
}

}  // namespace tmon
