#pragma once

// Algebras induced by monad morphisms, retracts assembled over limits, and
// the completion tower M_0 = M, M_{i+1} = T_{M_i}.

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "tmon/error.hpp"
#include "tmon/finset.hpp"
#include "tmon/functor.hpp"
#include "tmon/monadlab.hpp"
#include "tmon/report.hpp"
#include "tmon/ultra.hpp"

namespace tmon {

namespace detail {

/// Whether the equalizer of M at n is exactly the unit image, with η_n
/// injective. nullopt when M(n) cannot be enumerated.
inline std::optional<bool> equalizer_is_unit_image(const Monad& M, std::uint64_t n) {
    std::optional<Nat> s;
    try {
        s = M.size(n);
    } catch (const EnumerationTooLarge&) {
        return std::nullopt;
    }
    if (!s || *s > enumeration_cap()) return std::nullopt;
    std::vector<Nat> eq;
    for (std::uint64_t m = 0; m < static_cast<std::uint64_t>(*s); ++m) {
        auto e = M.equalizes(n, m);
        if (!e) return std::nullopt;
        if (*e) eq.push_back(m);
    }
    std::vector<Nat> img;
    for (Elem x = 0; x < n; ++x) img.push_back(M.unit(n, x));
    std::sort(img.begin(), img.end());
    return img == eq && std::adjacent_find(img.begin(), img.end()) == img.end();
}

}  // namespace detail

/// For f : M -> N, the composite r = μ_N ∘ f_{N(X)} : M(N(X)) -> N(X)
/// retracts η^M at N(X); consequently T_M(N(X)) ≅ N(X).
inline Report algebra_from_morphism(const MonadMorphism& f, std::uint64_t X) {
    Report r;
    r.title = "algebra from " + f.name + " at X=" + std::to_string(X);
    const auto& M = *f.source;
    const auto& N = *f.target;
    const auto s = N.enumerable_size(X);
    bool retract = true;
    std::string w;
    try {
        for (std::uint64_t y = 0; y < s && retract; ++y) {
            const auto v = f.component(s, M.unit(s, static_cast<Elem>(y)));
            if (N.multiply(X, v) != y) {
                retract = false;
                w = "y=" + std::to_string(y);
            }
        }
        r.add("r . eta_M = id on N(X)", retract, w, std::to_string(s) + " elements");
    } catch (const EnumerationTooLarge& e) {
        r.skip("r . eta_M = id on N(X)", e.what());
    }
    const auto iso = detail::equalizer_is_unit_image(M, s);
    if (!iso) r.skip("T_M(N(X)) = N(X) via unit", "M(N(X)) is not enumerable");
    else r.add("T_M(N(X)) = N(X) via unit", *iso, "equalizer differs from the unit image at N(X)");
    r.data["N(X)"] = s;
    return r;
}

struct RetractNode {
    std::uint64_t size;
    std::function<Elem(const Nat&)> retraction;  // M(X_i) -> X_i
};

/// r(m) = x if m = η(x), and 0 otherwise.
inline std::function<Elem(const Nat&)> choice_retraction(const MonadPtr& M, std::uint64_t n) {
    if (n == 0) throw PreconditionViolation("the empty set has no retraction from a nonempty set");
    std::map<Nat, Elem> back;
    for (Elem x = 0; x < n; ++x) back.emplace(M->unit(n, x), x);
    return [back](const Nat& m) {
        auto it = back.find(m);
        return it == back.end() ? Elem{0} : it->second;
    };
}

/// Y = lim X_i is a T_M-retract: the assembly map
/// a : T_M(Y) -> lim T_M(X_i) -> lim X_i = Y satisfies a ∘ η^{T_M}_Y = id.
inline Report assembly_retract(const MonadPtr& M, const std::vector<RetractNode>& nodes,
                               const std::vector<DiagramArrow>& arrows) {
    Report r;
    r.title = "assembly retract over " + std::to_string(nodes.size()) + " nodes for " + M->name();
    bool units = true;
    std::string wu;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (Elem x = 0; x < nodes[i].size && units; ++x)
            if (nodes[i].retraction(M->unit(nodes[i].size, x)) != x) {
                units = false;
                wu = "node " + std::to_string(i) + ", x=" + std::to_string(x);
            }
    r.add("r_i . eta = id", units, wu);

    DiagramInstance d;
    for (const auto& n : nodes) d.nodes.push_back(n.size);
    d.arrows = arrows;
    const auto Y = limit(d);
    const auto y = Y.tuples.size();
    auto T = terminal_monad(M);
    const auto& TY = T->members(y);

    std::vector<std::optional<std::size_t>> a(TY.size());
    bool lands = true;
    std::string wl;
    for (std::size_t t = 0; t < TY.size(); ++t) {
        std::vector<Elem> tuple;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            tuple.push_back(nodes[i].retraction(M->map(Y.projections[i], TY[t])));
        a[t] = Y.find(tuple);
        if (!a[t] && lands) {
            lands = false;
            wl = "element " + std::to_string(t) + " of T(Y)";
        }
    }
    r.add("assembly lands in lim X_i", lands, wl);

    bool retract = lands;
    std::string wr;
    for (Elem p = 0; p < y && retract; ++p) {
        const auto e = static_cast<std::size_t>(T->unit(y, p));
        if (a[e] != p) {
            retract = false;
            wr = "y=" + std::to_string(p);
        }
    }
    r.add("a . eta_T = id (Y is a T-retract)", retract, wr,
          "|Y| = " + std::to_string(y) + ", |T(Y)| = " + std::to_string(TY.size()));
    r.data["Y"] = y;
    r.data["TY"] = TY.size();
    return r;
}

// ---------------------------------------------------------------------------
// Tower.

struct TowerLevel {
    std::string name;
    MonadPtr monad;
    std::map<std::uint64_t, std::vector<Nat>> members;  // as codes of M_0
};

struct TowerReport {
    std::vector<TowerLevel> levels;
    std::optional<std::size_t> stabilization;  // first i with M_{i+1} = M_i
    Report report;
};

inline TowerReport tower(const MonadPtr& M, std::size_t max_steps, const Universe& universe = default_universe(),
                         std::uint64_t seed = 1, std::size_t limit_samples = 4) {
    TowerReport out;
    auto& r = out.report;
    r.title = "tower of " + M->name() + " on " + universe_string(universe);

    TowerLevel base{M->name(), M, {}};
    for (auto n : universe) {
        auto& mem = base.members[n];
        for (std::uint64_t m = 0; m < M->enumerable_size(n); ++m) mem.push_back(m);
    }
    out.levels.push_back(std::move(base));

    bool nested = true;
    std::string wn;
    for (std::size_t i = 1; i <= max_steps && !out.stabilization; ++i) {
        const auto& prev = out.levels.back();
        auto T = terminal_monad(prev.monad);
        TowerLevel level{"M" + std::to_string(i), T, {}};
        bool same = true;
        for (auto n : universe) {
            level.members[n];
            for (const auto& c : T->members(n)) level.members[n].push_back(prev.members.at(n).at(static_cast<std::size_t>(c)));
            const auto& lo = level.members[n];
            const auto& hi = prev.members.at(n);
            if (!std::includes(hi.begin(), hi.end(), lo.begin(), lo.end())) {
                nested = false;
                wn = "level " + std::to_string(i) + ", X=" + std::to_string(n);
            }
            same = same && lo.size() == hi.size();
        }
        // The arrow action of the new level must restrict; a failure here
        // means the levels are not subfunctors.
        try {
            for (auto a : universe)
                for (auto b : universe)
                    for (const auto& g : all_maps(a, b))
                        for (std::uint64_t m = 0; m < level.members[a].size(); ++m) T->map(g, m);
        } catch (const StructureTransportFailed& e) {
            throw StructuralError("tower level " + std::to_string(i) + " is not a subfunctor: " + e.what());
        }
        out.levels.push_back(std::move(level));
        if (same) out.stabilization = i - 1;
    }
    r.add("levels nest", nested, wn);

    for (const auto& level : out.levels) {
        nlohmann::json sizes = nlohmann::json::object();
        for (const auto& [n, mem] : level.members) sizes[std::to_string(n)] = mem.size();
        r.data["levels"].push_back({{"name", level.name}, {"sizes", sizes}});
    }
    if (!out.stabilization) {
        r.add("stabilizes within " + std::to_string(max_steps) + " steps", false,
              "levels still shrinking after " + std::to_string(max_steps) + " steps");
        return out;
    }
    const auto k = *out.stabilization;
    r.data["stabilization"] = k;
    r.add("stabilizes within " + std::to_string(max_steps) + " steps", true, {}, "stable at step " + std::to_string(k));
    const auto& S = *out.levels[k].monad;

    // Idempotence: the stable unit is a bijection at each of its own values.
    bool idem = true;
    std::string wi;
    try {
        for (auto n : universe) {
            const auto s = S.enumerable_size(n);
            const auto ss = S.enumerable_size(s);
            if (ss != s || !S.unit_map(s).is_bijective()) {
                idem = false;
                wi = "X=" + std::to_string(n) + ": |S(S(X))| = " + std::to_string(ss);
                break;
            }
        }
        r.add("stable level idempotent", idem, wi);
    } catch (const EnumerationTooLarge& e) {
        r.skip("stable level idempotent", e.what());
    }

    // Finite limits of image objects M(Y): products, equalizers and
    // pullbacks of arrows M(g), sampled, limited to limits the stable level
    // can evaluate.
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> objs(universe.begin(), universe.end());
    std::uniform_int_distribution<std::size_t> pick(0, objs.size() - 1), shape(0, 2);
    std::size_t tested = 0, attempts = 0;
    bool preserved = true;
    std::string wp;
    std::vector<std::string> shapes;
    while (tested < limit_samples && attempts < 200 && preserved) {
        ++attempts;
        const auto y1 = objs[pick(rng)], y2 = objs[pick(rng)];
        DiagramInstance d;
        std::string desc;
        const auto kind = shape(rng);
        const auto m1 = M->enumerable_size(y1), m2 = M->enumerable_size(y2);
        if (kind == 0) {
            d.nodes = {m1, m2};
            desc = "M(" + std::to_string(y1) + ") x M(" + std::to_string(y2) + ")";
        } else {
            const auto maps = all_maps(y1, y2);
            if (maps.empty()) continue;
            std::uniform_int_distribution<std::size_t> pm(0, maps.size() - 1);
            const auto g = maps[pm(rng)], h = maps[pm(rng)];
            if (kind == 1) {
                d.nodes = {m1, m2};
                d.arrows = {{0, 1, M->map_table(g)}, {0, 1, M->map_table(h)}};
                desc = "eq(M" + nlohmann::json(g.table).dump() + ", M" + nlohmann::json(h.table).dump() + ")";
            } else {
                d.nodes = {m1, m1, m2};
                d.arrows = {{0, 2, M->map_table(g)}, {1, 2, M->map_table(h)}};
                desc = "pullback(M" + nlohmann::json(g.table).dump() + ", M" + nlohmann::json(h.table).dump() + ")";
            }
        }
        Nat product = 1;
        for (auto n : d.nodes) product *= n;
        if (product > (1U << 16)) continue;
        const auto L = limit(d).tuples.size();
        if (L > 8) continue;
        try {
            const auto SL = S.enumerable_size(L);
            const bool ok = SL == L && S.unit_map(L).is_bijective();
            shapes.push_back(desc + " (" + std::to_string(L) + ")");
            ++tested;
            if (!ok) {
                preserved = false;
                wp = desc + ": |L| = " + std::to_string(L) + ", |S(L)| = " + std::to_string(SL);
            }
        } catch (const EnumerationTooLarge&) {
            continue;
        }
    }
    if (tested == 0) r.skip("stable level preserves sampled limits", "no sampled limit was evaluable");
    else r.add("stable level preserves sampled limits", preserved, wp, std::to_string(tested) + " diagrams");
    r.data["limit_samples"] = shapes;
    return out;
}

/// On finite sets the ultrafilter monad is the identity, so its terminal
/// monad is the identity too.
inline Report ultrafilter_terminal_note(std::size_t max_size = 3) {
    Report r;
    r.title = "terminal monad of the ultrafilter monad";
    bool principal = true;
    for (std::size_t n = 1; n <= max_size; ++n) {
        const auto uf = ultrafilters(n);
        std::vector<SubsetFamily> eta;
        for (Elem x = 0; x < n; ++x) eta.push_back(double_powerset_unit(n, x));
        std::sort(eta.begin(), eta.end());
        principal = principal && uf == eta;
    }
    r.add("UF is pointwise the identity on {1.." + std::to_string(max_size) + "}", principal);
    auto T = terminal_monad(std::make_shared<IdentityMonad>());
    bool id = true;
    for (std::uint64_t n = 0; n <= max_size; ++n) id = id && T->members(n).size() == n;
    r.add("T_Id = Id", id);
    bool eq = true;
    for (std::uint64_t n = 0; n <= max_size; ++n) eq = eq && *detail::equalizer_is_unit_image(IdentityMonad(), n);
    r.add("equalizer of Id => Id^2 is Id", eq);
    r.note("the argument for infinite sets (T_U preserves sets of every cardinality) is not checked on finite data");
    return r;
}

}  // namespace tmon
