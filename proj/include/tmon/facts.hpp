#pragma once

// The fixed desk-scale reproduction set, summarized as one scorecard.

#include <algorithm>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "tmon/codensity.hpp"
#include "tmon/error.hpp"
#include "tmon/functor.hpp"
#include "tmon/monadlab.hpp"
#include "tmon/operadic.hpp"
#include "tmon/report.hpp"
#include "tmon/tower.hpp"
#include "tmon/ultra.hpp"

namespace tmon {

struct FactsConfig {
    std::size_t max_size = 4;  // largest |X| for the set-level items
    std::uint64_t seed = 1;
    bool corrupt = false;      // swap Maybe for a corrupted copy
};

inline std::vector<std::string> builtin_monad_names() {
    return {"maybe", "writer", "powerset", "dd2", "const1"};
}

namespace detail {

inline Universe universe_upto(std::size_t n) {
    Universe u;
    for (std::uint64_t i = 0; i <= n; ++i) u.push_back(i);
    return u;
}

inline std::string first_failure(const Report& r) {
    for (const auto& c : r.checks)
        if (c.verdict == Verdict::fail) return c.name + (c.witness.empty() ? "" : ": " + c.witness);
    return {};
}

}  // namespace detail

/// Expected |T_M(X)|: the identity for Maybe, Writer and Powerset, the
/// ultrasets for DD2, a point for the constant monad.
inline std::uint64_t expected_terminal_size(const std::string& name, std::uint64_t n) {
    if (name == "maybe" || name == "writer" || name == "powerset") return n;
    if (name == "dd2") return ultrasets(n).size();
    if (name == "const1") return 1;
    throw StructuralError("no expected identification for '" + name + "'");
}

inline Report identification_report(const std::string& name, const Universe& universe = default_universe()) {
    Report r;
    auto T = terminal_monad(make_builtin_monad(name));
    r.title = "identification of T for " + name;
    for (auto n : universe) {
        const auto got = T->members(n).size();
        const auto want = expected_terminal_size(name, n);
        r.add("|T(X)| = " + std::to_string(want) + " at |X|=" + std::to_string(n), got == want,
              "|T(X)| = " + std::to_string(got));
        r.data["sizes"].push_back(got);
    }
    return r;
}

inline FunctorPtr audit_functor(const std::string& name) {
    if (name == "id") return std::make_shared<IdentityMonad>();
    if (name == "pp") return std::make_shared<DoublePowersetFunctor>();
    if (name == "dd2") return std::make_shared<ContinuationMonad>(2U);
    if (name == "us") return std::make_shared<UltrasetFunctor>();
    throw StructuralError("unknown functor '" + name + "'");
}

/// Coaugmentation-compatible natural transformations F -> T_{2} on {1,2}.
inline Report terminality_audit(const std::string& name) {
    CodensityMonad T2({2});
    return uniqueness_audit(*audit_functor(name), T2, {1, 2});
}

/// One line per anchored fact. A fact whose computation exceeds the cap is
/// recorded as skipped and listed in data["cap_exceeded"].
inline Report desk_facts(const FactsConfig& cfg = {}) {
    Report card;
    card.title = "desk-scale facts";
    card.data["cap_exceeded"] = nlohmann::json::array();
    card.data["details"] = nlohmann::json::array();

    auto run = [&](const std::string& name, const std::function<Report()>& body) {
        try {
            const auto r = body();
            card.add(name, r.ok(), detail::first_failure(r),
                     std::to_string(r.count(Verdict::pass)) + " checks" +
                         (r.count(Verdict::skipped) ? ", " + std::to_string(r.count(Verdict::skipped)) + " skipped" : ""));
            card.data["details"].push_back(r);
        } catch (const EnumerationTooLarge& e) {
            card.skip(name, e.what());
            card.data["cap_exceeded"].push_back(name);
        } catch (const std::exception& e) {
            card.add(name, false, e.what());
        }
    };

    const auto n_sets = std::min<std::size_t>(cfg.max_size, 4);
    const auto n_small = std::min<std::size_t>(cfg.max_size, 3);
    const std::vector<std::size_t> us_counts{0, 1, 2, 8, 128};

    for (std::size_t n = 0; n <= n_sets; ++n)
        run("US count at |X|=" + std::to_string(n), [&] {
            Report r;
            r.title = "ultrasets on " + std::to_string(n) + " points";
            const auto us = ultrasets(n);
            r.add("|US(X)| = " + std::to_string(us_counts[n]), us.size() == us_counts[n], std::to_string(us.size()));
            if (n == 3) {
                const auto maj = threshold_family(3, 2);
                r.add("majority family is an ultraset", std::binary_search(us.begin(), us.end(), maj));
                r.add("majority family fails the partition criterion", !partition_criterion(maj));
            }
            return r;
        });

    for (std::size_t n = 0; n <= n_sets; ++n)
        run("T2 = US at |X|=" + std::to_string(n), [&] { return verify_T2_is_US(n); });

    for (std::size_t n = 0; n <= n_small; ++n)
        run("T_Fin = T3 = UF at |X|=" + std::to_string(n), [&] { return verify_T3_is_UF(n); });

    run("partition criterion", [&] {
        Report r;
        r.title = "partition criterion vs ultrafilter axioms";
        std::size_t checked = 0, mismatches = 0;
        std::string w;
        for (std::size_t n = 0; n <= n_sets; ++n)
            for (const auto& a : ultrasets(n)) {
                ++checked;
                if (partition_criterion(a) != is_ultrafilter(a)) {
                    ++mismatches;
                    w = family_json(a).dump();
                }
            }
        r.add("criterion <=> ultrafilter", mismatches == 0, w, std::to_string(checked) + " ultrasets");
        return r;
    });

    const auto universe = detail::universe_upto(n_small);
    for (const auto& name : builtin_monad_names())
        run("equalizer for " + name, [&] {
            MonadPtr M = make_builtin_monad(name);
            if (cfg.corrupt && name == "maybe") M = std::make_shared<CorruptedMonad>(M);
            LawOptions opt;
            opt.seed = cfg.seed;
            auto r = check_monad_laws(*M, universe, opt);
            r.merge(terminal_monad_report(M, universe, opt));
            return r;
        });

    for (std::size_t n = 1; n <= 2; ++n)
        run("powers d=2, n=" + std::to_string(n), [&] { return verify_powers_theorem(2, n, universe); });

    run("LCM of orders", [&] {
        Report r;
        r.title = "unit subgroups of group double duals";
        for (const auto* g : {"C2", "C3", "C4", "C2xC2", "S3"})
            r.merge(group_double_dual(group_by_name(g), g).report, g);
        return r;
    });

    run("vector-space double dual F_2^2", [&] {
        auto v = vect_double_dual_experiment(2, 2);
        v.report.add("single-object completion has 8 elements", v.single_dim == 3);
        v.report.add("operadic completion has 4 elements", v.operadic_dim == 2);
        return v.report;
    });

    for (const auto& name : builtin_monad_names())
        run("tower of " + name, [&] { return tower(make_builtin_monad(name), 3, universe, cfg.seed).report; });

    run("terminal map US -> T2", [&] {
        UltrasetFunctor us;
        CodensityMonad T2({2});
        auto r = check_terminal_map(us, T2, universe);
        r.merge(uniqueness_audit(us, T2, {1, 2}));
        r.merge(uniqueness_audit(IdentityMonad(), T2, {1, 2}), "Id");
        return r;
    });
    return card;
}

/// The facts together with the expected identifications of T_M and the
/// terminality audits for Id, PP and DD2.
inline Report verify_all(const FactsConfig& cfg = {}) {
    auto r = desk_facts(cfg);
    r.title = "full suite";
    const auto universe = detail::universe_upto(std::min<std::size_t>(cfg.max_size, 3));
    for (const auto& name : builtin_monad_names()) {
        try {
            r.merge(identification_report(name, universe), "T for " + name);
        } catch (const EnumerationTooLarge& e) {
            r.skip("T for " + name, e.what());
            r.data["cap_exceeded"].push_back("T for " + name);
        }
    }
    for (const auto* f : {"id", "pp", "dd2"}) {
        auto a = terminality_audit(f);
        r.merge(a, std::string("audit ") + f);
        r.data["audit_counts"][f] = a.data.value("count", nlohmann::json());
    }
    return r;
}

}  // namespace tmon
