#pragma once

// Families of subsets of a small finite set X. A subset Y ⊆ X is the
// bitmask with bit i set iff i ∈ Y; a family A ⊆ P(X) is the bitmask over
// subset masks, so bit Y of A is set iff Y ∈ A. With |X| ≤ 6 a family fits
// in one 64-bit word.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmon/codensity.hpp"
#include "tmon/error.hpp"
#include "tmon/finset.hpp"
#include "tmon/functor.hpp"
#include "tmon/report.hpp"

namespace tmon {

inline constexpr std::size_t kMaxFamilyGround = 6;

struct SubsetFamily {
    std::size_t ground = 0;
    std::uint64_t members = 0;

    std::uint64_t subset_count() const { return std::uint64_t{1} << ground; }
    std::uint64_t full() const { return subset_count() - 1; }
    bool contains(std::uint64_t y) const { return (members >> y) & 1U; }
    std::vector<std::uint64_t> subsets() const {
        std::vector<std::uint64_t> out;
        for (std::uint64_t y = 0; y < subset_count(); ++y)
            if (contains(y)) out.push_back(y);
        return out;
    }
    auto operator<=>(const SubsetFamily&) const = default;
};

namespace detail {
inline void check_ground(std::size_t n) {
    if (n > kMaxFamilyGround)
        throw EnumerationTooLarge("families over a " + std::to_string(n) + "-element set do not fit a word");
}
}  // namespace detail

/// {Y ⊆ X | x ∈ Y}.
inline SubsetFamily double_powerset_unit(std::size_t n, Elem x) {
    detail::check_ground(n);
    if (x >= n) throw StructuralError("point outside the ground set");
    SubsetFamily a{n, 0};
    for (std::uint64_t y = 0; y < a.subset_count(); ++y)
        if ((y >> x) & 1U) a.members |= std::uint64_t{1} << y;
    return a;
}

/// PP(g)(A) = {Y' ⊆ Y | g^{-1}(Y') ∈ A}.
inline SubsetFamily double_preimage(const FinMap& g, const SubsetFamily& a) {
    if (a.ground != g.dom) throw StructuralError("family and map disagree on the ground set");
    detail::check_ground(g.cod);
    SubsetFamily out{g.cod, 0};
    for (std::uint64_t y = 0; y < out.subset_count(); ++y) {
        std::uint64_t pre = 0;
        for (std::size_t x = 0; x < g.dom; ++x)
            if ((y >> g(x)) & 1U) pre |= std::uint64_t{1} << x;
        if (a.contains(pre)) out.members |= std::uint64_t{1} << y;
    }
    return out;
}

struct UltrasetCertificate {
    SubsetFamily family;
    bool us1 = false;  // ∅ ∉ A
    bool us2 = false;  // exactly one of Y, X∖Y in A, for every Y
    bool holds() const { return us1 && us2; }
};

inline UltrasetCertificate certify_ultraset(const SubsetFamily& a) {
    UltrasetCertificate c{a, !a.contains(0), true};
    for (std::uint64_t y = 0; y < a.subset_count() && c.us2; ++y) c.us2 = a.contains(y) != a.contains(a.full() ^ y);
    return c;
}

inline bool is_ultraset(const SubsetFamily& a) { return certify_ultraset(a).holds(); }

/// Proper filter (contains X, misses ∅, upward closed, closed under binary
/// intersection) containing one of each complementary pair.
inline bool is_ultrafilter(const SubsetFamily& a) {
    if (!a.contains(a.full()) || a.contains(0)) return false;
    for (std::uint64_t y = 0; y < a.subset_count(); ++y) {
        if (a.contains(y) == a.contains(a.full() ^ y)) return false;
        if (!a.contains(y)) continue;
        for (std::uint64_t z = 0; z < a.subset_count(); ++z) {
            if ((y & z) == y && !a.contains(z)) return false;
            if (a.contains(z) && !a.contains(y & z)) return false;
        }
    }
    return true;
}

/// All ultrasets on an n-element set by filtering the whole of P(P(X)).
inline std::vector<SubsetFamily> ultrasets(std::size_t n, std::size_t max_size = 4) {
    if (n > max_size) throw EnumerationTooLarge("ultrasets: |X| = " + std::to_string(n) + " above " + std::to_string(max_size));
    detail::check_ground(n);
    const auto candidates = std::uint64_t{1} << (std::uint64_t{1} << n);
    check_cap(candidates, "P(P(X))");
    std::vector<SubsetFamily> out;
    for (std::uint64_t m = 0; m < candidates; ++m)
        if (is_ultraset({n, m})) out.push_back({n, m});
    return out;
}

/// All ultrafilters on an n-element set. Up to |X| = 4 the whole of P(P(X))
/// is filtered; above that only the families containing one of each
/// complementary pair are generated, then filtered by the full axioms.
inline std::vector<SubsetFamily> ultrafilters(std::size_t n, std::size_t max_size = 5) {
    if (n > max_size) throw EnumerationTooLarge("ultrafilters: |X| = " + std::to_string(n) + " above " + std::to_string(max_size));
    detail::check_ground(n);
    std::vector<SubsetFamily> out;
    if (n <= 4) {
        const auto candidates = std::uint64_t{1} << (std::uint64_t{1} << n);
        for (std::uint64_t m = 0; m < candidates; ++m)
            if (is_ultrafilter({n, m})) out.push_back({n, m});
        return out;
    }
    // Pairs {Y, X∖Y} indexed by the Y without the top element of X.
    const std::uint64_t full = (std::uint64_t{1} << n) - 1, half = std::uint64_t{1} << (n - 1);
    const auto choices = std::uint64_t{1} << half;
    check_cap(choices, "complement-pair choices");
    for (std::uint64_t c = 0; c < choices; ++c) {
        SubsetFamily a{n, 0};
        for (std::uint64_t y = 0; y < half; ++y) a.members |= std::uint64_t{1} << (((c >> y) & 1U) ? y : full ^ y);
        if (is_ultrafilter(a)) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Exactly one part of every 3-partition X = P0 ⊔ P1 ⊔ P2 lies in A.
inline bool partition_criterion(const SubsetFamily& a) {
    if (!is_ultraset(a)) throw PreconditionViolation("not an ultraset");
    const auto n = a.ground;
    const auto labelings = saturating_pow(3, n);
    std::vector<std::uint32_t> part(n, 0);
    for (std::uint64_t c = 0; c < labelings; ++c) {
        std::uint64_t p[3] = {0, 0, 0};
        for (std::size_t x = 0; x < n; ++x) p[part[x]] |= std::uint64_t{1} << x;
        if (a.contains(p[0]) + a.contains(p[1]) + a.contains(p[2]) != 1) return false;
        for (std::size_t i = n; i-- > 0;) {
            if (++part[i] < 3) break;
            part[i] = 0;
        }
    }
    return true;
}

/// {Y ⊆ X | |Y| ≥ k}.
inline SubsetFamily threshold_family(std::size_t n, std::size_t k) {
    detail::check_ground(n);
    SubsetFamily a{n, 0};
    for (std::uint64_t y = 0; y < a.subset_count(); ++y)
        if (static_cast<std::size_t>(std::popcount(y)) >= k) a.members |= std::uint64_t{1} << y;
    return a;
}

/// χ transport of a family of T_{2}(X) into P(P(X)): the comma object
/// (2, f) stands for the subset {x | f(x) = 1}, and A collects the subsets
/// at which the family takes the value 1.
inline SubsetFamily chi_transport(const CodensityObject& T, const Family& x) {
    const auto n = T.base().size();
    detail::check_ground(n);
    SubsetFamily a{n, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& f = T.comma->objects()[i].f;
        std::uint64_t y = 0;
        for (std::size_t p = 0; p < n; ++p)
            if (f(p) == 1) y |= std::uint64_t{1} << p;
        if (x[i] == 1) a.members |= std::uint64_t{1} << y;
    }
    return a;
}

inline nlohmann::json family_json(const SubsetFamily& a) { return a.subsets(); }

/// US as a coaugmented functor: codes index the sorted list ultrasets(n).
class UltrasetFunctor final : public CoaugmentedFunctor {
public:
    std::string name() const override { return "US"; }
    std::optional<Nat> size(std::uint64_t n) const override {
        if (n > 4) return std::nullopt;
        return Nat(list(n).size());
    }
    Nat unit(std::uint64_t n, Elem x) const override { return index(double_powerset_unit(n, x)); }
    Nat map(const FinMap& g, const Nat& m) const override {
        return index(double_preimage(g, list(g.dom).at(static_cast<std::size_t>(m))));
    }
    const std::vector<SubsetFamily>& list(std::uint64_t n) const {
        if (n > 4) throw EnumerationTooLarge("US(" + std::to_string(n) + ")");
        std::lock_guard lock(mutex_);
        auto it = cache_.find(n);
        if (it == cache_.end()) it = cache_.emplace(n, ultrasets(n)).first;
        return it->second;
    }

private:
    mutable std::mutex mutex_;
    mutable std::map<std::uint64_t, std::vector<SubsetFamily>> cache_;

    Nat index(const SubsetFamily& a) const {
        const auto& l = list(a.ground);
        auto it = std::lower_bound(l.begin(), l.end(), a);
        if (it == l.end() || *it != a) throw InternalConsistencyError("double preimage left the ultrasets");
        return static_cast<std::uint64_t>(it - l.begin());
    }
};

// ---------------------------------------------------------------------------
// Verification harnesses.

/// T_{2}(X) through χ equals US(X), with both constructions of T_{2}(X)
/// agreeing and units matching principal families.
inline Report verify_T2_is_US(std::size_t n) {
    if (n > 4) throw PreconditionViolation("T2 = US is verified for |X| <= 4");
    Report r;
    r.title = "T2 = US at |X|=" + std::to_string(n);
    const std::vector<Object> D{Object::set(2)};
    const auto T = codensity_object(Object::set(n), D);
    const auto E = end_equalizer_object(Object::set(n), D);
    r.add("comma limit = end equalizer", T.families == E.families,
          "sizes " + std::to_string(T.size()) + " vs " + std::to_string(E.size()));

    const auto us = ultrasets(n);
    std::vector<SubsetFamily> image;
    for (const auto& x : T.families) image.push_back(chi_transport(T, x));
    auto sorted = image;
    std::sort(sorted.begin(), sorted.end());
    const bool injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    r.add("chi transport injective", injective);
    std::string w;
    if (sorted != us) {
        std::vector<SubsetFamily> diff;
        std::set_symmetric_difference(sorted.begin(), sorted.end(), us.begin(), us.end(), std::back_inserter(diff));
        if (!diff.empty()) w = "family " + family_json(diff.front()).dump() + " on one side only";
    }
    r.add("image = ultrasets", sorted == us, w,
          std::to_string(T.size()) + " families vs " + std::to_string(us.size()) + " ultrasets");

    bool units = true;
    std::string wu;
    const auto eta = unit(T);
    for (Elem x = 0; x < n && units; ++x)
        if (image[eta(x)] != double_powerset_unit(n, x)) {
            units = false;
            wu = "x=" + std::to_string(x);
        }
    r.add("units match principal families", units, wu);

    r.data["size"] = n;
    r.data["T2"] = T.size();
    r.data["US"] = us.size();
    nlohmann::json bij = nlohmann::json::array();
    for (std::size_t i = 0; i < image.size(); ++i) bij.push_back({i, family_json(image[i])});
    r.data["bijection"] = bij;
    return r;
}

/// χ transport commutes with the functorial actions: χ ∘ T(g) = PP(g) ∘ χ
/// for every map g between universe objects.
inline Report verify_T2_is_US_functorial(const std::vector<std::size_t>& universe) {
    Report r;
    r.title = "T2 and US agree as coaugmented functors";
    const std::vector<Object> D{Object::set(2)};
    std::map<std::size_t, CodensityObject> T;
    for (auto n : universe) T.emplace(n, codensity_object(Object::set(n), D));
    bool ok = true;
    std::string w;
    std::size_t maps = 0;
    for (auto a : universe)
        for (auto b : universe)
            for (const auto& g : all_maps(a, b)) {
                ++maps;
                const auto Tg = functor_action(g, T.at(a), T.at(b));
                for (std::size_t i = 0; i < T.at(a).size() && ok; ++i)
                    if (chi_transport(T.at(b), T.at(b).families[Tg(i)]) !=
                        double_preimage(g, chi_transport(T.at(a), T.at(a).families[i]))) {
                        ok = false;
                        w = "map " + nlohmann::json(g.table).dump() + ", family #" + std::to_string(i);
                    }
            }
    r.add("chi . T2(g) = PP(g) . chi", ok, w, std::to_string(maps) + " maps");
    return r;
}

/// |T_3(X)| = |X| with the unit a bijection and UF(X) principal; the same
/// for T_4 at |X| ≤ 3.
inline Report verify_T3_is_UF(std::size_t n) {
    if (n > 3) throw PreconditionViolation("T3 = UF is verified for |X| <= 3");
    Report r;
    r.title = "T_Fin = T3 = UF at |X|=" + std::to_string(n);
    const auto uf = ultrafilters(n);
    std::vector<SubsetFamily> principal;
    for (Elem x = 0; x < n; ++x) principal.push_back(double_powerset_unit(n, x));
    std::sort(principal.begin(), principal.end());
    r.add("UF(X) = principal families", uf == principal, {},
          std::to_string(uf.size()) + " ultrafilters");
    for (std::size_t d : {3, 4}) {
        const auto T = codensity_object(Object::set(n), {Object::set(d)});
        const auto eta = unit(T);
        const std::string label = "T" + std::to_string(d);
        r.add("|" + label + "(X)| = |X|", T.size() == n, std::to_string(T.size()) + " families");
        r.add(label + " unit bijective", eta.is_bijective());
        r.data[label] = T.size();
    }
    r.data["size"] = n;
    r.data["UF"] = uf.size();
    return r;
}

/// UF ⊆ US ⊆ PP with matching units, and the double-preimage action
/// restricting to UF and US along every map between universe objects.
inline Report sub_functor_check(std::size_t max_size = 4) {
    Report r;
    r.title = "UF in US in PP";
    bool nested = true, units = true, us_closed = true, uf_closed = true;
    std::string wn, wu, ws, wf;
    std::map<std::size_t, std::vector<SubsetFamily>> uf, us;
    for (std::size_t n = 0; n <= max_size; ++n) {
        uf[n] = ultrafilters(n);
        us[n] = ultrasets(n);
        for (const auto& a : uf[n])
            if (!std::binary_search(us[n].begin(), us[n].end(), a)) {
                nested = false;
                wn = "|X|=" + std::to_string(n) + ", " + family_json(a).dump();
            }
        for (Elem x = 0; x < n; ++x) {
            const auto p = double_powerset_unit(n, x);
            if (!std::binary_search(uf[n].begin(), uf[n].end(), p) || !std::binary_search(us[n].begin(), us[n].end(), p)) {
                units = false;
                wu = "|X|=" + std::to_string(n) + ", x=" + std::to_string(x);
            }
        }
        r.data["counts"].push_back({{"size", n}, {"UF", uf[n].size()}, {"US", us[n].size()},
                                   {"PP", std::uint64_t{1} << (std::uint64_t{1} << n)}});
    }
    std::size_t maps = 0;
    for (std::size_t a = 0; a <= max_size; ++a)
        for (std::size_t b = 0; b <= max_size; ++b)
            for (const auto& g : all_maps(a, b)) {
                ++maps;
                for (const auto& f : us[a])
                    if (us_closed && !std::binary_search(us[b].begin(), us[b].end(), double_preimage(g, f))) {
                        us_closed = false;
                        ws = "map " + nlohmann::json(g.table).dump() + ", family " + family_json(f).dump();
                    }
                for (const auto& f : uf[a])
                    if (uf_closed && !std::binary_search(uf[b].begin(), uf[b].end(), double_preimage(g, f))) {
                        uf_closed = false;
                        wf = "map " + nlohmann::json(g.table).dump() + ", family " + family_json(f).dump();
                    }
            }
    r.add("UF(X) within US(X) within PP(X)", nested, wn);
    r.add("units agree", units, wu);
    r.add("PP action restricts to US", us_closed, ws, std::to_string(maps) + " maps");
    r.add("PP action restricts to UF", uf_closed, wf, std::to_string(maps) + " maps");
    r.note("the containment tested is UF within US; the reverse reading, T2 as a sub-monad of the ultrafilter "
           "monad, fails whenever |X| >= 3 and is reported as an erratum candidate");
    return r;
}

}  // namespace tmon
