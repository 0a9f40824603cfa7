#pragma once

// Canonical finite sets {0, ..., n-1}, total maps between them, indexed
// products, equalizers and limits of finite diagrams.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmon/csp.hpp"
#include "tmon/error.hpp"

namespace tmon {

struct FinSet {
    std::size_t size = 0;
    std::vector<std::string> labels;  // empty, or one distinct label per element

    FinSet() = default;
    explicit FinSet(std::size_t n) : size(n) {}
    FinSet(std::size_t n, std::vector<std::string> names) : size(n), labels(std::move(names)) { validate(); }

    void validate() const {
        if (labels.empty()) return;
        if (labels.size() != size) throw StructuralError("label count differs from set size");
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != labels.size()) throw StructuralError("labels are not distinct");
    }

    bool operator==(const FinSet& o) const { return size == o.size; }
};

/// A total function dom -> cod stored as its value table.
struct FinMap {
    std::size_t dom = 0;
    std::size_t cod = 0;
    std::vector<Elem> table;

    FinMap() = default;
    FinMap(std::size_t d, std::size_t c, std::vector<Elem> t) : dom(d), cod(c), table(std::move(t)) { validate(); }

    void validate() const {
        if (table.size() != dom) throw StructuralError("map table length differs from domain size");
        for (auto v : table)
            if (v >= cod) throw StructuralError("map value outside codomain");
    }

    Elem operator()(std::size_t x) const { return table[x]; }

    bool is_injective() const {
        std::vector<char> hit(cod, 0);
        for (auto v : table) {
            if (hit[v]) return false;
            hit[v] = 1;
        }
        return true;
    }
    bool is_surjective() const {
        std::vector<char> hit(cod, 0);
        for (auto v : table) hit[v] = 1;
        return std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
    }
    bool is_bijective() const { return dom == cod && is_injective(); }

    auto operator<=>(const FinMap&) const = default;
};

inline FinMap identity(std::size_t n) {
    std::vector<Elem> t(n);
    std::iota(t.begin(), t.end(), Elem{0});
    return {n, n, std::move(t)};
}

inline FinMap constant_map(std::size_t dom, std::size_t cod, Elem value) {
    return {dom, cod, std::vector<Elem>(dom, value)};
}

/// g ∘ f
inline FinMap compose(const FinMap& g, const FinMap& f) {
    if (f.cod != g.dom) throw StructuralError("compose: codomain/domain mismatch");
    std::vector<Elem> t(f.dom);
    for (std::size_t i = 0; i < f.dom; ++i) t[i] = g.table[f.table[i]];
    return {f.dom, g.cod, std::move(t)};
}

/// Lexicographic index of a map table among all cod^dom tables.
inline std::uint64_t map_index(const FinMap& f) {
    std::uint64_t idx = 0;
    for (auto v : f.table) idx = idx * f.cod + v;
    return idx;
}

/// Every map dom -> cod in lexicographic order of tables.
inline std::vector<FinMap> all_maps(std::size_t dom, std::size_t cod) {
    const auto count = saturating_pow(cod, dom);
    check_cap(count, "Set(" + std::to_string(dom) + "," + std::to_string(cod) + ")");
    std::vector<FinMap> out;
    out.reserve(count);
    std::vector<Elem> t(dom, 0);
    for (std::uint64_t i = 0; i < count; ++i) {
        out.emplace_back(dom, cod, t);
        for (std::size_t p = dom; p-- > 0;) {
            if (++t[p] < cod) break;
            t[p] = 0;
        }
    }
    return out;
}

/// Product of finite sets indexed by 0..k-1. Element i is the tuple whose
/// mixed-radix digits (first factor most significant) spell i, so element
/// order is lexicographic order of tuples.
class IndexedProduct {
public:
    explicit IndexedProduct(std::vector<std::size_t> factors) : factors_(std::move(factors)) {
        Nat card = 1;
        for (auto f : factors_) card *= f;
        check_cap(card, "product");
        cardinality_ = static_cast<std::uint64_t>(card);
    }

    std::size_t index_size() const { return factors_.size(); }
    const std::vector<std::size_t>& factors() const { return factors_; }
    std::uint64_t cardinality() const { return cardinality_; }

    std::vector<Elem> tuple(std::uint64_t i) const {
        std::vector<Elem> t(factors_.size());
        for (std::size_t p = factors_.size(); p-- > 0;) {
            t[p] = static_cast<Elem>(i % factors_[p]);
            i /= factors_[p];
        }
        return t;
    }

    std::uint64_t index(const std::vector<Elem>& t) const {
        if (t.size() != factors_.size()) throw StructuralError("tuple length differs from index size");
        std::uint64_t i = 0;
        for (std::size_t p = 0; p < t.size(); ++p) {
            if (t[p] >= factors_[p]) throw StructuralError("tuple component out of range");
            i = i * factors_[p] + t[p];
        }
        return i;
    }

    /// pr_s as a map product -> factor s.
    FinMap projection(std::size_t s) const {
        std::vector<Elem> tab(cardinality_);
        for (std::uint64_t i = 0; i < cardinality_; ++i) tab[i] = tuple(i)[s];
        return {cardinality_, factors_.at(s), std::move(tab)};
    }

private:
    std::vector<std::size_t> factors_;
    std::uint64_t cardinality_ = 1;
};

/// c^S: the product of |S| copies of c.
inline IndexedProduct power(const FinSet& c, std::size_t index_size) {
    return IndexedProduct(std::vector<std::size_t>(index_size, c.size));
}

/// c^f : c^{S'} -> c^S for f : S -> S', with (c^f)_s = pr_{f(s)}.
inline FinMap reindex(const FinSet& c, const FinMap& f) {
    const auto source = power(c, f.cod);
    const auto target = power(c, f.dom);
    std::vector<Elem> tab(source.cardinality());
    std::vector<Elem> t(f.dom);
    for (std::uint64_t i = 0; i < source.cardinality(); ++i) {
        const auto u = source.tuple(i);
        for (std::size_t s = 0; s < f.dom; ++s) t[s] = u[f.table[s]];
        tab[i] = static_cast<Elem>(target.index(t));
    }
    return {source.cardinality(), target.cardinality(), std::move(tab)};
}

struct Equalizer {
    FinSet object;
    FinMap inclusion;
};

inline Equalizer equalizer(const FinMap& f, const FinMap& g) {
    if (f.dom != g.dom || f.cod != g.cod) throw StructuralError("equalizer: maps are not parallel");
    std::vector<Elem> inc;
    for (std::size_t x = 0; x < f.dom; ++x)
        if (f.table[x] == g.table[x]) inc.push_back(static_cast<Elem>(x));
    const auto n = inc.size();
    return {FinSet(n), FinMap(n, f.dom, std::move(inc))};
}

struct DiagramArrow {
    std::size_t source;
    std::size_t target;
    FinMap map;
};

struct DiagramInstance {
    std::vector<std::size_t> nodes;  // cardinality of each node set
    std::vector<DiagramArrow> arrows;

    void validate() const {
        for (const auto& a : arrows) {
            if (a.source >= nodes.size() || a.target >= nodes.size())
                throw StructuralError("diagram arrow references a missing node");
            if (a.map.dom != nodes[a.source] || a.map.cod != nodes[a.target])
                throw StructuralError("diagram arrow map does not match its node sets");
        }
    }
};

struct Limit {
    std::vector<std::vector<Elem>> tuples;  // lexicographically sorted
    std::vector<FinMap> projections;        // one per node

    FinSet object() const { return FinSet(tuples.size()); }

    std::optional<std::size_t> find(const std::vector<Elem>& t) const {
        auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
        if (it == tuples.end() || *it != t) return std::nullopt;
        return static_cast<std::size_t>(it - tuples.begin());
    }
};

namespace detail {
inline Limit make_limit(const DiagramInstance& d, std::vector<std::vector<Elem>> tuples) {
    Limit lim{std::move(tuples), {}};
    for (std::size_t n = 0; n < d.nodes.size(); ++n) {
        std::vector<Elem> tab(lim.tuples.size());
        for (std::size_t i = 0; i < lim.tuples.size(); ++i) tab[i] = lim.tuples[i][n];
        lim.projections.emplace_back(lim.tuples.size(), d.nodes[n], std::move(tab));
    }
    return lim;
}
}  // namespace detail

/// The limit of a finite diagram of finite sets: all node-indexed tuples
/// compatible with every arrow. Solved as a CSP, never by materialising the
/// product of the node sets.
inline Limit limit(const DiagramInstance& d) {
    d.validate();
    FunctionalCsp csp;
    for (auto n : d.nodes) csp.add_variable(n);
    for (const auto& a : d.arrows) csp.add_map_constraint(a.source, a.target, a.map.table);
    // Stored solutions are also bounded by memory, not just by count.
    constexpr std::uint64_t kMaxStoredCells = std::uint64_t{1} << 26;
    const std::uint64_t width = std::max<std::uint64_t>(1, d.nodes.size());
    const auto max_solutions = std::min(enumeration_cap(), std::max<std::uint64_t>(1, kMaxStoredCells / width));
    return detail::make_limit(d, csp.solve_all(max_solutions));
}

/// Some r : b -> a with r ∘ section = id_a, if one exists.
inline std::optional<FinMap> find_retraction(const FinSet& a, const FinSet& b, const FinMap& section) {
    if (section.dom != a.size || section.cod != b.size) throw StructuralError("section does not map a -> b");
    if (!section.is_injective()) return std::nullopt;
    if (a.size == 0) {
        if (b.size != 0) return std::nullopt;
        return FinMap(0, 0, {});
    }
    std::vector<Elem> r(b.size, 0);
    for (std::size_t x = 0; x < a.size; ++x) r[section.table[x]] = static_cast<Elem>(x);
    // Points outside the image go to the preimage of the largest image
    // point below them, or 0.
    std::vector<char> in_image(b.size, 0);
    for (auto v : section.table) in_image[v] = 1;
    Elem last = 0;
    for (std::size_t y = 0; y < b.size; ++y) {
        if (in_image[y]) last = r[y];
        else r[y] = last;
    }
    return FinMap(b.size, a.size, std::move(r));
}

// JSON encoding.

inline void to_json(nlohmann::json& j, const FinSet& s) {
    j = nlohmann::json{{"size", s.size}};
    if (!s.labels.empty()) j["labels"] = s.labels;
}

inline void from_json(const nlohmann::json& j, FinSet& s) {
    if (!j.is_object() || !j.contains("size")) throw StructuralError("FinSet JSON needs a size");
    s.size = j.at("size").get<std::size_t>();
    s.labels.clear();
    if (j.contains("labels")) s.labels = j.at("labels").get<std::vector<std::string>>();
    s.validate();
}

inline void to_json(nlohmann::json& j, const FinMap& f) {
    j = nlohmann::json{{"dom", FinSet(f.dom)}, {"cod", FinSet(f.cod)}, {"table", f.table}};
}

inline void from_json(const nlohmann::json& j, FinMap& f) {
    if (!j.is_object() || !j.contains("dom") || !j.contains("cod") || !j.contains("table"))
        throw StructuralError("FinMap JSON needs dom, cod and table");
    f = FinMap(j.at("dom").get<FinSet>().size, j.at("cod").get<FinSet>().size,
               j.at("table").get<std::vector<Elem>>());
}

}  // namespace tmon
