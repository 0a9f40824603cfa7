#pragma once

// Finite-domain constraint solver for functional constraints
//
//     x_target == table(x_source_1, ..., x_source_k)
//
// which is the only constraint shape the limit, comma-category and operadic
// computations produce. Search is depth-first with minimum-remaining-values
// variable ordering and generalized arc consistency after every decision.
// Solutions are returned sorted lexicographically, independent of the
// order in which the search visits them.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "tmon/error.hpp"

namespace tmon {

/// Dense bitset domain of a CSP variable.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::size_t size) : size_(size), words_((size + 63) / 64, ~std::uint64_t{0}) {
        if (size % 64 != 0 && !words_.empty()) words_.back() = (std::uint64_t{1} << (size % 64)) - 1;
    }

    std::size_t universe() const { return size_; }
    bool contains(std::size_t v) const { return v < size_ && ((words_[v / 64] >> (v % 64)) & 1U); }
    void erase(std::size_t v) { words_[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    bool empty() const {
        return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
    }

    std::vector<Elem> values() const {
        std::vector<Elem> out;
        for (std::size_t i = 0; i < words_.size(); ++i)
            for (auto w = words_[i]; w != 0; w &= w - 1)
                out.push_back(static_cast<Elem>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
        return out;
    }

    /// Keeps exactly the values in `keep`. Returns true if anything changed.
    bool intersect(const Domain& keep) {
        bool changed = false;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            auto nw = words_[i] & keep.words_[i];
            changed |= nw != words_[i];
            words_[i] = nw;
        }
        return changed;
    }

    static Domain none(std::size_t size) {
        Domain d(size);
        std::fill(d.words_.begin(), d.words_.end(), 0);
        return d;
    }
    void insert(std::size_t v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

class FunctionalCsp {
public:
    /// Marks a table entry whose source tuple is forbidden outright.
    static constexpr Elem kForbidden = ~Elem{0};

    std::size_t add_variable(std::size_t domain_size) {
        domains_.emplace_back(domain_size);
        watchers_.emplace_back();
        return domains_.size() - 1;
    }

    std::size_t variable_count() const { return domains_.size(); }

    /// Restricts a variable to one value.
    void fix(std::size_t var, Elem value) {
        auto keep = Domain::none(domains_.at(var).universe());
        if (value < keep.universe()) keep.insert(value);
        domains_[var].intersect(keep);
    }

    void remove_value(std::size_t var, Elem value) {
        if (value < domains_.at(var).universe()) domains_[var].erase(value);
    }

    /// `table` is indexed row-major over the source domains, first source
    /// most significant; its length must equal the product of the source
    /// domain sizes.
    void add_constraint(std::vector<std::size_t> sources, std::size_t target, std::vector<Elem> table) {
        std::size_t expected = 1;
        for (auto s : sources) {
            if (s >= domains_.size()) throw StructuralError("constraint source out of range");
            expected *= domains_[s].universe();
        }
        if (target >= domains_.size()) throw StructuralError("constraint target out of range");
        if (table.size() != expected) throw StructuralError("constraint table has wrong length");
        const std::size_t id = constraints_.size();
        for (auto s : sources) watchers_[s].push_back(id);
        watchers_[target].push_back(id);
        constraints_.push_back({std::move(sources), target, std::move(table)});
    }

    /// Convenience for unary maps: x_target == map[x_source].
    void add_map_constraint(std::size_t source, std::size_t target, std::vector<Elem> map) {
        add_constraint({source}, target, std::move(map));
    }

    /// All solutions, lexicographically sorted. Throws EnumerationTooLarge
    /// once the number of solutions exceeds `max_solutions`.
    std::vector<std::vector<Elem>> solve_all(std::uint64_t max_solutions = enumeration_cap()) const {
        std::vector<std::vector<Elem>> out;
        auto doms = domains_;
        if (propagate_all(doms)) search(doms, out, max_solutions, nullptr, false);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::uint64_t count(std::uint64_t max_solutions = enumeration_cap()) const {
        return solve_all(max_solutions).size();
    }

    /// One solution, chosen by randomized value ordering when `rng` is set.
    std::optional<std::vector<Elem>> solve_one(std::mt19937_64* rng = nullptr) const {
        std::vector<std::vector<Elem>> out;
        auto doms = domains_;
        if (propagate_all(doms)) search(doms, out, 1, rng, true);
        if (out.empty()) return std::nullopt;
        return out.front();
    }

private:
    struct Constraint {
        std::vector<std::size_t> sources;
        std::size_t target;
        std::vector<Elem> table;
    };

    // Source tuples above this many are only checked once fully assigned.
    static constexpr std::size_t kRevisionBudget = 1 << 14;

    std::vector<Domain> domains_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> watchers_;

    // Generalized arc consistency for one constraint. Returns the variables
    // whose domains shrank, or nullopt on wipe-out.
    std::optional<std::vector<std::size_t>> revise(const Constraint& c, std::vector<Domain>& doms) const {
        const std::size_t k = c.sources.size();
        std::vector<std::vector<Elem>> vals(k);
        std::size_t product = 1;
        for (std::size_t i = 0; i < k; ++i) {
            vals[i] = doms[c.sources[i]].values();
            if (vals[i].empty()) return std::nullopt;
            product *= vals[i].size();
            if (product > kRevisionBudget) return std::vector<std::size_t>{};
        }
        std::vector<Domain> support;
        support.reserve(k);
        for (std::size_t i = 0; i < k; ++i) support.push_back(Domain::none(doms[c.sources[i]].universe()));
        Domain target_support = Domain::none(doms[c.target].universe());

        std::vector<std::size_t> pos(k, 0);
        for (std::size_t step = 0; step < product; ++step) {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < k; ++i) idx = idx * doms[c.sources[i]].universe() + vals[i][pos[i]];
            const Elem v = c.table[idx];
            if (v != kForbidden && doms[c.target].contains(v)) {
                // A variable may appear both as source and target.
                bool coherent = true;
                for (std::size_t i = 0; i < k && coherent; ++i)
                    if (c.sources[i] == c.target && vals[i][pos[i]] != v) coherent = false;
                for (std::size_t i = 0; i < k && coherent; ++i)
                    for (std::size_t j = i + 1; j < k; ++j)
                        if (c.sources[i] == c.sources[j] && vals[i][pos[i]] != vals[j][pos[j]]) coherent = false;
                if (coherent) {
                    target_support.insert(v);
                    for (std::size_t i = 0; i < k; ++i) support[i].insert(vals[i][pos[i]]);
                }
            }
            for (std::size_t i = k; i-- > 0;) {
                if (++pos[i] < vals[i].size()) break;
                pos[i] = 0;
            }
        }
        std::vector<std::size_t> changed;
        if (doms[c.target].intersect(target_support)) changed.push_back(c.target);
        if (doms[c.target].empty()) return std::nullopt;
        for (std::size_t i = 0; i < k; ++i) {
            if (doms[c.sources[i]].intersect(support[i])) changed.push_back(c.sources[i]);
            if (doms[c.sources[i]].empty()) return std::nullopt;
        }
        return changed;
    }

    bool propagate(std::vector<Domain>& doms, std::deque<std::size_t> queue) const {
        std::vector<char> queued(constraints_.size(), 0);
        for (auto q : queue) queued[q] = 1;
        while (!queue.empty()) {
            const auto ci = queue.front();
            queue.pop_front();
            queued[ci] = 0;
            auto changed = revise(constraints_[ci], doms);
            if (!changed) return false;
            for (auto var : *changed)
                for (auto w : watchers_[var])
                    if (!queued[w]) {
                        queued[w] = 1;
                        queue.push_back(w);
                    }
        }
        return true;
    }

    bool propagate_all(std::vector<Domain>& doms) const {
        for (const auto& d : doms)
            if (d.empty()) return false;
        std::deque<std::size_t> all(constraints_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return propagate(doms, std::move(all));
    }

    bool consistent(const std::vector<Domain>& doms) const {
        for (const auto& c : constraints_) {
            std::size_t idx = 0;
            for (auto s : c.sources) idx = idx * doms[s].universe() + doms[s].values().front();
            if (c.table[idx] != doms[c.target].values().front()) return false;
        }
        return true;
    }

    // Returns true to stop the search early.
    bool search(std::vector<Domain>& doms, std::vector<std::vector<Elem>>& out, std::uint64_t max_solutions,
                std::mt19937_64* rng, bool stop_at_max) const {
        std::size_t best = doms.size();
        std::size_t best_count = 0;
        for (std::size_t v = 0; v < doms.size(); ++v) {
            const auto n = doms[v].count();
            if (n > 1 && (best == doms.size() || n < best_count ||
                          (n == best_count && watchers_[v].size() > watchers_[best].size()))) {
                best = v;
                best_count = n;
            }
        }
        if (best == doms.size()) {
            // Every domain is a singleton; constraints skipped by the revision
            // budget still need a final check.
            if (!consistent(doms)) return false;
            std::vector<Elem> sol(doms.size());
            for (std::size_t v = 0; v < doms.size(); ++v) sol[v] = doms[v].values().front();
            out.push_back(std::move(sol));
            if (stop_at_max && out.size() >= max_solutions) return true;
            if (out.size() > max_solutions)
                throw EnumerationTooLarge("solution set exceeds " + std::to_string(max_solutions));
            return false;
        }
        auto values = doms[best].values();
        if (rng) std::shuffle(values.begin(), values.end(), *rng);
        for (auto value : values) {
            auto next = doms;
            auto keep = Domain::none(next[best].universe());
            keep.insert(value);
            next[best].intersect(keep);
            std::deque<std::size_t> q(watchers_[best].begin(), watchers_[best].end());
            if (!propagate(next, std::move(q))) continue;
            if (search(next, out, max_solutions, rng, stop_at_max)) return true;
        }
        return false;
    }
};

}  // namespace tmon
