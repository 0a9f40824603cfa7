#pragma once

// Finite concrete categories: finite sets, finite groups and finite vector
// spaces over F_q. Every object has an underlying set {0..n-1}; morphisms are
// FinMaps that pass the kind's structure check. Limits are computed on
// underlying sets and then equipped with the pointwise structure.
//
// Only finite diagrams are supported.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tmon/error.hpp"
#include "tmon/finset.hpp"
#include "tmon/group.hpp"
#include "tmon/vect.hpp"

namespace tmon {

enum class Kind { set, group, vect };

inline std::string to_string(Kind k) {
    switch (k) {
        case Kind::set: return "finset";
        case Kind::group: return "fingrp";
        case Kind::vect: return "finvect";
    }
    return "?";
}

class Object {
public:
    Object() = default;

    static Object set(std::size_t n) {
        Object o;
        o.kind_ = Kind::set;
        o.size_ = n;
        return o;
    }
    static Object group(Group g) {
        Object o;
        o.kind_ = Kind::group;
        o.size_ = g.size();
        o.group_ = std::make_shared<const Group>(std::move(g));
        return o;
    }
    static Object vect(VectSpace v) {
        Object o;
        o.kind_ = Kind::vect;
        o.size_ = v.size();
        o.vect_ = std::make_shared<const VectSpace>(std::move(v));
        return o;
    }

    Kind kind() const { return kind_; }
    std::size_t size() const { return size_; }
    const Group& as_group() const {
        if (!group_) throw StructuralError("object is not a group");
        return *group_;
    }
    const VectSpace& as_vect() const {
        if (!vect_) throw StructuralError("object is not a vector space");
        return *vect_;
    }

    bool is_morphism_to(const Object& d, const FinMap& f) const {
        if (kind_ != d.kind_ || f.dom != size_ || f.cod != d.size_) return false;
        switch (kind_) {
            case Kind::set: return true;
            case Kind::group: return group_->is_homomorphism_to(*d.group_, f);
            case Kind::vect: return vect_->is_linear_to(*d.vect_, f);
        }
        return false;
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::set: return std::to_string(size_);
            case Kind::group: return "group of order " + std::to_string(size_);
            case Kind::vect:
                return "F_" + std::to_string(vect_->field().order()) + "^" + std::to_string(vect_->dim());
        }
        return "?";
    }

    bool operator==(const Object& o) const {
        if (kind_ != o.kind_ || size_ != o.size_) return false;
        if (kind_ == Kind::group) return *group_ == *o.group_;
        if (kind_ == Kind::vect)
            return vect_->add_table() == o.vect_->add_table() && vect_->scale_table() == o.vect_->scale_table();
        return true;
    }

private:
    Kind kind_ = Kind::set;
    std::size_t size_ = 0;
    std::shared_ptr<const Group> group_;
    std::shared_ptr<const VectSpace> vect_;
};

/// Complete, duplicate-free enumeration of hom(c, d), sorted by table.
inline std::vector<FinMap> hom(const Object& c, const Object& d) {
    if (c.kind() != d.kind()) throw StructuralError("hom between objects of different categories");
    switch (c.kind()) {
        case Kind::set: return all_maps(c.size(), d.size());
        case Kind::group: return group_homs(c.as_group(), d.as_group());
        case Kind::vect: return c.as_vect().linear_maps_to(d.as_vect());
    }
    return {};
}

struct CategoryDiagram {
    std::vector<Object> nodes;
    std::vector<DiagramArrow> arrows;

    DiagramInstance underlying() const {
        DiagramInstance d;
        for (const auto& n : nodes) d.nodes.push_back(n.size());
        d.arrows = arrows;
        return d;
    }

    void validate() const {
        underlying().validate();
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (nodes[i].kind() != nodes[0].kind()) throw StructuralError("diagram mixes categories");
        for (const auto& a : arrows)
            if (!nodes[a.source].is_morphism_to(nodes[a.target], a.map))
                throw StructuralError("diagram arrow is not a morphism of its category");
    }
};

struct CategoryLimit {
    Limit cone;     // underlying tuples and projections
    Object object;  // the limit with its pointwise structure
};

namespace detail {

inline std::size_t pointwise(const Limit& lim, const std::vector<Elem>& t, const char* what) {
    auto idx = lim.find(t);
    if (!idx) throw InternalConsistencyError(std::string("limit not closed under pointwise ") + what);
    return *idx;
}

/// Equips a solution set whose nodes are groups with the pointwise product.
inline Object pointwise_group(const std::vector<Object>& nodes, const Limit& lim) {
    const auto n = lim.tuples.size();
    if (n == 0) throw InternalConsistencyError("group limit is empty");
    std::vector<Elem> table(n * n);
    std::vector<Elem> t(nodes.size());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t i = 0; i < nodes.size(); ++i)
                t[i] = nodes[i].as_group().mul(lim.tuples[a][i], lim.tuples[b][i]);
            table[a * n + b] = static_cast<Elem>(pointwise(lim, t, "multiplication"));
        }
    return Object::group(Group(n, std::move(table)));
}

inline Object pointwise_vect(const std::vector<Object>& nodes, const Limit& lim,
                             std::shared_ptr<const FiniteField> k) {
    const auto n = lim.tuples.size();
    if (n == 0) throw InternalConsistencyError("vector space limit is empty");
    const auto q = k->order();
    std::vector<Elem> add(n * n), scale(q * n);
    std::vector<Elem> t(nodes.size());
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t i = 0; i < nodes.size(); ++i)
                t[i] = nodes[i].as_vect().add(lim.tuples[a][i], lim.tuples[b][i]);
            add[a * n + b] = static_cast<Elem>(pointwise(lim, t, "addition"));
        }
        for (std::uint32_t s = 0; s < q; ++s) {
            for (std::size_t i = 0; i < nodes.size(); ++i) t[i] = nodes[i].as_vect().scale(s, lim.tuples[a][i]);
            scale[s * n + a] = static_cast<Elem>(pointwise(lim, t, "scaling"));
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) t[i] = nodes[i].as_vect().zero();
    const auto zero = static_cast<Elem>(pointwise(lim, t, "zero"));
    return Object::vect(VectSpace(std::move(k), n, std::move(add), std::move(scale), zero));
}

}  // namespace detail

/// Limit of a finite diagram within its category. The empty diagram of
/// groups or vector spaces yields the trivial group / zero space.
inline CategoryLimit limit_in_category(const CategoryDiagram& diagram, Kind kind = Kind::set,
                                       std::shared_ptr<const FiniteField> field = nullptr) {
    diagram.validate();
    if (!diagram.nodes.empty()) kind = diagram.nodes[0].kind();
    auto lim = limit(diagram.underlying());
    switch (kind) {
        case Kind::set: return {lim, Object::set(lim.tuples.size())};
        case Kind::group: return {lim, detail::pointwise_group(diagram.nodes, lim)};
        case Kind::vect: {
            if (!diagram.nodes.empty()) field = diagram.nodes[0].as_vect().field_ptr();
            if (!field) throw StructuralError("empty vector space diagram needs a field");
            return {lim, detail::pointwise_vect(diagram.nodes, lim, field)};
        }
    }
    throw StructuralError("unknown category kind");
}

struct CommaObject {
    std::size_t d_index;
    FinMap f;  // c -> D[d_index]
};

struct CommaArrow {
    std::size_t source;  // comma object indices
    std::size_t target;
    std::size_t alpha;   // index into homs(d_source, d_target)
};

/// The comma category c ↓ D for a finite list D of objects. Objects are
/// ordered by (position of d in D, table of f).
class CommaCategory {
public:
    CommaCategory(Object base, std::vector<Object> targets) : base_(std::move(base)), targets_(std::move(targets)) {
        if (targets_.empty()) throw PreconditionViolation("comma category needs a nonempty D");
        for (const auto& d : targets_)
            if (d.kind() != base_.kind()) throw StructuralError("comma category mixes categories");
        offsets_.push_back(0);
        for (std::size_t i = 0; i < targets_.size(); ++i) {
            auto fs = hom(base_, targets_[i]);
            for (auto& f : fs) {
                index_.emplace(std::make_pair(i, f.table), objects_.size());
                objects_.push_back({i, std::move(f)});
            }
            offsets_.push_back(objects_.size());
        }
        homs_.resize(targets_.size());
        for (std::size_t i = 0; i < targets_.size(); ++i)
            for (std::size_t j = 0; j < targets_.size(); ++j) homs_[i].push_back(hom(targets_[i], targets_[j]));
        Nat arrow_count = 0;
        for (std::size_t i = 0; i < targets_.size(); ++i)
            for (std::size_t j = 0; j < targets_.size(); ++j)
                arrow_count += Nat(offsets_[i + 1] - offsets_[i]) * homs_[i][j].size();
        check_cap(arrow_count, "comma category arrows");
        for (std::size_t s = 0; s < objects_.size(); ++s) {
            const auto i = objects_[s].d_index;
            for (std::size_t j = 0; j < targets_.size(); ++j)
                for (std::size_t a = 0; a < homs_[i][j].size(); ++a) {
                    const auto g = compose(homs_[i][j][a], objects_[s].f);
                    arrows_.push_back({s, *find(j, g), a});
                }
        }
    }

    const Object& base() const { return base_; }
    const std::vector<Object>& targets() const { return targets_; }
    const std::vector<CommaObject>& objects() const { return objects_; }
    const std::vector<CommaArrow>& arrows() const { return arrows_; }

    /// hom(D[i], D[j]) in canonical order.
    const std::vector<FinMap>& target_homs(std::size_t i, std::size_t j) const { return homs_[i][j]; }

    const FinMap& alpha(const CommaArrow& a) const {
        return homs_[objects_[a.source].d_index][objects_[a.target].d_index][a.alpha];
    }

    std::optional<std::size_t> find(std::size_t d_index, const FinMap& f) const {
        auto it = index_.find({d_index, f.table});
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// The projection functor c ↓ D -> D as a diagram of underlying sets.
    CategoryDiagram projection_diagram() const {
        CategoryDiagram d;
        for (const auto& o : objects_) d.nodes.push_back(targets_[o.d_index]);
        for (const auto& a : arrows_) d.arrows.push_back({a.source, a.target, alpha(a)});
        return d;
    }

private:
    Object base_;
    std::vector<Object> targets_;
    std::vector<CommaObject> objects_;
    std::vector<CommaArrow> arrows_;
    std::vector<std::size_t> offsets_;
    std::vector<std::vector<std::vector<FinMap>>> homs_;
    std::map<std::pair<std::size_t, std::vector<Elem>>, std::size_t> index_;
};

// JSON object descriptors: {"kind":"finset","size":n},
// {"kind":"fingrp","table":[[...],...]} or {"kind":"fingrp","name":"S3"},
// {"kind":"finvect","q":q,"dim":n}.

inline Object object_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw StructuralError("object descriptor needs a kind");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "finset") return Object::set(j.at("size").get<std::size_t>());
    if (kind == "fingrp") {
        if (j.contains("name")) return Object::group(group_by_name(j.at("name").get<std::string>()));
        const auto rows = j.at("table").get<std::vector<std::vector<Elem>>>();
        std::vector<Elem> flat;
        for (const auto& r : rows) {
            if (r.size() != rows.size()) throw StructuralError("group table must be square");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return Object::group(Group(rows.size(), std::move(flat)));
    }
    if (kind == "finvect") {
        auto k = std::make_shared<const FiniteField>(j.at("q").get<std::uint32_t>());
        return Object::vect(VectSpace::coordinate(std::move(k), j.at("dim").get<std::size_t>()));
    }
    throw StructuralError("unknown object kind '" + kind + "'");
}

inline nlohmann::json object_to_json(const Object& o) {
    switch (o.kind()) {
        case Kind::set: return {{"kind", "finset"}, {"size", o.size()}};
        case Kind::group: {
            std::vector<std::vector<Elem>> rows(o.size());
            for (std::size_t a = 0; a < o.size(); ++a)
                for (std::size_t b = 0; b < o.size(); ++b)
                    rows[a].push_back(o.as_group().mul(static_cast<Elem>(a), static_cast<Elem>(b)));
            return {{"kind", "fingrp"}, {"table", rows}};
        }
        case Kind::vect:
            return {{"kind", "finvect"}, {"q", o.as_vect().field().order()}, {"dim", o.as_vect().dim()}};
    }
    return {};
}

}  // namespace tmon
