#pragma once

#include <memory>
#include <vector>

#include "tmon/error.hpp"
#include "tmon/field.hpp"
#include "tmon/finset.hpp"

namespace tmon {

/// A finite vector space over F_q with explicitly enumerated vectors 0..n-1.
/// Arbitrary subspaces of products arise as limits, so the space is stored
/// by its operation tables rather than as coordinate tuples.
class VectSpace {
public:
    VectSpace(std::shared_ptr<const FiniteField> k, std::size_t n, std::vector<Elem> add, std::vector<Elem> scale,
              Elem zero)
        : k_(std::move(k)), n_(n), add_(std::move(add)), scale_(std::move(scale)), zero_(zero) {
        if (n_ == 0) throw StructuralError("a vector space has at least the zero vector");
        check_cap(n_, "vector space");
        if (add_.size() != n_ * n_ || scale_.size() != k_->order() * n_)
            throw StructuralError("vector space tables have wrong size");
        validate();
        compute_basis();
    }

    /// F_q^dim with vector (c_0, ..., c_{dim-1}) at index Σ c_i q^{dim-1-i}.
    static VectSpace coordinate(std::shared_ptr<const FiniteField> k, std::size_t dim) {
        const std::size_t q = k->order();
        const auto n = saturating_pow(q, dim);
        if (n > (std::uint64_t{1} << 16)) throw EnumerationTooLarge("F_q^dim exceeds 2^16 vectors");
        IndexedProduct coords(std::vector<std::size_t>(dim, q));
        std::vector<Elem> add(n * n), scale(q * n);
        for (std::uint64_t a = 0; a < n; ++a) {
            const auto ca = coords.tuple(a);
            for (std::uint64_t b = 0; b < n; ++b) {
                const auto cb = coords.tuple(b);
                std::vector<Elem> c(dim);
                for (std::size_t i = 0; i < dim; ++i) c[i] = k->add(ca[i], cb[i]);
                add[a * n + b] = static_cast<Elem>(coords.index(c));
            }
            for (std::uint32_t s = 0; s < q; ++s) {
                std::vector<Elem> c(dim);
                for (std::size_t i = 0; i < dim; ++i) c[i] = k->mul(s, ca[i]);
                scale[s * n + a] = static_cast<Elem>(coords.index(c));
            }
        }
        return VectSpace(std::move(k), n, std::move(add), std::move(scale), 0);
    }

    const FiniteField& field() const { return *k_; }
    std::shared_ptr<const FiniteField> field_ptr() const { return k_; }
    std::size_t size() const { return n_; }
    std::size_t dim() const { return basis_.size(); }
    Elem zero() const { return zero_; }
    Elem add(Elem a, Elem b) const { return add_[a * n_ + b]; }
    Elem scale(std::uint32_t s, Elem v) const { return scale_[s * n_ + v]; }
    const std::vector<Elem>& basis() const { return basis_; }
    const std::vector<Elem>& add_table() const { return add_; }
    const std::vector<Elem>& scale_table() const { return scale_; }

    /// Coordinates of v in basis(), as field elements.
    const std::vector<std::uint32_t>& coordinates(Elem v) const { return coords_[v]; }

    bool is_linear_to(const VectSpace& w, const FinMap& f) const {
        if (f.dom != n_ || f.cod != w.size()) return false;
        for (Elem a = 0; a < n_; ++a) {
            for (Elem b = 0; b < n_; ++b)
                if (f(add(a, b)) != w.add(f(a), f(b))) return false;
            for (std::uint32_t s = 0; s < k_->order(); ++s)
                if (f(scale(s, a)) != w.scale(s, f(a))) return false;
        }
        return true;
    }

    /// Every linear map this -> w, determined by images of the basis, in
    /// lexicographic order of tables.
    std::vector<FinMap> linear_maps_to(const VectSpace& w) const {
        if (w.field().order() != k_->order()) throw StructuralError("linear maps between different fields");
        const auto count = saturating_pow(w.size(), dim());
        check_cap(count, "Hom(V,W)");
        std::vector<FinMap> out;
        std::vector<Elem> images(dim(), 0);
        for (std::uint64_t c = 0; c < count; ++c) {
            std::vector<Elem> t(n_);
            for (Elem v = 0; v < n_; ++v) {
                Elem acc = w.zero();
                for (std::size_t i = 0; i < dim(); ++i) acc = w.add(acc, w.scale(coords_[v][i], images[i]));
                t[v] = acc;
            }
            out.emplace_back(n_, w.size(), std::move(t));
            for (std::size_t p = dim(); p-- > 0;) {
                if (++images[p] < w.size()) break;
                images[p] = 0;
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::shared_ptr<const FiniteField> k_;
    std::size_t n_;
    std::vector<Elem> add_, scale_;
    Elem zero_;
    std::vector<Elem> basis_;
    std::vector<std::vector<std::uint32_t>> coords_;

    void validate() const {
        for (auto v : add_)
            if (v >= n_) throw StructuralError("vector addition out of range");
        for (auto v : scale_)
            if (v >= n_) throw StructuralError("scalar multiplication out of range");
        const auto q = k_->order();
        for (Elem a = 0; a < n_; ++a) {
            if (add(a, zero_) != a || scale(1, a) != a || scale(0, a) != zero_)
                throw StructuralError("vector space identity laws fail");
            for (Elem b = 0; b < n_; ++b) {
                if (add(a, b) != add(b, a)) throw StructuralError("vector addition not commutative");
                for (std::uint32_t s = 0; s < q; ++s)
                    if (scale(s, add(a, b)) != add(scale(s, a), scale(s, b)))
                        throw StructuralError("scalar multiplication not distributive");
            }
            for (std::uint32_t s = 0; s < q; ++s)
                for (std::uint32_t t = 0; t < q; ++t) {
                    if (scale(k_->add(s, t), a) != add(scale(s, a), scale(t, a)))
                        throw StructuralError("scalar addition not distributive");
                    if (scale(k_->mul(s, t), a) != scale(s, scale(t, a)))
                        throw StructuralError("scalar multiplication not associative");
                }
        }
        if (n_ <= 64)
            for (Elem a = 0; a < n_; ++a)
                for (Elem b = 0; b < n_; ++b)
                    for (Elem c = 0; c < n_; ++c)
                        if (add(add(a, b), c) != add(a, add(b, c)))
                            throw StructuralError("vector addition not associative");
    }

    void compute_basis() {
        const auto q = k_->order();
        std::vector<char> in_span(n_, 0);
        std::vector<Elem> span{zero_};
        in_span[zero_] = 1;
        for (Elem v = 0; v < n_ && span.size() < n_; ++v) {
            if (in_span[v]) continue;
            basis_.push_back(v);
            std::vector<Elem> next;
            for (auto u : span)
                for (std::uint32_t s = 0; s < q; ++s) next.push_back(add(u, scale(s, v)));
            for (auto u : next) in_span[u] = 1;
            span.clear();
            for (Elem u = 0; u < n_; ++u)
                if (in_span[u]) span.push_back(u);
        }
        if (span.size() != n_) throw StructuralError("vector space is not spanned by its vectors");
        coords_.assign(n_, {});
        IndexedProduct combos(std::vector<std::size_t>(basis_.size(), q));
        if (combos.cardinality() != n_) throw StructuralError("vector space size is not a power of q");
        for (std::uint64_t c = 0; c < combos.cardinality(); ++c) {
            const auto coeff = combos.tuple(c);
            Elem acc = zero_;
            for (std::size_t i = 0; i < basis_.size(); ++i) acc = add(acc, scale(coeff[i], basis_[i]));
            coords_[acc].assign(coeff.begin(), coeff.end());
        }
    }
};

}  // namespace tmon
