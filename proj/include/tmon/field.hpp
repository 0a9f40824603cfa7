#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tmon/error.hpp"

namespace tmon {

/// The field F_q for small q, elements 0..q-1 with 0 and 1 the additive and
/// multiplicative identities. Prime q uses residues; q = 4 uses polynomials
/// over F_2 modulo x^2 + x + 1, encoded as two-bit coefficient vectors.
class FiniteField {
public:
    explicit FiniteField(std::uint32_t q) : q_(q), add_(q * q), mul_(q * q), neg_(q), inv_(q, 0) {
        if (q == 4) {
            static constexpr std::uint32_t kMul[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
            for (std::uint32_t a = 0; a < 4; ++a)
                for (std::uint32_t b = 0; b < 4; ++b) {
                    add_[a * 4 + b] = a ^ b;
                    mul_[a * 4 + b] = kMul[a][b];
                }
        } else if (is_prime(q)) {
            for (std::uint32_t a = 0; a < q; ++a)
                for (std::uint32_t b = 0; b < q; ++b) {
                    add_[a * q + b] = (a + b) % q;
                    mul_[a * q + b] = (a * b) % q;
                }
        } else {
            throw StructuralError("unsupported field order " + std::to_string(q));
        }
        for (std::uint32_t a = 0; a < q; ++a)
            for (std::uint32_t b = 0; b < q; ++b) {
                if (add(a, b) == 0) neg_[a] = b;
                if (mul(a, b) == 1) inv_[a] = b;
            }
        check_axioms();
    }

    std::uint32_t order() const { return q_; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return add_[a * q_ + b]; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return mul_[a * q_ + b]; }
    std::uint32_t neg(std::uint32_t a) const { return neg_[a]; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw StructuralError("division by zero in F_q");
        return inv_[a];
    }

private:
    std::uint32_t q_;
    std::vector<std::uint32_t> add_, mul_, neg_, inv_;

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    void check_axioms() const {
        for (std::uint32_t a = 0; a < q_; ++a) {
            if (add(a, 0) != a || mul(a, 1) != a) throw InternalConsistencyError("F_q identity law");
            if (a != 0 && mul(a, inv_[a]) != 1) throw InternalConsistencyError("F_q inverse law");
            for (std::uint32_t b = 0; b < q_; ++b) {
                if (add(a, b) != add(b, a) || mul(a, b) != mul(b, a))
                    throw InternalConsistencyError("F_q commutativity");
                for (std::uint32_t c = 0; c < q_; ++c) {
                    if (add(add(a, b), c) != add(a, add(b, c)) || mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw InternalConsistencyError("F_q associativity");
                    if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c)))
                        throw InternalConsistencyError("F_q distributivity");
                }
            }
        }
    }
};

/// A homogeneous linear system over F_q, one row per equation.
struct LinearSystem {
    std::size_t unknowns = 0;
    std::vector<std::vector<std::uint32_t>> rows;

    void add_row(std::vector<std::uint32_t> row) {
        if (row.size() != unknowns) throw StructuralError("equation has wrong number of coefficients");
        rows.push_back(std::move(row));
    }
};

/// Basis of the solution space of a homogeneous system, by reduced row
/// echelon form. Basis vectors are listed by increasing free column.
inline std::vector<std::vector<std::uint32_t>> nullspace(const FiniteField& k, LinearSystem sys) {
    auto& m = sys.rows;
    const std::size_t n = sys.unknowns;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < m.size(); ++col) {
        std::size_t p = r;
        while (p < m.size() && m[p][col] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        const auto s = k.inv(m[r][col]);
        for (auto& v : m[r]) v = k.mul(v, s);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][col] == 0) continue;
            const auto f = m[i][col];
            for (std::size_t j = 0; j < n; ++j) m[i][j] = k.sub(m[i][j], k.mul(f, m[r][j]));
        }
        pivot_col.push_back(col);
        ++r;
    }
    std::vector<char> is_pivot(n, 0);
    for (auto c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint32_t> v(n, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = k.neg(m[i][free]);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace tmon
