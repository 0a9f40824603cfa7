#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "tmon/category.hpp"
#include "tmon/csp.hpp"

using namespace tmon;

namespace {

// Every assignment of the variables, filtered by the constraints.
std::vector<std::vector<Elem>> brute_force(const std::vector<std::size_t>& doms,
                                           const std::vector<std::tuple<std::vector<std::size_t>, std::size_t,
                                                                        std::vector<Elem>>>& cons) {
    IndexedProduct p(doms);
    std::vector<std::vector<Elem>> out;
    for (std::uint64_t i = 0; i < p.cardinality(); ++i) {
        const auto t = p.tuple(i);
        bool ok = true;
        for (const auto& [src, tgt, table] : cons) {
            std::size_t idx = 0;
            for (auto s : src) idx = idx * doms[s] + t[s];
            ok = ok && table[idx] == t[tgt];
        }
        if (ok) out.push_back(t);
    }
    return out;
}

}  // namespace

TEST_CASE("functional CSP agrees with brute force") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> nv(1, 5), ds(1, 3), nc(0, 5), ar(0, 2);
        std::vector<std::size_t> doms(nv(rng));
        for (auto& d : doms) d = ds(rng);
        std::uniform_int_distribution<std::size_t> var(0, doms.size() - 1);
        std::vector<std::tuple<std::vector<std::size_t>, std::size_t, std::vector<Elem>>> cons;
        FunctionalCsp csp;
        for (auto d : doms) csp.add_variable(d);
        const auto k = nc(rng);
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<std::size_t> src(ar(rng));
            std::size_t len = 1;
            for (auto& s : src) {
                s = var(rng);
                len *= doms[s];
            }
            const auto tgt = var(rng);
            std::uniform_int_distribution<Elem> val(0, static_cast<Elem>(doms[tgt] - 1));
            std::vector<Elem> table(len);
            for (auto& v : table) v = val(rng);
            csp.add_constraint(src, tgt, table);
            cons.emplace_back(src, tgt, table);
        }
        const auto expect = brute_force(doms, cons);
        REQUIRE(csp.solve_all() == expect);
        const auto one = csp.solve_one(&rng);
        REQUIRE(one.has_value() == !expect.empty());
        if (one) REQUIRE(std::binary_search(expect.begin(), expect.end(), *one));
    }
}

TEST_CASE("CSP fix and remove_value restrict domains") {
    FunctionalCsp csp;
    const auto a = csp.add_variable(3), b = csp.add_variable(3);
    csp.add_map_constraint(a, b, {1, 2, 0});
    csp.fix(a, 2);
    REQUIRE(csp.solve_all() == std::vector<std::vector<Elem>>{{2, 0}});
    FunctionalCsp c2;
    c2.add_variable(4);
    c2.remove_value(0, 1);
    CHECK(c2.count() == 3);
    CHECK_THROWS_AS(c2.add_constraint({0}, 0, {0, 1}), StructuralError);
}

TEST_CASE("group homomorphism counts") {
    for (std::size_t m = 1; m <= 6; ++m)
        for (std::size_t n = 1; n <= 6; ++n)
            REQUIRE(group_homs(cyclic_group(m), cyclic_group(n)).size() == std::gcd(m, n));
    const auto s3 = symmetric_group(3);
    CHECK(group_homs(s3, s3).size() == 10);
    CHECK(group_homs(s3, cyclic_group(2)).size() == 2);
    CHECK(group_homs(s3, cyclic_group(3)).size() == 1);
    const auto v4 = group_by_name("C2xC2");
    CHECK(group_homs(v4, v4).size() == 16);
    auto a = group_homs_by_set_maps(s3, s3), b = group_homs_by_generators(s3, s3);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("group basics") {
    const auto s3 = symmetric_group(3);
    CHECK(s3.exponent() == 6);
    CHECK(cyclic_group(4).exponent() == 4);
    CHECK(group_by_name("C2xC2").exponent() == 2);
    CHECK_THROWS_AS(Group(2, {0, 0, 0, 0}), StructuralError);
    CHECK_THROWS_AS(group_by_name("Q8"), StructuralError);
    for (Elem g = 0; g < s3.size(); ++g) CHECK(s3.mul(g, s3.inverse(g)) == s3.identity());
}

TEST_CASE("finite fields satisfy the field axioms") {
    for (std::uint32_t q : {2U, 3U, 4U, 5U, 7U}) {
        FiniteField k(q);
        for (std::uint32_t a = 0; a < q; ++a)
            for (std::uint32_t b = 0; b < q; ++b) {
                REQUIRE(k.add(a, k.neg(a)) == 0);
                REQUIRE(k.mul(a, b) == k.mul(b, a));
                for (std::uint32_t c = 0; c < q; ++c) {
                    REQUIRE(k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c)));
                    REQUIRE(k.mul(k.mul(a, b), c) == k.mul(a, k.mul(b, c)));
                }
            }
        for (std::uint32_t a = 1; a < q; ++a) CHECK(k.mul(a, k.inv(a)) == 1);
    }
    CHECK_THROWS_AS(FiniteField(6), StructuralError);
    CHECK_THROWS_AS(FiniteField(8), StructuralError);
}

TEST_CASE("nullspace basis solves the system and counts solutions") {
    std::mt19937_64 rng(23);
    for (std::uint32_t q : {2U, 3U}) {
        FiniteField k(q);
        for (int trial = 0; trial < 40; ++trial) {
            std::uniform_int_distribution<std::size_t> un(1, 5), rows(0, 4);
            std::uniform_int_distribution<std::uint32_t> coef(0, q - 1);
            LinearSystem sys;
            sys.unknowns = un(rng);
            const auto r = rows(rng);
            for (std::size_t i = 0; i < r; ++i) {
                std::vector<std::uint32_t> row(sys.unknowns);
                for (auto& c : row) c = coef(rng);
                sys.add_row(row);
            }
            const auto basis = nullspace(k, sys);
            for (const auto& v : basis)
                for (const auto& row : sys.rows) {
                    std::uint32_t s = 0;
                    for (std::size_t j = 0; j < v.size(); ++j) s = k.add(s, k.mul(row[j], v[j]));
                    REQUIRE(s == 0);
                }
            IndexedProduct all(std::vector<std::size_t>(sys.unknowns, q));
            std::uint64_t count = 0;
            for (std::uint64_t i = 0; i < all.cardinality(); ++i) {
                const auto x = all.tuple(i);
                bool ok = true;
                for (const auto& row : sys.rows) {
                    std::uint32_t s = 0;
                    for (std::size_t j = 0; j < x.size(); ++j) s = k.add(s, k.mul(row[j], x[j]));
                    ok = ok && s == 0;
                }
                count += ok;
            }
            REQUIRE(count == saturating_pow(q, basis.size()));
        }
    }
}

TEST_CASE("vector spaces and linear maps") {
    auto f2 = std::make_shared<const FiniteField>(2);
    auto f3 = std::make_shared<const FiniteField>(3);
    const auto v2 = VectSpace::coordinate(f2, 2), v1 = VectSpace::coordinate(f2, 1);
    CHECK(v2.size() == 4);
    CHECK(v2.dim() == 2);
    CHECK(v2.linear_maps_to(v2).size() == 16);
    CHECK(v2.linear_maps_to(v1).size() == 4);
    CHECK(VectSpace::coordinate(f3, 2).linear_maps_to(VectSpace::coordinate(f3, 1)).size() == 9);
    for (const auto& f : v2.linear_maps_to(v1)) CHECK(v2.is_linear_to(v1, f));
    CHECK_FALSE(v2.is_linear_to(v1, FinMap(4, 2, {1, 0, 0, 0})));
}

TEST_CASE("hom dispatches per category") {
    auto f2 = std::make_shared<const FiniteField>(2);
    CHECK(hom(Object::set(2), Object::set(3)).size() == 9);
    CHECK(hom(Object::group(cyclic_group(2)), Object::group(cyclic_group(4))).size() == 2);
    CHECK(hom(Object::vect(VectSpace::coordinate(f2, 2)), Object::vect(VectSpace::coordinate(f2, 1))).size() == 4);
    CHECK_THROWS_AS(hom(Object::set(2), Object::group(cyclic_group(2))), StructuralError);
}

TEST_CASE("limits carry pointwise structure") {
    CategoryDiagram prod{{Object::group(cyclic_group(2)), Object::group(cyclic_group(3))}, {}};
    const auto p = limit_in_category(prod);
    REQUIRE(p.object.size() == 6);
    CHECK(p.object.as_group().exponent() == 6);

    auto f2 = std::make_shared<const FiniteField>(2);
    const auto V = Object::vect(VectSpace::coordinate(f2, 2)), K = Object::vect(VectSpace::coordinate(f2, 1));
    const auto maps = hom(V, K);
    // Kernel of a nonzero functional as the equalizer with the zero map.
    CategoryDiagram eq{{V, K}, {{0, 1, maps.back()}, {0, 1, maps.front()}}};
    const auto e = limit_in_category(eq);
    CHECK(e.object.as_vect().dim() == 1);

    CategoryDiagram bad{{V, K}, {{0, 1, FinMap(4, 2, {1, 1, 1, 1})}}};
    CHECK_THROWS_AS(limit_in_category(bad), StructuralError);
    CHECK(limit_in_category(CategoryDiagram{}, Kind::group).object.size() == 1);
}

TEST_CASE("comma category objects and arrows") {
    const CommaCategory c(Object::set(2), {Object::set(2)});
    CHECK(c.objects().size() == 4);
    CHECK(c.arrows().size() == 16);
    for (const auto& a : c.arrows())
        CHECK(compose(c.alpha(a), c.objects()[a.source].f) == c.objects()[a.target].f);
    const CommaCategory two(Object::set(1), {Object::set(1), Object::set(3)});
    CHECK(two.objects().size() == 4);
    CHECK(two.find(1, FinMap(1, 3, {2})) == 3);
    CHECK_THROWS_AS(CommaCategory(Object::set(1), {}), PreconditionViolation);
}

TEST_CASE("object JSON round trip") {
    for (const auto& o : {Object::set(3), Object::group(symmetric_group(3)),
                          Object::vect(VectSpace::coordinate(std::make_shared<const FiniteField>(3), 2))})
        CHECK(object_from_json(object_to_json(o)) == o);
    CHECK(object_from_json(nlohmann::json::parse(R"({"kind":"fingrp","name":"C4"})")).size() == 4);
    CHECK_THROWS_AS(object_from_json(nlohmann::json::parse(R"({"kind":"ring"})")), StructuralError);
    CHECK_THROWS_AS(object_from_json(nlohmann::json::parse(R"({"kind":"fingrp","table":[[0,1],[1]]})")),
                    StructuralError);
}
