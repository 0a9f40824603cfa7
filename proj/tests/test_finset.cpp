#include <catch_amalgamated.hpp>

#include <random>

#include "tmon/finset.hpp"

using namespace tmon;

namespace {

FinMap random_map(std::mt19937_64& rng, std::size_t dom, std::size_t cod) {
    std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(cod - 1));
    std::vector<Elem> t(dom);
    for (auto& v : t) v = pick(rng);
    return {dom, cod, std::move(t)};
}

// Every tuple of the product, kept when all arrows commute.
std::vector<std::vector<Elem>> brute_force_limit(const DiagramInstance& d) {
    IndexedProduct p(d.nodes);
    std::vector<std::vector<Elem>> out;
    for (std::uint64_t i = 0; i < p.cardinality(); ++i) {
        auto t = p.tuple(i);
        bool ok = true;
        for (const auto& a : d.arrows) ok = ok && a.map(t[a.source]) == t[a.target];
        if (ok) out.push_back(t);
    }
    return out;
}

DiagramInstance random_diagram(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> nodes(1, 5), size(1, 4), arrows(0, 6);
    DiagramInstance d;
    const auto n = nodes(rng);
    for (std::size_t i = 0; i < n; ++i) d.nodes.push_back(size(rng));
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    const auto k = arrows(rng);
    for (std::size_t i = 0; i < k; ++i) {
        const auto s = node(rng), t = node(rng);
        d.arrows.push_back({s, t, random_map(rng, d.nodes[s], d.nodes[t])});
    }
    return d;
}

}  // namespace

TEST_CASE("FinSet labels must be distinct and match the size") {
    CHECK_NOTHROW(FinSet(2, {"a", "b"}));
    CHECK_THROWS_AS(FinSet(2, {"a", "a"}), StructuralError);
    CHECK_THROWS_AS(FinSet(3, {"a", "b"}), StructuralError);
}

TEST_CASE("FinMap rejects malformed tables") {
    CHECK_THROWS_AS(FinMap(2, 2, {0}), StructuralError);
    CHECK_THROWS_AS(FinMap(2, 2, {0, 2}), StructuralError);
    CHECK_NOTHROW(FinMap(0, 0, {}));
}

TEST_CASE("composition is associative and identity-neutral") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> size(1, 6);
        const auto a = size(rng), b = size(rng), c = size(rng), d = size(rng);
        const auto f = random_map(rng, a, b), g = random_map(rng, b, c), h = random_map(rng, c, d);
        REQUIRE(compose(h, compose(g, f)) == compose(compose(h, g), f));
        REQUIRE(compose(f, identity(a)) == f);
        REQUIRE(compose(identity(b), f) == f);
    }
}

TEST_CASE("all_maps enumerates |cod|^|dom| maps in index order") {
    const auto maps = all_maps(2, 3);
    REQUIRE(maps.size() == 9);
    for (std::size_t i = 0; i < maps.size(); ++i) CHECK(map_index(maps[i]) == i);
    CHECK(all_maps(0, 5).size() == 1);
    CHECK(all_maps(3, 0).empty());
}

TEST_CASE("power and projections") {
    const auto p = power(FinSet(2), 3);
    CHECK(p.cardinality() == 8);
    CHECK(power(FinSet(4), 0).cardinality() == 1);
    CHECK_THROWS_AS(power(FinSet(3), 27), EnumerationTooLarge);
    for (std::uint64_t i = 0; i < p.cardinality(); ++i) {
        const auto t = p.tuple(i);
        CHECK(p.index(t) == i);
        for (std::size_t s = 0; s < 3; ++s) CHECK(p.projection(s)(i) == t[s]);
    }
}

TEST_CASE("reindexing is contravariantly functorial") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<std::size_t> size(0, 3), base(1, 3);
        const auto s = size(rng), s1 = size(rng) + 1, s2 = size(rng) + 1;
        const FinSet c(base(rng));
        const auto f = random_map(rng, s, s1);
        const auto g = random_map(rng, s1, s2);
        REQUIRE(reindex(c, compose(g, f)) == compose(reindex(c, f), reindex(c, g)));
        REQUIRE(reindex(c, identity(s1)) == identity(power(c, s1).cardinality()));
    }
}

TEST_CASE("equalizer examples") {
    const FinMap id2 = identity(2), swap(2, 2, {1, 0});
    CHECK(equalizer(id2, id2).object.size == 2);
    CHECK(equalizer(id2, id2).inclusion == id2);
    CHECK(equalizer(id2, swap).object.size == 0);
    const auto e = equalizer(FinMap(3, 2, {0, 0, 1}), FinMap(3, 2, {0, 1, 1}));
    CHECK(e.inclusion.table == std::vector<Elem>{0, 2});
    CHECK_THROWS_AS(equalizer(id2, FinMap(3, 2, {0, 0, 0})), StructuralError);
}

TEST_CASE("limit examples") {
    CHECK(limit(DiagramInstance{}).tuples.size() == 1);
    CHECK(limit(DiagramInstance{{5}, {}}).tuples.size() == 5);

    DiagramInstance pullback{{2, 1, 2}, {{0, 1, FinMap(2, 1, {0, 0})}, {2, 1, FinMap(2, 1, {0, 0})}}};
    CHECK(limit(pullback).tuples.size() == 4);
}

TEST_CASE("equalizer matches the limit of a parallel pair") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_map(rng, 5, 3), g = random_map(rng, 5, 3);
        DiagramInstance d{{5, 3}, {{0, 1, f}, {0, 1, g}}};
        const auto lim = limit(d);
        const auto eq = equalizer(f, g);
        REQUIRE(lim.tuples.size() == eq.object.size);
        for (std::size_t i = 0; i < lim.tuples.size(); ++i) REQUIRE(lim.tuples[i][0] == eq.inclusion(i));
    }
}

TEST_CASE("limit agrees with the brute-force product filter") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto d = random_diagram(rng);
        REQUIRE(limit(d).tuples == brute_force_limit(d));
    }
}

TEST_CASE("limit projections commute with every arrow") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = random_diagram(rng);
        const auto lim = limit(d);
        for (const auto& a : d.arrows)
            REQUIRE(compose(a.map, lim.projections[a.source]) == lim.projections[a.target]);
    }
}

TEST_CASE("limit respects the solution cap") {
    ScopedEnumerationCap cap(10);
    CHECK_THROWS_AS(limit(DiagramInstance{{4, 4}, {}}), EnumerationTooLarge);
}

TEST_CASE("find_retraction") {
    const auto r = find_retraction(FinSet(2), FinSet(3), FinMap(2, 3, {0, 1}));
    REQUIRE(r);
    CHECK(r->table == std::vector<Elem>{0, 1, 1});
    CHECK_FALSE(find_retraction(FinSet(3), FinSet(2), FinMap(3, 2, {0, 1, 0})));
    const auto c = find_retraction(FinSet(1), FinSet(4), FinMap(1, 4, {2}));
    REQUIRE(c);
    CHECK(c->table == std::vector<Elem>{0, 0, 0, 0});

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Elem> img{0, 1, 2, 3, 4, 5};
        std::shuffle(img.begin(), img.end(), rng);
        img.resize(3);
        const FinMap s(3, 6, img);
        const auto back = find_retraction(FinSet(3), FinSet(6), s);
        REQUIRE(back);
        REQUIRE(compose(*back, s) == identity(3));
    }
}

TEST_CASE("JSON round trip") {
    const FinMap f(3, 2, {0, 1, 1});
    const nlohmann::json j = f;
    CHECK(j.get<FinMap>() == f);
    const FinSet s(2, {"x", "y"});
    CHECK(nlohmann::json(s).get<FinSet>().labels == s.labels);
    CHECK_THROWS_AS(nlohmann::json::parse(R"({"dom":{"size":2},"cod":{"size":1},"table":[0,1]})").get<FinMap>(),
                    StructuralError);
}
