#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "tmon/monadlab.hpp"
#include "tmon/ultra.hpp"

using namespace tmon;

namespace {

using Subset = std::set<std::size_t>;
using Family = std::set<Subset>;

Subset decode(std::size_t n, std::uint64_t y) {
    Subset s;
    for (std::size_t x = 0; x < n; ++x)
        if ((y >> x) & 1U) s.insert(x);
    return s;
}

Family to_sets(const SubsetFamily& a) {
    Family f;
    for (auto y : a.subsets()) f.insert(decode(a.ground, y));
    return f;
}

std::vector<Subset> all_subsets(std::size_t n) {
    std::vector<Subset> out;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) out.push_back(decode(n, y));
    return out;
}

Subset complement(std::size_t n, const Subset& s) {
    Subset c;
    for (std::size_t x = 0; x < n; ++x)
        if (!s.count(x)) c.insert(x);
    return c;
}

Subset meet(const Subset& a, const Subset& b) {
    Subset c;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(c, c.begin()));
    return c;
}

bool includes(const Subset& big, const Subset& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Axioms restated on explicit sets of sets.
bool oracle_ultraset(std::size_t n, const Family& f) {
    if (f.count(Subset{})) return false;
    for (const auto& y : all_subsets(n))
        if (f.count(y) == f.count(complement(n, y))) return false;
    return true;
}

bool oracle_ultrafilter(std::size_t n, const Family& f) {
    if (!oracle_ultraset(n, f)) return false;
    for (const auto& a : f)
        for (const auto& b : all_subsets(n)) {
            if (includes(b, a) && !f.count(b)) return false;
            if (f.count(b) && !f.count(meet(a, b))) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("ultraset counts") {
    // One choice per complementary pair, with X forced in: 2^(2^(n-1) - 1).
    CHECK(ultrasets(0).empty());
    for (std::size_t n = 1; n <= 4; ++n) CHECK(ultrasets(n).size() == (std::size_t{1} << ((std::size_t{1} << (n - 1)) - 1)));
    const std::size_t expected[] = {0, 1, 2, 8, 128};
    for (std::size_t n = 0; n <= 4; ++n) CHECK(ultrasets(n).size() == expected[n]);
    CHECK_THROWS_AS(ultrasets(5), EnumerationTooLarge);
}

TEST_CASE("ultraset and ultrafilter tests agree with the set-of-sets oracle") {
    for (std::size_t n = 0; n <= 3; ++n)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << (std::uint64_t{1} << n)); ++m) {
            const SubsetFamily a{n, m};
            const auto f = to_sets(a);
            REQUIRE(is_ultraset(a) == oracle_ultraset(n, f));
            REQUIRE(is_ultrafilter(a) == oracle_ultrafilter(n, f));
        }
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
        // Random ultrasets on 4 points: pick one side of each pair.
        SubsetFamily a{4, 0};
        for (std::uint64_t y = 0; y < 16; ++y)
            if (y < (15 ^ y)) a.members |= std::uint64_t{1} << ((rng() & 1U) ? y : 15 ^ y);
        if (a.contains(0)) a.members ^= 1U | (std::uint64_t{1} << 15);
        const auto f = to_sets(a);
        REQUIRE(oracle_ultraset(4, f));
        REQUIRE(is_ultraset(a));
        REQUIRE(is_ultrafilter(a) == oracle_ultrafilter(4, f));
    }
}

TEST_CASE("ultrafilters on finite sets are principal") {
    for (std::size_t n = 0; n <= 5; ++n) {
        const auto uf = ultrafilters(n);
        REQUIRE(uf.size() == n);
        for (Elem x = 0; x < n; ++x) CHECK(std::binary_search(uf.begin(), uf.end(), double_powerset_unit(n, x)));
        for (const auto& a : uf) CHECK(oracle_ultrafilter(n, to_sets(a)));
    }
}

TEST_CASE("partition criterion characterizes ultrafilters among ultrasets") {
    for (std::size_t n = 0; n <= 4; ++n)
        for (const auto& a : ultrasets(n)) REQUIRE(partition_criterion(a) == is_ultrafilter(a));
    CHECK_THROWS_AS(partition_criterion(SubsetFamily{2, 0}), PreconditionViolation);
}

TEST_CASE("majority on three points is an ultraset but not an ultrafilter") {
    const auto maj = threshold_family(3, 2);
    CHECK(is_ultraset(maj));
    CHECK_FALSE(is_ultrafilter(maj));
    CHECK_FALSE(partition_criterion(maj));
    // {0,1} and {1,2} are in, their meet {1} is not.
    CHECK(maj.contains(0b011));
    CHECK(maj.contains(0b110));
    CHECK_FALSE(maj.contains(0b010));
}

TEST_CASE("double preimage is functorial and preserves ultrasets") {
    for (std::size_t a = 0; a <= 3; ++a)
        for (std::size_t b = 0; b <= 3; ++b)
            for (const auto& g : all_maps(a, b)) {
                for (Elem x = 0; x < a; ++x) CHECK(double_preimage(g, double_powerset_unit(a, x)) == double_powerset_unit(b, g(x)));
                for (const auto& f : ultrasets(a)) CHECK(is_ultraset(double_preimage(g, f)));
            }
    const auto g = FinMap(3, 2, {0, 1, 1}), h = FinMap(2, 2, {1, 0});
    for (const auto& f : ultrasets(3)) CHECK(double_preimage(compose(h, g), f) == double_preimage(h, double_preimage(g, f)));
}

TEST_CASE("T2 is the ultraset functor") {
    for (std::size_t n = 0; n <= 4; ++n) {
        const auto r = verify_T2_is_US(n);
        INFO(n);
        CHECK(r.ok());
    }
    CHECK(verify_T2_is_US_functorial({0, 1, 2, 3}).ok());
    CHECK_THROWS_AS(verify_T2_is_US(5), PreconditionViolation);
}

TEST_CASE("T3 and T4 are the identity") {
    for (std::size_t n = 0; n <= 3; ++n) CHECK(verify_T3_is_UF(n).ok());
}

TEST_CASE("UF inside US inside PP") {
    const auto r = sub_functor_check(3);
    CHECK(r.ok());
}

TEST_CASE("ultraset functor laws") {
    const UltrasetFunctor us;
    CHECK(check_functor_laws(us, {0, 1, 2, 3}).ok());
    CHECK(*us.size(3) == 8);
    CHECK_FALSE(us.size(5).has_value());
}
