#include <catch_amalgamated.hpp>

#include <sstream>

#include "tmon/functor.hpp"
#include "tmon/monadlab.hpp"

using namespace tmon;

TEST_CASE("builtin monad sizes") {
    const std::vector<std::pair<std::string, std::vector<int>>> table{
        {"identity", {0, 1, 2, 3}},  {"maybe", {1, 2, 3, 4}},     {"writer", {0, 2, 4, 6}},
        {"powerset", {1, 2, 4, 8}},  {"powerset+", {0, 1, 3, 7}}, {"dd2", {2, 4, 16, 256}},
        {"const1", {1, 1, 1, 1}},
    };
    for (const auto& [name, sizes] : table) {
        const auto M = make_builtin_monad(name);
        for (std::uint64_t n = 0; n < sizes.size(); ++n) {
            INFO(name << " at " << n);
            CHECK(*M->size(n) == sizes[n]);
        }
    }
    CHECK(*make_builtin_monad("dd3")->size(1) == 27);
    CHECK(*make_builtin_monad("writer", {{"group", "S3"}})->size(2) == 12);
}

TEST_CASE("builtin monads satisfy the laws") {
    for (const auto* name : {"identity", "maybe", "writer", "powerset", "powerset+", "dd2", "const1"}) {
        const auto r = check_monad_laws(*make_builtin_monad(name), {0, 1, 2, 3});
        INFO(name);
        std::ostringstream os;
        print_text(os, r);
        INFO(os.str());
        CHECK(r.ok());
    }
    const auto dd3 = check_monad_laws(*make_builtin_monad("dd3"), {0, 1, 2});
    CHECK(dd3.ok());
}

TEST_CASE("the unit of each builtin is the expected map") {
    const PowersetMonad P;
    for (Elem x = 0; x < 3; ++x) CHECK(P.unit(3, x) == (Nat(1) << x));
    const MaybeMonad M;
    // The extra point of Maybe(X) is coded last.
    CHECK(M.map(FinMap(2, 3, {2, 0}), 2) == 3);
    const ContinuationMonad D(2);
    for (Elem x = 0; x < 2; ++x) {
        const auto u = D.unit(2, x);
        // eta(x) evaluates each predicate at x.
        const auto preds = all_maps(2, 2);
        for (std::uint64_t h = 0; h < 4; ++h) CHECK(detail::digits(u, 2, 4)[h] == preds[h](x));
    }
}

TEST_CASE("corrupted monad fails the laws with a witness") {
    const CorruptedMonad bad(make_builtin_monad("maybe"));
    const auto r = check_monad_laws(bad, {0, 1, 2});
    CHECK_FALSE(r.ok());
    bool witnessed = false;
    for (const auto& c : r.checks)
        if (c.verdict == Verdict::fail) witnessed = witnessed || !c.witness.empty();
    CHECK(witnessed);
}

TEST_CASE("double powerset is a functor with a coaugmentation") {
    const DoublePowersetFunctor pp;
    CHECK(*pp.size(2) == 16);
    CHECK(check_functor_laws(pp, {0, 1, 2}).ok());
}

TEST_CASE("monad descriptors") {
    CHECK(monad_from_descriptor("maybe")->name() == "Maybe");
    CHECK(monad_from_descriptor(R"({"builtin":"writer","params":{"group":"C3"}})")->name() == "Writer(C3)");
    CHECK(monad_from_descriptor(R"({"builtin":"dd","params":{"d":3}})")->name() == "DD3");
    CHECK_THROWS_AS(monad_from_descriptor("tree"), StructuralError);
    CHECK_THROWS_AS(monad_from_descriptor("{not json"), StructuralError);
    CHECK_THROWS_AS(monad_from_descriptor(R"({"params":{}})"), StructuralError);
    CHECK_THROWS_AS(monad_from_descriptor(R"({"builtin":"writer","params":{"group":"Q8"}})"), StructuralError);
}

TEST_CASE("code digits round trip") {
    for (std::uint32_t base : {2U, 3U, 5U})
        for (std::uint64_t c = 0; c < 200; ++c) {
            const auto ds = detail::digits(c, base, 8);
            REQUIRE(detail::from_digits(ds, base) == Nat(c % detail::pow_u64(base, 8)));
        }
}
