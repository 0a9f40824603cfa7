#include <catch_amalgamated.hpp>

#include <random>

#include "tmon/operadic.hpp"

using namespace tmon;

namespace {

std::size_t natural_families_single(std::size_t c, std::size_t d) {
    const auto fs = all_maps(c, d);
    const auto alphas = all_maps(d, d);
    std::size_t count = 0;
    for (const auto& t : all_maps(fs.size(), d)) {
        bool ok = true;
        for (std::size_t i = 0; i < fs.size() && ok; ++i)
            for (const auto& a : alphas) ok = ok && t(map_index(compose(a, fs[i]))) == a(t(i));
        count += ok;
    }
    return count;
}

// φ : G -> G with α(φ(g)) = φ(α(g)) for every endomorphism α.
std::size_t equivariant_self_maps(const Group& G) {
    const auto ends = group_homs(G, G);
    std::size_t count = 0;
    for (const auto& phi : all_maps(G.size(), G.size())) {
        bool ok = true;
        for (const auto& a : ends)
            for (Elem g = 0; g < G.size() && ok; ++g) ok = a(phi(g)) == phi(a(g));
        count += ok;
    }
    return count;
}

MonoidAction regular_action(const Group& G) {
    std::vector<FinMap> left;
    for (Elem a = 0; a < G.size(); ++a) {
        std::vector<Elem> t(G.size());
        for (Elem g = 0; g < G.size(); ++g) t[g] = G.mul(a, g);
        left.emplace_back(G.size(), G.size(), t);
    }
    return {std::make_shared<const Monoid>(composition_monoid(left)), G.size(), left};
}

// Operations preserved, checked over every map X -> c.
std::vector<std::vector<Elem>> brute_hom(const OperadAlgebra& X, const OperadAlgebra& c, std::size_t lo, std::size_t hi) {
    std::vector<std::vector<Elem>> out;
    for (const auto& phi : all_maps(X.carrier, c.carrier)) {
        bool ok = true;
        for (std::size_t k = lo; k <= hi && k < X.ops.size(); ++k) {
            IndexedProduct tuples(std::vector<std::size_t>(k, X.carrier));
            IndexedProduct images(std::vector<std::size_t>(k, c.carrier));
            for (std::size_t i = 0; i < X.ops[k].size() && ok; ++i)
                for (std::uint64_t t = 0; t < tuples.cardinality() && ok; ++t) {
                    auto args = tuples.tuple(t);
                    for (auto& a : args) a = phi(a);
                    ok = phi(X.ops[k][i].table[t]) == c.ops[k][i].table[images.index(args)];
                }
        }
        if (ok) out.push_back(phi.table);
    }
    return out;
}

}  // namespace

TEST_CASE("monoid validation") {
    CHECK_NOTHROW(Monoid{}.validate());
    CHECK_THROWS_AS((Monoid{2, {0, 1, 1, 1}, 1}.validate()), StructuralError);  // unit not neutral
    CHECK_THROWS_AS((Monoid{2, {0, 1, 1}, 0}.validate()), StructuralError);
    CHECK_THROWS_AS((Monoid{2, {0, 1, 1, 2}, 0}.validate()), StructuralError);
    // Left-zero band with an adjoined unit is associative.
    CHECK_NOTHROW(Monoid{3, {0, 1, 2, 1, 1, 1, 2, 2, 2}, 0}.validate());
    CHECK_THROWS_AS(composition_monoid({FinMap(2, 2, {1, 0})}), StructuralError);
    CHECK_NOTHROW(composition_monoid({identity(2), FinMap(2, 2, {0, 0})}));
    CHECK_THROWS_AS(composition_monoid({identity(3), FinMap(3, 3, {1, 2, 2})}), StructuralError);
}

TEST_CASE("equivariant maps of the regular action are right translations") {
    for (const auto* name : {"C2", "C3", "C4", "C2xC2", "S3"}) {
        const auto G = group_by_name(name);
        const auto act = regular_action(G);
        const auto hom = hom_monoid(act, act);
        INFO(name);
        CHECK(hom.size() == G.size());
        for (const auto& f : hom)
            for (Elem a = 0; a < G.size(); ++a)
                for (Elem g = 0; g < G.size(); ++g) CHECK(f(G.mul(a, g)) == G.mul(a, f(g)));
    }
}

TEST_CASE("operad hom solver agrees with brute force") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<std::size_t> sz(1, 3), cnt(0, 2);
        const std::size_t nx = sz(rng), nc = sz(rng);
        OperadAlgebra X{nx, {}}, C{nc, {}};
        X.ops.resize(3);
        C.ops.resize(3);
        for (std::size_t k = 0; k <= 2; ++k) {
            const auto m = cnt(rng);
            for (std::size_t i = 0; i < m; ++i) {
                Operation ox{k, std::vector<Elem>(saturating_pow(nx, k))}, oc{k, std::vector<Elem>(saturating_pow(nc, k))};
                for (auto& v : ox.table) v = static_cast<Elem>(rng() % nx);
                for (auto& v : oc.table) v = static_cast<Elem>(rng() % nc);
                X.ops[k].push_back(ox);
                C.ops[k].push_back(oc);
            }
        }
        REQUIRE(hom_operad(X, C, 0, 2) == brute_hom(X, C, 0, 2));
        REQUIRE(hom_operad(X, C, 1, 2) == brute_hom(X, C, 1, 2));
    }
    OperadAlgebra bad{2, {{}, {{1, {0, 2}}}}};
    CHECK_THROWS_AS(bad.validate(), StructuralError);
}

TEST_CASE("endomorphism operad sizes") {
    const EndomorphismOperad O(2, 2, false), Op(2, 2, true);
    CHECK(O.count(0) == 2);
    CHECK(O.count(1) == 4);
    CHECK(O.count(2) == 16);
    CHECK(Op.count(0) == 0);
    CHECK(Op.count(2) == 16);
    CHECK(O.on_maps(2).carrier == 4);
    CHECK_THROWS_AS(EndomorphismOperad(0, 1, true), PreconditionViolation);
}

TEST_CASE("arity-one window is the single-object codensity") {
    const EndomorphismOperad Op(2, 1, true);
    const std::size_t expected[] = {0, 1, 2, 8};
    for (std::size_t c = 0; c <= 3; ++c) {
        const auto h = hom_window(Op, c, 1, 1);
        CHECK(h.size() == natural_families_single(c, 2));
        CHECK(h.size() == expected[c]);
    }
}

TEST_CASE("naturality identity for evaluations") {
    const EndomorphismOperad O(2, 2, false);
    const auto base = O.on_base();
    for (std::size_t c = 0; c <= 2; ++c)
        for (Elem x = 0; x < c; ++x) {
            const auto phi = evaluation_family(c, 2, x);
            for (std::size_t k = 0; k <= 2; ++k)
                for (const auto& alpha : base.ops[k]) {
                    IndexedProduct betas(std::vector<std::size_t>(k, saturating_pow(2, c)));
                    const auto maps = all_maps(c, 2);
                    for (std::uint64_t b = 0; b < betas.cardinality(); ++b) {
                        std::vector<FinMap> beta;
                        for (auto i : betas.tuple(b)) beta.push_back(maps[i]);
                        REQUIRE(lemma_phi_equal_check(c, 2, phi, alpha, beta));
                    }
                }
        }
    // The zero family misses the constant 1.
    const std::vector<Elem> zero(4, 0);
    CHECK_FALSE(lemma_phi_equal_check(2, 2, zero, Operation{0, {1}}, {}));
    CHECK_THROWS_AS(lemma_phi_equal_check(2, 2, zero, Operation{1, {0, 1}}, {}), StructuralError);
}

TEST_CASE("powers of 2 against operadic hom-objects") {
    const auto one = verify_powers_theorem(2, 1, {0, 1, 2, 3});
    CHECK(one.ok());
    const auto two = verify_powers_theorem(2, 2, {0, 1, 2, 3});
    CHECK(two.ok());
    const std::size_t t2[] = {0, 1, 2, 8}, t4[] = {0, 1, 2, 3};
    for (std::size_t c = 0; c <= 3; ++c) {
        CHECK(one.data["objects"][c]["T_dn"] == t2[c]);
        CHECK(two.data["objects"][c]["T_dn"] == t4[c]);
        CHECK(two.data["objects"][c]["hom_n"] == t4[c]);
        CHECK(two.data["objects"][c]["T_1_dn"] == t4[c]);
    }
    CHECK(two.data["arity0_cuts_at"].empty());
    CHECK_THROWS_AS(verify_powers_theorem(2, 0, {1}), PreconditionViolation);
    CHECK(verify_powers_theorem(3, 1, {0, 1, 2}).ok());
}

TEST_CASE("group double duals") {
    struct Row {
        const char* name;
        std::size_t ends, hom, unit_order;
    };
    for (const auto& row : {Row{"C2", 2, 2, 2}, Row{"C3", 3, 3, 3}, Row{"C4", 4, 4, 4}, Row{"C2xC2", 16, 2, 2},
                            Row{"S3", 10, 6, 6}}) {
        const auto G = group_by_name(row.name);
        const auto dd = group_double_dual(G, row.name);
        INFO(row.name);
        CHECK(dd.report.ok());
        CHECK(dd.endomorphisms.size() == row.ends);
        CHECK(dd.hom.size() == row.hom);
        CHECK(dd.hom.size() == equivariant_self_maps(G));
        CHECK(dd.unit_subgroup_order == row.unit_order);
        CHECK(dd.unit_subgroup_order == G.exponent());
    }
    CHECK_THROWS_AS(group_double_dual(cyclic_group(9)), PreconditionViolation);
}

TEST_CASE("vector-space double duals") {
    // Scalar-homogeneous maps V* -> K are free on the lines of V*.
    for (const auto& [q, dim] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {5, 1}}) {
        const auto v = vect_double_dual_experiment(q, dim);
        INFO(q << "^" << dim);
        CHECK(v.dim_V == dim);
        CHECK(v.single_dim == (saturating_pow(q, dim) - 1) / (q - 1));
        CHECK(v.operadic_dim == dim);
        CHECK(v.report.ok());
    }
    const auto f4 = vect_double_dual_experiment(2, 2);
    CHECK(f4.report.data["single_elements"] == 8);
    CHECK(f4.report.data["operadic_elements"] == 4);
    CHECK(f4.report.data["single_equals_double_dual"] == false);
    CHECK_THROWS_AS(vect_double_dual_experiment(2, 11), PreconditionViolation);

    const FiniteField k(3);
    CHECK(detail::is_subspace(k, {{0, 0}, {1, 2}, {2, 1}}));
    CHECK_FALSE(detail::is_subspace(k, {{0, 0}, {1, 2}}));
    CHECK_FALSE(detail::is_subspace(k, {{1, 1}}));
}
