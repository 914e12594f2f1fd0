#include "doctest.h"
#include "prodesc/errors.hpp"
#include "prodesc/groups.hpp"

using namespace prodesc;

TEST_CASE("group validation: cyclic family") {
    for (int n = 1; n <= 64; ++n) CHECK_FALSE(validate_group(cyclic(n)).has_value());
    CHECK_FALSE(validate_group(trivial_group()).has_value());
    CHECK(cyclic(4).table[1][3] == 0);
}

TEST_CASE("group validation: constructed violation") {
    auto g = cyclic(3);
    g.table[1][1] = 1;  // 1*1 = 1 breaks associativity/inverses
    auto diag = validate_group(g);
    REQUIRE(diag.has_value());
    CHECK(diag->find("fails") != std::string::npos);
}

TEST_CASE("builders: products and dihedral") {
    CHECK_FALSE(validate_group(direct_product(cyclic(2), cyclic(2))).has_value());
    CHECK_FALSE(validate_group(dihedral(3)).has_value());
    CHECK_FALSE(validate_group(dihedral(4)).has_value());
    CHECK(dihedral(3).order == 6);
    // D3 is nonabelian
    auto d3 = dihedral(3);
    bool abelian = true;
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) abelian &= (d3.mul(a, b) == d3.mul(b, a));
    CHECK_FALSE(abelian);
}

TEST_CASE("quotient maps") {
    auto q = quotient_map(4, 2);
    CHECK_FALSE(validate_hom(q).has_value());
    CHECK(is_surjective(q));
    int kernel_size = 0;
    for (int v : q.map)
        if (v == 0) ++kernel_size;
    CHECK(kernel_size == 2);
    CHECK_THROWS_AS(quotient_map(4, 3), InputError);
}

TEST_CASE("towers: validation and projections") {
    auto t = cyclic_prime_tower(2, 3);
    CHECK_FALSE(validate_tower(t).has_value());
    CHECK(t.level(3).order == 8);
    // composite projection is surjective at every gap
    for (int from = 0; from <= 3; ++from)
        for (int to = 0; to <= from; ++to) {
            std::vector<bool> hit(static_cast<size_t>(t.level(to).order), false);
            for (int e = 0; e < t.level(from).order; ++e)
                hit[static_cast<size_t>(t.project(from, to, e))] = true;
            for (bool b : hit) CHECK(b);
        }

    ProfiniteTower single;
    single.levels.push_back(cyclic(2));
    CHECK_FALSE(validate_tower(single).has_value());

    // non-surjective transition is diagnosed
    ProfiniteTower bad;
    bad.levels = {cyclic(2), cyclic(2)};
    GroupHom collapse;
    collapse.source = cyclic(2);
    collapse.target = cyclic(2);
    collapse.map = {0, 0};
    bad.transitions.push_back(collapse);
    auto diag = validate_tower(bad);
    REQUIRE(diag.has_value());
    CHECK(diag->find("surjective") != std::string::npos);
}
