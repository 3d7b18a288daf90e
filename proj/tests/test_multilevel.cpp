#include <doctest.h>

#include <set>
#include <sstream>

#include "macsim/multilevel.hpp"

using namespace macsim;

TEST_CASE("validate_config") {
    SUBCASE("the 2x2 instantiation is valid") {
        CHECK(validate_config(mac_multilevel_config()).empty());
    }
    SUBCASE("freshness levels cannot exceed the associativity") {
        auto c = mac_multilevel_config();
        c.n1 = c.ways + 1;
        auto v = validate_config(c);
        REQUIRE_FALSE(v.empty());
        CHECK(v[0].find("freshness-level-bound") != std::string::npos);
    }
    SUBCASE("total levels must equal the product") {
        auto c = mac_multilevel_config();
        c.n_total = 5;
        auto v = validate_config(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("total-level-product") != std::string::npos);
    }
    SUBCASE("non-bijective table is rejected") {
        auto c = mac_multilevel_config();
        c.correspondence[{2, 2}] = 1;  // duplicate target
        auto v = validate_config(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("bijection") != std::string::npos);
    }
    SUBCASE("dirty levels bounded by bytes per block + 1") {
        auto c = mac_multilevel_config(16, 64);
        c.n2 = 66;
        CHECK_FALSE(validate_config(c).empty());
    }
}

TEST_CASE("fdl_of reproduces the 2x2 table") {
    auto c = mac_multilevel_config();
    CHECK(fdl_of(1, 1, c) == 1);
    CHECK(fdl_of(1, 2, c) == 2);
    CHECK(fdl_of(2, 1, c) == 3);
    CHECK(fdl_of(2, 2, c) == 4);
    CHECK_THROWS_AS(fdl_of(0, 1, c), std::out_of_range);
    CHECK_THROWS_AS(fdl_of(3, 1, c), std::out_of_range);
}

TEST_CASE("fdl_of round-trips through levels_of for any valid grid") {
    for (int n1 = 1; n1 <= 4; ++n1) {
        for (int n2 = 1; n2 <= 3; ++n2) {
            MultilevelConfig c;
            c.n1 = n1;
            c.n2 = n2;
            c.n_total = n1 * n2;
            c.ways = 16;
            c.bytes_per_block = 64;
            int next = 1;
            for (int fl = 1; fl <= n1; ++fl)
                for (int dl = 1; dl <= n2; ++dl) c.correspondence[{fl, dl}] = next++;
            REQUIRE(validate_config(c).empty());
            std::set<int> used;
            for (int fl = 1; fl <= n1; ++fl) {
                for (int dl = 1; dl <= n2; ++dl) {
                    const int fdl = fdl_of(fl, dl, c);
                    CHECK(used.insert(fdl).second);
                    auto [rfl, rdl] = levels_of(fdl, c);
                    CHECK(rfl == fl);
                    CHECK(rdl == dl);
                }
            }
            CHECK(used.size() == static_cast<size_t>(c.n_total));
        }
    }
}

TEST_CASE("check_transition enforces the group rule") {
    auto c = mac_multilevel_config();
    auto triple = [&](int fdl) {
        auto [fl, dl] = levels_of(fdl, c);
        return LevelTriple{fl, dl, fdl};
    };

    // clean demotion 2 -> 4 stays inside the clean group
    CHECK(check_transition(triple(2), triple(4), c, false).ok);
    // dirty demotion 1 -> 3 stays inside the dirty group
    CHECK(check_transition(triple(1), triple(3), c, false).ok);
    // 1 -> 2 crosses groups and needs a cleaning event
    CHECK_FALSE(check_transition(triple(1), triple(2), c, false).ok);
    CHECK(check_transition(triple(1), triple(2), c, true).ok);
    // reflexive
    for (int fdl = 1; fdl <= 4; ++fdl) CHECK(check_transition(triple(fdl), triple(fdl), c, false).ok);
    // inconsistent triple
    CHECK_THROWS_AS(check_transition(LevelTriple{1, 1, 2}, triple(1), c, false),
                    std::invalid_argument);
}

TEST_CASE("correspondence table loads from text rows") {
    std::istringstream in("# fl dl fdl\n1 1 1\n1 2 2\n2 1 3\n2 2 4\n");
    auto c = load_correspondence(in, 16, 64);
    CHECK(c.n1 == 2);
    CHECK(c.n2 == 2);
    CHECK(c.n_total == 4);
    CHECK(validate_config(c).empty());
    CHECK(fdl_of(2, 1, c) == 3);

    std::istringstream bad("1 1\n");
    CHECK_THROWS_AS(load_correspondence(bad, 16, 64), std::invalid_argument);
}
