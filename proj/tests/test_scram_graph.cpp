#include "support.hpp"

#include "scram/global8.hpp"
#include "scram/scram_graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace scram;

namespace {

ScramConfig uniform_config(const ParityCheckMatrix& code, std::size_t users, std::size_t k, std::size_t slots,
                           std::uint64_t seed)
{
    ScramConfig c;
    c.n_slots = slots;
    c.seed = seed;
    for (std::size_t u = 0; u < users; ++u)
        c.users.push_back({code, k});
    return c;
}

} // namespace

TEST_CASE("slot assignment draws distinct in-range slots per user")
{
    const auto code = make_random_code(20, 10, 2, 3);
    const auto config = uniform_config(code, 5, 10, 40, 99);
    const auto a = assign_slots(config);
    REQUIRE(a.slots.size() == 5);
    for (const auto& slots : a.slots) {
        CHECK(slots.size() == 20);
        std::set<std::size_t> distinct(slots.begin(), slots.end());
        CHECK(distinct.size() == slots.size());
        CHECK(*distinct.rbegin() < 40);
    }
    CHECK(assign_slots(config) == a);

    auto other = config;
    other.seed = 100;
    CHECK_FALSE(assign_slots(other) == a);
}

TEST_CASE("slot assignment covers every slot roughly uniformly")
{
    const ParityCheckMatrix code(3, 6, {{0, 0}, {0, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5}});
    const auto config = uniform_config(code, 2000, 3, 12, 5);
    const auto a = assign_slots(config);
    std::vector<std::size_t> hits(12, 0);
    for (const auto& slots : a.slots)
        for (auto s : slots)
            ++hits[s];
    // 12000 draws over 12 slots: 1000 expected, sd about 29.
    for (auto h : hits) {
        CHECK(h > 850);
        CHECK(h < 1150);
    }
}

TEST_CASE("slot assignment rejects a user longer than the frame")
{
    const auto code = make_random_code(12, 6, 2, 1);
    CHECK_THROWS_AS(assign_slots(uniform_config(code, 2, 6, 11, 0)), std::invalid_argument);
    CHECK_THROWS_AS(assign_slots(ScramConfig{}), std::invalid_argument);
}

TEST_CASE("system construction validates the assignment")
{
    const auto code = test::small_code_matrix();
    auto config = uniform_config(code, 2, 1, 8, 0);
    SlotAssignment a{{{0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5}}};
    CHECK_NOTHROW(ScramSystem(config, a));

    auto short_user = a;
    short_user.slots[1].pop_back();
    CHECK_THROWS_AS(ScramSystem(config, short_user), std::invalid_argument);

    auto out_of_range = a;
    out_of_range.slots[0][0] = 8;
    CHECK_THROWS_AS(ScramSystem(config, out_of_range), std::invalid_argument);

    auto repeat = a;
    repeat.slots[0][1] = 0;
    CHECK_THROWS_AS(ScramSystem(config, repeat), std::invalid_argument);
    config.with_replacement = true;
    CHECK_NOTHROW(ScramSystem(config, repeat));

    CHECK_THROWS_AS(ScramSystem(config, SlotAssignment{{a.slots[0]}}), std::invalid_argument);
}

TEST_CASE("worked example: index maps, adjacency and hybrid matrix shape")
{
    const auto sys = test::four_user_example();
    CHECK(sys.n_variables() == 24);
    CHECK(sys.n_ldpc_checks() == 20);
    CHECK(sys.n_slots() == 12);

    const auto hybrid = build_hybrid_matrix(sys);
    CHECK(hybrid.matrix.n_rows() == 32);
    CHECK(hybrid.matrix.n_cols() == 24);
    CHECK(hybrid.sa_rows == 12);

    // User 1 transmits its six symbols in slots 7, 3, 6, 2, 8, 1.
    const std::size_t u1_rows[] = {7, 3, 6, 2, 8, 1};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(hybrid.matrix.contains(u1_rows[i] - 1, i));
        CHECK(sys.slot_of(i) == u1_rows[i] - 1);
    }

    auto ones_based = [](std::span<const std::size_t> xs) {
        std::vector<std::size_t> out;
        for (auto x : xs)
            out.push_back(x + 1);
        return out;
    };
    CHECK(ones_based(sys.colliders(5)) == std::vector<std::size_t>{3, 8, 23});
    CHECK(ones_based(sys.colliders(7)) == std::vector<std::size_t>{5, 12, 16, 22});
    CHECK(ones_based(sys.colliders(9)) == std::vector<std::size_t>{13, 24});
    CHECK(ones_based(sys.checks_of(2)) == std::vector<std::size_t>{2, 3, 4});
    CHECK(ones_based(sys.checks_of(22)) == std::vector<std::size_t>{19, 20});
    CHECK(ones_based(sys.variables_of(19)) == std::vector<std::size_t>{22, 23, 24});

    // LDPC rows follow the SA band: check l of the hybrid matrix is row 12 + l.
    for (const auto& e : sys.ldpc_layer().edges())
        CHECK(hybrid.matrix.contains(12 + e.right, e.left));
    CHECK(hybrid.matrix.nnz() == 24 + sys.ldpc_layer().edge_count());
}

TEST_CASE("channel load")
{
    const auto sys = test::four_user_example();
    ScramConfig c;
    c.n_slots = 12;
    for (std::size_t u = 0; u < 4; ++u)
        c.users.push_back(sys.user(u));
    CHECK(channel_load(c) == doctest::Approx(1.0));

    ScramConfig big;
    big.n_slots = 8640;
    for (int u = 0; u < 4; ++u)
        big.users.push_back({ParityCheckMatrix(1, 1, {}), 2160});
    CHECK(channel_load(big) == doctest::Approx(1.0));

    big.n_slots = 0;
    CHECK_THROWS_AS(channel_load(big), std::invalid_argument);
}

TEST_CASE("hybrid matrix round-trips to the same system")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto sys = test::desk_system(seed);
        const auto hybrid = build_hybrid_matrix(sys);
        std::vector<std::size_t> symbols, checks, bits;
        for (std::size_t u = 0; u < sys.n_users(); ++u) {
            symbols.push_back(sys.index().symbols(u));
            checks.push_back(sys.index().checks(u));
            bits.push_back(sys.user(u).k);
        }
        const auto back = system_from_hybrid(hybrid, symbols, checks, bits);
        CHECK(back.assignment() == sys.assignment());
        for (std::size_t u = 0; u < sys.n_users(); ++u)
            CHECK(back.user(u).code == sys.user(u).code);
        CHECK(build_hybrid_matrix(back).matrix == hybrid.matrix);
    }
}

TEST_CASE("single-user hybrid matrix is the code under a weight-1 SA band")
{
    const auto code = test::small_code_matrix();
    ScramConfig c = uniform_config(code, 1, 1, 6, 11);
    const auto sys = ScramSystem(c, assign_slots(c));
    const auto h = build_hybrid_matrix(sys).matrix;
    for (std::size_t v = 0; v < 6; ++v)
        CHECK(h.col(v).front() < 6);
    for (std::size_t r = 0; r < 6; ++r)
        CHECK(h.row(r).size() == 1);
    for (const auto& e : code.entries())
        CHECK(h.contains(6 + e.row, e.col));
    CHECK(h.nnz() == 6 + code.nnz());
}

TEST_CASE("malformed hybrid matrices are rejected")
{
    // Column 1 appears in two SA rows.
    ParityCheckMatrix two_sa(3, 2, {{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 1}});
    CHECK_THROWS_AS(system_from_hybrid({two_sa, 2}, {2}, {1}, {1}), std::invalid_argument);
    // Column 2 has no SA entry.
    ParityCheckMatrix no_sa(3, 2, {{0, 0}, {2, 0}, {2, 1}});
    CHECK_THROWS_AS(system_from_hybrid({no_sa, 2}, {2}, {1}, {1}), std::invalid_argument);
    // An LDPC entry of user 2's check in user 1's column.
    ParityCheckMatrix cross(4, 2, {{0, 0}, {1, 1}, {3, 0}});
    CHECK_THROWS_AS(system_from_hybrid({cross, 2}, {1, 1}, {1, 1}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(system_from_hybrid({no_sa, 2}, {3}, {1}, {1}), std::invalid_argument);
}

TEST_CASE("collision histogram accounts for every slot and symbol")
{
    const auto sys = test::four_user_example();
    const auto hist = collision_histogram(sys);
    std::size_t slots = 0, symbols = 0;
    for (const auto& [deg, count] : hist) {
        slots += count;
        symbols += deg * count;
    }
    CHECK(slots == 12);
    CHECK(symbols == 24);
    CHECK(hist.at(4) >= 1);
}

TEST_CASE("girth of the worked example")
{
    const auto sys = test::four_user_example();
    CHECK(local_girth(sys) == 6u);
    const auto g = scram_girth(sys);
    CHECK(g.local == 6u);
    REQUIRE(g.global_min);
    CHECK(*g.global_min >= 8);
    CHECK(g.girth == 6u);
    CHECK(g.bound == 6);
    CHECK_FALSE(g.bound_only);

    const auto tiny_budget = scram_girth(sys, 10);
    CHECK(tiny_budget.bound_only);
    CHECK(tiny_budget.girth == 6u);
}

TEST_CASE("girth with acyclic codes is set by the global cycles")
{
    // Two users whose single-check codes are trees; two shared slots form
    // the global 8-cycle v1 - l1 - v2 - s2 - v4 - l2 - v3 - s1.
    const ParityCheckMatrix tree(1, 2, {{0, 0}, {0, 1}});
    ScramConfig c = uniform_config(tree, 2, 1, 2, 0);
    const ScramSystem sys(c, SlotAssignment{{{0, 1}, {0, 1}}});
    CHECK_FALSE(local_girth(sys));
    const auto g = scram_girth(sys);
    CHECK(g.girth == 8u);
    CHECK(g.global_min == 8u);
    CHECK(g.bound == 8);
    CHECK(count_global_8cycles(sys).total == 1);

    const ScramSystem apart(c, SlotAssignment{{{0, 1}, {1, 0}}});
    CHECK(count_global_8cycles(apart).total == 1);
}

TEST_CASE("repeating a slot inside one user creates a global 4-cycle")
{
    const ParityCheckMatrix tree(1, 2, {{0, 0}, {0, 1}});
    ScramConfig c = uniform_config(tree, 1, 1, 2, 0);
    c.with_replacement = true;
    const ScramSystem sys(c, SlotAssignment{{{0, 0}}});
    const auto g = scram_girth(sys);
    CHECK(g.global_min == 4u);
    CHECK(g.girth == 4u);
    CHECK_THROWS_AS(count_global_8cycles(sys), std::invalid_argument);
}

TEST_CASE("short cycles on desk systems are local below length 8")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto sys = test::desk_system(seed);
        const auto classes = classify_short_cycles(sys, 8);
        for (const auto& [len, count] : classes.global)
            if (len < 8)
                CHECK(count == 0);
        const auto global8 = classes.global.count(8) ? classes.global.at(8) : 0;
        CHECK(global8 == count_global_8cycles(sys).total);

        const auto g = scram_girth(sys);
        REQUIRE(g.girth);
        if (g.global_min) {
            CHECK(*g.global_min >= 8);
            CHECK(*g.girth == std::min(*g.global_min, g.local.value_or(*g.global_min)));
        }
    }
}
