#include "support.hpp"

#include "scram/errors.hpp"
#include "scram/ldpc.hpp"

#include <doctest.h>

#include <set>

#include <sstream>

using namespace scram;

TEST_SUITE("ldpc_core") {

TEST_CASE("parse_alist reads a hand-written 3x2 matrix")
{
    // ones at (1,1), (1,2), (2,2), (2,3) in 1-based (row, col)
    const auto h = test::from_alist_text("3 2\n"
                                         "2 3\n"
                                         "1 2 1\n"
                                         "2 2\n"
                                         "1 0\n1 2\n2 0\n"
                                         "1 2\n2 3\n");
    CHECK(h.n_cols() == 3);
    CHECK(h.n_rows() == 2);
    CHECK(h.nnz() == 4);
    CHECK(h.contains(0, 0));
    CHECK(h.contains(0, 1));
    CHECK(h.contains(1, 1));
    CHECK(h.contains(1, 2));
    CHECK_FALSE(h.contains(1, 0));
}

TEST_CASE("parse_alist accepts unpadded lists and zero-degree rows")
{
    const auto h = test::from_alist_text("2 3\n1 2\n1 1\n1 0 1\n1\n3\n1\n\n2\n");
    CHECK(h.n_rows() == 3);
    CHECK(h.row(1).empty());
    const auto diags = validate(h);
    REQUIRE(diags.size() == 1);
    CHECK_FALSE(diags[0].is_error());
    CHECK(diags[0].message.find("row 2") != std::string::npos);
}

TEST_CASE("parse_alist errors carry line numbers")
{
    SUBCASE("column index out of range")
    {
        try {
            test::from_alist_text("3 2\n2 3\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 4\n");
            FAIL("expected an error");
        } catch (const AlistError& e) {
            CHECK(e.line() == 9);
            CHECK(std::string(e.what()).find("out of range") != std::string::npos);
        }
    }
    SUBCASE("row index out of range")
    {
        CHECK_THROWS_AS(test::from_alist_text("3 2\n2 3\n1 2 1\n2 2\n3 0\n1 2\n2 0\n1 2\n2 3\n"),
                        AlistError);
    }
    SUBCASE("malformed header")
    {
        try {
            test::from_alist_text("3\n2\n");
            FAIL("expected an error");
        } catch (const AlistError& e) {
            CHECK(e.line() == 1);
            CHECK(std::string(e.what()).find("header") != std::string::npos);
        }
        CHECK_THROWS_AS(test::from_alist_text("x 2\n"), AlistError);
        CHECK_THROWS_AS(test::from_alist_text(""), AlistError);
    }
    SUBCASE("row lists disagree with column lists")
    {
        try {
            test::from_alist_text("3 2\n2 3\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 3\n2 2\n");
            FAIL("expected an error");
        } catch (const AlistError& e) {
            CHECK(e.line() == 8);
            CHECK(std::string(e.what()).find("inconsistent") != std::string::npos);
        }
    }
    SUBCASE("degree exceeds adjacency")
    {
        CHECK_THROWS_AS(test::from_alist_text("3 2\n2 3\n2 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"),
                        AlistError);
    }
}

TEST_CASE("validate reports zero columns and duplicates")
{
    const ParityCheckMatrix identity(2, 2, {{0, 0}, {1, 1}});
    CHECK(validate(identity).empty());

    const ParityCheckMatrix zero_col(2, 3, {{0, 0}, {1, 1}});
    const auto d1 = validate(zero_col);
    REQUIRE(d1.size() == 1);
    CHECK_FALSE(d1[0].is_error());
    CHECK(d1[0].message.find("column 3") != std::string::npos);

    const ParityCheckMatrix dup(2, 2, {{0, 0}, {1, 1}, {0, 0}});
    const auto d2 = validate(dup);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].is_error());
}

TEST_CASE("constructor rejects out-of-range entries")
{
    CHECK_THROWS_AS(ParityCheckMatrix(2, 2, {{2, 0}}), std::out_of_range);
}

TEST_CASE("to_tanner_graph")
{
    const auto k22 = to_tanner_graph(test::all_ones(2, 2));
    CHECK(k22.left_count() == 2);
    CHECK(k22.right_count() == 2);
    CHECK(k22.edge_count() == 4);

    const auto small = to_tanner_graph(test::small_code_matrix());
    CHECK(small.left_count() == 6);
    CHECK(small.right_count() == 5);
    CHECK(small.left_edges(2).size() == 3);
    // adjacency ordered by opposite endpoint
    const auto v3 = small.left_edges(2);
    CHECK(small.edge(v3[0]).right == 1);
    CHECK(small.edge(v3[1]).right == 2);
    CHECK(small.edge(v3[2]).right == 3);

    const auto isolated = to_tanner_graph(ParityCheckMatrix(2, 3, {{0, 0}, {1, 1}}));
    CHECK(isolated.left_edges(2).empty());
}

TEST_CASE("global index maps")
{
    const GlobalIndexMap four_users({6, 6, 6, 6}, {5, 5, 5, 5}, 12);
    CHECK(four_users.n_variables() == 24);
    CHECK(four_users.n_ldpc_checks() == 20);

    // 14th column is the second symbol of the third user.
    CHECK(four_users.variable_to_local(13) == LocalIndex{2, 1});
    CHECK(four_users.variable_to_local(0) == LocalIndex{0, 0});
    CHECK(four_users.check_to_local(0) == LocalIndex{0, 0});
    CHECK(four_users.check_to_local(19) == LocalIndex{3, 4});
    CHECK_THROWS_AS(four_users.variable_to_local(24), std::out_of_range);
    CHECK_THROWS_AS(four_users.check_to_local(20), std::out_of_range);

    // Third user's checks 1..3 sit on hybrid rows 23..25.
    CHECK(four_users.hybrid_row({2, 0}) + 1 == 23);
    CHECK(four_users.hybrid_row({2, 1}) + 1 == 24);
    CHECK(four_users.hybrid_row({2, 2}) + 1 == 25);

    const GlobalIndexMap mixed({4, 6}, {2, 3}, 8);
    CHECK(mixed.variable_to_local(4) == LocalIndex{1, 0});
    CHECK(mixed.check_to_local(2) == LocalIndex{1, 0});
}

TEST_CASE("index maps are bijections and match the closed forms")
{
    const GlobalIndexMap identical({7, 7, 7}, {4, 4, 4}, 10);
    for (std::size_t nv = 0; nv < identical.n_variables(); ++nv) {
        const auto loc = identical.variable_to_local(nv);
        // closed form, 1-based: user = ceil(n_v / n), i = ((n_v - 1) mod n) + 1
        const std::size_t one = nv + 1;
        CHECK(loc.user + 1 == (one + 6) / 7);
        CHECK(loc.index + 1 == ((one - 1) % 7) + 1);
        CHECK(identical.variable_to_global(loc) == nv);
    }
    const GlobalIndexMap mixed({3, 9, 1, 5}, {2, 4, 1, 3}, 10);
    for (std::size_t nv = 0; nv < mixed.n_variables(); ++nv)
        CHECK(mixed.variable_to_global(mixed.variable_to_local(nv)) == nv);
    for (std::size_t nl = 0; nl < mixed.n_ldpc_checks(); ++nl)
        CHECK(mixed.check_to_global(mixed.check_to_local(nl)) == nl);
}

TEST_CASE("alist round trip over random sparse matrices")
{
    Rng rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = 1 + rng.below(12);
        const auto cols = 1 + rng.below(15);
        const auto h = test::random_matrix(rows, cols, 0.05 + 0.4 * rng.uniform(), rng);
        const auto text = to_alist(h);
        const auto back = test::from_alist_text(text);
        REQUIRE(back == h);
        CHECK(to_alist(back) == text);
        CHECK(to_tanner_graph(h).edge_count() == h.nnz());
    }
}

TEST_CASE("make_random_code avoids 4-cycles")
{
    const auto h = make_random_code(24, 16, 3, 7);
    CHECK(h.n_cols() == 24);
    for (std::size_t a = 0; a < h.n_cols(); ++a) {
        CHECK(h.col(a).size() == 3);
        for (std::size_t b = a + 1; b < h.n_cols(); ++b) {
            std::size_t shared = 0;
            for (auto r : h.col(a))
                shared += h.contains(r, b) ? 1 : 0;
            CHECK(shared <= 1);
        }
    }
    CHECK(make_random_code(24, 16, 3, 7) == h);
}

} // TEST_SUITE

TEST_CASE("GF(2) rank and null-space encoder")
{
    const auto fixture = test::small_code_matrix();
    const Gf2Encoder enc(fixture);
    CHECK(enc.dimension() == fixture.n_cols() - gf2_rank(fixture));
    for (const auto& b : enc.basis())
        CHECK(fixture.is_codeword(b));

    // Two equal rows contribute rank one.
    const ParityCheckMatrix twice(2, 3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(gf2_rank(twice) == 1);
    CHECK(Gf2Encoder(twice).dimension() == 2);
    CHECK(gf2_rank(ParityCheckMatrix(3, 4, {})) == 0);

    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const auto h = test::random_matrix(1 + rng.below(12), 1 + rng.below(80), 0.3, rng);
        const Gf2Encoder e(h);
        CHECK(e.dimension() + gf2_rank(h) == h.n_cols());
        for (int draw = 0; draw < 5; ++draw)
            CHECK(h.is_codeword(e.random_codeword(rng)));
    }

    // Every codeword of a (4, 3) single parity code is reachable.
    const ParityCheckMatrix spc(1, 4, {{0, 0}, {0, 1}, {0, 2}, {0, 3}});
    const Gf2Encoder spc_enc(spc);
    std::set<std::vector<std::uint8_t>> seen;
    for (int draw = 0; draw < 200; ++draw)
        seen.insert(spc_enc.random_codeword(rng));
    CHECK(seen.size() == 8);
}
