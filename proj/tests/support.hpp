#pragma once

#include "scram/ldpc.hpp"
#include "scram/rng.hpp"
#include "scram/scram_graph.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace scram::test {

inline std::string fixture(const std::string& name)
{
    return std::string(SCRAM_FIXTURE_DIR) + "/" + name;
}

inline ParityCheckMatrix small_code_matrix() { return read_alist_file(fixture("small_code.alist")); }

inline ParityCheckMatrix from_alist_text(const std::string& text)
{
    std::istringstream in(text);
    return parse_alist(in);
}

inline ParityCheckMatrix all_ones(std::size_t rows, std::size_t cols)
{
    std::vector<Entry> entries;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            entries.push_back({r, c});
    return ParityCheckMatrix(rows, cols, std::move(entries));
}

inline BipartiteGraph complete_bipartite(std::size_t a, std::size_t b)
{
    return to_tanner_graph(all_ones(b, a));
}

/// Random matrix where each cell is set with probability `density`.
inline ParityCheckMatrix random_matrix(std::size_t rows, std::size_t cols, double density, Rng& rng)
{
    std::vector<Entry> entries;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (rng.uniform() < density)
                entries.push_back({r, c});
    return ParityCheckMatrix(rows, cols, std::move(entries));
}

/// Four users sharing one (6, 5) code on 12 slots, laid out so that the
/// collisions in slots 6, 8 and 10 (1-based) match the worked global
/// 8-cycle example: s6 = {v3, v8, v23}, s8 = {v5, v12, v16, v22},
/// s10 = {v13, v24}.
inline ScramSystem four_user_example()
{
    const auto code = read_alist_file(fixture("four_user_code.alist"));
    ScramConfig config;
    config.n_slots = 12;
    for (int u = 0; u < 4; ++u)
        config.users.push_back({code, 3});
    SlotAssignment a;
    auto zero_based = [](std::vector<std::size_t> one_based) {
        for (auto& s : one_based)
            --s;
        return one_based;
    };
    a.slots = {zero_based({7, 3, 6, 2, 8, 1}), zero_based({1, 6, 2, 3, 4, 8}),
               zero_based({10, 1, 2, 8, 3, 4}), zero_based({1, 2, 3, 8, 6, 10})};
    return ScramSystem(config, a);
}

/// Desk-scale system: four users with 4-cycle-free codes of 12..24
/// columns, column weight 2 or 3, and about one information bit per slot.
inline ScramConfig desk_config(std::uint64_t seed, std::size_t n_users = 4)
{
    Rng rng(mix_seed(seed, 0xdeadbeef));
    ScramConfig config;
    config.seed = seed;
    std::size_t bits = 0;
    std::size_t widest = 0;
    for (std::size_t u = 0; u < n_users; ++u) {
        const std::size_t n = 12 + rng.below(13);
        const std::size_t weight = 2 + rng.below(2);
        const std::size_t m = weight == 2 ? n / 2 : n / 2 + 4;
        config.users.push_back({make_random_code(n, m, weight, rng.next()), n - m});
        bits += n - m;
        widest = std::max(widest, n);
    }
    config.n_slots = std::max(bits, widest);
    return config;
}

inline ScramSystem desk_system(std::uint64_t seed, std::size_t n_users = 4)
{
    const auto config = desk_config(seed, n_users);
    return ScramSystem(config, assign_slots(config));
}

} // namespace scram::test
