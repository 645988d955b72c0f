#pragma once

#include "scram/cycle_count.hpp"
#include "scram/scram_graph.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scram {

/// Number of checks adjacent to both columns i and j of `code`: the weight
/// of the element-wise product of the two columns.
/// Throws std::out_of_range / std::invalid_argument for bad or equal columns.
std::size_t common_ldpc_checks(const ParityCheckMatrix& code, std::size_t i, std::size_t j);

struct Global8Report {
    std::uint64_t total = 0;
    /// C8 attributed to each variable when it was the first primary node.
    std::vector<std::uint64_t> per_node;
    /// (primary user, secondary user) -> cycles.
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> per_user_pair;
};

/// Counts global 8-cycles v1p - lp - v2p - s2 - v2s - ls - v1s - s1 - v1p.
///
/// Primaries are visited in `order` (ascending global index when empty).
/// Once a primary is finished it is excluded from every later candidate
/// role, so each cycle is counted exactly once at whichever of its four
/// variables is visited first. Throws std::invalid_argument when two
/// variables of one user share both an LDPC check and a slot.
Global8Report count_global_8cycles(const ScramSystem& system, std::span<const std::size_t> order = {});

struct Global8Verification {
    std::uint64_t algorithmic = 0;
    /// C8(hybrid) - sum_u C8(code_u); empty when a profile cannot resolve
    /// 8-cycles (girth 4 limits the counting window to length 6).
    std::optional<std::int64_t> by_subtraction;
    bool equal = false;
    CycleProfile hybrid;
    std::vector<CycleProfile> users;
    std::string note;
};

inline constexpr std::uint64_t default_profile_budget = 50'000'000'000ULL;

/// Computes both sides of the global-8 identity and compares them exactly.
/// Throws BudgetExceeded when the half-cycle profile of the hybrid graph
/// is estimated to exceed `budget` edge-message updates.
Global8Verification verify_against_profile(const ScramSystem& system,
                                           std::uint64_t budget = default_profile_budget);

} // namespace scram
