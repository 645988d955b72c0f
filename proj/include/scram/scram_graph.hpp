#pragma once

#include "scram/cycle_count.hpp"
#include "scram/ldpc.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace scram {

struct UserCode {
    ParityCheckMatrix code;
    /// Information bits; user-supplied metadata, never inferred from rank.
    std::size_t k = 0;
};

struct ScramConfig {
    std::vector<UserCode> users;
    std::size_t n_slots = 0;
    std::uint64_t seed = 0;
    /// Lets one user place several symbols in the same slot. Only for
    /// counter-example studies: the global-girth guarantees do not hold.
    bool with_replacement = false;
};

/// slots[u][i]: slot carrying symbol i of user u.
struct SlotAssignment {
    std::vector<std::vector<std::size_t>> slots;

    friend bool operator==(const SlotAssignment&, const SlotAssignment&) = default;
};

/// Per user, a uniformly random ordered n-subset of the slots (sampling
/// without replacement), independently across users. Deterministic in the
/// config seed. Throws std::invalid_argument if a user has more symbols
/// than there are slots.
SlotAssignment assign_slots(const ScramConfig& config);

/// Three-layer graph: variables flanked by SA checks (slots) and LDPC checks.
class ScramSystem {
public:
    ScramSystem() = default;
    /// Throws std::invalid_argument when the assignment does not fit the
    /// config (wrong lengths, slot out of range, or a within-user repeat
    /// when the config forbids it).
    ScramSystem(const ScramConfig& config, SlotAssignment assignment);

    const GlobalIndexMap& index() const noexcept { return index_; }
    std::size_t n_users() const noexcept { return index_.n_users(); }
    std::size_t n_variables() const noexcept { return index_.n_variables(); }
    std::size_t n_slots() const noexcept { return index_.n_slots(); }
    std::size_t n_ldpc_checks() const noexcept { return index_.n_ldpc_checks(); }

    const UserCode& user(std::size_t u) const { return users_.at(u); }
    const SlotAssignment& assignment() const noexcept { return assignment_; }
    bool with_replacement() const noexcept { return with_replacement_; }

    std::size_t user_of(std::size_t v) const { return user_of_.at(v); }
    /// The single SA check of variable v (A_v^(S)).
    std::size_t slot_of(std::size_t v) const { return slot_of_.at(v); }
    /// Variables colliding in slot s, ascending (A_s).
    std::span<const std::size_t> colliders(std::size_t s) const { return colliders_.at(s); }
    /// Global LDPC checks of variable v, ascending (A_v^(L)).
    std::span<const std::size_t> checks_of(std::size_t v) const { return var_checks_.at(v); }
    /// Variables of global LDPC check l, ascending (A_l).
    std::span<const std::size_t> variables_of(std::size_t l) const { return check_vars_.at(l); }

    /// LDPC-layer edge ids: edge e joins ldpc_edge(e).left (variable) and
    /// ldpc_edge(e).right (global check), ordered by (variable, check).
    const BipartiteGraph& ldpc_layer() const noexcept { return ldpc_layer_; }

private:
    GlobalIndexMap index_;
    std::vector<UserCode> users_;
    SlotAssignment assignment_;
    bool with_replacement_ = false;
    std::vector<std::size_t> user_of_;
    std::vector<std::size_t> slot_of_;
    std::vector<std::vector<std::size_t>> colliders_;
    std::vector<std::vector<std::size_t>> var_checks_;
    std::vector<std::vector<std::size_t>> check_vars_;
    BipartiteGraph ldpc_layer_;
};

ScramSystem build_system(const ScramConfig& config, const SlotAssignment& assignment);

/// H_SCRAM: the first n_slots rows are the SA band, the rest the
/// block-diagonal LDPC band. Columns are global variables.
struct HybridMatrix {
    ParityCheckMatrix matrix;
    std::size_t sa_rows = 0;

    bool is_sa_row(std::size_t row) const noexcept { return row < sa_rows; }
};

HybridMatrix build_hybrid_matrix(const ScramSystem& system);

/// Inverse of build_hybrid_matrix given the band split and per-user sizes.
ScramSystem system_from_hybrid(const HybridMatrix& hybrid, const std::vector<std::size_t>& symbols_per_user,
                               const std::vector<std::size_t>& checks_per_user,
                               const std::vector<std::size_t>& info_bits);

/// Information bits per slot, sum(k) / n_slots. Throws on zero slots.
double channel_load(const ScramConfig& config);

/// slot degree -> number of slots with that many colliders.
std::map<std::size_t, std::size_t> collision_histogram(const ScramSystem& system);

/// Minimum girth over the users' codes; empty when every code is acyclic.
std::optional<std::size_t> local_girth(const ScramSystem& system);

struct ScramGirth {
    /// Girth of the whole three-layer graph (the bound when bound_only).
    std::optional<std::size_t> girth;
    std::optional<std::size_t> local;
    /// Shortest cycle through at least one SA check; empty if none exists.
    std::optional<std::size_t> global_min;
    /// min(8, g_local): the guaranteed lower bound.
    std::size_t bound = 8;
    /// Set when the graph was too large to measure and only the bound is known.
    bool bound_only = false;
};

inline constexpr std::uint64_t default_girth_budget = 2'000'000'000;

/// Measures the overall girth and the shortest global cycle. Work is
/// estimated as (nodes x edges); beyond `budget` only the bound is returned.
ScramGirth scram_girth(const ScramSystem& system, std::uint64_t budget = default_girth_budget);

struct ShortCycleClasses {
    CycleCounts local;
    CycleCounts global;
};

/// Enumerates every hybrid-graph cycle up to max_length and splits them by
/// whether they touch an SA check.
ShortCycleClasses classify_short_cycles(const ScramSystem& system, std::size_t max_length,
                                        std::uint64_t budget = default_enumeration_budget);

/// Tanner graph of the hybrid matrix (left = variables, right = SA rows
/// followed by LDPC rows).
BipartiteGraph hybrid_graph(const ScramSystem& system);

} // namespace scram
