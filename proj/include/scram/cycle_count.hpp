#pragma once

#include "scram/ldpc.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace scram {

enum class Side { left, right };

struct NodeId {
    Side side = Side::left;
    std::size_t index = 0;

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Product of edge labels X_k with non-negative powers.
///
/// Stored sparsely, sorted by label; zero powers are never stored, so the
/// unit monomial is the empty list.
class Monomial {
public:
    using Term = std::pair<std::uint32_t, std::uint64_t>;

    Monomial() = default;
    static Monomial variable(std::uint32_t label) { Monomial m; m.terms_.push_back({label, 1}); return m; }

    bool is_unit() const noexcept { return terms_.empty(); }
    std::uint64_t power(std::uint32_t label) const noexcept;
    /// Sum of all powers.
    std::uint64_t degree() const noexcept;
    const std::vector<Term>& terms() const noexcept { return terms_; }

    Monomial& operator*=(const Monomial& other);
    /// Exact division; every power of `other` must be present in *this.
    Monomial& operator/=(const Monomial& other);

    friend Monomial operator*(Monomial a, const Monomial& b) { return a *= b; }
    friend Monomial operator/(Monomial a, const Monomial& b) { return a /= b; }
    friend bool operator==(const Monomial&, const Monomial&) = default;

private:
    std::vector<Term> terms_;
};

/// Map from cycle length L to a count.
using CycleCounts = std::map<std::size_t, std::uint64_t>;

struct CycleProfile {
    /// Shortest cycle length; empty for forests.
    std::optional<std::size_t> girth;
    /// C_L for even L in [girth, max_length].
    CycleCounts counts;
    /// Upper end of the counted window (0 when acyclic).
    std::size_t max_length = 0;
    /// True when the requested length exceeded 2*girth - 2.
    bool clamped = false;
    /// Per left node: cycles attributed to it under ascending deletion.
    std::vector<CycleCounts> per_node;
};

/// Monomial copies returned to `node` per cycle length (debug view).
/// A cycle through the node returns one copy on each of its two edges.
CycleCounts node_cycle_copies(const BipartiteGraph& graph, NodeId node, std::size_t max_length);

/// Cycles of each even length <= max_length through `node`, by full-cycle
/// monomial message passing. Exact for max_length <= 2*girth - 2.
/// Throws std::invalid_argument for odd max_length or max_length < 4.
CycleCounts count_node_cycles(const BipartiteGraph& graph, NodeId node, std::size_t max_length);

/// Full-cycle profile: left nodes are processed in ascending order and
/// deleted after counting. Without a requested length the window is
/// [girth, 2*girth - 2].
CycleProfile count_cycles_full(const BipartiteGraph& graph,
                               std::optional<std::size_t> max_length = std::nullopt);

/// Same contract as count_cycles_full. Walks are propagated only L/2 steps
/// from each initiating node; cycles are detected where two walks leaving
/// on different edges meet at the antipodal node on different edges.
CycleProfile count_cycles_half(const BipartiteGraph& graph,
                               std::optional<std::size_t> max_length = std::nullopt);

/// Length of the shortest cycle, by breadth-first search from every node.
std::optional<std::size_t> girth(const BipartiteGraph& graph);

/// Canonical cycle: starts at its smallest node (left nodes order before
/// right nodes) and continues toward the smaller of that node's two cycle
/// neighbours.
using Cycle = std::vector<NodeId>;

inline constexpr std::uint64_t default_enumeration_budget = 10'000'000;

/// Every simple cycle of length <= max_length exactly once, by exhaustive
/// backtracking. Throws BudgetExceeded once more than `budget` partial paths
/// have been extended.
std::vector<Cycle> enumerate_cycles_bruteforce(const BipartiteGraph& graph, std::size_t max_length,
                                               std::uint64_t budget = default_enumeration_budget);

/// Counts of an enumerated cycle list by length.
CycleCounts tally_cycles(const std::vector<Cycle>& cycles);

/// Profile with the same window semantics as count_cycles_full, counted by
/// enumeration. per_node holds each cycle at its smallest left node.
CycleProfile count_cycles_oracle(const BipartiteGraph& graph,
                                 std::optional<std::size_t> max_length = std::nullopt,
                                 std::uint64_t budget = default_enumeration_budget);

} // namespace scram
