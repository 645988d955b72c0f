#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scram {

// All indices in this library are 0-based. File formats and reports
// convert to 1-based at the boundary.

struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
    friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// Sparse binary m x n parity-check matrix with row and column adjacency.
///
/// The constructor range-checks indices but keeps duplicate entries so that
/// validate() can report them; every other consumer expects a valid matrix.
class ParityCheckMatrix {
public:
    ParityCheckMatrix() = default;
    ParityCheckMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<Entry> entries);

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_cols() const noexcept { return n_cols_; }
    std::size_t nnz() const noexcept { return entries_.size(); }

    /// Entries sorted by (row, col).
    std::span<const Entry> entries() const noexcept { return entries_; }

    /// Ascending column indices of row r.
    std::span<const std::size_t> row(std::size_t r) const { return rows_.at(r); }
    /// Ascending row indices of column c.
    std::span<const std::size_t> col(std::size_t c) const { return cols_.at(c); }

    bool contains(std::size_t r, std::size_t c) const;

    /// Syndrome check over GF(2); bits.size() must equal n_cols().
    bool is_codeword(std::span<const std::uint8_t> bits) const;

    friend bool operator==(const ParityCheckMatrix& a, const ParityCheckMatrix& b)
    {
        return a.n_rows_ == b.n_rows_ && a.n_cols_ == b.n_cols_ && a.entries_ == b.entries_;
    }

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::vector<Entry> entries_;
    std::vector<std::vector<std::size_t>> rows_;
    std::vector<std::vector<std::size_t>> cols_;
};

struct Diagnostic {
    enum class Severity { warning, error };
    Severity severity = Severity::warning;
    std::string message;

    bool is_error() const noexcept { return severity == Severity::error; }
};

/// Zero rows and zero columns are warnings; duplicate entries are errors.
std::vector<Diagnostic> validate(const ParityCheckMatrix& h);

/// Reads the MacKay alist format. Zero padding of the adjacency lists is
/// optional. Throws AlistError carrying the offending line number.
ParityCheckMatrix parse_alist(std::istream& in);
ParityCheckMatrix read_alist_file(const std::string& path);

/// Writes alist with zero-padded adjacency lines.
void serialize_alist(const ParityCheckMatrix& h, std::ostream& out);
std::string to_alist(const ParityCheckMatrix& h);

// ---------------------------------------------------------------------------

struct GraphEdge {
    std::size_t left = 0;
    std::size_t right = 0;
};

/// Simple bipartite graph with dense edge ids.
///
/// Edge ids are ordered by (left, right); each node's adjacency lists its
/// edge ids in ascending order of the opposite endpoint.
class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(std::size_t left_count, std::size_t right_count, std::vector<GraphEdge> edges);

    std::size_t left_count() const noexcept { return left_adj_.size(); }
    std::size_t right_count() const noexcept { return right_adj_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const GraphEdge& edge(std::size_t id) const { return edges_[id]; }
    std::span<const GraphEdge> edges() const noexcept { return edges_; }

    std::span<const std::size_t> left_edges(std::size_t v) const { return left_adj_.at(v); }
    std::span<const std::size_t> right_edges(std::size_t c) const { return right_adj_.at(c); }

private:
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<std::size_t>> left_adj_;
    std::vector<std::vector<std::size_t>> right_adj_;
};

/// Columns become left (variable) nodes, rows become right (check) nodes.
BipartiteGraph to_tanner_graph(const ParityCheckMatrix& h);

// ---------------------------------------------------------------------------

struct LocalIndex {
    std::size_t user = 0;
    std::size_t index = 0;

    friend bool operator==(const LocalIndex&, const LocalIndex&) = default;
};

/// Global <-> per-user index arithmetic for the stacked multi-user graph.
///
/// Global variable n_v belongs to the user whose prefix-sum interval contains
/// it; for identical codes this reduces to user = n_v / n and
/// index = n_v mod n (0-based).
class GlobalIndexMap {
public:
    GlobalIndexMap() = default;
    GlobalIndexMap(std::vector<std::size_t> symbols_per_user,
                   std::vector<std::size_t> checks_per_user,
                   std::size_t n_slots);

    std::size_t n_users() const noexcept { return symbols_.size(); }
    std::size_t n_variables() const noexcept { return var_offset_.back(); }
    std::size_t n_ldpc_checks() const noexcept { return check_offset_.back(); }
    std::size_t n_slots() const noexcept { return n_slots_; }

    std::size_t symbols(std::size_t user) const { return symbols_.at(user); }
    std::size_t checks(std::size_t user) const { return checks_.at(user); }
    std::size_t variable_offset(std::size_t user) const { return var_offset_.at(user); }
    std::size_t check_offset(std::size_t user) const { return check_offset_.at(user); }

    LocalIndex variable_to_local(std::size_t global) const;
    std::size_t variable_to_global(LocalIndex local) const;
    LocalIndex check_to_local(std::size_t global) const;
    std::size_t check_to_global(LocalIndex local) const;

    /// Row of an LDPC check in the hybrid matrix (SA rows come first).
    std::size_t hybrid_row(LocalIndex check) const { return n_slots_ + check_to_global(check); }

private:
    std::vector<std::size_t> symbols_;
    std::vector<std::size_t> checks_;
    std::vector<std::size_t> var_offset_{0};
    std::vector<std::size_t> check_offset_{0};
    std::size_t n_slots_ = 0;
};

// ---------------------------------------------------------------------------

/// Random sparse code whose columns pairwise share at most one row
/// (girth >= 6). Rows are filled least-loaded first. Throws InputError if
/// the construction cannot satisfy the constraint within its retry limit.
ParityCheckMatrix make_random_code(std::size_t n_cols, std::size_t n_rows,
                                   std::size_t column_weight, std::uint64_t seed);

/// Rank of H over GF(2).
std::size_t gf2_rank(const ParityCheckMatrix& h);

class Rng;

/// Codewords of H drawn uniformly from its null space over GF(2).
class Gf2Encoder {
public:
    explicit Gf2Encoder(const ParityCheckMatrix& h);

    /// n - rank(H).
    std::size_t dimension() const noexcept { return basis_.size(); }
    const std::vector<std::vector<std::uint8_t>>& basis() const noexcept { return basis_; }
    std::vector<std::uint8_t> random_codeword(Rng& rng) const;

private:
    std::size_t n_ = 0;
    std::vector<std::vector<std::uint8_t>> basis_;
};

} // namespace scram
