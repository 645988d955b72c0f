#include "scram/ldpc.hpp"

#include "scram/errors.hpp"
#include "scram/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace scram {

ParityCheckMatrix::ParityCheckMatrix(std::size_t n_rows, std::size_t n_cols,
                                     std::vector<Entry> entries)
    : n_rows_(n_rows), n_cols_(n_cols), entries_(std::move(entries)),
      rows_(n_rows), cols_(n_cols)
{
    for (const auto& e : entries_) {
        if (e.row >= n_rows_ || e.col >= n_cols_)
            throw std::out_of_range("parity-check entry (" + std::to_string(e.row + 1) + ", " +
                                    std::to_string(e.col + 1) + ") index out of range");
    }
    std::sort(entries_.begin(), entries_.end());
    for (const auto& e : entries_) {
        rows_[e.row].push_back(e.col);
        cols_[e.col].push_back(e.row);
    }
    // Row lists are ascending by construction; column lists too, since
    // entries are visited in row order.
}

bool ParityCheckMatrix::contains(std::size_t r, std::size_t c) const
{
    const auto& row = rows_.at(r);
    return std::binary_search(row.begin(), row.end(), c);
}

bool ParityCheckMatrix::is_codeword(std::span<const std::uint8_t> bits) const
{
    if (bits.size() != n_cols_)
        throw std::invalid_argument("codeword length does not match matrix width");
    for (const auto& row : rows_) {
        unsigned parity = 0;
        for (auto c : row)
            parity ^= bits[c] & 1U;
        if (parity != 0)
            return false;
    }
    return true;
}

std::vector<Diagnostic> validate(const ParityCheckMatrix& h)
{
    std::vector<Diagnostic> out;
    const auto entries = h.entries();
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i] == entries[i - 1]) {
            out.push_back({Diagnostic::Severity::error,
                           "duplicate entry at row " + std::to_string(entries[i].row + 1) +
                               ", column " + std::to_string(entries[i].col + 1)});
        }
    }
    for (std::size_t r = 0; r < h.n_rows(); ++r) {
        if (h.row(r).empty())
            out.push_back({Diagnostic::Severity::warning, "row " + std::to_string(r + 1) + " is all-zero"});
    }
    for (std::size_t c = 0; c < h.n_cols(); ++c) {
        if (h.col(c).empty())
            out.push_back({Diagnostic::Severity::warning, "column " + std::to_string(c + 1) + " is all-zero"});
    }
    return out;
}

BipartiteGraph::BipartiteGraph(std::size_t left_count, std::size_t right_count,
                               std::vector<GraphEdge> edges)
    : edges_(std::move(edges)), left_adj_(left_count), right_adj_(right_count)
{
    std::sort(edges_.begin(), edges_.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return a.left != b.left ? a.left < b.left : a.right < b.right;
    });
    for (std::size_t id = 0; id < edges_.size(); ++id) {
        const auto& e = edges_[id];
        if (e.left >= left_count || e.right >= right_count)
            throw std::out_of_range("graph edge endpoint out of range");
        if (id > 0 && edges_[id - 1].left == e.left && edges_[id - 1].right == e.right)
            throw std::invalid_argument("repeated edge in bipartite graph");
        left_adj_[e.left].push_back(id);
        right_adj_[e.right].push_back(id);
    }
}

BipartiteGraph to_tanner_graph(const ParityCheckMatrix& h)
{
    std::vector<GraphEdge> edges;
    edges.reserve(h.nnz());
    for (const auto& e : h.entries())
        edges.push_back({e.col, e.row});
    return BipartiteGraph(h.n_cols(), h.n_rows(), std::move(edges));
}

GlobalIndexMap::GlobalIndexMap(std::vector<std::size_t> symbols_per_user,
                               std::vector<std::size_t> checks_per_user,
                               std::size_t n_slots)
    : symbols_(std::move(symbols_per_user)), checks_(std::move(checks_per_user)), n_slots_(n_slots)
{
    if (symbols_.size() != checks_.size())
        throw std::invalid_argument("per-user symbol and check counts differ in length");
    for (std::size_t u = 0; u < symbols_.size(); ++u) {
        var_offset_.push_back(var_offset_.back() + symbols_[u]);
        check_offset_.push_back(check_offset_.back() + checks_[u]);
    }
}

namespace {

LocalIndex locate(const std::vector<std::size_t>& offsets, std::size_t global, const char* what)
{
    if (global >= offsets.back())
        throw std::out_of_range(std::string(what) + " index " + std::to_string(global + 1) +
                                " out of range");
    // First offset strictly greater than global closes the owning interval.
    auto it = std::upper_bound(offsets.begin(), offsets.end(), global);
    const auto user = static_cast<std::size_t>(it - offsets.begin()) - 1;
    return {user, global - offsets[user]};
}

} // namespace

LocalIndex GlobalIndexMap::variable_to_local(std::size_t global) const
{
    return locate(var_offset_, global, "variable");
}

std::size_t GlobalIndexMap::variable_to_global(LocalIndex local) const
{
    if (local.user >= n_users() || local.index >= symbols_[local.user])
        throw std::out_of_range("local variable index out of range");
    return var_offset_[local.user] + local.index;
}

LocalIndex GlobalIndexMap::check_to_local(std::size_t global) const
{
    return locate(check_offset_, global, "check");
}

std::size_t GlobalIndexMap::check_to_global(LocalIndex local) const
{
    if (local.user >= n_users() || local.index >= checks_[local.user])
        throw std::out_of_range("local check index out of range");
    return check_offset_[local.user] + local.index;
}

ParityCheckMatrix make_random_code(std::size_t n_cols, std::size_t n_rows,
                                   std::size_t column_weight, std::uint64_t seed)
{
    if (column_weight == 0 || column_weight > n_rows)
        throw std::invalid_argument("column weight must be in [1, rows]");

    constexpr int attempts = 200;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::vector<std::vector<std::size_t>> row_cols(n_rows);
        std::vector<Entry> entries;
        bool ok = true;

        for (std::size_t c = 0; c < n_cols && ok; ++c) {
            // Random tie-break, then least-loaded rows first.
            std::vector<std::size_t> order(n_rows);
            std::iota(order.begin(), order.end(), 0);
            for (std::size_t i = n_rows; i > 1; --i)
                std::swap(order[i - 1], order[rng.below(i)]);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return row_cols[a].size() < row_cols[b].size();
            });

            std::vector<std::size_t> chosen;
            for (auto r : order) {
                if (chosen.size() == column_weight)
                    break;
                bool shares = false;
                for (auto r0 : chosen) {
                    for (auto c0 : row_cols[r0]) {
                        if (std::find(row_cols[r].begin(), row_cols[r].end(), c0) != row_cols[r].end()) {
                            shares = true;
                            break;
                        }
                    }
                    if (shares)
                        break;
                }
                if (!shares)
                    chosen.push_back(r);
            }
            if (chosen.size() < column_weight) {
                ok = false;
                break;
            }
            for (auto r : chosen) {
                row_cols[r].push_back(c);
                entries.push_back({r, c});
            }
        }
        if (ok)
            return ParityCheckMatrix(n_rows, n_cols, std::move(entries));
    }
    throw InputError("cannot build a 4-cycle-free " + std::to_string(n_rows) + "x" +
                     std::to_string(n_cols) + " code with column weight " +
                     std::to_string(column_weight));
}

namespace {

using Words = std::vector<std::uint64_t>;

std::vector<Words> dense_rows(const ParityCheckMatrix& h)
{
    const std::size_t words = (h.n_cols() + 63) / 64;
    std::vector<Words> rows(h.n_rows(), Words(words, 0));
    // XOR keeps duplicate entries consistent with GF(2) arithmetic.
    for (const auto& e : h.entries())
        rows[e.row][e.col / 64] ^= std::uint64_t{1} << (e.col % 64);
    return rows;
}

bool test_bit(const Words& w, std::size_t c) { return (w[c / 64] >> (c % 64)) & 1U; }

/// Reduces `rows` in place to reduced row-echelon form; returns the pivot
/// column of each of the first rank rows.
std::vector<std::size_t> reduce(std::vector<Words>& rows, std::size_t n_cols)
{
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n_cols && rank < rows.size(); ++c) {
        std::size_t r = rank;
        while (r < rows.size() && !test_bit(rows[r], c))
            ++r;
        if (r == rows.size())
            continue;
        std::swap(rows[r], rows[rank]);
        for (std::size_t other = 0; other < rows.size(); ++other) {
            if (other == rank || !test_bit(rows[other], c))
                continue;
            for (std::size_t w = c / 64; w < rows[other].size(); ++w)
                rows[other][w] ^= rows[rank][w];
        }
        pivots.push_back(c);
        ++rank;
    }
    return pivots;
}

} // namespace

std::size_t gf2_rank(const ParityCheckMatrix& h)
{
    auto rows = dense_rows(h);
    return reduce(rows, h.n_cols()).size();
}

Gf2Encoder::Gf2Encoder(const ParityCheckMatrix& h) : n_(h.n_cols())
{
    auto rows = dense_rows(h);
    const auto pivots = reduce(rows, n_);
    std::vector<char> is_pivot(n_, 0);
    for (auto c : pivots)
        is_pivot[c] = 1;
    for (std::size_t free = 0; free < n_; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<std::uint8_t> word(n_, 0);
        word[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (test_bit(rows[r], free))
                word[pivots[r]] = 1;
        basis_.push_back(std::move(word));
    }
}

std::vector<std::uint8_t> Gf2Encoder::random_codeword(Rng& rng) const
{
    std::vector<std::uint8_t> out(n_, 0);
    for (const auto& b : basis_) {
        if (rng.below(2) == 0)
            continue;
        for (std::size_t i = 0; i < n_; ++i)
            out[i] ^= b[i];
    }
    return out;
}

} // namespace scram
