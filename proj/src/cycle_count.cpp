#include "scram/cycle_count.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace scram {

// ---------------------------------------------------------------------------
// Monomial

std::uint64_t Monomial::power(std::uint32_t label) const noexcept
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), label,
                               [](const Term& t, std::uint32_t l) { return t.first < l; });
    return it != terms_.end() && it->first == label ? it->second : 0;
}

std::uint64_t Monomial::degree() const noexcept
{
    std::uint64_t sum = 0;
    for (const auto& t : terms_)
        sum += t.second;
    return sum;
}

Monomial& Monomial::operator*=(const Monomial& other)
{
    if (other.terms_.empty())
        return *this;
    if (terms_.empty()) {
        terms_ = other.terms_;
        return *this;
    }
    std::vector<Term> merged;
    merged.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            merged.push_back(*a++);
        } else if (a == terms_.end() || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            merged.push_back({a->first, a->second + b->second});
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

Monomial& Monomial::operator/=(const Monomial& other)
{
    auto a = terms_.begin();
    for (const auto& t : other.terms_) {
        while (a != terms_.end() && a->first < t.first)
            ++a;
        if (a == terms_.end() || a->first != t.first || a->second < t.second)
            throw std::logic_error("monomial division is not exact");
        a->second -= t.second;
    }
    std::erase_if(terms_, [](const Term& t) { return t.second == 0; });
    return *this;
}

// ---------------------------------------------------------------------------
// Message passing

namespace {

constexpr Side other(Side s) { return s == Side::left ? Side::right : Side::left; }

void check_length(std::size_t max_length)
{
    if (max_length < 4 || max_length % 2 != 0)
        throw std::invalid_argument("maximum cycle length must be even and >= 4, got " +
                                    std::to_string(max_length));
}

/// Directed-edge monomial messages on a graph with some left nodes deleted.
///
/// inbox(s)[e] is the message on edge e arriving at its endpoint on side s.
class MessageState {
public:
    MessageState(const BipartiteGraph& graph, const std::vector<char>& removed_left)
        : graph_(graph), removed_(removed_left),
          to_left_(graph.edge_count()), to_right_(graph.edge_count())
    {
    }

    std::vector<Monomial>& inbox(Side s) { return s == Side::left ? to_left_ : to_right_; }

    std::span<const std::size_t> edges_of(NodeId n) const
    {
        return n.side == Side::left ? graph_.left_edges(n.index) : graph_.right_edges(n.index);
    }

    std::size_t count(Side s) const
    {
        return s == Side::left ? graph_.left_count() : graph_.right_count();
    }

    bool edge_active(std::size_t e) const { return !removed_[graph_.edge(e).left]; }

    bool node_active(NodeId n) const { return n.side == Side::right || !removed_[n.index]; }

    /// t = 0: the initiator emits a distinct unit-power monomial per edge.
    void initiate(NodeId origin)
    {
        std::uint32_t label = 0;
        for (auto e : edges_of(origin)) {
            if (edge_active(e))
                inbox(other(origin.side))[e] = Monomial::variable(label);
            ++label;
        }
    }

    /// Every active node on `sender` forwards the extrinsic product of its
    /// incoming messages; `silent` (the initiator) forwards units.
    void send(Side sender, NodeId silent)
    {
        auto& in = inbox(sender);
        auto& out = inbox(other(sender));
        for (std::size_t i = 0; i < count(sender); ++i) {
            const NodeId node{sender, i};
            if (!node_active(node))
                continue;
            const auto edges = edges_of(node);
            if (node == silent) {
                for (auto e : edges)
                    out[e] = Monomial{};
                continue;
            }
            Monomial total;
            for (auto e : edges)
                if (edge_active(e))
                    total *= in[e];
            for (auto e : edges)
                if (edge_active(e))
                    out[e] = total / in[e];
        }
    }

private:
    const BipartiteGraph& graph_;
    const std::vector<char>& removed_;
    std::vector<Monomial> to_left_;
    std::vector<Monomial> to_right_;
};

std::size_t active_degree(const MessageState& state, NodeId node)
{
    std::size_t d = 0;
    for (auto e : state.edges_of(node))
        d += state.edge_active(e) ? 1 : 0;
    return d;
}

CycleCounts full_copies(const BipartiteGraph& graph, const std::vector<char>& removed, NodeId origin,
                        std::size_t max_length)
{
    CycleCounts copies;
    for (std::size_t len = 4; len <= max_length; len += 2)
        copies[len] = 0;

    MessageState state(graph, removed);
    if (!state.node_active(origin) || active_degree(state, origin) < 2)
        return copies;

    state.initiate(origin);
    Side sender = other(origin.side);
    const auto origin_edges = state.edges_of(origin);
    for (std::size_t t = 1; t + 1 <= max_length; ++t) {
        state.send(sender, origin);
        if (t % 2 == 1) {
            // Messages now arrive back at the initiator's side.
            auto& in = state.inbox(origin.side);
            std::uint64_t total = 0;
            std::uint32_t label = 0;
            for (auto e : origin_edges) {
                if (state.edge_active(e))
                    total += in[e].degree() - in[e].power(label);
                ++label;
            }
            if (t + 1 >= 4)
                copies[t + 1] = total;
        }
        sender = other(sender);
    }
    return copies;
}

CycleCounts halve(const CycleCounts& copies)
{
    CycleCounts out;
    for (const auto& [len, c] : copies) {
        if (c % 2 != 0)
            throw std::logic_error("odd monomial copy count at length " + std::to_string(len));
        out[len] = c / 2;
    }
    return out;
}

// Cycles of length 2h through the origin whose antipodal node lies on the
// side that just received step-h messages.
std::uint64_t meet_in_middle(MessageState& state, Side receiver, NodeId origin)
{
    auto& in = state.inbox(receiver);
    unsigned __int128 ordered = 0;
    std::vector<std::uint64_t> row_sums;
    for (std::size_t i = 0; i < state.count(receiver); ++i) {
        const NodeId node{receiver, i};
        if (node == origin || !state.node_active(node))
            continue;
        // n[a][b]: walks leaving the origin on label a, arriving on edge b.
        unsigned __int128 total = 0;
        unsigned __int128 col_sq = 0;
        unsigned __int128 cell_sq = 0;
        row_sums.clear();
        std::size_t arrivals = 0;
        for (auto e : state.edges_of(node)) {
            if (!state.edge_active(e) || in[e].is_unit())
                continue;
            ++arrivals;
            std::uint64_t col = 0;
            for (const auto& [label, count] : in[e].terms()) {
                col += count;
                cell_sq += static_cast<unsigned __int128>(count) * count;
                if (row_sums.size() <= label)
                    row_sums.resize(label + 1, 0);
                row_sums[label] += count;
            }
            total += col;
            col_sq += static_cast<unsigned __int128>(col) * col;
        }
        if (arrivals < 2)
            continue;
        unsigned __int128 row_sq = 0;
        for (auto r : row_sums)
            row_sq += static_cast<unsigned __int128>(r) * r;
        ordered += total * total - row_sq - col_sq + cell_sq;
    }
    if (ordered % 2 != 0)
        throw std::logic_error("odd ordered walk-pair count");
    return static_cast<std::uint64_t>(ordered / 2);
}

CycleCounts half_counts(const BipartiteGraph& graph, const std::vector<char>& removed, NodeId origin,
                        std::size_t max_length)
{
    CycleCounts counts;
    for (std::size_t len = 4; len <= max_length; len += 2)
        counts[len] = 0;

    MessageState state(graph, removed);
    if (!state.node_active(origin) || active_degree(state, origin) < 2)
        return counts;

    state.initiate(origin);
    Side receiver = other(origin.side);
    const std::size_t steps = max_length / 2;
    for (std::size_t h = 1; h <= steps; ++h) {
        if (h > 1)
            state.send(other(receiver), origin);
        if (2 * h >= 4)
            counts[2 * h] = meet_in_middle(state, receiver, origin);
        receiver = other(receiver);
    }
    return counts;
}

struct Window {
    std::size_t max_length = 0;
    bool clamped = false;
};

Window resolve_window(std::optional<std::size_t> girth, std::optional<std::size_t> requested)
{
    if (!girth)
        return {};
    const std::size_t limit = 2 * *girth - 2;
    if (!requested)
        return {limit, false};
    std::size_t want = *requested - (*requested % 2);
    if (want > limit)
        return {limit, true};
    return {want, false};
}

template <typename PerNode>
CycleProfile deletion_profile(const BipartiteGraph& graph, std::optional<std::size_t> max_length,
                              PerNode per_node)
{
    CycleProfile profile;
    profile.girth = girth(graph);
    const auto window = resolve_window(profile.girth, max_length);
    profile.max_length = window.max_length;
    profile.clamped = window.clamped;
    profile.per_node.resize(graph.left_count());
    if (!profile.girth || window.max_length < *profile.girth)
        return profile;

    for (std::size_t len = *profile.girth; len <= window.max_length; len += 2)
        profile.counts[len] = 0;

    std::vector<char> removed(graph.left_count(), 0);
    for (std::size_t v = 0; v < graph.left_count(); ++v) {
        const auto counts = per_node(graph, removed, NodeId{Side::left, v}, window.max_length);
        for (const auto& [len, c] : counts) {
            if (len < *profile.girth || c == 0)
                continue;
            profile.per_node[v][len] = c;
            profile.counts[len] += c;
        }
        removed[v] = 1;
    }
    return profile;
}

} // namespace

CycleCounts node_cycle_copies(const BipartiteGraph& graph, NodeId node, std::size_t max_length)
{
    check_length(max_length);
    const std::vector<char> none(graph.left_count(), 0);
    return full_copies(graph, none, node, max_length);
}

CycleCounts count_node_cycles(const BipartiteGraph& graph, NodeId node, std::size_t max_length)
{
    return halve(node_cycle_copies(graph, node, max_length));
}

CycleProfile count_cycles_full(const BipartiteGraph& graph, std::optional<std::size_t> max_length)
{
    return deletion_profile(graph, max_length,
                            [](const BipartiteGraph& g, const std::vector<char>& removed, NodeId n,
                               std::size_t len) { return halve(full_copies(g, removed, n, len)); });
}

CycleProfile count_cycles_half(const BipartiteGraph& graph, std::optional<std::size_t> max_length)
{
    return deletion_profile(graph, max_length, half_counts);
}

std::optional<std::size_t> girth(const BipartiteGraph& graph)
{
    const std::size_t left = graph.left_count();
    const std::size_t total = left + graph.right_count();
    constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();

    std::size_t best = unseen;
    std::vector<std::size_t> dist(total);
    std::vector<std::size_t> via(total);
    std::deque<std::size_t> queue;

    for (std::size_t root = 0; root < total; ++root) {
        std::fill(dist.begin(), dist.end(), unseen);
        dist[root] = 0;
        via[root] = unseen;
        queue.assign(1, root);
        while (!queue.empty()) {
            const auto x = queue.front();
            queue.pop_front();
            // Cycles found beyond this depth cannot improve the best.
            if (best != unseen && 2 * dist[x] + 1 >= best)
                break;
            const auto edges = x < left ? graph.left_edges(x) : graph.right_edges(x - left);
            for (auto e : edges) {
                if (e == via[x])
                    continue;
                const auto& ed = graph.edge(e);
                const std::size_t y = x < left ? left + ed.right : ed.left;
                if (dist[y] == unseen) {
                    dist[y] = dist[x] + 1;
                    via[y] = e;
                    queue.push_back(y);
                } else {
                    best = std::min(best, dist[x] + dist[y] + 1);
                }
            }
        }
    }
    if (best == unseen)
        return std::nullopt;
    return best;
}

} // namespace scram
