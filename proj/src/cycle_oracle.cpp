#include "scram/cycle_count.hpp"
#include "scram/errors.hpp"

#include <stdexcept>

namespace scram {

namespace {

class Enumerator {
public:
    Enumerator(const BipartiteGraph& graph, std::size_t max_length, std::uint64_t budget)
        : graph_(graph), left_(graph.left_count()), max_length_(max_length), budget_(budget),
          on_path_(graph.left_count() + graph.right_count(), 0)
    {
    }

    std::vector<Cycle> run()
    {
        const std::size_t total = on_path_.size();
        for (start_ = 0; start_ < total; ++start_) {
            path_.assign(1, start_);
            on_path_[start_] = 1;
            extend();
            on_path_[start_] = 0;
        }
        return std::move(cycles_);
    }

private:
    NodeId to_node(std::size_t id) const
    {
        return id < left_ ? NodeId{Side::left, id} : NodeId{Side::right, id - left_};
    }

    template <typename Fn>
    void for_neighbours(std::size_t x, Fn&& fn) const
    {
        if (x < left_) {
            for (auto e : graph_.left_edges(x))
                fn(left_ + graph_.edge(e).right);
        } else {
            for (auto e : graph_.right_edges(x - left_))
                fn(graph_.edge(e).left);
        }
    }

    void extend()
    {
        const auto x = path_.back();
        for_neighbours(x, [&](std::size_t y) {
            if (y == start_) {
                // Length-2 returns reuse the first edge: a closed walk.
                if (path_.size() >= 3 && path_[1] < path_.back())
                    record();
                return;
            }
            if (y < start_ || on_path_[y] || path_.size() >= max_length_)
                return;
            if (++steps_ > budget_)
                throw BudgetExceeded("cycle enumeration exceeded " + std::to_string(budget_) +
                                     " partial paths");
            path_.push_back(y);
            on_path_[y] = 1;
            extend();
            on_path_[y] = 0;
            path_.pop_back();
        });
    }

    void record()
    {
        Cycle c;
        c.reserve(path_.size());
        for (auto id : path_)
            c.push_back(to_node(id));
        cycles_.push_back(std::move(c));
    }

    const BipartiteGraph& graph_;
    std::size_t left_;
    std::size_t max_length_;
    std::uint64_t budget_;
    std::uint64_t steps_ = 0;
    std::size_t start_ = 0;
    std::vector<std::size_t> path_;
    std::vector<char> on_path_;
    std::vector<Cycle> cycles_;
};

} // namespace

std::vector<Cycle> enumerate_cycles_bruteforce(const BipartiteGraph& graph, std::size_t max_length,
                                               std::uint64_t budget)
{
    if (max_length < 4)
        return {};
    return Enumerator(graph, max_length, budget).run();
}

CycleCounts tally_cycles(const std::vector<Cycle>& cycles)
{
    CycleCounts out;
    for (const auto& c : cycles)
        ++out[c.size()];
    return out;
}

CycleProfile count_cycles_oracle(const BipartiteGraph& graph, std::optional<std::size_t> max_length,
                                 std::uint64_t budget)
{
    CycleProfile profile;
    profile.girth = girth(graph);
    profile.per_node.resize(graph.left_count());
    if (!profile.girth)
        return profile;

    const std::size_t limit = 2 * *profile.girth - 2;
    std::size_t want = max_length ? *max_length - (*max_length % 2) : limit;
    profile.clamped = max_length && want > limit;
    profile.max_length = std::min(want, limit);
    if (profile.max_length < *profile.girth)
        return profile;

    for (std::size_t len = *profile.girth; len <= profile.max_length; len += 2)
        profile.counts[len] = 0;
    for (const auto& cycle : enumerate_cycles_bruteforce(graph, profile.max_length, budget)) {
        ++profile.counts[cycle.size()];
        // Canonical cycles start at their smallest node, which is a left
        // node whenever the cycle has one (always, for bipartite cycles).
        ++profile.per_node[cycle.front().index][cycle.size()];
    }
    return profile;
}

} // namespace scram
