#include "scram/scram_graph.hpp"

#include "scram/rng.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace scram {

SlotAssignment assign_slots(const ScramConfig& config)
{
    if (config.users.empty())
        throw std::invalid_argument("a SCRAM system needs at least one user");

    Rng rng(config.seed);
    SlotAssignment out;
    out.slots.reserve(config.users.size());
    std::vector<std::size_t> pool(config.n_slots);
    for (std::size_t u = 0; u < config.users.size(); ++u) {
        const std::size_t n = config.users[u].code.n_cols();
        if (n > config.n_slots)
            throw std::invalid_argument("user " + std::to_string(u + 1) + " has " + std::to_string(n) +
                                        " symbols but only " + std::to_string(config.n_slots) +
                                        " slots exist");
        std::vector<std::size_t> chosen(n);
        if (config.with_replacement) {
            for (auto& s : chosen)
                s = rng.below(config.n_slots);
        } else {
            // Partial Fisher-Yates: the first n positions are a uniform
            // ordered sample without replacement.
            std::iota(pool.begin(), pool.end(), 0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto j = i + rng.below(config.n_slots - i);
                std::swap(pool[i], pool[j]);
                chosen[i] = pool[i];
            }
        }
        out.slots.push_back(std::move(chosen));
    }
    return out;
}

ScramSystem::ScramSystem(const ScramConfig& config, SlotAssignment assignment)
    : users_(config.users), assignment_(std::move(assignment)), with_replacement_(config.with_replacement)
{
    if (users_.empty())
        throw std::invalid_argument("a SCRAM system needs at least one user");
    if (assignment_.slots.size() != users_.size())
        throw std::invalid_argument("assignment covers " + std::to_string(assignment_.slots.size()) +
                                    " users, config has " + std::to_string(users_.size()));

    std::vector<std::size_t> symbols;
    std::vector<std::size_t> checks;
    for (const auto& u : users_) {
        symbols.push_back(u.code.n_cols());
        checks.push_back(u.code.n_rows());
    }
    index_ = GlobalIndexMap(symbols, checks, config.n_slots);

    user_of_.resize(n_variables());
    slot_of_.resize(n_variables());
    colliders_.resize(n_slots());
    var_checks_.resize(n_variables());
    check_vars_.resize(n_ldpc_checks());

    std::vector<GraphEdge> ldpc_edges;
    std::vector<char> used(n_slots());
    for (std::size_t u = 0; u < users_.size(); ++u) {
        const auto& slots = assignment_.slots[u];
        if (slots.size() != symbols[u])
            throw std::invalid_argument("assignment for user " + std::to_string(u + 1) + " has " +
                                        std::to_string(slots.size()) + " slots, expected " +
                                        std::to_string(symbols[u]));
        std::fill(used.begin(), used.end(), 0);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const auto s = slots[i];
            if (s >= n_slots())
                throw std::invalid_argument("slot " + std::to_string(s + 1) + " out of range");
            if (used[s] && !with_replacement_)
                throw std::invalid_argument("user " + std::to_string(u + 1) + " uses slot " +
                                            std::to_string(s + 1) + " twice");
            used[s] = 1;
            const auto v = index_.variable_to_global({u, i});
            user_of_[v] = u;
            slot_of_[v] = s;
            colliders_[s].push_back(v);
        }
        const auto& h = users_[u].code;
        for (const auto& e : h.entries()) {
            const auto v = index_.variable_to_global({u, e.col});
            const auto l = index_.check_to_global({u, e.row});
            ldpc_edges.push_back({v, l});
        }
    }
    for (auto& c : colliders_)
        std::sort(c.begin(), c.end());

    ldpc_layer_ = BipartiteGraph(n_variables(), n_ldpc_checks(), std::move(ldpc_edges));
    for (const auto& e : ldpc_layer_.edges()) {
        var_checks_[e.left].push_back(e.right);
        check_vars_[e.right].push_back(e.left);
    }
    for (auto& l : check_vars_)
        std::sort(l.begin(), l.end());
}

ScramSystem build_system(const ScramConfig& config, const SlotAssignment& assignment)
{
    return ScramSystem(config, assignment);
}

HybridMatrix build_hybrid_matrix(const ScramSystem& system)
{
    std::vector<Entry> entries;
    entries.reserve(system.n_variables() + system.ldpc_layer().edge_count());
    for (std::size_t v = 0; v < system.n_variables(); ++v)
        entries.push_back({system.slot_of(v), v});
    for (const auto& e : system.ldpc_layer().edges())
        entries.push_back({system.n_slots() + e.right, e.left});
    return {ParityCheckMatrix(system.n_slots() + system.n_ldpc_checks(), system.n_variables(),
                              std::move(entries)),
            system.n_slots()};
}

ScramSystem system_from_hybrid(const HybridMatrix& hybrid, const std::vector<std::size_t>& symbols_per_user,
                               const std::vector<std::size_t>& checks_per_user,
                               const std::vector<std::size_t>& info_bits)
{
    const GlobalIndexMap index(symbols_per_user, checks_per_user, hybrid.sa_rows);
    const auto& h = hybrid.matrix;
    if (h.n_cols() != index.n_variables() || h.n_rows() != hybrid.sa_rows + index.n_ldpc_checks())
        throw std::invalid_argument("hybrid matrix dimensions do not match the user sizes");
    if (info_bits.size() != index.n_users())
        throw std::invalid_argument("info bit list length does not match user count");

    ScramConfig config;
    config.n_slots = hybrid.sa_rows;
    std::vector<std::vector<Entry>> user_entries(index.n_users());
    SlotAssignment assignment;
    for (std::size_t u = 0; u < index.n_users(); ++u)
        assignment.slots.emplace_back(index.symbols(u), std::numeric_limits<std::size_t>::max());

    for (const auto& e : h.entries()) {
        const auto var = index.variable_to_local(e.col);
        if (hybrid.is_sa_row(e.row)) {
            auto& slot = assignment.slots[var.user][var.index];
            if (slot != std::numeric_limits<std::size_t>::max())
                throw std::invalid_argument("column " + std::to_string(e.col + 1) +
                                            " has more than one SA entry");
            slot = e.row;
        } else {
            const auto chk = index.check_to_local(e.row - hybrid.sa_rows);
            if (chk.user != var.user)
                throw std::invalid_argument("LDPC entry outside its user's block at row " +
                                            std::to_string(e.row + 1));
            user_entries[var.user].push_back({chk.index, var.index});
        }
    }
    for (std::size_t u = 0; u < index.n_users(); ++u) {
        for (auto s : assignment.slots[u])
            if (s == std::numeric_limits<std::size_t>::max())
                throw std::invalid_argument("a column of user " + std::to_string(u + 1) +
                                            " has no SA entry");
        config.users.push_back({ParityCheckMatrix(index.checks(u), index.symbols(u), std::move(user_entries[u])),
                                info_bits[u]});
    }
    // Recover whether any user repeats a slot.
    for (const auto& slots : assignment.slots) {
        auto sorted = slots;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            config.with_replacement = true;
    }
    return ScramSystem(config, std::move(assignment));
}

double channel_load(const ScramConfig& config)
{
    if (config.n_slots == 0)
        throw std::invalid_argument("channel load is undefined with zero slots");
    std::size_t bits = 0;
    for (const auto& u : config.users)
        bits += u.k;
    return static_cast<double>(bits) / static_cast<double>(config.n_slots);
}

std::map<std::size_t, std::size_t> collision_histogram(const ScramSystem& system)
{
    std::map<std::size_t, std::size_t> out;
    for (std::size_t s = 0; s < system.n_slots(); ++s)
        ++out[system.colliders(s).size()];
    return out;
}

std::optional<std::size_t> local_girth(const ScramSystem& system)
{
    std::optional<std::size_t> best;
    for (std::size_t u = 0; u < system.n_users(); ++u) {
        const auto g = girth(to_tanner_graph(system.user(u).code));
        if (g && (!best || *g < *best))
            best = g;
    }
    return best;
}

BipartiteGraph hybrid_graph(const ScramSystem& system)
{
    return to_tanner_graph(build_hybrid_matrix(system).matrix);
}

namespace {

// Shortest path length between the endpoints of `skip` that avoids it.
std::optional<std::size_t> detour_length(const BipartiteGraph& g, std::size_t skip,
                                         std::vector<std::size_t>& dist, std::deque<std::size_t>& queue,
                                         std::size_t give_up)
{
    constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
    const std::size_t left = g.left_count();
    const auto& target = g.edge(skip);
    const std::size_t from = target.left;
    const std::size_t to = left + target.right;

    std::fill(dist.begin(), dist.end(), unseen);
    dist[from] = 0;
    queue.assign(1, from);
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop_front();
        if (dist[x] + 1 >= give_up)
            break;
        const auto edges = x < left ? g.left_edges(x) : g.right_edges(x - left);
        for (auto e : edges) {
            if (e == skip)
                continue;
            const auto& ed = g.edge(e);
            const std::size_t y = x < left ? left + ed.right : ed.left;
            if (dist[y] != unseen)
                continue;
            dist[y] = dist[x] + 1;
            if (y == to)
                return dist[y];
            queue.push_back(y);
        }
    }
    return std::nullopt;
}

} // namespace

ScramGirth scram_girth(const ScramSystem& system, std::uint64_t budget)
{
    ScramGirth out;
    out.local = local_girth(system);
    out.bound = out.local ? std::min<std::size_t>(8, *out.local) : 8;

    const auto g = hybrid_graph(system);
    const std::uint64_t nodes = g.left_count() + g.right_count();
    if (nodes * g.edge_count() > budget) {
        out.bound_only = true;
        out.girth = out.bound;
        return out;
    }

    out.girth = girth(g);

    std::vector<std::size_t> dist(nodes);
    std::deque<std::size_t> queue;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        if (g.edge(e).right >= system.n_slots())
            continue;
        if (auto d = detour_length(g, e, dist, queue, best))
            best = std::min(best, *d + 1);
    }
    if (best != std::numeric_limits<std::size_t>::max())
        out.global_min = best;

    if (!system.with_replacement() && out.global_min && *out.global_min < 8)
        throw std::logic_error("global cycle of length " + std::to_string(*out.global_min) +
                               " found in a system with distinct within-user slots");
    return out;
}

ShortCycleClasses classify_short_cycles(const ScramSystem& system, std::size_t max_length,
                                        std::uint64_t budget)
{
    ShortCycleClasses out;
    const auto g = hybrid_graph(system);
    for (const auto& cycle : enumerate_cycles_bruteforce(g, max_length, budget)) {
        const bool global = std::any_of(cycle.begin(), cycle.end(), [&](const NodeId& n) {
            return n.side == Side::right && n.index < system.n_slots();
        });
        ++(global ? out.global : out.local)[cycle.size()];
    }
    return out;
}

} // namespace scram
