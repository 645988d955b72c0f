#include "scram/global8.hpp"

#include "scram/errors.hpp"

#include <numeric>
#include <stdexcept>

namespace scram {

std::size_t common_ldpc_checks(const ParityCheckMatrix& code, std::size_t i, std::size_t j)
{
    if (i >= code.n_cols() || j >= code.n_cols())
        throw std::out_of_range("column index out of range");
    if (i == j)
        throw std::invalid_argument("common_ldpc_checks needs two distinct columns");
    const auto a = code.col(i);
    const auto b = code.col(j);
    std::size_t count = 0;
    for (auto pa = a.begin(), pb = b.begin(); pa != a.end() && pb != b.end();) {
        if (*pa < *pb) {
            ++pa;
        } else if (*pb < *pa) {
            ++pb;
        } else {
            ++count;
            ++pa;
            ++pb;
        }
    }
    return count;
}

Global8Report count_global_8cycles(const ScramSystem& system, std::span<const std::size_t> order)
{
    const std::size_t n = system.n_variables();
    std::vector<std::size_t> ascending;
    if (order.empty()) {
        ascending.resize(n);
        std::iota(ascending.begin(), ascending.end(), 0);
        order = ascending;
    }
    if (order.size() != n)
        throw std::invalid_argument("primary order must list every variable once");

    Global8Report report;
    report.per_node.assign(n, 0);
    std::vector<char> processed(n, 0);

    for (const auto v1p : order) {
        if (v1p >= n || processed[v1p])
            throw std::invalid_argument("primary order must list every variable once");
        const auto primary_user = system.user_of(v1p);
        const auto s1 = system.slot_of(v1p);
        std::uint64_t c8 = 0;

        for (const auto lp : system.checks_of(v1p)) {
            for (const auto v2p : system.variables_of(lp)) {
                if (v2p == v1p || processed[v2p])
                    continue;
                const auto s2 = system.slot_of(v2p);
                if (s2 == s1)
                    throw std::invalid_argument("variables " + std::to_string(v1p + 1) + " and " +
                                                std::to_string(v2p + 1) +
                                                " share an LDPC check and a slot; global 8-cycle "
                                                "counting needs distinct slots within each user");
                for (const auto v1s : system.colliders(s1)) {
                    if (v1s == v1p || processed[v1s])
                        continue;
                    const auto secondary_user = system.user_of(v1s);
                    if (secondary_user == primary_user)
                        continue;
                    for (const auto v2s : system.colliders(s2)) {
                        if (v2s == v2p || processed[v2s])
                            continue;
                        if (v1s == v2s)
                            throw std::logic_error("secondary candidates coincide; a symbol sits in two slots");
                        if (system.user_of(v2s) != secondary_user)
                            continue;
                        const auto& idx = system.index();
                        const auto common = common_ldpc_checks(system.user(secondary_user).code,
                                                               idx.variable_to_local(v1s).index,
                                                               idx.variable_to_local(v2s).index);
                        if (common == 0)
                            continue;
                        c8 += common;
                        report.per_user_pair[{primary_user, secondary_user}] += common;
                    }
                }
            }
        }
        report.per_node[v1p] = c8;
        report.total += c8;
        processed[v1p] = 1;
    }
    return report;
}

Global8Verification verify_against_profile(const ScramSystem& system, std::uint64_t budget)
{
    Global8Verification out;
    out.algorithmic = count_global_8cycles(system).total;

    const auto graph = hybrid_graph(system);
    // Each initiator runs 4 steps over every edge in both directions.
    const std::uint64_t work = static_cast<std::uint64_t>(graph.left_count()) * graph.edge_count() * 8;
    if (work > budget)
        throw BudgetExceeded("hybrid profile needs ~" + std::to_string(work) +
                             " message updates, budget is " + std::to_string(budget));

    out.hybrid = count_cycles_half(graph, 8);
    std::int64_t local_c8 = 0;
    bool resolvable = out.hybrid.max_length >= 8 || !out.hybrid.girth;
    for (std::size_t u = 0; u < system.n_users(); ++u) {
        auto profile = count_cycles_half(to_tanner_graph(system.user(u).code), 8);
        if (profile.girth && profile.max_length < 8)
            resolvable = false;
        if (auto it = profile.counts.find(8); it != profile.counts.end())
            local_c8 += static_cast<std::int64_t>(it->second);
        out.users.push_back(std::move(profile));
    }
    if (!resolvable) {
        out.note = "girth 4 limits the counting window to length 6; 8-cycles are not resolvable";
        return out;
    }
    std::int64_t hybrid_c8 = 0;
    if (auto it = out.hybrid.counts.find(8); it != out.hybrid.counts.end())
        hybrid_c8 = static_cast<std::int64_t>(it->second);
    out.by_subtraction = hybrid_c8 - local_c8;
    out.equal = *out.by_subtraction == static_cast<std::int64_t>(out.algorithmic);
    return out;
}

} // namespace scram
