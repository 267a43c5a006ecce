#include "meshroute/paths.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <unordered_map>

namespace meshroute {

path_t shortest_path_tree::path_to(node_id target) const
{
    if (target >= dist.size() || dist[target] == unreachable) {
        return {};
    }
    path_t out;
    for (node_id cur = target; cur != no_node; cur = parent[cur]) {
        out.push_back(cur);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

shortest_path_tree dijkstra(const mesh_topology& topo, node_id source, std::optional<node_id> excluded)
{
    const std::size_t n = topo.node_count();
    if (!topo.contains(source)) {
        throw topology_error("dijkstra source " + std::to_string(source) + " is not a node");
    }
    shortest_path_tree tree;
    tree.source = source;
    tree.dist.assign(n, unreachable);
    tree.parent.assign(n, no_node);
    if (excluded && *excluded == source) {
        return tree;
    }

    using entry = std::pair<double, node_id>;
    std::priority_queue<entry, std::vector<entry>, std::greater<>> frontier;
    tree.dist[source] = 0.0;
    frontier.push({0.0, source});
    while (!frontier.empty()) {
        const auto [d, cur] = frontier.top();
        frontier.pop();
        if (d > tree.dist[cur]) {
            continue;
        }
        for (const auto& e : topo.neighbors(cur)) {
            if (excluded && e.to == *excluded) {
                continue;
            }
            const double nd = d + topo.links()[e.link_index].cost;
            if (nd < tree.dist[e.to]) {
                tree.dist[e.to] = nd;
                tree.parent[e.to] = cur;
                frontier.push({nd, e.to});
            }
        }
    }
    return tree;
}

std::optional<double> shortest_path_cost(const mesh_topology& topo, node_id from, node_id to)
{
    if (!topo.contains(to)) {
        throw topology_error("target " + std::to_string(to) + " is not a node");
    }
    const auto tree = dijkstra(topo, from);
    if (!tree.reaches(to)) {
        return std::nullopt;
    }
    return tree.dist[to];
}

shortest_path_table::shortest_path_table(const mesh_topology& topo) : topo_(&topo)
{
    trees_.reserve(topo.node_count());
    for (node_id s = 0; s < topo.node_count(); ++s) {
        trees_.push_back(dijkstra(topo, s));
    }
}

node_id shortest_path_table::nearest_gateway(node_id n) const
{
    node_id best = no_node;
    double best_cost = unreachable;
    for (node_id g : topo_->gateways()) {
        const double c = cost(n, g);
        if (c < best_cost || (c == best_cost && c != unreachable && g < best)) {
            best = g;
            best_cost = c;
        }
    }
    return best;
}

path_cap_error::path_cap_error(std::size_t cap)
    : std::runtime_error("simple-path enumeration exceeded the cap of " + std::to_string(cap) + " paths"),
      cap_(cap)
{
}

std::vector<path_t> enumerate_simple_paths(const mesh_topology& topo, node_id source,
                                           const std::vector<node_id>& destinations,
                                           std::size_t max_hops, std::size_t cap)
{
    if (!topo.contains(source)) {
        throw topology_error("source " + std::to_string(source) + " is not a node");
    }
    if (destinations.empty()) {
        throw std::invalid_argument("destination set is empty");
    }
    if (max_hops < 1) {
        throw std::invalid_argument("max_hops must be at least 1");
    }
    std::vector<bool> is_dest(topo.node_count(), false);
    for (node_id d : destinations) {
        if (!topo.contains(d)) {
            throw topology_error("destination " + std::to_string(d) + " is not a node");
        }
        is_dest[d] = true;
    }

    std::vector<path_t> out;
    std::vector<bool> on_path(topo.node_count(), false);
    path_t current{source};
    on_path[source] = true;

    // Pre-order DFS over sorted neighbors yields lexicographic order.
    std::function<void()> visit = [&] {
        const node_id tip = current.back();
        if (is_dest[tip]) {
            if (out.size() >= cap) {
                throw path_cap_error(cap);
            }
            out.push_back(current);
        }
        if (current.size() - 1 >= max_hops) {
            return;
        }
        for (const auto& e : topo.neighbors(tip)) {
            if (on_path[e.to]) {
                continue;
            }
            on_path[e.to] = true;
            current.push_back(e.to);
            visit();
            current.pop_back();
            on_path[e.to] = false;
        }
    };
    visit();
    return out;
}

bool validate_path(const mesh_topology& topo, const path_t& path, terminal_check terminal)
{
    if (path.empty()) {
        return false;
    }
    std::vector<bool> seen(topo.node_count(), false);
    for (std::size_t i = 0; i < path.size(); ++i) {
        const node_id cur = path[i];
        if (!topo.contains(cur) || seen[cur]) {
            return false;
        }
        seen[cur] = true;
        if (i > 0 && !topo.adjacent(path[i - 1], cur)) {
            return false;
        }
    }
    return terminal == terminal_check::any || topo.is_gateway(path.back());
}

path_t remove_loops(path_t path)
{
    std::unordered_map<node_id, std::size_t> last;
    for (std::size_t i = 0; i < path.size(); ++i) {
        last[path[i]] = i;
    }
    path_t out;
    out.reserve(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        out.push_back(path[i]);
        i = last[path[i]];
    }
    return out;
}

} // namespace meshroute
