#pragma once

#include "meshroute/graph.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace meshroute {

inline constexpr double unreachable = std::numeric_limits<double>::infinity();
inline constexpr node_id no_node = std::numeric_limits<node_id>::max();

/// Single-source Dijkstra result over link costs.
struct shortest_path_tree {
    node_id source = 0;
    std::vector<double> dist;      ///< `unreachable` when not reached
    std::vector<node_id> parent;   ///< no_node for source / unreached

    bool reaches(node_id n) const { return dist.at(n) != unreachable; }
    /// Empty when unreachable.
    path_t path_to(node_id target) const;
};

/// Dijkstra from source; `excluded` (if any) is treated as absent.
shortest_path_tree dijkstra(const mesh_topology& topo, node_id source,
                            std::optional<node_id> excluded = std::nullopt);

/// Minimal link-cost sum, or nullopt when `to` cannot be reached.
std::optional<double> shortest_path_cost(const mesh_topology& topo, node_id from, node_id to);

/// Every-source shortest-path trees; built once per solver run.
class shortest_path_table {
public:
    explicit shortest_path_table(const mesh_topology& topo);

    double cost(node_id from, node_id to) const { return trees_.at(from).dist.at(to); }
    path_t path(node_id from, node_id to) const { return trees_.at(from).path_to(to); }
    const shortest_path_tree& from(node_id source) const { return trees_.at(source); }

    /// Cheapest gateway reachable from n (lowest id on ties), or no_node.
    node_id nearest_gateway(node_id n) const;

private:
    const mesh_topology* topo_;
    std::vector<shortest_path_tree> trees_;
};

class path_cap_error : public std::runtime_error {
public:
    explicit path_cap_error(std::size_t cap);
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

inline constexpr std::size_t default_path_cap = 2'000'000;

/// Every simple path from source ending at a destination with at most
/// max_hops links, in lexicographic order of node sequence. Paths may pass
/// through other destinations. Throws path_cap_error past `cap` paths.
std::vector<path_t> enumerate_simple_paths(const mesh_topology& topo, node_id source,
                                           const std::vector<node_id>& destinations,
                                           std::size_t max_hops,
                                           std::size_t cap = default_path_cap);

enum class terminal_check { any, gateway };

/// Non-empty, known ids, consecutive nodes linked, no repeats, and (when
/// requested) ending at a gateway. Never throws.
bool validate_path(const mesh_topology& topo, const path_t& path,
                   terminal_check terminal = terminal_check::gateway);

/// Excises loops: for each node, everything after it up to its last
/// occurrence is dropped. Adjacency of a connected walk is preserved.
path_t remove_loops(path_t path);

} // namespace meshroute
