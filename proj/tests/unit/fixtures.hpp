#pragma once

#include "meshroute/graph.hpp"

#include <vector>

namespace fixtures {

using namespace meshroute;

struct edge {
    node_id u;
    node_id v;
    double cost;
    double delay = 1.0;
    double jitter = 0.5;
    double loss = 0.0;
    double ifactor = 0.0;
    double bandwidth = 11.0;
};

/// Nodes 0..n-1 on a 10 m grid line (all within range), one radio each.
inline mesh_topology build(std::size_t n, const std::vector<edge>& edges, std::vector<node_id> gateways)
{
    std::vector<node> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i].id = static_cast<node_id>(i);
        nodes[i].x = static_cast<double>(i % 10) * 10.0;
        nodes[i].y = static_cast<double>(i / 10) * 10.0;
        nodes[i].radios = {1};
    }
    std::vector<link> links;
    for (const edge& e : edges) {
        link l;
        l.u = e.u;
        l.v = e.v;
        l.channel = 1;
        l.cost = e.cost;
        l.bandwidth = e.bandwidth;
        l.delay = e.delay;
        l.jitter = e.jitter;
        l.loss = e.loss;
        l.ifactor = e.ifactor;
        links.push_back(l);
    }
    return mesh_topology(std::move(nodes), std::move(links), std::move(gateways), 250.0);
}

/// Graph of the worked position-update example: source 1, gateway 13.
/// Min costs from 1: node 2 -> 6, node 7 -> 3, node 4 -> 9, node 5 -> 5,
/// node 9 -> 7, node 10 -> 9.
inline mesh_topology worked_example()
{
    return build(14,
                 {{1, 2, 6}, {1, 7, 3}, {2, 4, 3}, {7, 5, 2}, {5, 9, 2}, {5, 10, 4}, {4, 9, 4}, {9, 13, 3},
                  {10, 13, 3}},
                 {13});
}

/// Complete graph on n nodes, unit costs, gateway n-1.
inline mesh_topology complete(std::size_t n)
{
    std::vector<edge> edges;
    for (node_id i = 0; i < n; ++i) {
        for (node_id j = i + 1; j < n; ++j) {
            edges.push_back({i, j, 1.0});
        }
    }
    return build(n, edges, {static_cast<node_id>(n - 1)});
}

/// Cycle 0-1-...-(n-1)-0, unit costs, gateway n/2.
inline mesh_topology cycle(std::size_t n)
{
    std::vector<edge> edges;
    for (node_id i = 0; i < n; ++i) {
        edges.push_back({std::min<node_id>(i, static_cast<node_id>((i + 1) % n)),
                         std::max<node_id>(i, static_cast<node_id>((i + 1) % n)), 1.0});
    }
    return build(n, edges, {static_cast<node_id>(n / 2)});
}

} // namespace fixtures
