#include "meshroute/graph.hpp"
#include "meshroute/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace meshroute {

std::pair<double, double> topology_params::effective_area() const
{
    if (area) {
        return *area;
    }
    const double side = 1000.0 * std::sqrt(static_cast<double>(node_count) / 25.0);
    return {side, side};
}

void topology_params::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw topology_error(what);
        }
    };
    require(node_count >= 2, "node_count must be at least 2");
    const auto [w, h] = effective_area();
    require(w > 0.0 && h > 0.0, "area must have positive width and height");
    require(transmission_range > 0.0, "transmission_range must be positive");
    require(cost.lo <= cost.hi && cost.lo > 0.0, "cost range must be positive and ordered");
    require(bandwidth > 0.0, "bandwidth must be positive");
    require(delay.lo <= delay.hi && delay.lo >= 0.0, "delay range must be non-negative and ordered");
    require(jitter.lo <= jitter.hi && jitter.lo >= 0.0, "jitter range must be non-negative and ordered");
    require(loss.lo <= loss.hi && loss.lo >= 0.0 && loss.hi <= 1.0, "loss range must lie in [0,1]");
    require(gateway_count >= 1 && gateway_count < node_count,
            "gateway_count must be at least 1 and below node_count");
    require(!positions || positions->size() == node_count, "positions must list one coordinate pair per node");
    require(radios_per_node >= 1 && radios_per_node <= static_cast<std::size_t>(max_channel),
            "radios_per_node must be in [1, 11]");
}

namespace {

struct disjoint_sets {
    std::vector<std::size_t> parent;

    explicit disjoint_sets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

std::vector<int> draw_radios(rng_t& rng, std::size_t count)
{
    std::vector<int> channels(max_channel);
    std::iota(channels.begin(), channels.end(), min_channel);
    // partial Fisher-Yates: first `count` entries are a uniform sample
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + uniform_index(rng, channels.size() - i);
        std::swap(channels[i], channels[j]);
    }
    channels.resize(count);
    std::sort(channels.begin(), channels.end());
    return channels;
}

int draw_link_channel(rng_t& rng, const node& a, const node& b)
{
    std::vector<int> shared;
    std::set_intersection(a.radios.begin(), a.radios.end(), b.radios.begin(), b.radios.end(),
                          std::back_inserter(shared));
    if (shared.empty()) {
        std::set_union(a.radios.begin(), a.radios.end(), b.radios.begin(), b.radios.end(),
                       std::back_inserter(shared));
    }
    return shared[uniform_index(rng, shared.size())];
}

} // namespace

mesh_topology generate_topology(const topology_params& params)
{
    params.validate();
    rng_t rng(params.seed);
    const std::size_t n = params.node_count;
    const auto [width, height] = params.effective_area();

    std::vector<node> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i].id = static_cast<node_id>(i);
        if (params.positions) {
            std::tie(nodes[i].x, nodes[i].y) = (*params.positions)[i];
        } else {
            nodes[i].x = uniform(rng, 0.0, width);
            nodes[i].y = uniform(rng, 0.0, height);
        }
    }
    for (auto& nd : nodes) {
        nd.radios = draw_radios(rng, params.radios_per_node);
    }

    auto dist = [&](std::size_t a, std::size_t b) {
        return std::hypot(nodes[a].x - nodes[b].x, nodes[a].y - nodes[b].y);
    };

    std::vector<link> links;
    disjoint_sets components(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist(i, j) <= params.transmission_range) {
                link l;
                l.u = static_cast<node_id>(i);
                l.v = static_cast<node_id>(j);
                links.push_back(l);
                components.unite(i, j);
            }
        }
    }

    // Stitch: join the component holding node 0 to its nearest outside node.
    for (;;) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bu = 0;
        std::size_t bv = 0;
        const std::size_t root = components.find(0);
        for (std::size_t i = 0; i < n; ++i) {
            if (components.find(i) != root) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (components.find(j) == root) {
                    continue;
                }
                const double d = dist(i, j);
                if (d < best) {
                    best = d;
                    bu = i;
                    bv = j;
                }
            }
        }
        if (best == std::numeric_limits<double>::infinity()) {
            break;
        }
        link l;
        l.u = static_cast<node_id>(std::min(bu, bv));
        l.v = static_cast<node_id>(std::max(bu, bv));
        l.synthetic = true;
        links.push_back(l);
        components.unite(bu, bv);
    }

    for (auto& l : links) {
        l.channel = draw_link_channel(rng, nodes[l.u], nodes[l.v]);
        l.cost = uniform(rng, params.cost.lo, params.cost.hi);
        l.bandwidth = params.bandwidth;
        l.delay = uniform(rng, params.delay.lo, params.delay.hi);
        l.jitter = uniform(rng, params.jitter.lo, params.jitter.hi);
        l.loss = uniform(rng, params.loss.lo, params.loss.hi);
    }
    links = assign_interference(n, std::move(links), params.interference);

    // Gateways never include node 0, the conventional source.
    std::vector<node_id> candidates(n - 1);
    std::iota(candidates.begin(), candidates.end(), node_id{1});
    std::vector<node_id> gateways;
    for (std::size_t k = 0; k < params.gateway_count; ++k) {
        const std::size_t j = k + uniform_index(rng, candidates.size() - k);
        std::swap(candidates[k], candidates[j]);
        gateways.push_back(candidates[k]);
    }
    std::sort(gateways.begin(), gateways.end());

    return mesh_topology(std::move(nodes), std::move(links), std::move(gateways),
                         params.transmission_range);
}

} // namespace meshroute
