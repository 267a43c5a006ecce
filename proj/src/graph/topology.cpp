#include "meshroute/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace meshroute {

namespace {

// Range checks tolerate the rounding of positions written to JSON.
constexpr double range_slack = 1e-9;

void check(bool ok, const std::string& what)
{
    if (!ok) {
        throw topology_error(what);
    }
}

} // namespace

mesh_topology::mesh_topology(std::vector<node> nodes, std::vector<link> links,
                             std::vector<node_id> gateways, double transmission_range)
    : nodes_(std::move(nodes)),
      links_(std::move(links)),
      gateways_(std::move(gateways)),
      range_(transmission_range)
{
    const std::size_t n = nodes_.size();
    check(n >= 1, "topology has no nodes");
    check(range_ > 0.0, "transmission range must be positive");

    for (std::size_t i = 0; i < n; ++i) {
        const node& nd = nodes_[i];
        check(nd.id == i, "node ids must be dense and ordered, got " + std::to_string(nd.id) +
                              " at position " + std::to_string(i));
        check(!nd.radios.empty(), "node " + std::to_string(i) + " has no radios");
        for (int ch : nd.radios) {
            check(ch >= min_channel && ch <= max_channel,
                  "node " + std::to_string(i) + " radio channel out of [1,11]: " + std::to_string(ch));
        }
    }

    check(!gateways_.empty(), "gateway set is empty");
    gateway_flag_.assign(n, false);
    for (node_id g : gateways_) {
        check(g < n, "gateway " + std::to_string(g) + " is not a node");
        check(!gateway_flag_[g], "gateway " + std::to_string(g) + " listed twice");
        gateway_flag_[g] = true;
    }

    adjacency_.assign(n, {});
    link_matrix_.assign(n * n, -1);
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const link& l = links_[i];
        const std::string tag = "link " + std::to_string(l.u) + "-" + std::to_string(l.v);
        check(l.u < n && l.v < n, tag + " references an unknown node");
        check(l.u != l.v, tag + " is a self-loop");
        check(l.channel >= min_channel && l.channel <= max_channel, tag + " channel out of [1,11]");
        check(l.cost > 0.0, tag + " cost must be positive");
        check(l.bandwidth > 0.0, tag + " bandwidth must be positive");
        check(l.delay >= 0.0 && l.jitter >= 0.0, tag + " delay/jitter must be non-negative");
        check(l.loss >= 0.0 && l.loss <= 1.0, tag + " loss outside [0,1]");
        check(l.ifactor >= 0.0 && l.ifactor <= 1.0, tag + " ifactor outside [0,1]");
        check(link_matrix_[l.u * n + l.v] < 0, tag + " duplicated");
        if (!l.synthetic) {
            check(distance(l.u, l.v) <= range_ * (1.0 + range_slack),
                  tag + " spans more than the transmission range");
        }
        link_matrix_[l.u * n + l.v] = static_cast<std::int32_t>(i);
        link_matrix_[l.v * n + l.u] = static_cast<std::int32_t>(i);
        adjacency_[l.u].push_back({l.v, i});
        adjacency_[l.v].push_back({l.u, i});
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end(),
                  [](const adjacency_entry& a, const adjacency_entry& b) { return a.to < b.to; });
    }
}

std::span<const adjacency_entry> mesh_topology::neighbors(node_id n) const
{
    return adjacency_.at(n);
}

const link* mesh_topology::find_link(node_id u, node_id v) const noexcept
{
    const std::size_t n = nodes_.size();
    if (u >= n || v >= n) {
        return nullptr;
    }
    const std::int32_t idx = link_matrix_[u * n + v];
    return idx < 0 ? nullptr : &links_[static_cast<std::size_t>(idx)];
}

double mesh_topology::distance(node_id u, node_id v) const
{
    const node& a = nodes_.at(u);
    const node& b = nodes_.at(v);
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool mesh_topology::connected() const
{
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<node_id> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const node_id cur = stack.back();
        stack.pop_back();
        for (const auto& e : adjacency_[cur]) {
            if (!seen[e.to]) {
                seen[e.to] = true;
                ++count;
                stack.push_back(e.to);
            }
        }
    }
    return count == nodes_.size();
}

interference_table::interference_table() : values_{1.0, 0.7, 0.4, 0.2, 0.1} {}

interference_table::interference_table(std::vector<double> by_separation)
    : values_(std::move(by_separation))
{
    for (std::size_t i = 0; i < values_.size(); ++i) {
        check(values_[i] >= 0.0 && values_[i] <= 1.0, "interference factor outside [0,1]");
        check(i == 0 || values_[i] <= values_[i - 1], "interference table must be non-increasing");
    }
}

double interference_table::operator()(unsigned separation) const noexcept
{
    return separation < values_.size() ? values_[separation] : 0.0;
}

double interference_factor(unsigned channel_separation)
{
    static const interference_table table;
    return table(channel_separation);
}

std::vector<link> assign_interference(std::size_t node_count, std::vector<link> links,
                                      const interference_table& table)
{
    std::vector<std::vector<std::size_t>> incident(node_count);
    for (std::size_t i = 0; i < links.size(); ++i) {
        incident.at(links[i].u).push_back(i);
        incident.at(links[i].v).push_back(i);
    }
    std::vector<double> factor(links.size(), 0.0);
    for (std::size_t i = 0; i < links.size(); ++i) {
        double sum = 0.0;
        std::size_t count = 0;
        for (node_id end : {links[i].u, links[i].v}) {
            for (std::size_t j : incident[end]) {
                if (j == i) {
                    continue;
                }
                sum += table(static_cast<unsigned>(std::abs(links[i].channel - links[j].channel)));
                ++count;
            }
        }
        factor[i] = count == 0 ? 0.0 : sum / static_cast<double>(count);
    }
    for (std::size_t i = 0; i < links.size(); ++i) {
        links[i].ifactor = factor[i];
    }
    return links;
}

} // namespace meshroute
