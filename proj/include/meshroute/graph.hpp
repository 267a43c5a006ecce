#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace meshroute {

using node_id = std::uint32_t;

/// Ordered node sequence, source first.
using path_t = std::vector<node_id>;

inline constexpr int min_channel = 1;
inline constexpr int max_channel = 11;

/// Raised when a topology or its construction parameters break an invariant.
class topology_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct node {
    node_id id = 0;
    double x = 0.0;
    double y = 0.0;
    std::vector<int> radios;  ///< channel per radio, each in [1, 11]
};

struct link {
    node_id u = 0;
    node_id v = 0;
    int channel = min_channel;
    double cost = 1.0;
    double bandwidth = 11.0;  ///< Mbps
    double delay = 0.0;       ///< ms
    double jitter = 0.0;      ///< ms
    double loss = 0.0;        ///< per-packet drop probability
    double ifactor = 0.0;     ///< normalized interference, 0 = clean
    bool synthetic = false;   ///< connectivity stitch exempt from the range rule

    node_id other(node_id n) const noexcept { return n == u ? v : u; }
};

struct adjacency_entry {
    node_id to;
    std::size_t link_index;
};

/// Immutable undirected mesh graph with per-link QoS weights.
class mesh_topology {
public:
    /// Validates every node/link invariant and the gateway set. Connectivity
    /// is not required here; hand-built graphs may be disconnected.
    mesh_topology(std::vector<node> nodes, std::vector<link> links,
                  std::vector<node_id> gateways, double transmission_range);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t link_count() const noexcept { return links_.size(); }
    const std::vector<node>& nodes() const noexcept { return nodes_; }
    const std::vector<link>& links() const noexcept { return links_; }
    const node& node_at(node_id n) const { return nodes_.at(n); }
    const std::vector<node_id>& gateways() const noexcept { return gateways_; }
    double transmission_range() const noexcept { return range_; }

    bool contains(node_id n) const noexcept { return n < nodes_.size(); }
    bool is_gateway(node_id n) const noexcept { return contains(n) && gateway_flag_[n]; }

    /// Neighbors sorted by node id.
    std::span<const adjacency_entry> neighbors(node_id n) const;

    /// nullptr when u and v are not linked (or either is unknown).
    const link* find_link(node_id u, node_id v) const noexcept;
    bool adjacent(node_id u, node_id v) const noexcept { return find_link(u, v) != nullptr; }

    double distance(node_id u, node_id v) const;
    bool connected() const;

private:
    std::vector<node> nodes_;
    std::vector<link> links_;
    std::vector<node_id> gateways_;
    std::vector<bool> gateway_flag_;
    double range_;
    std::vector<std::vector<adjacency_entry>> adjacency_;
    std::vector<std::int32_t> link_matrix_;  // n*n, -1 = no link
};

/// Interference between two links as a function of channel separation.
/// Entry k is the factor at separation k; beyond the table the factor is 0.
class interference_table {
public:
    interference_table();  ///< 1.0, 0.7, 0.4, 0.2, 0.1, then 0
    explicit interference_table(std::vector<double> by_separation);

    double operator()(unsigned separation) const noexcept;
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Default-table interference factor.
double interference_factor(unsigned channel_separation);

struct value_range {
    double lo;
    double hi;
};

struct topology_params {
    std::size_t node_count = 25;
    /// Square side scales as 1000 m * sqrt(n / 25) when unset.
    std::optional<std::pair<double, double>> area;
    /// Fixed node coordinates instead of uniform placement; one per node.
    std::optional<std::vector<std::pair<double, double>>> positions;
    double transmission_range = 250.0;
    value_range cost{2.0, 10.0};
    double bandwidth = 11.0;
    value_range delay{0.5, 2.0};
    value_range jitter{0.5, 2.0};
    value_range loss{0.001, 0.10};
    std::size_t gateway_count = 3;
    std::size_t radios_per_node = 2;
    interference_table interference{};
    std::uint64_t seed = 1;

    std::pair<double, double> effective_area() const;
    void validate() const;
};

/// Random-geometric mesh: uniform placement, range links, stitched to
/// connectivity, seeded weights and channels. Pure function of params.
mesh_topology generate_topology(const topology_params& params);

/// Recomputes every link's ifactor as its mean overlap with the links that
/// share one of its endpoints; links with no neighbors get 0.
std::vector<link> assign_interference(std::size_t node_count, std::vector<link> links,
                                      const interference_table& table);

} // namespace meshroute
