#pragma once

#include "meshroute/graph.hpp"
#include "meshroute/paths.hpp"

#include <limits>
#include <stdexcept>
#include <utility>

namespace meshroute {

/// Application demands on a route.
struct qos_request {
    double bw_req = 2.0;   ///< Mbps, bottleneck bandwidth must reach this
    double d_req = 10.0;   ///< ms, end-to-end delay bound
    double j_req = 10.0;   ///< ms, end-to-end jitter bound
    double beta = 0.5;     ///< path interference must stay <= 1 - beta

    void validate() const;
};

enum class clamp_mode {
    fidelity,  ///< terms clamped to [0,1], penalty is their mean
    strict,    ///< penalty is the unclamped sum
};

struct penalty_coeffs {
    double eta1 = 1.0;
    double eta2 = 1.0;
    double eta3 = 1.0;
    double lambda = 1.0;
    clamp_mode mode = clamp_mode::strict;

    /// eta_k = 1 / requirement. Fidelity mode uses lambda = 1; strict mode
    /// uses 2 * max_link_cost * max_hops so any violation outweighs any
    /// achievable cost saving.
    static penalty_coeffs defaults(const qos_request& req, clamp_mode mode,
                                   double max_link_cost, std::size_t max_hops);
    static penalty_coeffs defaults(const qos_request& req, clamp_mode mode, const mesh_topology& topo);

    void validate() const;
};

class invalid_path_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct path_metrics {
    double cost = 0.0;
    double min_bw = std::numeric_limits<double>::infinity();  ///< +inf for a link-free path
    double total_delay = 0.0;
    double total_jitter = 0.0;
    double interference = 0.0;  ///< mean link ifactor
    std::size_t hops = 0;
};

/// Penalty terms after clamping (fidelity) or as-is (strict).
struct penalty_terms {
    double bandwidth = 0.0;
    double delay = 0.0;
    double jitter = 0.0;
    double interference = 0.0;
    double value = 0.0;
};

struct fitness_breakdown {
    double objective = 0.0;
    double penalty = 0.0;
    double total = std::numeric_limits<double>::infinity();
    penalty_terms terms{};
    bool feasible = false;
    bool valid = false;  ///< false for disconnected/looping sequences (total = sentinel)
};

/// Aggregates link weights along a validated path (gateway ending not
/// required). Throws invalid_path_error otherwise.
path_metrics compute_path_metrics(const mesh_topology& topo, const path_t& path);

penalty_terms penalty(const path_metrics& metrics, const qos_request& req, const penalty_coeffs& coeffs);

/// Score assigned to sequences that are not routes: strictly worse than any
/// connected path in the topology.
double infeasible_sentinel(const mesh_topology& topo, const qos_request& req, const penalty_coeffs& coeffs);

/// Fitness bound to one (topology, request, coefficients) triple, with the
/// sentinel computed once.
class fitness_evaluator {
public:
    fitness_evaluator(const mesh_topology& topo, qos_request req, penalty_coeffs coeffs);

    fitness_breakdown operator()(const path_t& path) const;

    const mesh_topology& topology() const noexcept { return *topo_; }
    const qos_request& request() const noexcept { return req_; }
    const penalty_coeffs& coeffs() const noexcept { return coeffs_; }
    double sentinel() const noexcept { return sentinel_; }

private:
    const mesh_topology* topo_;
    qos_request req_;
    penalty_coeffs coeffs_;
    double sentinel_;
};

/// F = f + lambda * p for routes; the sentinel for anything else.
fitness_breakdown fitness(const mesh_topology& topo, const path_t& path, const qos_request& req,
                          const penalty_coeffs& coeffs);

/// Exhaustive minimum of F over simple source->gateway paths with at most
/// max_hops links; ties go to the lexicographically smaller sequence.
std::pair<path_t, fitness_breakdown> oracle_best(const mesh_topology& topo, node_id source,
                                                 const std::vector<node_id>& gateways,
                                                 const qos_request& req, const penalty_coeffs& coeffs,
                                                 std::size_t max_hops, std::size_t cap = default_path_cap);

} // namespace meshroute
