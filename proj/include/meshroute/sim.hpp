#pragma once

#include "meshroute/graph.hpp"
#include "meshroute/optim.hpp"
#include "meshroute/qos.hpp"

#include <cstdint>
#include <utility>

namespace meshroute {

struct traffic_spec {
    std::size_t packet_count = 10000;
    std::uint64_t seed = 1;

    void validate() const;
};

struct sim_result {
    double pdr = 0.0;
    double avg_delay = 0.0;  ///< ms, over delivered packets; 0 when none arrive
    std::size_t delivered = 0;
    std::size_t sent = 0;
};

/// Sends packets hop by hop; each link drops independently with its loss
/// probability and adds its delay plus U(0, jitter). Throws
/// invalid_path_error for anything that is not a simple connected path.
sim_result simulate_path(const mesh_topology& topo, const path_t& path, const traffic_spec& traffic);

struct routing_evaluation {
    run_result route;
    sim_result traffic;
};

/// Solve, then push traffic over the best path.
routing_evaluation evaluate_routing(const mesh_topology& topo, node_id source, const qos_request& req,
                                    const penalty_coeffs& coeffs, const hybrid_config& config,
                                    const traffic_spec& traffic);

} // namespace meshroute
