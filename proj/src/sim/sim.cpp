#include "meshroute/sim.hpp"
#include "meshroute/rng.hpp"

#include <stdexcept>
#include <vector>

namespace meshroute {

void traffic_spec::validate() const
{
    if (packet_count < 1) {
        throw std::invalid_argument("packet_count must be at least 1");
    }
}

sim_result simulate_path(const mesh_topology& topo, const path_t& path, const traffic_spec& traffic)
{
    traffic.validate();
    if (!validate_path(topo, path, terminal_check::any)) {
        throw invalid_path_error("cannot simulate traffic over an invalid path");
    }
    std::vector<const link*> hops;
    hops.reserve(path.size());
    for (std::size_t i = 1; i < path.size(); ++i) {
        hops.push_back(topo.find_link(path[i - 1], path[i]));
    }

    rng_t rng(traffic.seed);
    sim_result out;
    out.sent = traffic.packet_count;
    double delay_sum = 0.0;
    for (std::size_t p = 0; p < traffic.packet_count; ++p) {
        double delay = 0.0;
        bool dropped = false;
        for (const link* l : hops) {
            if (uniform01(rng) < l->loss) {
                dropped = true;
                break;
            }
            delay += l->delay + l->jitter * uniform01(rng);
        }
        if (!dropped) {
            ++out.delivered;
            delay_sum += delay;
        }
    }
    out.pdr = static_cast<double>(out.delivered) / static_cast<double>(out.sent);
    out.avg_delay = out.delivered == 0 ? 0.0 : delay_sum / static_cast<double>(out.delivered);
    return out;
}

routing_evaluation evaluate_routing(const mesh_topology& topo, node_id source, const qos_request& req,
                                    const penalty_coeffs& coeffs, const hybrid_config& config,
                                    const traffic_spec& traffic)
{
    routing_evaluation out;
    out.route = run(topo, source, req, coeffs, config);
    out.traffic = simulate_path(topo, out.route.best_path, traffic);
    return out;
}

} // namespace meshroute
