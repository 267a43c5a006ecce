#pragma once

#include "meshroute/graph.hpp"
#include "meshroute/paths.hpp"
#include "meshroute/qos.hpp"
#include "meshroute/rng.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meshroute {

enum class algorithm { pso, ga, hybrid };

std::string_view to_string(algorithm a) noexcept;
/// Accepts "pso", "ga", "hybrid"; throws std::invalid_argument otherwise.
algorithm parse_algorithm(std::string_view name);

struct hybrid_config {
    std::size_t swarm_size = 30;
    std::size_t max_iterations = 100;
    double c1 = 1.5;
    double c2 = 1.5;
    double breed_ratio = 0.5;
    double mutation_rate = 0.05;
    std::size_t stagnation_window = 15;
    double elite_fraction = 0.1;      ///< elite size = ceil(fraction * N)
    std::size_t walk_retries = 64;    ///< random-walk restarts before the shortest-path fallback
    std::uint64_t seed = 1;
    algorithm algo = algorithm::hybrid;

    void validate() const;
    std::size_t elite_count() const;
};

class unreachable_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Read-only state shared by the operators of one run: the topology, the
/// source, and all-pairs min-cost paths.
class route_context {
public:
    /// Throws unreachable_error when no gateway is reachable from source.
    route_context(const mesh_topology& topo, node_id source);

    const mesh_topology& topology() const noexcept { return *topo_; }
    node_id source() const noexcept { return source_; }
    const shortest_path_table& shortest() const noexcept { return table_; }
    double source_cost(node_id n) const { return table_.cost(source_, n); }

    /// Min-cost path from source to its nearest gateway.
    path_t min_cost_route() const;

private:
    const mesh_topology* topo_;
    node_id source_;
    shortest_path_table table_;
};

struct particle {
    path_t path;
    fitness_breakdown fitness;        ///< of `path`, refreshed every iteration
    path_t pbest_path;
    fitness_breakdown pbest_fitness;  ///< total = +inf until first evaluated
};

struct run_result {
    path_t best_path;
    fitness_breakdown best_fitness;
    std::vector<double> fitness_trace;   ///< gbest total after each iteration
    std::vector<path_t> incumbent_trace; ///< gbest path after each iteration
    std::size_t iterations_executed = 0;
    std::size_t iterations_to_best = 0;  ///< first iteration holding the final gbest
    double wall_time_ms = 0.0;
    double time_to_best_ms = 0.0;        ///< elapsed at the last gbest improvement
    std::uint64_t seed = 0;
    algorithm algo = algorithm::hybrid;
};

/// Whichever of a, b is cheaper to reach from the source; a on ties.
node_id alter(node_id a, node_id b, const route_context& ctx);
node_id alter(node_id a, node_id b, const mesh_topology& topo, node_id source);

/// Loop-free random walk from the source that stops at the first gateway.
/// Dead ends and walks longer than node_count restart; after `retries`
/// failures the min-cost route is returned.
path_t random_walk(const route_context& ctx, rng_t& rng, std::size_t retries);

/// N random-walk particles. The hybrid seeds particle 0 with the min-cost
/// route instead.
std::vector<particle> init_swarm(const route_context& ctx, const hybrid_config& config, rng_t& rng);

struct swarm_split {
    std::vector<std::size_t> elite;
    std::vector<std::size_t> pso;
    std::vector<std::size_t> ga;
};

/// Elite = best ceil(elite_fraction*N) by current fitness (stable on ties);
/// Z = round((N - elite) * breed_ratio) of the rest, chosen uniformly, go to
/// the swarm update; everything else to crossover.
swarm_split elitism_split(const std::vector<particle>& swarm, const hybrid_config& config, rng_t& rng);

/// One combination stage of the position update: interior positions up to
/// the shorter length are each, with probability `eligibility`, replaced by
/// alter(path_k, other_k). Endpoints and any surplus are kept; the result
/// may be disconnected or loop.
path_t oplus_combine(const path_t& path, const path_t& other, double eligibility, rng_t& rng,
                     const route_context& ctx);

/// x <- (x (+) pbest) (+) gbest with eligibilities min(1, c1 r1) and
/// min(1, c2 r2), then repaired. Returns the old path if repair fails.
path_t oplus_update(const particle& p, const path_t& gbest, const route_context& ctx,
                    const hybrid_config& config, rng_t& rng);

/// Segment [first, second) swapped in by a crossover.
struct cut_points {
    std::size_t first;
    std::size_t second;
};

/// child1 = p1[0,a1) + p2[a1,b1) + p1[b1,end); child2 = p2[0,a2) + p1[a2,b2) + p2[b2,end).
/// Cuts are index-aligned on both parents and clamped to their lengths. No repair.
std::pair<path_t, path_t> two_point_crossover_at(const path_t& p1, const path_t& p2, cut_points child1,
                                                 cut_points child2);

/// Random interior cuts, drawn per child, then repair. Parents shorter than
/// three nodes come back unchanged; a child that cannot be repaired falls
/// back to its head parent.
std::pair<path_t, path_t> two_point_crossover(const path_t& p1, const path_t& p2, rng_t& rng,
                                              const route_context& ctx);

/// With probability `rate`, drops one random interior node and reconnects
/// its neighbors by the min-cost detour that avoids it. Unchanged when no
/// detour exists or the path has no interior.
path_t mutate(const path_t& path, const route_context& ctx, rng_t& rng, double rate);

/// Stitches non-adjacent consecutive nodes with min-cost subpaths, removes
/// loops, and extends to the nearest gateway if needed. nullopt when the
/// sequence does not start at the source or cannot be connected.
std::optional<path_t> repair_path(const path_t& raw, const route_context& ctx);

/// Replaces every particle whose path repeats an earlier one with a fresh
/// random walk (pbest reset). Returns how many were replaced.
std::size_t dedupe(std::vector<particle>& swarm, const route_context& ctx, rng_t& rng,
                   std::size_t retries = 64);

/// Full solve. Iterates evaluate -> pbest/gbest -> split -> update -> dedupe
/// until max_iterations or stagnation_window iterations without gbest gain.
/// Throws unreachable_error when the source cannot reach a gateway.
run_result run(const mesh_topology& topo, node_id source, const qos_request& req,
               const penalty_coeffs& coeffs, const hybrid_config& config);

} // namespace meshroute
