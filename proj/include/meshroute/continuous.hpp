#pragma once

#include "meshroute/graph.hpp"
#include "meshroute/rng.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace meshroute {

using real_vector = std::vector<double>;

struct real_particle {
    real_vector position;
    real_vector velocity;
    real_vector pbest_position;
    double pbest_value = std::numeric_limits<double>::infinity();
};

struct continuous_config {
    double w = 0.7;
    double c1 = 1.5;
    double c2 = 1.5;
    std::size_t swarm_size = 20;
    std::size_t max_iterations = 200;
    double breed_ratio = 0.5;
    double phi1 = 0.5;
    double phi2 = 0.5;
    /// One [lo, hi] per dimension. Empty disables clamping in pso_step;
    /// run_continuous requires it.
    std::vector<value_range> bounds;
    double elite_fraction = 0.1;
    double mutation_rate = 0.05;
    double mutation_sigma = 0.01;   ///< fraction of each dimension's range
    bool per_dimension_r = false;   ///< draw r1, r2 per dimension instead of per step
    std::uint64_t seed = 1;

    void validate() const;
    std::size_t elite_count() const;
};

/// v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x); x <- x + v. Positions
/// leaving the bounds are clamped and that dimension's velocity zeroed.
/// r1 and r2 hold either one value (applied to every dimension) or one per
/// dimension.
real_particle pso_step_with(const real_particle& p, std::span<const double> gbest, const continuous_config& config,
                            std::span<const double> r1, std::span<const double> r2);

/// Same update with r1, r2 drawn from U(0,1).
real_particle pso_step(const real_particle& p, std::span<const double> gbest, const continuous_config& config,
                       rng_t& rng);

/// child1 = (x_p + x_q)/2 - phi1 v_p; child2 = (x_p + x_q)/2 - phi2 v_q.
std::pair<real_vector, real_vector> vpac_crossover(const real_particle& p, const real_particle& q, double phi1,
                                                   double phi2);

using objective_fn = std::function<double(std::span<const double>)>;

struct continuous_result {
    real_vector best_position;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> trace;   ///< gbest value after each iteration
};

/// Hybrid loop: evaluate, keep the elite, move a breed_ratio share of the
/// rest with pso_step, and replace the remainder with mutated VPAC children
/// of randomly paired parents.
continuous_result run_continuous(const objective_fn& objective, const continuous_config& config);

/// Writes "iteration,best_value" rows, iterations counted from 1.
void write_trace_csv(std::ostream& out, const std::vector<double>& trace);

double sphere(std::span<const double> x);
double rastrigin(std::span<const double> x);

} // namespace meshroute
