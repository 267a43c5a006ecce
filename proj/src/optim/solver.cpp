#include "meshroute/optim.hpp"

#include <algorithm>
#include <chrono>

namespace meshroute {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point since)
{
    return std::chrono::duration<double, std::milli>(clock_type::now() - since).count();
}

std::size_t tournament(const std::vector<particle>& swarm, rng_t& rng)
{
    const std::size_t a = uniform_index(rng, swarm.size());
    const std::size_t b = uniform_index(rng, swarm.size());
    return swarm[b].fitness.total < swarm[a].fitness.total ? b : a;
}

} // namespace

run_result run(const mesh_topology& topo, node_id source, const qos_request& req, const penalty_coeffs& coeffs,
               const hybrid_config& config)
{
    const auto start = clock_type::now();
    config.validate();
    const route_context ctx(topo, source);
    const fitness_evaluator evaluate(topo, req, coeffs);
    rng_t rng(config.seed);

    run_result result;
    result.seed = config.seed;
    result.algo = config.algo;

    std::vector<particle> swarm = init_swarm(ctx, config, rng);
    fitness_breakdown gbest_fitness;
    path_t gbest_path;

    hybrid_config split_config = config;
    if (config.algo == algorithm::pso) {
        split_config.breed_ratio = 1.0;
    } else if (config.algo == algorithm::ga) {
        split_config.breed_ratio = 0.0;
    }

    for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
        std::size_t leader = swarm.size();
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            particle& p = swarm[i];
            p.fitness = evaluate(p.path);
            if (p.fitness.total < p.pbest_fitness.total) {
                p.pbest_path = p.path;
                p.pbest_fitness = p.fitness;
            }
            if (p.pbest_fitness.total < gbest_fitness.total &&
                (leader == swarm.size() || p.pbest_fitness.total < swarm[leader].pbest_fitness.total)) {
                leader = i;
            }
        }
        if (leader != swarm.size()) {
            gbest_path = swarm[leader].pbest_path;
            gbest_fitness = swarm[leader].pbest_fitness;
            result.iterations_to_best = iteration;
            result.time_to_best_ms = elapsed_ms(start);
        }
        result.fitness_trace.push_back(gbest_fitness.total);
        result.incumbent_trace.push_back(gbest_path);
        result.iterations_executed = iteration;

        if (iteration == config.max_iterations ||
            iteration - result.iterations_to_best >= config.stagnation_window) {
            break;
        }

        swarm_split split = elitism_split(swarm, split_config, rng);
        if (!split.elite.empty()) {
            const bool held = std::any_of(split.elite.begin(), split.elite.end(),
                                          [&](std::size_t i) { return swarm[i].path == gbest_path; });
            if (!held) {
                swarm[split.elite.back()].path = gbest_path;
            }
        }

        // Offspring are computed from the current generation, then installed.
        std::vector<std::pair<std::size_t, path_t>> next;
        next.reserve(swarm.size());
        for (std::size_t i : split.pso) {
            next.emplace_back(i, oplus_update(swarm[i], gbest_path, ctx, config, rng));
        }
        if (config.algo == algorithm::ga) {
            for (std::size_t k = 0; k < split.ga.size(); k += 2) {
                const std::size_t a = tournament(swarm, rng);
                const std::size_t b = tournament(swarm, rng);
                auto [c1, c2] = two_point_crossover(swarm[a].path, swarm[b].path, rng, ctx);
                next.emplace_back(split.ga[k], mutate(c1, ctx, rng, config.mutation_rate));
                if (k + 1 < split.ga.size()) {
                    next.emplace_back(split.ga[k + 1], mutate(c2, ctx, rng, config.mutation_rate));
                }
            }
        } else {
            std::vector<std::size_t> order = split.ga;
            shuffle_in_place(order, rng);
            for (std::size_t k = 0; k < order.size(); k += 2) {
                const std::size_t a = order[k];
                const std::size_t b = k + 1 < order.size() ? order[k + 1] : order[uniform_index(rng, order.size())];
                auto [c1, c2] = two_point_crossover(swarm[a].path, swarm[b].path, rng, ctx);
                next.emplace_back(a, mutate(c1, ctx, rng, config.mutation_rate));
                if (k + 1 < order.size()) {
                    next.emplace_back(b, mutate(c2, ctx, rng, config.mutation_rate));
                }
            }
        }
        for (auto& [slot, path] : next) {
            swarm[slot].path = std::move(path);
        }
        // Elites go first so dedupe keeps them and replaces later copies.
        std::vector<particle> ordered;
        ordered.reserve(swarm.size());
        std::vector<bool> is_elite(swarm.size(), false);
        for (std::size_t i : split.elite) {
            is_elite[i] = true;
            ordered.push_back(std::move(swarm[i]));
        }
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            if (!is_elite[i]) {
                ordered.push_back(std::move(swarm[i]));
            }
        }
        swarm = std::move(ordered);
        dedupe(swarm, ctx, rng, config.walk_retries);
    }

    result.best_path = gbest_path;
    result.best_fitness = gbest_fitness;
    result.wall_time_ms = elapsed_ms(start);
    return result;
}

} // namespace meshroute
