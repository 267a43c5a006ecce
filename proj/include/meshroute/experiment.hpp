#pragma once

#include "meshroute/graph.hpp"
#include "meshroute/io.hpp"
#include "meshroute/optim.hpp"
#include "meshroute/qos.hpp"
#include "meshroute/sim.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace meshroute {

/// A sweep over topology sizes, algorithms and seeds. Every cell generates
/// its own topology and routes from node 0.
struct experiment_plan {
    std::vector<std::size_t> node_sizes{25, 50, 75, 100, 125};
    std::vector<algorithm> algorithms{algorithm::pso, algorithm::ga, algorithm::hybrid};
    std::size_t seeds_per_cell = 30;
    std::uint64_t base_seed = 1;        ///< cell seeds are base_seed, base_seed + 1, ...
    qos_request qos{};
    clamp_mode mode = clamp_mode::strict;
    std::optional<double> lambda;       ///< overrides the mode's default penalty weight
    hybrid_config solver{};             ///< seed and algo are set per cell
    std::size_t packet_count = 10000;
    std::size_t threads = 1;            ///< 0 = one per hardware thread

    void validate() const;
};

/// Keys mirror the struct: node_sizes, algorithms, seeds_per_cell,
/// base_seed, qos{...}, mode, lambda, solver{...}, packet_count, threads.
/// Missing keys keep the values already in `plan`.
void apply_overrides(const json& j, experiment_plan& plan);
void to_json(json& j, const experiment_plan& plan);

/// Seeds for one (size, seed) pair. The solver and traffic seeds do not
/// depend on the algorithm, so all algorithms see the same topology and
/// the same packet draws.
struct cell_seeds {
    std::uint64_t topology;
    std::uint64_t solver;
    std::uint64_t traffic;
};
cell_seeds seeds_for(std::size_t size, std::uint64_t seed);

struct cell_result {
    std::size_t size = 0;
    algorithm algo = algorithm::hybrid;
    std::uint64_t seed = 0;
    run_result route;
    sim_result traffic;
};

void to_json(json& j, const cell_result& c);

/// One independent run, fully determined by (plan, size, algo, seed).
cell_result run_cell(const experiment_plan& plan, std::size_t size, algorithm algo, std::uint64_t seed);

using cell_callback = std::function<void(const cell_result&)>;

/// Runs every cell on `plan.threads` workers. Results come back ordered by
/// size, then algorithm as listed in the plan, then seed. `on_done` is
/// called once per finished cell, serialized, in completion order.
std::vector<cell_result> run_plan(const experiment_plan& plan, const cell_callback& on_done = {});

/// File name -> CSV text for fitness_trace, convergence_time, pdr, delay
/// and summary.
struct bench_tables {
    std::string fitness_trace;
    std::string convergence_time;
    std::string pdr;
    std::string delay;
    std::string summary;
};

bench_tables render_tables(const experiment_plan& plan, const std::vector<cell_result>& cells);

/// Median of a non-empty sample; mean of the middle pair for even sizes.
double median(std::vector<double> values);

/// Runs the plan into `out_dir`: one JSON file per cell under cells/, the
/// five CSV tables and plan.json, each written atomically.
std::vector<cell_result> run_bench(const experiment_plan& plan, const std::filesystem::path& out_dir,
                                   const cell_callback& on_done = {});

} // namespace meshroute
