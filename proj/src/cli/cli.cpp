#include "meshroute/cli.hpp"
#include "meshroute/experiment.hpp"
#include "meshroute/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace meshroute {

namespace {

constexpr int exit_runtime = 1;
constexpr int exit_usage = 2;

/// Raised for bad flag combinations found after parsing.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string fixed(double v, int digits = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string path_text(const path_t& path)
{
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        out += (i == 0 ? "" : "-") + std::to_string(path[i]);
    }
    return out;
}

template <typename T, typename V>
void set_if(const CLI::Option* opt, T& target, const V& value)
{
    if (opt->count() > 0) {
        target = value;
    }
}

/// Flags shared by `route` and `bench` that override the plan document.
struct plan_flags {
    std::string config;
    double bw_req = 0.0;
    double d_req = 0.0;
    double j_req = 0.0;
    double beta = 0.0;
    std::string mode;
    double lambda = 0.0;
    std::size_t swarm = 0;
    std::size_t iterations = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    double breed_ratio = 0.0;
    double mutation_rate = 0.0;
    std::size_t stagnation = 0;
    double elite_fraction = 0.0;
    std::size_t packets = 0;

    CLI::Option* o_config{};
    CLI::Option* o_bw{};
    CLI::Option* o_delay{};
    CLI::Option* o_jitter{};
    CLI::Option* o_beta{};
    CLI::Option* o_mode{};
    CLI::Option* o_lambda{};
    CLI::Option* o_swarm{};
    CLI::Option* o_iterations{};
    CLI::Option* o_c1{};
    CLI::Option* o_c2{};
    CLI::Option* o_breed{};
    CLI::Option* o_mutation{};
    CLI::Option* o_stagnation{};
    CLI::Option* o_elite{};
    CLI::Option* o_packets{};

    void attach(CLI::App* app)
    {
        o_config = app->add_option("--config", config, "JSON plan document; flags override its values")
                       ->check(CLI::ExistingFile);
        o_bw = app->add_option("--bw", bw_req, "Required bandwidth, Mbps");
        o_delay = app->add_option("--delay", d_req, "End-to-end delay bound, ms");
        o_jitter = app->add_option("--jitter", j_req, "End-to-end jitter bound, ms");
        o_beta = app->add_option("--beta", beta, "Interference threshold; path interference must stay <= 1 - beta");
        o_mode = app->add_option("--mode", mode, "Penalty mode")->check(CLI::IsMember({"strict", "fidelity"}));
        o_lambda = app->add_option("--lambda", lambda, "Penalty weight (default depends on mode)");
        o_swarm = app->add_option("--swarm", swarm, "Swarm size");
        o_iterations = app->add_option("--iterations", iterations, "Maximum iterations");
        o_c1 = app->add_option("--c1", c1, "Attraction toward the personal best");
        o_c2 = app->add_option("--c2", c2, "Attraction toward the global best");
        o_breed = app->add_option("--breed-ratio", breed_ratio, "Share of non-elite particles moved by the swarm update");
        o_mutation = app->add_option("--mutation-rate", mutation_rate, "Per-child mutation probability");
        o_stagnation = app->add_option("--stagnation", stagnation, "Stop after this many iterations without gain");
        o_elite = app->add_option("--elite-fraction", elite_fraction, "Elite share of the swarm");
        o_packets = app->add_option("--packets", packets, "Packets per traffic simulation");
    }

    experiment_plan build() const
    {
        experiment_plan plan;
        if (o_config->count() > 0) {
            apply_overrides(read_json_file(config), plan);
        }
        set_if(o_bw, plan.qos.bw_req, bw_req);
        set_if(o_delay, plan.qos.d_req, d_req);
        set_if(o_jitter, plan.qos.j_req, j_req);
        set_if(o_beta, plan.qos.beta, beta);
        if (o_mode->count() > 0) {
            plan.mode = parse_clamp_mode(mode);
        }
        if (o_lambda->count() > 0) {
            plan.lambda = lambda;
        }
        set_if(o_swarm, plan.solver.swarm_size, swarm);
        set_if(o_iterations, plan.solver.max_iterations, iterations);
        set_if(o_c1, plan.solver.c1, c1);
        set_if(o_c2, plan.solver.c2, c2);
        set_if(o_breed, plan.solver.breed_ratio, breed_ratio);
        set_if(o_mutation, plan.solver.mutation_rate, mutation_rate);
        set_if(o_stagnation, plan.solver.stagnation_window, stagnation);
        set_if(o_elite, plan.solver.elite_fraction, elite_fraction);
        set_if(o_packets, plan.packet_count, packets);
        return plan;
    }
};

struct gen_args {
    std::size_t nodes = 25;
    std::uint64_t seed = 1;
    std::string out;
    std::size_t gateways = 3;
    double range = 250.0;
    std::size_t radios = 2;
    bool json_out = false;
};

int cmd_gen(const gen_args& a, std::ostream& out)
{
    topology_params params;
    params.node_count = a.nodes;
    params.seed = a.seed;
    params.gateway_count = a.gateways;
    params.transmission_range = a.range;
    params.radios_per_node = a.radios;
    try {
        params.validate();
    } catch (const topology_error& e) {
        throw usage_error(e.what());
    }
    const mesh_topology topo = generate_topology(params);
    save_topology(a.out, topo);

    std::size_t synthetic = 0;
    for (const link& l : topo.links()) {
        synthetic += l.synthetic ? 1 : 0;
    }
    if (a.json_out) {
        json summary = {{"file", a.out},
                        {"nodes", topo.node_count()},
                        {"links", topo.link_count()},
                        {"synthetic_links", synthetic},
                        {"gateways", topo.gateways()},
                        {"seed", a.seed}};
        out << summary.dump(2) << '\n';
    } else {
        std::string gws;
        for (node_id g : topo.gateways()) {
            gws += (gws.empty() ? "" : ",") + std::to_string(g);
        }
        out << "wrote " << a.out << ": " << topo.node_count() << " nodes, " << topo.link_count() << " links ("
            << synthetic << " synthetic), " << topo.gateways().size() << " gateways [" << gws << "]\n";
    }
    return 0;
}

struct route_args {
    std::string topology;
    node_id source = 0;
    std::string algo = "hybrid";
    std::uint64_t seed = 1;
    bool simulate = false;
    bool json_out = false;
    plan_flags flags;
};

int cmd_route(const route_args& a, std::ostream& out)
{
    const experiment_plan plan = a.flags.build();
    plan.qos.validate();
    const mesh_topology topo = load_topology(a.topology);
    if (!topo.contains(a.source)) {
        throw usage_error("source " + std::to_string(a.source) + " is not a node of " + a.topology);
    }
    penalty_coeffs coeffs = penalty_coeffs::defaults(plan.qos, plan.mode, topo);
    if (plan.lambda) {
        coeffs.lambda = *plan.lambda;
    }
    hybrid_config config = plan.solver;
    config.algo = parse_algorithm(a.algo);
    config.seed = a.seed;

    const run_result result = run(topo, a.source, plan.qos, coeffs, config);
    const path_metrics metrics = compute_path_metrics(topo, result.best_path);
    std::optional<sim_result> sim;
    if (a.simulate) {
        traffic_spec traffic;
        traffic.packet_count = plan.packet_count;
        traffic.seed = derive_seed(a.seed, 1);
        sim = simulate_path(topo, result.best_path, traffic);
    }

    if (a.json_out) {
        json doc = {{"topology", a.topology},
                    {"source", a.source},
                    {"qos", plan.qos},
                    {"coeffs", coeffs},
                    {"config", config},
                    {"result", result},
                    {"metrics", metrics}};
        if (sim) {
            doc["simulation"] = *sim;
        }
        out << doc.dump(2) << '\n';
        return 0;
    }

    const auto& trace = result.fitness_trace;
    std::size_t width = 4;
    for (const path_t& p : result.incumbent_trace) {
        width = std::max(width, path_text(p).size());
    }
    out << "Iteration  " << "Path" << std::string(width - 4 + 2, ' ') << "Fitness\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const std::string it = std::to_string(i + 1);
        const std::string p = path_text(result.incumbent_trace[i]);
        out << it << std::string(11 - std::min<std::size_t>(it.size(), 10), ' ') << p
            << std::string(width - p.size() + 2, ' ') << fixed(trace[i]) << '\n';
    }
    const fitness_breakdown& f = result.best_fitness;
    out << '\n'
        << "algorithm   " << to_string(config.algo) << " (seed " << config.seed << ")\n"
        << "best path   " << path_text(result.best_path) << " (" << metrics.hops << " hops)\n"
        << "fitness     " << fixed(f.total, 4) << " = cost " << fixed(f.objective, 4) << " + " << fixed(coeffs.lambda, 4)
        << " x penalty " << fixed(f.penalty, 6) << '\n'
        << "violations  bandwidth " << fixed(f.terms.bandwidth, 4) << ", delay " << fixed(f.terms.delay, 4)
        << ", jitter " << fixed(f.terms.jitter, 4) << ", interference " << fixed(f.terms.interference, 4) << '\n'
        << "path qos    delay " << fixed(metrics.total_delay, 3) << " ms, jitter " << fixed(metrics.total_jitter, 3)
        << " ms, interference " << fixed(metrics.interference, 3) << '\n'
        << "feasible    " << (f.feasible ? "yes" : "no") << '\n'
        << "iterations  " << result.iterations_executed << " (best found at " << result.iterations_to_best << ")\n"
        << "time        " << fixed(result.wall_time_ms, 3) << " ms (best at " << fixed(result.time_to_best_ms, 3)
        << " ms)\n";
    if (sim) {
        out << "simulation  pdr " << fixed(sim->pdr, 4) << " (" << sim->delivered << "/" << sim->sent
            << "), avg delay " << fixed(sim->avg_delay, 3) << " ms\n";
    }
    return 0;
}

struct bench_args {
    std::string out_dir;
    std::vector<std::size_t> sizes;
    std::vector<std::string> algorithms;
    std::size_t seeds = 0;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    bool json_out = false;
    CLI::Option* o_sizes{};
    CLI::Option* o_algorithms{};
    CLI::Option* o_seeds{};
    CLI::Option* o_seed{};
    CLI::Option* o_threads{};
    plan_flags flags;
};

int cmd_bench(const bench_args& a, std::ostream& out)
{
    experiment_plan plan = a.flags.build();
    set_if(a.o_sizes, plan.node_sizes, a.sizes);
    if (a.o_algorithms->count() > 0) {
        plan.algorithms.clear();
        for (const std::string& name : a.algorithms) {
            plan.algorithms.push_back(parse_algorithm(name));
        }
    }
    set_if(a.o_seeds, plan.seeds_per_cell, a.seeds);
    set_if(a.o_seed, plan.base_seed, a.seed);
    set_if(a.o_threads, plan.threads, a.threads);
    try {
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }

    const std::vector<cell_result> cells = run_bench(plan, a.out_dir);
    if (a.json_out) {
        json doc = {{"out_dir", a.out_dir},
                    {"cells", cells.size()},
                    {"files",
                     {"fitness_trace.csv", "convergence_time.csv", "pdr.csv", "delay.csv", "summary.csv", "plan.json"}},
                    {"plan", plan}};
        out << doc.dump(2) << '\n';
    } else {
        out << "wrote " << cells.size() << " runs to " << a.out_dir << "\n\n" << render_tables(plan, cells).summary;
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"QoS routing for multi-channel multi-radio wireless mesh networks", "meshroute"};
    app.require_subcommand(1);

    gen_args gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random mesh topology");
    gen_cmd->add_option("--nodes", gen.nodes, "Node count (>= 2)")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "Output JSON file")->required();
    gen_cmd->add_option("--gateways", gen.gateways, "Gateway count")->capture_default_str();
    gen_cmd->add_option("--range", gen.range, "Transmission range, m")->capture_default_str();
    gen_cmd->add_option("--radios", gen.radios, "Radios per node")->capture_default_str();
    gen_cmd->add_flag("--json", gen.json_out, "Print a JSON summary");

    route_args route;
    CLI::App* route_cmd = app.add_subcommand("route", "Find a route from a source to any gateway");
    route_cmd->add_option("--topology", route.topology, "Topology JSON file")->required()->check(CLI::ExistingFile);
    route_cmd->add_option("--source", route.source, "Source node id")->capture_default_str();
    route_cmd->add_option("--algorithm", route.algo, "Solver")
        ->check(CLI::IsMember({"pso", "ga", "hybrid"}))
        ->capture_default_str();
    route_cmd->add_option("--seed", route.seed, "Solver seed")->capture_default_str();
    route_cmd->add_flag("--simulate", route.simulate, "Send traffic over the best path");
    route_cmd->add_flag("--json", route.json_out, "Emit the full result as JSON");
    route.flags.attach(route_cmd);

    bench_args bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a size x algorithm x seed sweep into CSV tables");
    bench_cmd->add_option("--out", bench.out_dir, "Output directory")->required();
    bench.o_sizes = bench_cmd->add_option("--sizes", bench.sizes, "Node counts")->delimiter(',');
    bench.o_algorithms = bench_cmd->add_option("--algorithms", bench.algorithms, "Solvers")
                             ->delimiter(',')
                             ->check(CLI::IsMember({"pso", "ga", "hybrid"}));
    bench.o_seeds = bench_cmd->add_option("--seeds", bench.seeds, "Seeds per (size, algorithm) cell");
    bench.o_seed = bench_cmd->add_option("--seed", bench.seed, "First cell seed");
    bench.o_threads = bench_cmd->add_option("--threads", bench.threads, "Worker threads, 0 = all cores");
    bench_cmd->add_flag("--json", bench.json_out, "Print a JSON summary");
    bench.flags.attach(bench_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (gen_cmd->parsed()) {
            return cmd_gen(gen, out);
        }
        if (route_cmd->parsed()) {
            return cmd_route(route, out);
        }
        return cmd_bench(bench, out);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

} // namespace meshroute
