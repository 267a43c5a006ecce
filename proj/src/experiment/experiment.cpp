#include "meshroute/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <charconv>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace meshroute {

void experiment_plan::validate() const
{
    if (node_sizes.empty()) {
        throw std::invalid_argument("plan needs at least one node size");
    }
    for (std::size_t n : node_sizes) {
        if (n < 2) {
            throw std::invalid_argument("node sizes must be at least 2");
        }
    }
    if (algorithms.empty()) {
        throw std::invalid_argument("plan needs at least one algorithm");
    }
    if (seeds_per_cell < 1) {
        throw std::invalid_argument("seeds_per_cell must be at least 1");
    }
    if (packet_count < 1) {
        throw std::invalid_argument("packet_count must be at least 1");
    }
    if (lambda && !(*lambda >= 0.0)) {
        throw std::invalid_argument("lambda must be non-negative");
    }
    qos.validate();
    solver.validate();
}

void apply_overrides(const json& j, experiment_plan& plan)
{
    if (!j.is_object()) {
        throw format_error("plan must be a JSON object");
    }
    static const char* const known[] = {"node_sizes", "algorithms", "seeds_per_cell", "base_seed", "qos", "mode",
                                        "lambda", "solver", "packet_count", "threads"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) ==
            std::end(known)) {
            throw format_error("unknown key \"" + it.key() + "\" in plan");
        }
    }
    try {
        if (j.contains("node_sizes")) {
            plan.node_sizes = j.at("node_sizes").get<std::vector<std::size_t>>();
        }
        if (j.contains("algorithms")) {
            plan.algorithms.clear();
            for (const auto& name : j.at("algorithms")) {
                plan.algorithms.push_back(parse_algorithm(name.get<std::string>()));
            }
        }
        if (j.contains("seeds_per_cell")) {
            plan.seeds_per_cell = j.at("seeds_per_cell").get<std::size_t>();
        }
        if (j.contains("base_seed")) {
            plan.base_seed = j.at("base_seed").get<std::uint64_t>();
        }
        if (j.contains("qos")) {
            apply_overrides(j.at("qos"), plan.qos);
        }
        if (j.contains("mode")) {
            plan.mode = parse_clamp_mode(j.at("mode").get<std::string>());
        }
        if (j.contains("lambda")) {
            const json& l = j.at("lambda");
            plan.lambda = l.is_null() ? std::nullopt : std::optional<double>(l.get<double>());
        }
        if (j.contains("solver")) {
            apply_overrides(j.at("solver"), plan.solver);
        }
        if (j.contains("packet_count")) {
            plan.packet_count = j.at("packet_count").get<std::size_t>();
        }
        if (j.contains("threads")) {
            plan.threads = j.at("threads").get<std::size_t>();
        }
    } catch (const json::exception& e) {
        throw format_error(std::string("bad plan value: ") + e.what());
    }
}

void to_json(json& j, const experiment_plan& plan)
{
    json algos = json::array();
    for (algorithm a : plan.algorithms) {
        algos.push_back(std::string(to_string(a)));
    }
    json solver = plan.solver;
    solver.erase("seed");
    solver.erase("algorithm");
    j = {{"node_sizes", plan.node_sizes},
         {"algorithms", std::move(algos)},
         {"seeds_per_cell", plan.seeds_per_cell},
         {"base_seed", plan.base_seed},
         {"qos", plan.qos},
         {"mode", to_string(plan.mode)},
         {"lambda", plan.lambda ? json(*plan.lambda) : json(nullptr)},
         {"solver", std::move(solver)},
         {"packet_count", plan.packet_count},
         {"threads", plan.threads}};
}

cell_seeds seeds_for(std::size_t size, std::uint64_t seed)
{
    const std::uint64_t stream = 4 * static_cast<std::uint64_t>(size);
    return {derive_seed(seed, stream), derive_seed(seed, stream + 1), derive_seed(seed, stream + 2)};
}

void to_json(json& j, const cell_result& c)
{
    j = {{"size", c.size},
         {"algorithm", std::string(to_string(c.algo))},
         {"seed", c.seed},
         {"route", c.route},
         {"traffic", c.traffic}};
}

cell_result run_cell(const experiment_plan& plan, std::size_t size, algorithm algo, std::uint64_t seed)
{
    const cell_seeds s = seeds_for(size, seed);
    topology_params params;
    params.node_count = size;
    params.seed = s.topology;
    const mesh_topology topo = generate_topology(params);

    penalty_coeffs coeffs = penalty_coeffs::defaults(plan.qos, plan.mode, topo);
    if (plan.lambda) {
        coeffs.lambda = *plan.lambda;
    }
    hybrid_config config = plan.solver;
    config.algo = algo;
    config.seed = s.solver;
    traffic_spec traffic;
    traffic.packet_count = plan.packet_count;
    traffic.seed = s.traffic;

    routing_evaluation eval = evaluate_routing(topo, 0, plan.qos, coeffs, config, traffic);
    return {size, algo, seed, std::move(eval.route), eval.traffic};
}

std::vector<cell_result> run_plan(const experiment_plan& plan, const cell_callback& on_done)
{
    plan.validate();
    struct job {
        std::size_t size;
        algorithm algo;
        std::uint64_t seed;
    };
    std::vector<job> jobs;
    for (std::size_t size : plan.node_sizes) {
        for (algorithm algo : plan.algorithms) {
            for (std::size_t k = 0; k < plan.seeds_per_cell; ++k) {
                jobs.push_back({size, algo, plan.base_seed + k});
            }
        }
    }

    std::vector<cell_result> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex done_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        while (!failed) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) {
                return;
            }
            try {
                results[i] = run_cell(plan, jobs[i].size, jobs[i].algo, jobs[i].seed);
                if (on_done) {
                    std::lock_guard lock(done_mutex);
                    on_done(results[i]);
                }
            } catch (...) {
                std::lock_guard lock(done_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };

    std::size_t threads = plan.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : plan.threads;
    threads = std::min(threads, jobs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return results;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("median of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

std::string num(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string path_text(const path_t& path)
{
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) {
            out += '-';
        }
        out += std::to_string(path[i]);
    }
    return out;
}

std::string key(const cell_result& c)
{
    return std::to_string(c.size) + ',' + std::string(to_string(c.algo)) + ',' + std::to_string(c.seed);
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

} // namespace

bench_tables render_tables(const experiment_plan& plan, const std::vector<cell_result>& cells)
{
    bench_tables t;
    t.fitness_trace = "size,algorithm,seed,iteration,best_fitness\n";
    t.convergence_time =
        "size,algorithm,seed,iterations_executed,iterations_to_best,time_to_best_ms,wall_time_ms,best_fitness,"
        "best_path\n";
    t.pdr = "size,algorithm,seed,sent,delivered,pdr\n";
    t.delay = "size,algorithm,seed,avg_delay_ms\n";
    t.summary =
        "size,algorithm,runs,median_best_fitness,median_iterations_to_best,median_time_to_best_ms,median_pdr,"
        "median_avg_delay_ms,mean_pdr,mean_avg_delay_ms\n";

    for (const cell_result& c : cells) {
        const std::string k = key(c);
        for (std::size_t i = 0; i < c.route.fitness_trace.size(); ++i) {
            t.fitness_trace += k + ',' + std::to_string(i + 1) + ',' + num(c.route.fitness_trace[i]) + '\n';
        }
        t.convergence_time += k + ',' + std::to_string(c.route.iterations_executed) + ',' +
                              std::to_string(c.route.iterations_to_best) + ',' + num(c.route.time_to_best_ms) + ',' +
                              num(c.route.wall_time_ms) + ',' + num(c.route.best_fitness.total) + ',' +
                              path_text(c.route.best_path) + '\n';
        t.pdr += k + ',' + std::to_string(c.traffic.sent) + ',' + std::to_string(c.traffic.delivered) + ',' +
                 num(c.traffic.pdr) + '\n';
        t.delay += k + ',' + num(c.traffic.avg_delay) + '\n';
    }

    for (std::size_t size : plan.node_sizes) {
        for (algorithm algo : plan.algorithms) {
            std::vector<double> fit, itb, ttb, pdr, delay;
            for (const cell_result& c : cells) {
                if (c.size != size || c.algo != algo) {
                    continue;
                }
                fit.push_back(c.route.best_fitness.total);
                itb.push_back(static_cast<double>(c.route.iterations_to_best));
                ttb.push_back(c.route.time_to_best_ms);
                pdr.push_back(c.traffic.pdr);
                delay.push_back(c.traffic.avg_delay);
            }
            if (fit.empty()) {
                continue;
            }
            t.summary += std::to_string(size) + ',' + std::string(to_string(algo)) + ',' +
                         std::to_string(fit.size()) + ',' + num(median(fit)) + ',' + num(median(itb)) + ',' +
                         num(median(ttb)) + ',' + num(median(pdr)) + ',' + num(median(delay)) + ',' +
                         num(mean(pdr)) + ',' + num(mean(delay)) + '\n';
        }
    }
    return t;
}

std::vector<cell_result> run_bench(const experiment_plan& plan, const std::filesystem::path& out_dir,
                                   const cell_callback& on_done)
{
    plan.validate();
    const std::filesystem::path cells_dir = out_dir / "cells";
    std::filesystem::create_directories(cells_dir);
    for (const auto& entry : std::filesystem::directory_iterator(cells_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            std::filesystem::remove(entry.path());
        }
    }
    write_text_atomic(out_dir / "plan.json", json(plan).dump(2) + "\n");

    auto record = [&](const cell_result& c) {
        const std::string name =
            std::to_string(c.size) + "-" + std::string(to_string(c.algo)) + "-" + std::to_string(c.seed) + ".json";
        write_text_atomic(cells_dir / name, json(c).dump() + "\n");
        if (on_done) {
            on_done(c);
        }
    };
    std::vector<cell_result> cells = run_plan(plan, record);

    const bench_tables t = render_tables(plan, cells);
    write_text_atomic(out_dir / "fitness_trace.csv", t.fitness_trace);
    write_text_atomic(out_dir / "convergence_time.csv", t.convergence_time);
    write_text_atomic(out_dir / "pdr.csv", t.pdr);
    write_text_atomic(out_dir / "delay.csv", t.delay);
    write_text_atomic(out_dir / "summary.csv", t.summary);
    return cells;
}

} // namespace meshroute
