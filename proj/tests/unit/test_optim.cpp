#include "fixtures.hpp"
#include "meshroute/optim.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace meshroute;
using fixtures::build;

namespace {

bool is_enumerated(const mesh_topology& topo, node_id source, const path_t& path)
{
    const auto all = enumerate_simple_paths(topo, source, topo.gateways(), topo.node_count() - 1);
    return std::binary_search(all.begin(), all.end(), path);
}

std::vector<particle> swarm_with_totals(const std::vector<double>& totals)
{
    std::vector<particle> swarm(totals.size());
    for (std::size_t i = 0; i < totals.size(); ++i) {
        swarm[i].fitness.total = totals[i];
        swarm[i].path = {0, static_cast<node_id>(i)};
    }
    return swarm;
}

} // namespace

TEST_CASE("alter picks the node cheaper to reach from the source")
{
    const mesh_topology topo = fixtures::worked_example();
    const route_context ctx(topo, 1);
    CHECK(ctx.source_cost(2) == 6.0);
    CHECK(ctx.source_cost(7) == 3.0);
    CHECK(alter(2, 7, ctx) == 7);
    CHECK(alter(7, 2, ctx) == 7);
    CHECK(alter(4, 5, ctx) == 5);
    CHECK(alter(9, 10, ctx) == 9);
    CHECK(alter(4, 4, ctx) == 4);
    CHECK(alter(2, 7, topo, 1) == 7);

    // equal costs: first argument wins
    const mesh_topology twins = build(3, {{0, 1, 2.0}, {0, 2, 2.0}}, {2});
    const route_context tctx(twins, 0);
    CHECK(alter(1, 2, tctx) == 1);
    CHECK(alter(2, 1, tctx) == 2);
}

TEST_CASE("alter is commutative whenever costs differ")
{
    topology_params p;
    p.node_count = 30;
    p.seed = 8;
    const mesh_topology topo = generate_topology(p);
    const route_context ctx(topo, 0);
    for (node_id a = 0; a < topo.node_count(); ++a) {
        for (node_id b = 0; b < topo.node_count(); ++b) {
            if (ctx.source_cost(a) != ctx.source_cost(b)) {
                CHECK(alter(a, b, ctx) == alter(b, a, ctx));
            }
        }
    }
}

TEST_CASE("position update reproduces the worked example")
{
    const mesh_topology topo = fixtures::worked_example();
    const route_context ctx(topo, 1);
    rng_t rng(1);
    const path_t pa = oplus_combine({1, 2, 4, 9, 13}, {1, 7, 5, 10, 13}, 1.0, rng, ctx);
    CHECK(pa == path_t{1, 7, 5, 9, 13});
    CHECK(validate_path(topo, pa));
}

TEST_CASE("position update with zero attraction leaves the path alone")
{
    const mesh_topology topo = fixtures::worked_example();
    const route_context ctx(topo, 1);
    hybrid_config cfg;
    cfg.c1 = 0.0;
    cfg.c2 = 0.0;
    particle p;
    p.path = {1, 2, 4, 9, 13};
    p.pbest_path = {1, 7, 5, 9, 13};
    rng_t rng(4);
    for (int i = 0; i < 20; ++i) {
        CHECK(oplus_update(p, {1, 7, 5, 10, 13}, ctx, cfg, rng) == p.path);
    }
}

TEST_CASE("position update keeps endpoints, handles unequal lengths and stays valid")
{
    const mesh_topology topo = fixtures::worked_example();
    const route_context ctx(topo, 1);
    rng_t rng(2);
    const path_t longer = oplus_combine({1, 2, 4, 9, 13}, {1, 7, 5, 9, 13, 10}, 1.0, rng, ctx);
    CHECK(longer.front() == 1);
    CHECK(longer.back() == 13);
    CHECK(oplus_combine({1, 2, 4, 9, 13}, {1, 7, 13}, 1.0, rng, ctx) == path_t{1, 7, 4, 9, 13});

    topology_params params;
    params.node_count = 25;
    params.seed = 77;
    const mesh_topology g = generate_topology(params);
    const route_context gctx(g, 0);
    hybrid_config cfg;
    for (int i = 0; i < 200; ++i) {
        particle p;
        p.path = random_walk(gctx, rng, 64);
        p.pbest_path = random_walk(gctx, rng, 64);
        const path_t next = oplus_update(p, random_walk(gctx, rng, 64), gctx, cfg, rng);
        CHECK(validate_path(g, next));
        CHECK(next.front() == 0);
    }
}

TEST_CASE("crossover reproduces the worked example before repair")
{
    const path_t p1{1, 7, 5, 8, 12, 15, 21, 24, 25};
    const path_t p2{1, 7, 5, 10, 17, 19, 22, 25};
    const auto [c1, c2] = two_point_crossover_at(p1, p2, {3, 4}, {3, 7});
    CHECK(c1 == path_t{1, 7, 5, 10, 12, 15, 21, 24, 25});
    CHECK(c2 == path_t{1, 7, 5, 8, 12, 15, 21, 25});
}

TEST_CASE("crossover degenerate cases")
{
    const path_t p1{1, 7, 5, 9, 13};
    const path_t p2{1, 2, 4, 9, 13};
    const auto [same1, same2] = two_point_crossover_at(p1, p1, {1, 4}, {2, 3});
    CHECK(same1 == p1);
    CHECK(same2 == p1);
    const auto [z1, z2] = two_point_crossover_at(p1, p2, {2, 2}, {3, 3});
    CHECK(z1 == p1);
    CHECK(z2 == p2);

    const mesh_topology topo = fixtures::worked_example();
    const route_context ctx(topo, 1);
    rng_t rng(3);
    const auto [r1, r2] = two_point_crossover(p1, p1, rng, ctx);
    CHECK(r1 == p1);
    CHECK(r2 == p1);
    const auto [s1, s2] = two_point_crossover({1, 13}, p2, rng, ctx);
    CHECK(s1 == path_t{1, 13});
    CHECK(s2 == p2);
}

TEST_CASE("crossover children are repaired into routes")
{
    topology_params params;
    params.node_count = 40;
    params.seed = 13;
    const mesh_topology g = generate_topology(params);
    const route_context ctx(g, 0);
    rng_t rng(5);
    for (int i = 0; i < 300; ++i) {
        const path_t a = random_walk(ctx, rng, 64);
        const path_t b = random_walk(ctx, rng, 64);
        const auto [c1, c2] = two_point_crossover(a, b, rng, ctx);
        CHECK(validate_path(g, c1));
        CHECK(validate_path(g, c2));
        CHECK(c1.front() == 0);
        CHECK(c2.front() == 0);
    }
}

TEST_CASE("mutation")
{
    const mesh_topology ring = fixtures::cycle(6);
    const route_context ctx(ring, 0);
    rng_t rng(6);
    const path_t path{0, 1, 2, 3};
    CHECK(mutate(path, ctx, rng, 0.0) == path);
    for (int i = 0; i < 20; ++i) {
        const path_t m = mutate(path, ctx, rng, 1.0);
        CHECK(m != path);
        CHECK(validate_path(ring, m));
        CHECK(is_enumerated(ring, 0, m));
    }

    // 1 is the only bridge between 0 and the gateway
    const mesh_topology bridge = build(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, {3});
    const route_context bctx(bridge, 0);
    CHECK(mutate({0, 1, 2, 3}, bctx, rng, 1.0) == path_t{0, 1, 2, 3});
}

TEST_CASE("repair")
{
    const mesh_topology topo = fixtures::worked_example();
    const route_context ctx(topo, 1);
    CHECK(repair_path({1, 7, 5, 9, 13}, ctx) == path_t{1, 7, 5, 9, 13});

    const auto stitched = repair_path({1, 5, 13}, ctx);
    REQUIRE(stitched);
    CHECK(validate_path(topo, *stitched));
    CHECK(*stitched == path_t{1, 7, 5, 9, 13});

    const auto extended = repair_path({1, 2}, ctx);
    REQUIRE(extended);
    CHECK(validate_path(topo, *extended));
    CHECK(extended->back() == 13);

    const auto looped = repair_path({1, 7, 5, 7, 5, 9, 13}, ctx);
    REQUIRE(looped);
    CHECK(*looped == path_t{1, 7, 5, 9, 13});

    CHECK_FALSE(repair_path({1, 99, 13}, ctx));
    CHECK_FALSE(repair_path({1, 3, 13}, ctx));
    CHECK_FALSE(repair_path({2, 4, 9, 13}, ctx));
}

TEST_CASE("swarm initialization")
{
    const mesh_topology pair = build(2, {{0, 1, 1.0}}, {1});
    const route_context pctx(pair, 0);
    hybrid_config cfg;
    rng_t rng(9);
    for (const particle& p : init_swarm(pctx, cfg, rng)) {
        CHECK(p.path == path_t{0, 1});
    }

    topology_params params;
    params.node_count = 25;
    params.seed = 4;
    const mesh_topology g = generate_topology(params);
    const route_context ctx(g, 0);
    for (algorithm algo : {algorithm::pso, algorithm::ga, algorithm::hybrid}) {
        cfg.algo = algo;
        rng_t r1(10);
        rng_t r2(10);
        const auto a = init_swarm(ctx, cfg, r1);
        const auto b = init_swarm(ctx, cfg, r2);
        REQUIRE(a.size() == 30);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(validate_path(g, a[i].path));
            CHECK(a[i].path == b[i].path);
            CHECK(a[i].pbest_path == a[i].path);
        }
        if (algo == algorithm::hybrid) {
            CHECK(a[0].path == ctx.min_cost_route());
        }
    }

    const mesh_topology cut = build(3, {{1, 2, 1.0}}, {2});
    CHECK_THROWS_AS(route_context(cut, 0), unreachable_error);
}

TEST_CASE("elitism split sizes")
{
    std::vector<double> totals(30);
    for (std::size_t i = 0; i < totals.size(); ++i) {
        totals[i] = static_cast<double>((i * 7) % 30);
    }
    const auto swarm = swarm_with_totals(totals);
    rng_t rng(11);

    hybrid_config cfg;
    cfg.elite_fraction = 1.0 / 3.0;
    swarm_split s = elitism_split(swarm, cfg, rng);
    CHECK(s.elite.size() == 10);
    CHECK(s.pso.size() == 10);
    CHECK(s.ga.size() == 10);
    for (std::size_t i : s.elite) {
        CHECK(swarm[i].fitness.total < 10.0);
    }

    cfg = {};
    s = elitism_split(swarm, cfg, rng);
    CHECK(s.elite.size() == 3);
    CHECK(s.pso.size() == 14);  // round(27 * 0.5)
    CHECK(s.ga.size() == 13);

    cfg.breed_ratio = 0.0;
    s = elitism_split(swarm, cfg, rng);
    CHECK(s.pso.empty());
    CHECK(s.ga.size() == 27);

    cfg.breed_ratio = 1.0;
    s = elitism_split(swarm, cfg, rng);
    CHECK(s.ga.empty());
    CHECK(s.pso.size() == 27);

    cfg.elite_fraction = 0.0;
    s = elitism_split(swarm, cfg, rng);
    CHECK(s.elite.empty());
    CHECK(s.pso.size() == 30);

    // every index lands in exactly one set
    cfg = {};
    s = elitism_split(swarm, cfg, rng);
    std::set<std::size_t> all(s.elite.begin(), s.elite.end());
    all.insert(s.pso.begin(), s.pso.end());
    all.insert(s.ga.begin(), s.ga.end());
    CHECK(all.size() == 30);
}

TEST_CASE("dedupe replaces repeats and keeps the swarm size")
{
    topology_params params;
    params.node_count = 25;
    params.seed = 4;
    const mesh_topology g = generate_topology(params);
    const route_context ctx(g, 0);
    rng_t rng(12);

    std::vector<particle> distinct(3);
    distinct[0].path = random_walk(ctx, rng, 64);
    do {
        distinct[1].path = random_walk(ctx, rng, 64);
    } while (distinct[1].path == distinct[0].path);
    do {
        distinct[2].path = random_walk(ctx, rng, 64);
    } while (distinct[2].path == distinct[0].path || distinct[2].path == distinct[1].path);
    auto copy = distinct;
    CHECK(dedupe(copy, ctx, rng) == 0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(copy[i].path == distinct[i].path);
    }

    std::vector<particle> two(2);
    two[0].path = two[1].path = ctx.min_cost_route();
    CHECK(dedupe(two, ctx, rng) == 1);
    CHECK(two.size() == 2);
    CHECK(two[0].path == ctx.min_cost_route());
    CHECK(two[1].pbest_path == two[1].path);

    std::vector<particle> many(10);
    for (auto& p : many) {
        p.path = ctx.min_cost_route();
    }
    CHECK(dedupe(many, ctx, rng) == 9);
    CHECK(many.size() == 10);
    for (const auto& p : many) {
        CHECK(validate_path(g, p.path));
    }
}

TEST_CASE("a two-node graph is solved at the first iteration")
{
    const mesh_topology pair = build(2, {{0, 1, 3.0}}, {1});
    const qos_request req;
    const auto coeffs = penalty_coeffs::defaults(req, clamp_mode::strict, pair);
    for (algorithm algo : {algorithm::pso, algorithm::ga, algorithm::hybrid}) {
        hybrid_config cfg;
        cfg.algo = algo;
        const run_result r = run(pair, 0, req, coeffs, cfg);
        CHECK(r.best_path == path_t{0, 1});
        CHECK(r.iterations_to_best == 1);
        CHECK(r.best_fitness.total == 3.0);
        for (double v : r.fitness_trace) {
            CHECK(v == 3.0);
        }
    }
}

TEST_CASE("runs match the exhaustive oracle on small graphs")
{
    const qos_request req;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        topology_params params;
        params.node_count = 12;
        params.seed = derive_seed(12, seed);
        const mesh_topology g = generate_topology(params);
        const auto coeffs = penalty_coeffs::defaults(req, clamp_mode::strict, g);
        const auto oracle = oracle_best(g, 0, g.gateways(), req, coeffs, g.node_count() - 1);
        hybrid_config cfg;
        cfg.seed = seed;
        const run_result r = run(g, 0, req, coeffs, cfg);
        CHECK(r.best_fitness.total >= oracle.second.total);
        CHECK(r.best_fitness.total == doctest::Approx(oracle.second.total));
    }
}

TEST_CASE("run results are well formed and reproducible")
{
    topology_params params;
    params.node_count = 50;
    params.seed = 31;
    const mesh_topology g = generate_topology(params);
    const qos_request req;
    const auto coeffs = penalty_coeffs::defaults(req, clamp_mode::strict, g);
    for (algorithm algo : {algorithm::pso, algorithm::ga, algorithm::hybrid}) {
        hybrid_config cfg;
        cfg.algo = algo;
        cfg.seed = 17;
        const run_result a = run(g, 0, req, coeffs, cfg);
        const run_result b = run(g, 0, req, coeffs, cfg);
        CHECK(validate_path(g, a.best_path));
        CHECK(a.fitness_trace.size() == a.iterations_executed);
        CHECK(a.incumbent_trace.size() == a.iterations_executed);
        CHECK(std::is_sorted(a.fitness_trace.rbegin(), a.fitness_trace.rend()));
        CHECK(a.fitness_trace.back() == a.best_fitness.total);
        CHECK(a.incumbent_trace.back() == a.best_path);
        CHECK(a.iterations_to_best >= 1);
        CHECK(a.iterations_to_best <= a.iterations_executed);
        CHECK(a.iterations_executed <= cfg.max_iterations);
        CHECK((a.iterations_executed == cfg.max_iterations ||
               a.iterations_executed - a.iterations_to_best == cfg.stagnation_window));
        CHECK(a.best_fitness.total == fitness(g, a.best_path, req, coeffs).total);

        CHECK(a.best_path == b.best_path);
        CHECK(a.fitness_trace == b.fitness_trace);
        CHECK(a.incumbent_trace == b.incumbent_trace);
        CHECK(a.iterations_to_best == b.iterations_to_best);
        CHECK(a.iterations_executed == b.iterations_executed);
    }
}

TEST_CASE("configuration validation")
{
    hybrid_config cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.swarm_size = 1;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.max_iterations = 0;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.c1 = 2.5;
    CHECK_THROWS(cfg.validate());
    cfg = {};
    cfg.breed_ratio = -0.1;
    CHECK_THROWS(cfg.validate());
    CHECK(parse_algorithm("ga") == algorithm::ga);
    CHECK(to_string(algorithm::hybrid) == "hybrid");
    CHECK_THROWS(parse_algorithm("aco"));
}
