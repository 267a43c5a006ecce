#include "meshroute/continuous.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace meshroute;

namespace {

real_particle make(real_vector x, real_vector v, real_vector pbest)
{
    real_particle p;
    p.position = std::move(x);
    p.velocity = std::move(v);
    p.pbest_position = std::move(pbest);
    return p;
}

const std::vector<double> one{1.0};
const std::vector<double> zero{0.0};

} // namespace

TEST_CASE("velocity and position update examples")
{
    continuous_config cfg;
    cfg.w = 1.0;
    cfg.c1 = 0.0;
    cfg.c2 = 0.0;
    const real_particle p = make({0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0});
    const real_particle q = pso_step_with(p, real_vector{0.0, 0.0}, cfg, one, one);
    CHECK(q.velocity == real_vector{1.0, 0.0});
    CHECK(q.position == real_vector{1.0, 0.0});

    cfg = {};
    cfg.w = 0.7;
    const real_particle at_consensus = make({3.0, -2.0}, {0.5, 1.0}, {3.0, -2.0});
    const real_particle c = pso_step_with(at_consensus, real_vector{3.0, -2.0}, cfg, one, one);
    CHECK(c.velocity[0] == 0.7 * 0.5);
    CHECK(c.velocity[1] == 0.7 * 1.0);

    cfg = {};
    cfg.w = 0.5;
    cfg.c1 = 1.0;
    cfg.c2 = 0.0;
    const real_particle s = make({0.0}, {2.0}, {4.0});
    const real_particle t = pso_step_with(s, real_vector{100.0}, cfg, one, zero);
    CHECK(t.velocity[0] == 5.0);
    CHECK(t.position[0] == 5.0);
}

TEST_CASE("pure inertia moves by exactly the velocity")
{
    continuous_config cfg;
    cfg.w = 1.0;
    cfg.c1 = 0.0;
    cfg.c2 = 0.0;
    rng_t rng(1);
    real_particle p = make({1.0, 2.0, 3.0}, {0.25, -0.5, 2.0}, {0.0, 0.0, 0.0});
    for (int step = 0; step < 4; ++step) {
        const real_particle n = pso_step(p, real_vector{9.0, 9.0, 9.0}, cfg, rng);
        for (std::size_t d = 0; d < 3; ++d) {
            CHECK(n.position[d] == p.position[d] + p.velocity[d]);
            CHECK(n.velocity[d] == p.velocity[d]);
        }
        p = n;
    }
}

TEST_CASE("bounds clamp the position and zero that velocity")
{
    continuous_config cfg;
    cfg.w = 1.0;
    cfg.c1 = 0.0;
    cfg.c2 = 0.0;
    cfg.bounds = {{-1.0, 1.0}, {-1.0, 1.0}};
    const real_particle p = make({0.5, 0.0}, {2.0, 0.5}, {0.0, 0.0});
    const real_particle q = pso_step_with(p, real_vector{0.0, 0.0}, cfg, one, one);
    CHECK(q.position == real_vector{1.0, 0.5});
    CHECK(q.velocity == real_vector{0.0, 0.5});
}

TEST_CASE("per-dimension random factors")
{
    continuous_config cfg;
    cfg.w = 0.0;
    cfg.c1 = 1.0;
    cfg.c2 = 0.0;
    const real_particle p = make({0.0, 0.0}, {0.0, 0.0}, {2.0, 2.0});
    const real_particle q = pso_step_with(p, real_vector{0.0, 0.0}, cfg, real_vector{0.5, 1.0}, zero);
    CHECK(q.position == real_vector{1.0, 2.0});
    CHECK_THROWS(pso_step_with(p, real_vector{0.0, 0.0}, cfg, real_vector{0.5, 1.0, 1.0}, zero));
    CHECK_THROWS(pso_step_with(p, real_vector{0.0}, cfg, one, one));
}

TEST_CASE("VPAC crossover examples")
{
    const real_particle p = make({2.0, 2.0}, {1.0, 0.0}, {2.0, 2.0});
    const real_particle q = make({4.0, 4.0}, {0.0, 2.0}, {4.0, 4.0});
    const auto [a, b] = vpac_crossover(p, q, 0.5, 0.25);
    CHECK(a == real_vector{2.5, 3.0});
    CHECK(b == real_vector{3.0, 2.5});

    // undoing the velocity shift recovers the midpoint
    for (std::size_t d = 0; d < 2; ++d) {
        CHECK(a[d] + 0.5 * p.velocity[d] == (p.position[d] + q.position[d]) / 2.0);
        CHECK(b[d] + 0.25 * q.velocity[d] == (p.position[d] + q.position[d]) / 2.0);
    }

    const real_particle still_p = make({2.0, 2.0}, {0.0, 0.0}, {2.0, 2.0});
    const real_particle still_q = make({4.0, 4.0}, {0.0, 0.0}, {4.0, 4.0});
    const auto [m1, m2] = vpac_crossover(still_p, still_q, 0.5, 0.5);
    CHECK(m1 == real_vector{3.0, 3.0});
    CHECK(m2 == real_vector{3.0, 3.0});

    const auto [s1, s2] = vpac_crossover(still_p, still_p, 0.3, 0.6);
    CHECK(s1 == still_p.position);
    CHECK(s2 == still_p.position);
}

TEST_CASE("hybrid continuous run minimizes x squared")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        continuous_config cfg;
        cfg.swarm_size = 20;
        cfg.max_iterations = 200;
        cfg.bounds = {{-5.0, 5.0}};
        cfg.seed = derive_seed(8, seed);
        const continuous_result r = run_continuous(sphere, cfg);
        CHECK(r.best_value < 1e-6);
        CHECK(r.trace.size() == 200);
        CHECK(std::is_sorted(r.trace.rbegin(), r.trace.rend()));
        CHECK(r.trace.back() == r.best_value);
        CHECK(sphere(r.best_position) == r.best_value);
    }
}

TEST_CASE("positions stay within bounds")
{
    continuous_config cfg;
    cfg.bounds = {{-5.12, 5.12}, {-5.12, 5.12}, {0.0, 1.0}};
    cfg.max_iterations = 60;
    std::size_t calls = 0;
    const auto probe = [&](std::span<const double> x) {
        ++calls;
        for (std::size_t d = 0; d < x.size(); ++d) {
            CHECK(x[d] >= cfg.bounds[d].lo);
            CHECK(x[d] <= cfg.bounds[d].hi);
        }
        return rastrigin(x);
    };
    run_continuous(probe, cfg);
    CHECK(calls == cfg.swarm_size * cfg.max_iterations);
}

TEST_CASE("constant objective and determinism")
{
    continuous_config cfg;
    cfg.bounds = {{-1.0, 1.0}, {-1.0, 1.0}};
    cfg.max_iterations = 30;
    const continuous_result flat = run_continuous([](std::span<const double>) { return 4.0; }, cfg);
    for (double v : flat.trace) {
        CHECK(v == 4.0);
    }

    cfg.seed = 21;
    const continuous_result a = run_continuous(rastrigin, cfg);
    const continuous_result b = run_continuous(rastrigin, cfg);
    CHECK(a.trace == b.trace);
    CHECK(a.best_position == b.best_position);

    cfg.per_dimension_r = true;
    const continuous_result c = run_continuous(rastrigin, cfg);
    CHECK(std::is_sorted(c.trace.rbegin(), c.trace.rend()));
}

TEST_CASE("trace CSV")
{
    std::ostringstream out;
    write_trace_csv(out, {3.5, 1.25, 1.25});
    CHECK(out.str() == "iteration,best_value\n1,3.5\n2,1.25\n3,1.25\n");
}

TEST_CASE("continuous configuration validation")
{
    continuous_config cfg;
    cfg.bounds = {{1.0, 1.0}};
    CHECK_THROWS(cfg.validate());
    cfg.bounds = {{0.0, 1.0}};
    cfg.phi1 = 1.0;
    CHECK_THROWS(cfg.validate());
    cfg.phi1 = 0.5;
    CHECK_NOTHROW(cfg.validate());
    cfg.bounds.clear();
    CHECK_THROWS(run_continuous(sphere, cfg));
}

TEST_CASE("test functions")
{
    CHECK(sphere(std::vector<double>{3.0, 4.0}) == 25.0);
    CHECK(rastrigin(std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK(rastrigin(std::vector<double>{1.0}) == doctest::Approx(1.0));
}
