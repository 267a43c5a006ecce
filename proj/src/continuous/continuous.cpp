#include "meshroute/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace meshroute {

void continuous_config::validate() const
{
    if (swarm_size < 2) {
        throw std::invalid_argument("swarm_size must be at least 2");
    }
    if (max_iterations < 1) {
        throw std::invalid_argument("max_iterations must be at least 1");
    }
    if (!(c1 >= 0.0 && c1 <= 2.0 && c2 >= 0.0 && c2 <= 2.0)) {
        throw std::invalid_argument("c1 and c2 must lie in [0,2]");
    }
    if (!(breed_ratio >= 0.0 && breed_ratio <= 1.0)) {
        throw std::invalid_argument("breed_ratio must lie in [0,1]");
    }
    if (!(phi1 > 0.0 && phi1 < 1.0 && phi2 > 0.0 && phi2 < 1.0)) {
        throw std::invalid_argument("phi1 and phi2 must lie in (0,1)");
    }
    if (!(elite_fraction >= 0.0 && elite_fraction < 1.0)) {
        throw std::invalid_argument("elite_fraction must lie in [0,1)");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw std::invalid_argument("mutation_rate must lie in [0,1]");
    }
    if (!(mutation_sigma >= 0.0)) {
        throw std::invalid_argument("mutation_sigma must be non-negative");
    }
    for (const value_range& b : bounds) {
        if (!(b.lo < b.hi)) {
            throw std::invalid_argument("every bound needs lo < hi");
        }
    }
}

std::size_t continuous_config::elite_count() const
{
    const auto k = static_cast<std::size_t>(std::ceil(elite_fraction * static_cast<double>(swarm_size) - 1e-12));
    return std::min(k, swarm_size - 1);
}

namespace {

void check_dims(std::size_t expected, std::size_t got, const char* what)
{
    if (expected != got) {
        throw std::invalid_argument(std::string(what) + " dimension mismatch");
    }
}

double pick(std::span<const double> r, std::size_t d)
{
    return r.size() == 1 ? r[0] : r[d];
}

void clamp_to(real_vector& x, const std::vector<value_range>& bounds)
{
    for (std::size_t d = 0; d < x.size(); ++d) {
        x[d] = std::clamp(x[d], bounds[d].lo, bounds[d].hi);
    }
}

} // namespace

real_particle pso_step_with(const real_particle& p, std::span<const double> gbest, const continuous_config& config,
                            std::span<const double> r1, std::span<const double> r2)
{
    const std::size_t dims = p.position.size();
    check_dims(dims, p.velocity.size(), "velocity");
    check_dims(dims, p.pbest_position.size(), "pbest");
    check_dims(dims, gbest.size(), "gbest");
    if (!config.bounds.empty()) {
        check_dims(dims, config.bounds.size(), "bounds");
    }
    for (std::span<const double> r : {r1, r2}) {
        if (r.size() != 1 && r.size() != dims) {
            throw std::invalid_argument("r1/r2 need one value or one per dimension");
        }
    }

    real_particle out = p;
    for (std::size_t d = 0; d < dims; ++d) {
        const double x = p.position[d];
        double v = config.w * p.velocity[d] + config.c1 * pick(r1, d) * (p.pbest_position[d] - x) +
                   config.c2 * pick(r2, d) * (gbest[d] - x);
        double nx = x + v;
        if (!config.bounds.empty()) {
            const value_range& b = config.bounds[d];
            if (nx < b.lo || nx > b.hi) {
                nx = std::clamp(nx, b.lo, b.hi);
                v = 0.0;
            }
        }
        out.velocity[d] = v;
        out.position[d] = nx;
    }
    return out;
}

real_particle pso_step(const real_particle& p, std::span<const double> gbest, const continuous_config& config,
                       rng_t& rng)
{
    const std::size_t n = config.per_dimension_r ? p.position.size() : 1;
    real_vector r1(n);
    real_vector r2(n);
    for (std::size_t i = 0; i < n; ++i) {
        r1[i] = uniform01(rng);
        r2[i] = uniform01(rng);
    }
    return pso_step_with(p, gbest, config, r1, r2);
}

std::pair<real_vector, real_vector> vpac_crossover(const real_particle& p, const real_particle& q, double phi1,
                                                   double phi2)
{
    const std::size_t dims = p.position.size();
    check_dims(dims, q.position.size(), "parent");
    check_dims(dims, p.velocity.size(), "velocity");
    check_dims(dims, q.velocity.size(), "velocity");
    real_vector a(dims);
    real_vector b(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        const double mid = (p.position[d] + q.position[d]) / 2.0;
        a[d] = mid - phi1 * p.velocity[d];
        b[d] = mid - phi2 * q.velocity[d];
    }
    return {std::move(a), std::move(b)};
}

continuous_result run_continuous(const objective_fn& objective, const continuous_config& config)
{
    config.validate();
    if (config.bounds.empty()) {
        throw std::invalid_argument("run_continuous needs bounds");
    }
    const std::size_t dims = config.bounds.size();
    const std::size_t n = config.swarm_size;
    rng_t rng(config.seed);

    std::vector<real_particle> swarm(n);
    for (real_particle& p : swarm) {
        p.position.resize(dims);
        p.velocity.resize(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            const value_range& b = config.bounds[d];
            const double span = b.hi - b.lo;
            p.position[d] = uniform(rng, b.lo, b.hi);
            p.velocity[d] = uniform(rng, -0.1 * span, 0.1 * span);
        }
        p.pbest_position = p.position;
    }

    continuous_result result;
    std::vector<double> value(n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t elite = config.elite_count();
    const auto z = static_cast<std::size_t>(std::lround(static_cast<double>(n - elite) * config.breed_ratio));

    for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
        for (std::size_t i = 0; i < n; ++i) {
            real_particle& p = swarm[i];
            value[i] = objective(p.position);
            if (value[i] < p.pbest_value) {
                p.pbest_value = value[i];
                p.pbest_position = p.position;
            }
            if (p.pbest_value < result.best_value) {
                result.best_value = p.pbest_value;
                result.best_position = p.pbest_position;
            }
        }
        result.trace.push_back(result.best_value);
        if (iteration == config.max_iterations) {
            break;
        }

        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(elite), order.end());
        shuffle_in_place(rest, rng);
        const std::vector<std::size_t> movers(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(z));
        const std::vector<std::size_t> breeders(rest.begin() + static_cast<std::ptrdiff_t>(z), rest.end());

        std::vector<real_particle> next = swarm;
        for (std::size_t i : movers) {
            next[i] = pso_step(swarm[i], result.best_position, config, rng);
        }
        auto install_child = [&](std::size_t slot, real_vector pos) {
            for (std::size_t d = 0; d < dims; ++d) {
                if (uniform01(rng) < config.mutation_rate) {
                    const value_range& b = config.bounds[d];
                    pos[d] += gauss(rng) * config.mutation_sigma * (b.hi - b.lo);
                }
            }
            clamp_to(pos, config.bounds);
            real_particle& c = next[slot];
            c.position = pos;
            c.velocity.assign(dims, 0.0);
            c.pbest_position = std::move(pos);
            c.pbest_value = std::numeric_limits<double>::infinity();
        };
        for (std::size_t k = 0; k < breeders.size(); k += 2) {
            const std::size_t a = breeders[k];
            const bool paired = k + 1 < breeders.size();
            const std::size_t b = paired ? breeders[k + 1] : breeders[uniform_index(rng, breeders.size())];
            auto [c1, c2] = vpac_crossover(swarm[a], swarm[b], config.phi1, config.phi2);
            install_child(a, std::move(c1));
            if (paired) {
                install_child(b, std::move(c2));
            }
        }
        swarm = std::move(next);
    }
    return result;
}

void write_trace_csv(std::ostream& out, const std::vector<double>& trace)
{
    const auto old_precision = out.precision(17);
    out << "iteration,best_value\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << (i + 1) << ',' << trace[i] << '\n';
    }
    out.precision(old_precision);
}

double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

double rastrigin(std::span<const double> x)
{
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) {
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    }
    return s;
}

} // namespace meshroute
