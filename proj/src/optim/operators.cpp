#include "meshroute/optim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace meshroute {

std::string_view to_string(algorithm a) noexcept
{
    switch (a) {
    case algorithm::pso:
        return "pso";
    case algorithm::ga:
        return "ga";
    case algorithm::hybrid:
        return "hybrid";
    }
    return "hybrid";
}

algorithm parse_algorithm(std::string_view name)
{
    if (name == "pso") {
        return algorithm::pso;
    }
    if (name == "ga") {
        return algorithm::ga;
    }
    if (name == "hybrid") {
        return algorithm::hybrid;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "' (expected pso, ga or hybrid)");
}

void hybrid_config::validate() const
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
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw std::invalid_argument("mutation_rate must lie in [0,1]");
    }
    if (!(elite_fraction >= 0.0 && elite_fraction < 1.0)) {
        throw std::invalid_argument("elite_fraction must lie in [0,1)");
    }
    if (stagnation_window < 1) {
        throw std::invalid_argument("stagnation_window must be at least 1");
    }
}

std::size_t hybrid_config::elite_count() const
{
    const auto k = static_cast<std::size_t>(std::ceil(elite_fraction * static_cast<double>(swarm_size) - 1e-12));
    return std::min(k, swarm_size - 1);
}

route_context::route_context(const mesh_topology& topo, node_id source)
    : topo_(&topo), source_(source), table_(topo)
{
    if (!topo.contains(source)) {
        throw std::invalid_argument("source " + std::to_string(source) + " is not a node");
    }
    if (table_.nearest_gateway(source) == no_node) {
        throw unreachable_error("no gateway is reachable from source " + std::to_string(source));
    }
}

path_t route_context::min_cost_route() const
{
    return table_.path(source_, table_.nearest_gateway(source_));
}

node_id alter(node_id a, node_id b, const route_context& ctx)
{
    return ctx.source_cost(b) < ctx.source_cost(a) ? b : a;
}

node_id alter(node_id a, node_id b, const mesh_topology& topo, node_id source)
{
    const auto tree = dijkstra(topo, source);
    return tree.dist.at(b) < tree.dist.at(a) ? b : a;
}

path_t random_walk(const route_context& ctx, rng_t& rng, std::size_t retries)
{
    const mesh_topology& topo = ctx.topology();
    const node_id source = ctx.source();
    if (topo.is_gateway(source)) {
        return {source};
    }
    std::vector<bool> visited(topo.node_count());
    std::vector<node_id> options;
    for (std::size_t attempt = 0; attempt < retries; ++attempt) {
        std::fill(visited.begin(), visited.end(), false);
        path_t walk{source};
        visited[source] = true;
        while (walk.size() <= topo.node_count()) {
            options.clear();
            for (const auto& e : topo.neighbors(walk.back())) {
                if (!visited[e.to]) {
                    options.push_back(e.to);
                }
            }
            if (options.empty()) {
                break;
            }
            const node_id next = options[uniform_index(rng, options.size())];
            visited[next] = true;
            walk.push_back(next);
            if (topo.is_gateway(next)) {
                return walk;
            }
        }
    }
    return ctx.min_cost_route();
}

std::vector<particle> init_swarm(const route_context& ctx, const hybrid_config& config, rng_t& rng)
{
    std::vector<particle> swarm(config.swarm_size);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        swarm[i].path = (i == 0 && config.algo == algorithm::hybrid) ? ctx.min_cost_route()
                                                                      : random_walk(ctx, rng, config.walk_retries);
        swarm[i].pbest_path = swarm[i].path;
    }
    return swarm;
}

swarm_split elitism_split(const std::vector<particle>& swarm, const hybrid_config& config, rng_t& rng)
{
    std::vector<std::size_t> order(swarm.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return swarm[a].fitness.total < swarm[b].fitness.total;
    });

    swarm_split split;
    const std::size_t elite = std::min(config.elite_count(), swarm.size());
    split.elite.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(elite));

    std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(elite), order.end());
    std::sort(rest.begin(), rest.end());
    const auto z = static_cast<std::size_t>(std::lround(static_cast<double>(rest.size()) * config.breed_ratio));
    shuffle_in_place(rest, rng);
    split.pso.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(z));
    split.ga.assign(rest.begin() + static_cast<std::ptrdiff_t>(z), rest.end());
    std::sort(split.pso.begin(), split.pso.end());
    std::sort(split.ga.begin(), split.ga.end());
    return split;
}

path_t oplus_combine(const path_t& path, const path_t& other, double eligibility, rng_t& rng,
                     const route_context& ctx)
{
    path_t out = path;
    if (eligibility <= 0.0) {
        return out;
    }
    const std::size_t aligned = std::min(path.size(), other.size());
    for (std::size_t k = 1; k + 1 < aligned; ++k) {
        if (uniform01(rng) < eligibility) {
            out[k] = alter(out[k], other[k], ctx);
        }
    }
    return out;
}

path_t oplus_update(const particle& p, const path_t& gbest, const route_context& ctx, const hybrid_config& config,
                    rng_t& rng)
{
    const double e1 = std::min(1.0, config.c1 * uniform01(rng));
    path_t staged = oplus_combine(p.path, p.pbest_path, e1, rng, ctx);
    const double e2 = std::min(1.0, config.c2 * uniform01(rng));
    staged = oplus_combine(staged, gbest, e2, rng, ctx);
    if (auto repaired = repair_path(staged, ctx)) {
        return std::move(*repaired);
    }
    return p.path;
}

namespace {

path_t splice(const path_t& head_parent, const path_t& mid_parent, cut_points cuts)
{
    const std::size_t a = std::min({cuts.first, head_parent.size(), mid_parent.size()});
    const std::size_t b = std::clamp(cuts.second, a, std::min(head_parent.size(), mid_parent.size()));
    path_t child(head_parent.begin(), head_parent.begin() + static_cast<std::ptrdiff_t>(a));
    child.insert(child.end(), mid_parent.begin() + static_cast<std::ptrdiff_t>(a),
                 mid_parent.begin() + static_cast<std::ptrdiff_t>(b));
    child.insert(child.end(), head_parent.begin() + static_cast<std::ptrdiff_t>(b), head_parent.end());
    return child;
}

cut_points draw_cuts(std::size_t shorter_len, rng_t& rng)
{
    // interior cut positions 1 .. len-1 keep both endpoints from the head parent
    const std::size_t span = shorter_len - 1;
    std::size_t a = 1 + uniform_index(rng, span);
    std::size_t b = 1 + uniform_index(rng, span);
    if (a > b) {
        std::swap(a, b);
    }
    return {a, b};
}

} // namespace

std::pair<path_t, path_t> two_point_crossover_at(const path_t& p1, const path_t& p2, cut_points child1,
                                                 cut_points child2)
{
    return {splice(p1, p2, child1), splice(p2, p1, child2)};
}

std::pair<path_t, path_t> two_point_crossover(const path_t& p1, const path_t& p2, rng_t& rng,
                                              const route_context& ctx)
{
    if (p1.size() < 3 || p2.size() < 3) {
        return {p1, p2};
    }
    const std::size_t shorter = std::min(p1.size(), p2.size());
    const cut_points c1 = draw_cuts(shorter, rng);
    const cut_points c2 = draw_cuts(shorter, rng);
    auto [raw1, raw2] = two_point_crossover_at(p1, p2, c1, c2);
    auto child1 = repair_path(raw1, ctx);
    auto child2 = repair_path(raw2, ctx);
    return {child1 ? std::move(*child1) : p1, child2 ? std::move(*child2) : p2};
}

path_t mutate(const path_t& path, const route_context& ctx, rng_t& rng, double rate)
{
    if (rate <= 0.0 || path.size() < 3 || uniform01(rng) >= rate) {
        return path;
    }
    const std::size_t k = 1 + uniform_index(rng, path.size() - 2);
    const auto tree = dijkstra(ctx.topology(), path[k - 1], path[k]);
    const path_t detour = tree.path_to(path[k + 1]);
    if (detour.empty()) {
        return path;
    }
    path_t out(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(k - 1));
    out.insert(out.end(), detour.begin(), detour.end());
    out.insert(out.end(), path.begin() + static_cast<std::ptrdiff_t>(k + 2), path.end());
    return remove_loops(std::move(out));
}

std::optional<path_t> repair_path(const path_t& raw, const route_context& ctx)
{
    const mesh_topology& topo = ctx.topology();
    if (raw.empty() || raw.front() != ctx.source()) {
        return std::nullopt;
    }
    for (node_id n : raw) {
        if (!topo.contains(n)) {
            return std::nullopt;
        }
    }

    path_t stitched{raw.front()};
    for (std::size_t i = 1; i < raw.size(); ++i) {
        const node_id from = stitched.back();
        const node_id to = raw[i];
        if (from == to) {
            continue;
        }
        if (topo.adjacent(from, to)) {
            stitched.push_back(to);
            continue;
        }
        const path_t bridge = ctx.shortest().path(from, to);
        if (bridge.empty()) {
            return std::nullopt;
        }
        stitched.insert(stitched.end(), bridge.begin() + 1, bridge.end());
    }
    stitched = remove_loops(std::move(stitched));

    if (!topo.is_gateway(stitched.back())) {
        const node_id g = ctx.shortest().nearest_gateway(stitched.back());
        if (g == no_node) {
            return std::nullopt;
        }
        const path_t suffix = ctx.shortest().path(stitched.back(), g);
        stitched.insert(stitched.end(), suffix.begin() + 1, suffix.end());
        stitched = remove_loops(std::move(stitched));
    }
    return stitched;
}

std::size_t dedupe(std::vector<particle>& swarm, const route_context& ctx, rng_t& rng, std::size_t retries)
{
    constexpr std::size_t distinct_attempts = 8;
    std::set<path_t> seen;
    std::size_t replaced = 0;
    for (auto& p : swarm) {
        if (seen.insert(p.path).second) {
            continue;
        }
        path_t fresh = random_walk(ctx, rng, retries);
        for (std::size_t a = 1; a < distinct_attempts && seen.count(fresh) != 0; ++a) {
            fresh = random_walk(ctx, rng, retries);
        }
        p.path = fresh;
        p.fitness = {};
        p.pbest_path = std::move(fresh);
        p.pbest_fitness = {};
        seen.insert(p.path);
        ++replaced;
    }
    return replaced;
}

} // namespace meshroute
