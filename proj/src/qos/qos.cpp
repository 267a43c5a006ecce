#include "meshroute/qos.hpp"

#include <algorithm>
#include <string>

namespace meshroute {

void qos_request::validate() const
{
    if (!(bw_req > 0.0) || !(d_req > 0.0) || !(j_req > 0.0)) {
        throw std::invalid_argument("QoS bandwidth, delay and jitter requirements must be positive");
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("interference threshold beta must lie in [0,1]");
    }
}

penalty_coeffs penalty_coeffs::defaults(const qos_request& req, clamp_mode mode, double max_link_cost,
                                        std::size_t max_hops)
{
    req.validate();
    penalty_coeffs c;
    c.eta1 = 1.0 / req.bw_req;
    c.eta2 = 1.0 / req.d_req;
    c.eta3 = 1.0 / req.j_req;
    c.mode = mode;
    c.lambda = mode == clamp_mode::fidelity
                   ? 1.0
                   : 2.0 * max_link_cost * static_cast<double>(std::max<std::size_t>(max_hops, 1));
    return c;
}

penalty_coeffs penalty_coeffs::defaults(const qos_request& req, clamp_mode mode, const mesh_topology& topo)
{
    double max_cost = 0.0;
    for (const auto& l : topo.links()) {
        max_cost = std::max(max_cost, l.cost);
    }
    return defaults(req, mode, max_cost, topo.node_count() - 1);
}

void penalty_coeffs::validate() const
{
    if (!(eta1 >= 0.0 && eta2 >= 0.0 && eta3 >= 0.0 && lambda >= 0.0)) {
        throw std::invalid_argument("penalty coefficients must be non-negative");
    }
}

path_metrics compute_path_metrics(const mesh_topology& topo, const path_t& path)
{
    if (!validate_path(topo, path, terminal_check::any)) {
        throw invalid_path_error("not a simple connected path in this topology");
    }
    path_metrics m;
    double ifactor_sum = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const link& l = *topo.find_link(path[i - 1], path[i]);
        m.cost += l.cost;
        m.min_bw = std::min(m.min_bw, l.bandwidth);
        m.total_delay += l.delay;
        m.total_jitter += l.jitter;
        ifactor_sum += l.ifactor;
    }
    m.hops = path.size() - 1;
    m.interference = m.hops == 0 ? 0.0 : ifactor_sum / static_cast<double>(m.hops);
    return m;
}

penalty_terms penalty(const path_metrics& metrics, const qos_request& req, const penalty_coeffs& coeffs)
{
    penalty_terms t;
    t.bandwidth = coeffs.eta1 * std::max(req.bw_req - metrics.min_bw, 0.0);
    t.delay = coeffs.eta2 * std::max(metrics.total_delay - req.d_req, 0.0);
    t.jitter = coeffs.eta3 * std::max(metrics.total_jitter - req.j_req, 0.0);
    t.interference = std::max(metrics.interference - (1.0 - req.beta), 0.0);
    if (coeffs.mode == clamp_mode::fidelity) {
        for (double* term : {&t.bandwidth, &t.delay, &t.jitter, &t.interference}) {
            *term = std::clamp(*term, 0.0, 1.0);
        }
        t.value = (t.bandwidth + t.delay + t.jitter + t.interference) / 4.0;
    } else {
        t.value = t.bandwidth + t.delay + t.jitter + t.interference;
    }
    return t;
}

double infeasible_sentinel(const mesh_topology& topo, const qos_request& req, const penalty_coeffs& coeffs)
{
    double cost_bound = 0.0;
    double delay_sum = 0.0;
    double jitter_sum = 0.0;
    for (const auto& l : topo.links()) {
        cost_bound += l.cost;
        delay_sum += l.delay;
        jitter_sum += l.jitter;
    }
    double penalty_bound = 4.0;
    if (coeffs.mode == clamp_mode::strict) {
        penalty_bound = std::max(penalty_bound, coeffs.eta1 * req.bw_req + coeffs.eta2 * delay_sum +
                                                    coeffs.eta3 * jitter_sum + 1.0);
    }
    return coeffs.lambda * penalty_bound + cost_bound + 1.0;
}

fitness_evaluator::fitness_evaluator(const mesh_topology& topo, qos_request req, penalty_coeffs coeffs)
    : topo_(&topo), req_(req), coeffs_(coeffs), sentinel_(0.0)
{
    req_.validate();
    coeffs_.validate();
    sentinel_ = infeasible_sentinel(topo, req_, coeffs_);
}

fitness_breakdown fitness_evaluator::operator()(const path_t& path) const
{
    fitness_breakdown out;
    if (!validate_path(*topo_, path, terminal_check::gateway)) {
        out.total = sentinel_;
        return out;
    }
    const path_metrics m = compute_path_metrics(*topo_, path);
    out.valid = true;
    out.objective = m.cost;
    out.terms = penalty(m, req_, coeffs_);
    out.penalty = out.terms.value;
    out.total = out.objective + coeffs_.lambda * out.penalty;
    out.feasible = out.penalty == 0.0;
    return out;
}

fitness_breakdown fitness(const mesh_topology& topo, const path_t& path, const qos_request& req,
                          const penalty_coeffs& coeffs)
{
    return fitness_evaluator(topo, req, coeffs)(path);
}

std::pair<path_t, fitness_breakdown> oracle_best(const mesh_topology& topo, node_id source,
                                                 const std::vector<node_id>& gateways,
                                                 const qos_request& req, const penalty_coeffs& coeffs,
                                                 std::size_t max_hops, std::size_t cap)
{
    const fitness_evaluator eval(topo, req, coeffs);
    const auto paths = enumerate_simple_paths(topo, source, gateways, max_hops, cap);
    std::pair<path_t, fitness_breakdown> best;
    for (const auto& p : paths) {
        auto f = eval(p);
        // enumeration is lexicographic, so strict < keeps the smaller tie
        if (f.total < best.second.total) {
            best = {p, f};
        }
    }
    if (best.first.empty()) {
        throw std::runtime_error("no path from source " + std::to_string(source) + " reaches a gateway");
    }
    return best;
}

} // namespace meshroute
