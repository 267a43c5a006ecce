#include "meshroute/io.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

namespace meshroute {

namespace {

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

const json& field(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object()) {
        throw format_error(where + " must be an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw format_error(where + " is missing \"" + key + "\"");
    }
    return *it;
}

double get_number(const json& obj, const char* key, const std::string& where)
{
    const json& v = field(obj, key, where);
    if (!v.is_number()) {
        throw format_error(where + "." + key + " must be a number");
    }
    return v.get<double>();
}

std::uint64_t get_index(const json& v, const std::string& where)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw format_error(where + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

node_id get_node_id(const json& v, const std::string& where)
{
    const std::uint64_t id = get_index(v, where);
    if (id >= no_node) {
        throw format_error(where + " is out of range");
    }
    return static_cast<node_id>(id);
}

int get_channel(const json& v, const std::string& where)
{
    if (!v.is_number_integer()) {
        throw format_error(where + " must be an integer channel");
    }
    const auto ch = v.get<std::int64_t>();
    if (ch < min_channel || ch > max_channel) {
        throw format_error(where + " must lie in [1,11]");
    }
    return static_cast<int>(ch);
}

const json& get_array(const json& obj, const char* key, const std::string& where)
{
    const json& v = field(obj, key, where);
    if (!v.is_array()) {
        throw format_error(where + "." + key + " must be an array");
    }
    return v;
}

template <typename Setter>
void override_key(const json& j, const char* key, Setter set)
{
    auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        set(*it);
    } catch (const json::exception& e) {
        throw format_error(std::string("bad value for \"") + key + "\": " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const char* what)
{
    if (!j.is_object()) {
        throw format_error(std::string(what) + " must be an object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || it.key() == k;
        }
        if (!ok) {
            throw format_error(std::string("unknown key \"") + it.key() + "\" in " + what);
        }
    }
}

} // namespace

json topology_to_json(const mesh_topology& topo)
{
    json nodes = json::array();
    for (const node& n : topo.nodes()) {
        nodes.push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}, {"radios", n.radios}});
    }
    json links = json::array();
    for (const link& l : topo.links()) {
        links.push_back({{"u", l.u},
                         {"v", l.v},
                         {"channel", l.channel},
                         {"cost", l.cost},
                         {"bandwidth", l.bandwidth},
                         {"delay", l.delay},
                         {"jitter", l.jitter},
                         {"loss", l.loss},
                         {"ifactor", l.ifactor},
                         {"synthetic", l.synthetic}});
    }
    return {{"nodes", std::move(nodes)},
            {"links", std::move(links)},
            {"gateways", topo.gateways()},
            {"range", topo.transmission_range()}};
}

mesh_topology topology_from_json(const json& doc)
{
    if (!doc.is_object()) {
        throw format_error("topology document must be a JSON object");
    }
    std::vector<node> nodes;
    const json& jn = get_array(doc, "nodes", "topology");
    for (std::size_t i = 0; i < jn.size(); ++i) {
        const std::string where = "nodes[" + std::to_string(i) + "]";
        node n;
        n.id = get_node_id(field(jn[i], "id", where), where + ".id");
        n.x = get_number(jn[i], "x", where);
        n.y = get_number(jn[i], "y", where);
        const json& radios = get_array(jn[i], "radios", where);
        for (std::size_t r = 0; r < radios.size(); ++r) {
            n.radios.push_back(get_channel(radios[r], where + ".radios[" + std::to_string(r) + "]"));
        }
        nodes.push_back(std::move(n));
    }
    std::vector<link> links;
    const json& jl = get_array(doc, "links", "topology");
    for (std::size_t i = 0; i < jl.size(); ++i) {
        const std::string where = "links[" + std::to_string(i) + "]";
        link l;
        l.u = get_node_id(field(jl[i], "u", where), where + ".u");
        l.v = get_node_id(field(jl[i], "v", where), where + ".v");
        l.channel = get_channel(field(jl[i], "channel", where), where + ".channel");
        l.cost = get_number(jl[i], "cost", where);
        l.bandwidth = get_number(jl[i], "bandwidth", where);
        l.delay = get_number(jl[i], "delay", where);
        l.jitter = get_number(jl[i], "jitter", where);
        l.loss = get_number(jl[i], "loss", where);
        l.ifactor = get_number(jl[i], "ifactor", where);
        auto syn = jl[i].find("synthetic");
        if (syn != jl[i].end()) {
            if (!syn->is_boolean()) {
                throw format_error(where + ".synthetic must be a boolean");
            }
            l.synthetic = syn->get<bool>();
        }
        links.push_back(l);
    }
    std::vector<node_id> gateways;
    const json& jg = get_array(doc, "gateways", "topology");
    for (std::size_t i = 0; i < jg.size(); ++i) {
        gateways.push_back(get_node_id(jg[i], "gateways[" + std::to_string(i) + "]"));
    }
    const double range = get_number(doc, "range", "topology");
    return mesh_topology(std::move(nodes), std::move(links), std::move(gateways), range);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        }
        out << text;
        out.flush();
        if (!out) {
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw format_error("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

void save_topology(const std::filesystem::path& path, const mesh_topology& topo)
{
    write_text_atomic(path, topology_to_json(topo).dump(2) + "\n");
}

mesh_topology load_topology(const std::filesystem::path& path)
{
    const json doc = read_json_file(path);
    try {
        return topology_from_json(doc);
    } catch (const std::exception& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

void to_json(json& j, const path_metrics& m)
{
    j = {{"cost", m.cost},
         {"min_bw", number_or_null(m.min_bw)},
         {"total_delay", m.total_delay},
         {"total_jitter", m.total_jitter},
         {"interference", m.interference},
         {"hops", m.hops}};
}

void to_json(json& j, const penalty_terms& t)
{
    j = {{"bandwidth", t.bandwidth},
         {"delay", t.delay},
         {"jitter", t.jitter},
         {"interference", t.interference},
         {"value", t.value}};
}

void to_json(json& j, const fitness_breakdown& f)
{
    j = {{"objective", number_or_null(f.objective)},
         {"penalty", number_or_null(f.penalty)},
         {"total", number_or_null(f.total)},
         {"terms", f.terms},
         {"feasible", f.feasible},
         {"valid", f.valid}};
}

void to_json(json& j, const run_result& r)
{
    j = {{"algorithm", std::string(to_string(r.algo))},
         {"seed", r.seed},
         {"best_path", r.best_path},
         {"best_fitness", r.best_fitness},
         {"fitness_trace", json::array()},
         {"incumbent_trace", r.incumbent_trace},
         {"iterations_executed", r.iterations_executed},
         {"iterations_to_best", r.iterations_to_best},
         {"wall_time_ms", r.wall_time_ms},
         {"time_to_best_ms", r.time_to_best_ms}};
    for (double v : r.fitness_trace) {
        j["fitness_trace"].push_back(number_or_null(v));
    }
}

void to_json(json& j, const sim_result& s)
{
    j = {{"pdr", s.pdr}, {"avg_delay", s.avg_delay}, {"delivered", s.delivered}, {"sent", s.sent}};
}

void to_json(json& j, const qos_request& r)
{
    j = {{"bw_req", r.bw_req}, {"d_req", r.d_req}, {"j_req", r.j_req}, {"beta", r.beta}};
}

void to_json(json& j, const penalty_coeffs& c)
{
    j = {{"eta1", c.eta1}, {"eta2", c.eta2}, {"eta3", c.eta3}, {"lambda", c.lambda}, {"mode", to_string(c.mode)}};
}

void to_json(json& j, const hybrid_config& c)
{
    j = {{"swarm_size", c.swarm_size},
         {"max_iterations", c.max_iterations},
         {"c1", c.c1},
         {"c2", c.c2},
         {"breed_ratio", c.breed_ratio},
         {"mutation_rate", c.mutation_rate},
         {"stagnation_window", c.stagnation_window},
         {"elite_fraction", c.elite_fraction},
         {"walk_retries", c.walk_retries},
         {"seed", c.seed},
         {"algorithm", std::string(to_string(c.algo))}};
}

void to_json(json& j, const traffic_spec& t)
{
    j = {{"packet_count", t.packet_count}, {"seed", t.seed}};
}

void apply_overrides(const json& j, qos_request& r)
{
    reject_unknown(j, {"bw_req", "d_req", "j_req", "beta"}, "qos");
    override_key(j, "bw_req", [&](const json& v) { r.bw_req = v.get<double>(); });
    override_key(j, "d_req", [&](const json& v) { r.d_req = v.get<double>(); });
    override_key(j, "j_req", [&](const json& v) { r.j_req = v.get<double>(); });
    override_key(j, "beta", [&](const json& v) { r.beta = v.get<double>(); });
}

void apply_overrides(const json& j, hybrid_config& c)
{
    reject_unknown(j,
                   {"swarm_size", "max_iterations", "c1", "c2", "breed_ratio", "mutation_rate",
                    "stagnation_window", "elite_fraction", "walk_retries", "seed", "algorithm"},
                   "hybrid");
    override_key(j, "swarm_size", [&](const json& v) { c.swarm_size = v.get<std::size_t>(); });
    override_key(j, "max_iterations", [&](const json& v) { c.max_iterations = v.get<std::size_t>(); });
    override_key(j, "c1", [&](const json& v) { c.c1 = v.get<double>(); });
    override_key(j, "c2", [&](const json& v) { c.c2 = v.get<double>(); });
    override_key(j, "breed_ratio", [&](const json& v) { c.breed_ratio = v.get<double>(); });
    override_key(j, "mutation_rate", [&](const json& v) { c.mutation_rate = v.get<double>(); });
    override_key(j, "stagnation_window", [&](const json& v) { c.stagnation_window = v.get<std::size_t>(); });
    override_key(j, "elite_fraction", [&](const json& v) { c.elite_fraction = v.get<double>(); });
    override_key(j, "walk_retries", [&](const json& v) { c.walk_retries = v.get<std::size_t>(); });
    override_key(j, "seed", [&](const json& v) { c.seed = v.get<std::uint64_t>(); });
    override_key(j, "algorithm", [&](const json& v) { c.algo = parse_algorithm(v.get<std::string>()); });
}

void apply_overrides(const json& j, traffic_spec& t)
{
    reject_unknown(j, {"packet_count", "seed"}, "traffic");
    override_key(j, "packet_count", [&](const json& v) { t.packet_count = v.get<std::size_t>(); });
    override_key(j, "seed", [&](const json& v) { t.seed = v.get<std::uint64_t>(); });
}

clamp_mode parse_clamp_mode(const std::string& name)
{
    if (name == "fidelity") {
        return clamp_mode::fidelity;
    }
    if (name == "strict") {
        return clamp_mode::strict;
    }
    throw std::invalid_argument("unknown clamp mode \"" + name + "\" (expected fidelity or strict)");
}

std::string to_string(clamp_mode mode)
{
    return mode == clamp_mode::fidelity ? "fidelity" : "strict";
}

} // namespace meshroute
