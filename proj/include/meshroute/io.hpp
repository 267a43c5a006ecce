#pragma once

#include "meshroute/graph.hpp"
#include "meshroute/optim.hpp"
#include "meshroute/qos.hpp"
#include "meshroute/sim.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace meshroute {

using json = nlohmann::json;

/// Malformed or unreadable input document; the message names the offending
/// field or file.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json topology_to_json(const mesh_topology& topo);
/// Throws format_error on missing or mistyped fields and topology_error on
/// invariant violations.
mesh_topology topology_from_json(const json& doc);

/// Writes the document with a trailing newline, via a temporary file and a
/// rename so readers never see a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
json read_json_file(const std::filesystem::path& path);

void save_topology(const std::filesystem::path& path, const mesh_topology& topo);
mesh_topology load_topology(const std::filesystem::path& path);

/// Non-finite numbers (the +inf bandwidth of a link-free path, an
/// unevaluated total) serialize as null.
void to_json(json& j, const path_metrics& m);
void to_json(json& j, const penalty_terms& t);
void to_json(json& j, const fitness_breakdown& f);
void to_json(json& j, const run_result& r);
void to_json(json& j, const sim_result& s);
void to_json(json& j, const qos_request& r);
void to_json(json& j, const penalty_coeffs& c);
void to_json(json& j, const hybrid_config& c);
void to_json(json& j, const traffic_spec& t);

/// Override only the keys present in `j`; unknown keys are a format_error.
void apply_overrides(const json& j, qos_request& r);
void apply_overrides(const json& j, hybrid_config& c);
void apply_overrides(const json& j, traffic_spec& t);

clamp_mode parse_clamp_mode(const std::string& name);
std::string to_string(clamp_mode mode);

} // namespace meshroute
