// Copyright 2026 The flowswarm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowswarm/definitions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "flowswarm/error.hpp"
#include "json.hpp"

namespace flowswarm {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& field, std::string message) {
  throw SchemaError(Diagnostic{0, 0, field, std::move(message)});
}

Json parse_json(std::string_view document) {
  try {
    return Json::parse(document.begin(), document.end());
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and may point one past the end.
    const std::size_t offset =
        std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, document.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
      if (document[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) {
      what = what.substr(pos);
    }
    throw SyntaxError(Diagnostic{line, column, "", what});
  }
}

// Typed access to one JSON object, reporting failures with the field path.
class ObjectReader {
 public:
  ObjectReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) schema_fail(display(), "expected an object");
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const Json& at(const std::string& key) const {
    if (!has(key)) schema_fail(field(key), "required field is missing");
    return node_.at(key);
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& item : node_.items()) {
      const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) {
        return item.key() == k;
      });
      if (!known) schema_fail(field(item.key()), "unknown field");
    }
  }

  std::string string(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_string()) schema_fail(field(key), "expected a string");
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, std::string fallback) const {
    return has(key) ? string(key) : std::move(fallback);
  }

  double number(const std::string& key) const { return as_number(at(key), field(key)); }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_number_integer()) schema_fail(field(key), "expected an integer");
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() >
            static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      schema_fail(field(key), "integer out of range");
    }
    return v.get<std::int64_t>();
  }

  std::vector<std::string> strings_or_empty(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    const Json& v = at(key);
    if (!v.is_array()) schema_fail(field(key), "expected an array of strings");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) {
        schema_fail(fmt::format("{}[{}]", field(key), i), "expected a string");
      }
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

  CapabilitySet tag_set(const std::string& key) const {
    CapabilitySet tags;
    for (auto& tag : strings_or_empty(key)) {
      if (tag.empty()) schema_fail(field(key), "capability tags must be non-empty");
      if (!tags.insert(tag).second) {
        schema_fail(field(key), "duplicate capability tag '" + tag + "'");
      }
    }
    return tags;
  }

  static double as_number(const Json& v, const std::string& where) {
    if (!v.is_number()) schema_fail(where, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) schema_fail(where, "expected a finite number");
    return x;
  }

  static Eigen::Vector4d as_beta(const Json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 4) {
      schema_fail(where, "expected an array of four values in [0,1]");
    }
    Eigen::Vector4d out;
    for (int i = 0; i < 4; ++i) {
      out[i] = as_number(v[static_cast<std::size_t>(i)], fmt::format("{}[{}]", where, i));
      if (out[i] < 0.0 || out[i] > 1.0) {
        schema_fail(fmt::format("{}[{}]", where, i), "value must lie in [0,1]");
      }
    }
    return out;
  }

 private:
  std::string display() const { return path_.empty() ? "(document)" : path_; }

  const Json& node_;
  std::string path_;
};

void check_cost(double alpha, const std::string& field) {
  if (alpha < 0.0 || alpha > 100.0) {
    schema_fail(field, fmt::format("predefined cost {} outside [0,100]", alpha));
  }
}

ServiceSpec read_service(const Json& node, const std::string& path) {
  ObjectReader r(node, path);
  r.allow_only({"name", "base_os", "packages", "repositories", "volumes",
                "entrypoint", "predefined_cost", "required_capabilities",
                "image_size_mb"});
  ServiceSpec s;
  s.name = r.string("name");
  if (s.name.empty()) schema_fail(r.field("name"), "must be non-empty");
  s.base_os = r.string_or("base_os", "");
  s.packages = r.strings_or_empty("packages");
  s.repositories = r.strings_or_empty("repositories");
  if (r.has("volumes")) {
    const Json& vols = r.at("volumes");
    if (!vols.is_array()) schema_fail(r.field("volumes"), "expected an array");
    for (std::size_t i = 0; i < vols.size(); ++i) {
      ObjectReader v(vols[i], fmt::format("{}[{}]", r.field("volumes"), i));
      v.allow_only({"host_path", "container_path"});
      s.volumes.push_back({v.string("host_path"), v.string("container_path")});
    }
  }
  s.entrypoint = r.string("entrypoint");
  s.predefined_cost = r.number("predefined_cost");
  check_cost(s.predefined_cost, r.field("predefined_cost"));
  s.required_capabilities = r.tag_set("required_capabilities");
  s.image_size_mb = r.number_or("image_size_mb", ServiceSpec::kDefaultImageSizeMb);
  if (!(s.image_size_mb > 0.0)) {
    schema_fail(r.field("image_size_mb"), "must be positive");
  }
  return s;
}

Json write_service(const ServiceSpec& s) {
  Json j = Json::object();
  j["name"] = s.name;
  if (!s.base_os.empty()) j["base_os"] = s.base_os;
  if (!s.packages.empty()) j["packages"] = s.packages;
  if (!s.repositories.empty()) j["repositories"] = s.repositories;
  if (!s.volumes.empty()) {
    Json vols = Json::array();
    for (const auto& v : s.volumes) {
      vols.push_back(Json{{"host_path", v.host_path}, {"container_path", v.container_path}});
    }
    j["volumes"] = std::move(vols);
  }
  j["entrypoint"] = s.entrypoint;
  j["predefined_cost"] = s.predefined_cost;
  if (!s.required_capabilities.empty()) {
    j["required_capabilities"] = Json(s.required_capabilities);
  }
  if (s.image_size_mb != ServiceSpec::kDefaultImageSizeMb) {
    j["image_size_mb"] = s.image_size_mb;
  }
  return j;
}

bool valid_cidr(const std::string& text) {
  static const std::regex pattern(R"(^(\d{1,3})\.(\d{1,3})\.(\d{1,3})\.(\d{1,3})/(\d{1,2})$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return false;
  for (int i = 1; i <= 4; ++i) {
    if (std::stoi(m[i].str()) > 255) return false;
  }
  return std::stoi(m[5].str()) <= 32;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json beta_json(const Eigen::Vector4d& v) { return Json{v[0], v[1], v[2], v[3]}; }

}  // namespace

void validate(const CostWeights& weights) {
  const Eigen::Vector4d w = weights.as_vector();
  if (!((w.array() >= 0.0).all() && (w.array() <= 1.0).all())) {
    throw WeightError(Diagnostic{0, 0, "weights", "every weight must lie in [0,1]"});
  }
  if (std::abs(w.sum() - 1.0) > 1e-9) {
    throw WeightError(Diagnostic{
        0, 0, "weights", fmt::format("weights sum to {}, expected 1", w.sum())});
  }
}

ServiceSpec ServiceEntry::effective() const {
  ServiceSpec s = definition;
  if (override.predefined_cost) s.predefined_cost = *override.predefined_cost;
  if (override.required_capabilities) {
    s.required_capabilities = *override.required_capabilities;
  }
  return s;
}

std::vector<ServiceSpec> ExperimentSpec::effective_services() const {
  std::vector<ServiceSpec> out;
  out.reserve(services.size());
  for (const auto& entry : services) out.push_back(entry.effective());
  return out;
}

ServiceSpec parse_cdf(std::string_view document) {
  return read_service(parse_json(document), "");
}

std::string serialize_cdf(const ServiceSpec& spec) {
  return dump(write_service(spec));
}

ExperimentSpec parse_edf(std::string_view document, const ServiceResolver& resolver) {
  const Json root = parse_json(document);
  ObjectReader r(root, "");
  r.allow_only({"name", "services", "dependencies", "network", "weights",
                "pool_discount", "overrides"});

  ExperimentSpec x;
  x.name = r.string("name");

  const Json& services = r.at("services");
  if (!services.is_array() || services.empty()) {
    schema_fail("services", "expected a non-empty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < services.size(); ++i) {
    const std::string path = fmt::format("services[{}]", i);
    ServiceEntry entry;
    if (services[i].is_string()) {
      const std::string ref = services[i].get<std::string>();
      std::optional<ServiceSpec> found = resolver ? resolver(ref) : std::nullopt;
      if (!found) {
        throw UnresolvedService(Diagnostic{0, 0, path, "cannot resolve service '" + ref + "'"});
      }
      if (found->name != ref) {
        schema_fail(path, fmt::format("reference '{}' resolved to a service named '{}'",
                                      ref, found->name));
      }
      entry.definition = std::move(*found);
    } else {
      entry.definition = read_service(services[i], path);
      entry.inline_definition = true;
    }
    if (!names.insert(entry.definition.name).second) {
      schema_fail(path, "duplicate service name '" + entry.definition.name + "'");
    }
    x.services.push_back(std::move(entry));
  }

  if (r.has("overrides")) {
    ObjectReader overrides(r.at("overrides"), "overrides");
    for (const auto& item : r.at("overrides").items()) {
      const std::string path = overrides.field(item.key());
      auto it = std::find_if(x.services.begin(), x.services.end(), [&](const ServiceEntry& e) {
        return e.definition.name == item.key();
      });
      if (it == x.services.end()) schema_fail(path, "override for undeclared service");
      ObjectReader o(item.value(), path);
      o.allow_only({"predefined_cost", "required_capabilities"});
      if (o.has("predefined_cost")) {
        it->override.predefined_cost = o.number("predefined_cost");
        check_cost(*it->override.predefined_cost, o.field("predefined_cost"));
      }
      if (o.has("required_capabilities")) {
        it->override.required_capabilities = o.tag_set("required_capabilities");
      }
    }
  }

  if (r.has("dependencies")) {
    const Json& deps = r.at("dependencies");
    if (!deps.is_array()) schema_fail("dependencies", "expected an array of pairs");
    for (std::size_t i = 0; i < deps.size(); ++i) {
      const std::string path = fmt::format("dependencies[{}]", i);
      const Json& pair = deps[i];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        schema_fail(path, "expected a pair of service names");
      }
      auto a = pair[0].get<std::string>();
      auto b = pair[1].get<std::string>();
      for (const auto& n : {a, b}) {
        if (!names.contains(n)) schema_fail(path, "undeclared service '" + n + "'");
      }
      if (a == b) schema_fail(path, "a service cannot depend on itself");
      x.dependencies.emplace_back(std::move(a), std::move(b));
    }
  }

  if (r.has("network")) {
    ObjectReader n(r.at("network"), "network");
    n.allow_only({"subnet", "ports"});
    x.network.subnet = n.string_or("subnet", x.network.subnet);
    if (!valid_cidr(x.network.subnet)) {
      schema_fail(n.field("subnet"), "expected an IPv4 CIDR such as 10.0.0.0/24");
    }
    if (n.has("ports")) {
      const Json& ports = n.at("ports");
      if (!ports.is_array()) schema_fail(n.field("ports"), "expected an array");
      for (std::size_t i = 0; i < ports.size(); ++i) {
        if (!ports[i].is_number_integer() || ports[i].get<std::int64_t>() < 0 ||
            ports[i].get<std::int64_t>() > 65535) {
          schema_fail(fmt::format("network.ports[{}]", i), "expected a port number");
        }
        x.network.ports.push_back(static_cast<std::uint16_t>(ports[i].get<std::int64_t>()));
      }
    }
  }

  if (r.has("weights")) {
    ObjectReader w(r.at("weights"), "weights");
    w.allow_only({"cpu", "vram", "swap", "bandwidth"});
    x.weights = {w.number("cpu"), w.number("vram"), w.number("swap"), w.number("bandwidth")};
  }
  validate(x.weights);

  x.pool_discount = r.number_or("pool_discount", ExperimentSpec::kDefaultPoolDiscount);
  if (!(x.pool_discount > 0.0 && x.pool_discount <= 1.0)) {
    schema_fail("pool_discount", "must lie in (0,1]");
  }
  return x;
}

std::string serialize_edf(const ExperimentSpec& spec) {
  Json j = Json::object();
  j["name"] = spec.name;
  Json services = Json::array();
  Json overrides = Json::object();
  for (const auto& entry : spec.services) {
    if (entry.inline_definition) {
      services.push_back(write_service(entry.definition));
    } else {
      services.push_back(entry.definition.name);
    }
    if (!entry.override.empty()) {
      Json o = Json::object();
      if (entry.override.predefined_cost) o["predefined_cost"] = *entry.override.predefined_cost;
      if (entry.override.required_capabilities) {
        o["required_capabilities"] = Json(*entry.override.required_capabilities);
      }
      overrides[entry.definition.name] = std::move(o);
    }
  }
  j["services"] = std::move(services);
  if (!overrides.empty()) j["overrides"] = std::move(overrides);
  if (!spec.dependencies.empty()) {
    Json deps = Json::array();
    for (const auto& [a, b] : spec.dependencies) deps.push_back(Json{a, b});
    j["dependencies"] = std::move(deps);
  }
  Json net = Json::object();
  net["subnet"] = spec.network.subnet;
  if (!spec.network.ports.empty()) net["ports"] = spec.network.ports;
  j["network"] = std::move(net);
  j["weights"] = Json{{"cpu", spec.weights.cpu},
                      {"vram", spec.weights.vram},
                      {"swap", spec.weights.swap},
                      {"bandwidth", spec.weights.bandwidth}};
  j["pool_discount"] = spec.pool_discount;
  return dump(j);
}

std::vector<Eigen::Vector4d> parse_workload_trace(std::string_view text) {
  std::vector<Eigen::Vector4d> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw SyntaxError(Diagnostic{line_no, 0, "", "not a number: '" + token + "'"});
      }
    }
    if (values.empty()) continue;
    if (values.size() != 4) {
      throw SchemaError(Diagnostic{line_no, 0, "", "expected four values per row"});
    }
    Eigen::Vector4d row(values[0], values[1], values[2], values[3]);
    if (!((row.array() >= 0.0).all() && (row.array() <= 1.0).all())) {
      throw SchemaError(Diagnostic{line_no, 0, "", "values must lie in [0,1]"});
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw SchemaError(Diagnostic{0, 0, "", "workload trace is empty"});
  return rows;
}

ClusterSpec parse_cluster(std::string_view document, const std::filesystem::path& base_dir) {
  const Json root = parse_json(document);
  ObjectReader r(root, "");
  r.allow_only({"seed", "workers"});
  ClusterSpec c;
  if (r.has("seed")) {
    const Json& seed = r.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
      schema_fail("seed", "expected a non-negative integer");
    }
    c.seed = seed.get<std::uint64_t>();
  }
  const Json& workers = r.at("workers");
  if (!workers.is_array() || workers.empty()) {
    schema_fail("workers", "expected a non-empty array");
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < workers.size(); ++i) {
    ObjectReader w(workers[i], fmt::format("workers[{}]", i));
    w.allow_only({"id", "capabilities", "cpu_cores", "vram_mb", "swap_mb",
                  "bandwidth_mbps", "workload"});
    ClusterWorker worker;
    const std::string id = w.string("id");
    if (id.empty()) schema_fail(w.field("id"), "must be non-empty");
    if (!ids.insert(id).second) schema_fail(w.field("id"), "duplicate worker id '" + id + "'");
    worker.id = AgentId(id);
    worker.profile.capabilities = w.tag_set("capabilities");
    worker.profile.cpu_cores = w.integer_or("cpu_cores", 1);
    worker.profile.vram_mb = w.integer_or("vram_mb", 0);
    worker.profile.swap_mb = w.integer_or("swap_mb", 0);
    worker.profile.bandwidth_mbps = w.number_or("bandwidth_mbps", 100.0);
    try {
      validate(worker.profile);
    } catch (const DomainError& e) {
      schema_fail(w.field("profile"), e.what());
    }
    if (w.has("workload")) {
      ObjectReader g(w.at("workload"), w.field("workload"));
      const std::string kind = g.string("kind");
      WorkloadModel& m = worker.workload;
      if (kind == "fixed") {
        g.allow_only({"kind", "beta"});
        m.kind = WorkloadModel::Kind::Fixed;
        m.center = ObjectReader::as_beta(g.at("beta"), g.field("beta"));
        m.half_width = 0.0;
        m.jitter = 0.0;
      } else if (kind == "uniform_noise") {
        g.allow_only({"kind", "center", "half_width", "jitter"});
        m.kind = WorkloadModel::Kind::UniformNoise;
        if (g.has("center")) m.center = ObjectReader::as_beta(g.at("center"), g.field("center"));
        m.half_width = g.number_or("half_width", m.half_width);
        m.jitter = g.number_or("jitter", m.jitter);
        if (m.half_width < 0.0 || m.half_width > 1.0) {
          schema_fail(g.field("half_width"), "must lie in [0,1]");
        }
        if (m.jitter < 0.0 || m.jitter > 1.0) schema_fail(g.field("jitter"), "must lie in [0,1]");
      } else if (kind == "trace") {
        g.allow_only({"kind", "file"});
        m.kind = WorkloadModel::Kind::Trace;
        m.trace_file = g.string("file");
        const auto path = base_dir / m.trace_file;
        std::string text;
        try {
          text = read_text_file(path);
        } catch (const Error& e) {
          schema_fail(g.field("file"), e.what());
        }
        try {
          m.trace = parse_workload_trace(text);
        } catch (const DefinitionError& e) {
          schema_fail(g.field("file"), path.string() + ": " + e.diagnostic().to_string());
        }
      } else {
        schema_fail(g.field("kind"), "expected one of fixed, uniform_noise, trace");
      }
    }
    c.workers.push_back(std::move(worker));
  }
  return c;
}

std::string serialize_cluster(const ClusterSpec& spec) {
  Json j = Json::object();
  j["seed"] = spec.seed;
  Json workers = Json::array();
  for (const auto& w : spec.workers) {
    Json o = Json::object();
    o["id"] = w.id.value();
    if (!w.profile.capabilities.empty()) o["capabilities"] = Json(w.profile.capabilities);
    o["cpu_cores"] = w.profile.cpu_cores;
    o["vram_mb"] = w.profile.vram_mb;
    o["swap_mb"] = w.profile.swap_mb;
    o["bandwidth_mbps"] = w.profile.bandwidth_mbps;
    Json g = Json::object();
    switch (w.workload.kind) {
      case WorkloadModel::Kind::Fixed:
        g["kind"] = "fixed";
        g["beta"] = beta_json(w.workload.center);
        break;
      case WorkloadModel::Kind::UniformNoise:
        g["kind"] = "uniform_noise";
        g["center"] = beta_json(w.workload.center);
        g["half_width"] = w.workload.half_width;
        g["jitter"] = w.workload.jitter;
        break;
      case WorkloadModel::Kind::Trace:
        g["kind"] = "trace";
        g["file"] = w.workload.trace_file;
        break;
    }
    o["workload"] = std::move(g);
    workers.push_back(std::move(o));
  }
  j["workers"] = std::move(workers);
  return dump(j);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ServiceResolver directory_resolver(std::filesystem::path dir) {
  return [dir = std::move(dir)](const std::string& name) -> std::optional<ServiceSpec> {
    const auto path = dir / (name + ".cdf.json");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
    return parse_cdf(read_text_file(path));
  };
}

}  // namespace flowswarm
