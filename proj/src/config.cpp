#include "loewner/config.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "loewner/errors.hpp"
#include "loewner/io.hpp"

namespace loewner::io {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (ok.count(key) == 0) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  return j;
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(fmt::format("{}: expected a number", where));
  return j.get<double>();
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(fmt::format("{}: expected an integer", where));
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(fmt::format("{}: expected a string", where));
  return j.get<std::string>();
}

int parse_int(std::string_view text, const std::string& where) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", where, text));
  }
  return v;
}

double parse_num(std::string_view text, const std::string& where) {
  std::string tmp(text);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", where, text));
  }
  return v;
}

PlantSpec plant_from_json(const json& j) {
  if (j.is_string()) return parse_plant(j.get<std::string>());
  require_object(j, "plant");
  reject_unknown(j, {"type", "n", "path", "value"}, "plant");
  if (!j.contains("type")) throw ConfigError("plant: missing 'type'");
  const std::string type = get_string(j["type"], "plant.type");
  PlantSpec p;
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw ConfigError(fmt::format("plant '{}' needs '{}'", type, key));
    return j[key];
  };
  if (type == "beam_exact") {
    p.kind = PlantKind::kBeamExact;
  } else if (type == "beam_fem") {
    p.kind = PlantKind::kBeamFem;
    p.n = get_int(need("n"), "plant.n");
  } else if (type == "modal") {
    p.kind = PlantKind::kModal;
    p.n = get_int(need("n"), "plant.n");
  } else if (type == "samples") {
    p.kind = PlantKind::kSamples;
    p.path = get_string(need("path"), "plant.path");
  } else if (type == "archive") {
    p.kind = PlantKind::kArchive;
    p.path = get_string(need("path"), "plant.path");
  } else if (type == "constant") {
    p.kind = PlantKind::kConstant;
    p.value = get_number(need("value"), "plant.value");
  } else {
    throw ConfigError(fmt::format("plant.type: unknown plant '{}'", type));
  }
  return p;
}

json plant_to_json(const PlantSpec& p) {
  switch (p.kind) {
    case PlantKind::kBeamExact: return {{"type", "beam_exact"}};
    case PlantKind::kBeamFem: return {{"type", "beam_fem"}, {"n", p.n}};
    case PlantKind::kModal: return {{"type", "modal"}, {"n", p.n}};
    case PlantKind::kSamples: return {{"type", "samples"}, {"path", p.path}};
    case PlantKind::kArchive: return {{"type", "archive"}, {"path", p.path}};
    case PlantKind::kConstant: return {{"type", "constant"}, {"value", p.value}};
  }
  return {};
}

beam::BeamParams beam_from_json(const json& j) {
  require_object(j, "beam");
  reject_unknown(j, {"length", "youngs", "base", "height", "inertia", "damping"}, "beam");
  const auto def = beam::BeamParams::aluminum_cantilever();
  auto num = [&](const char* key, double fallback) {
    return j.contains(key) ? get_number(j[key], fmt::format("beam.{}", key)) : fallback;
  };
  const bool has_section = j.contains("base") || j.contains("height");
  if (has_section && j.contains("inertia")) {
    throw ConfigError("beam: give either inertia or base/height, not both");
  }
  if (has_section && !(j.contains("base") && j.contains("height"))) {
    throw ConfigError("beam: base and height must be given together");
  }
  try {
    const double inertia =
        has_section ? beam::inertia_from_cross_section(num("base", 0), num("height", 0))
                    : num("inertia", def.inertia());
    return beam::BeamParams(num("length", def.length()), num("youngs", def.youngs()), inertia,
                            num("damping", def.damping()));
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("beam: {}", e.what()));
  }
}

}  // namespace

PlantSpec parse_plant(const std::string& text) {
  PlantSpec p;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (text == "beam" || text == "beam_exact") {
    p.kind = PlantKind::kBeamExact;
  } else if (head == "fem" && colon != std::string::npos) {
    p.kind = PlantKind::kBeamFem;
    p.n = parse_int(tail, "--plant fem:N");
  } else if (head == "modal" && colon != std::string::npos) {
    p.kind = PlantKind::kModal;
    p.n = parse_int(tail, "--plant modal:N");
  } else if (head == "const" && colon != std::string::npos) {
    p.kind = PlantKind::kConstant;
    p.value = parse_num(tail, "--plant const:v");
  } else if (head == "samples" && colon != std::string::npos) {
    p.kind = PlantKind::kSamples;
    p.path = tail;
  } else if (text.size() > 5 && text.substr(text.size() - 5) == ".json") {
    p.kind = PlantKind::kArchive;
    p.path = text;
  } else if (text.size() > 4 && text.substr(text.size() - 4) == ".csv") {
    p.kind = PlantKind::kSamples;
    p.path = text;
  } else {
    throw ConfigError(fmt::format(
        "unknown plant '{}' (expected beam, fem:N, modal:N, const:v, samples:path or an "
        "archive .json)",
        text));
  }
  return p;
}

std::string plant_label(const PlantSpec& p) {
  switch (p.kind) {
    case PlantKind::kBeamExact: return "beam";
    case PlantKind::kBeamFem: return fmt::format("fem{}", p.n);
    case PlantKind::kModal: return fmt::format("modal{}", p.n);
    case PlantKind::kConstant: return "const";
    case PlantKind::kSamples:
    case PlantKind::kArchive: {
      std::string stem = std::filesystem::path(p.path).stem().string();
      for (char& c : stem) {
        if (c == ',' || c == ' ') c = '_';
      }
      return stem;
    }
  }
  return "plant";
}

GridSpec parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw ConfigError(fmt::format("--grid expects lo:hi:count, got '{}'", text));
  }
  GridSpec g;
  g.lo_exp = parse_num(text.substr(0, a), "--grid lo");
  g.hi_exp = parse_num(text.substr(a + 1, b - a - 1), "--grid hi");
  g.count = parse_int(text.substr(b + 1), "--grid count");
  return g;
}

PartitionScheme parse_partition(const std::string& text) {
  if (text == "alternating") return PartitionScheme::kAlternating;
  if (text == "half-split" || text == "half_split") return PartitionScheme::kHalfSplit;
  throw ConfigError(fmt::format("unknown partition scheme '{}'", text));
}

std::string partition_name(PartitionScheme scheme) {
  return scheme == PartitionScheme::kAlternating ? "alternating" : "half-split";
}

void ExperimentConfig::validate() const {
  switch (plant.kind) {
    case PlantKind::kBeamFem:
      if (plant.n < 6) {
        throw ConfigError(fmt::format("beam_fem needs N >= 6, got {}", plant.n));
      }
      break;
    case PlantKind::kModal:
      if (plant.n < 1) throw ConfigError(fmt::format("modal needs N >= 1, got {}", plant.n));
      break;
    case PlantKind::kSamples:
    case PlantKind::kArchive:
      if (plant.path.empty()) throw ConfigError("plant path is empty");
      break;
    case PlantKind::kConstant:
      if (!std::isfinite(plant.value)) throw ConfigError("constant plant value must be finite");
      break;
    case PlantKind::kBeamExact:
      break;
  }
  if (!std::isfinite(grid.lo_exp) || !std::isfinite(grid.hi_exp) || !(grid.lo_exp < grid.hi_exp)) {
    throw ConfigError(fmt::format("grid: need lo_exp < hi_exp, got [{}, {}]", grid.lo_exp,
                                  grid.hi_exp));
  }
  if (grid.count < 2) throw ConfigError(fmt::format("grid: count must be >= 2, got {}", grid.count));
  if (order && *order < 1) throw ConfigError(fmt::format("order must be >= 1, got {}", *order));
  if (!(tol > 0.0 && tol < 1.0)) throw ConfigError(fmt::format("tol must lie in (0, 1), got {}", tol));
  if (output_dir.empty()) throw ConfigError("output_dir is empty");
}

ExperimentConfig config_from_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j, {"plant", "grid", "partition", "order", "tol", "output_dir", "seed", "beam"},
                 "config");
  ExperimentConfig c;
  if (j.contains("plant")) c.plant = plant_from_json(j["plant"]);
  if (j.contains("grid")) {
    const auto& g = require_object(j["grid"], "grid");
    reject_unknown(g, {"lo_exp", "hi_exp", "count"}, "grid");
    if (g.contains("lo_exp")) c.grid.lo_exp = get_number(g["lo_exp"], "grid.lo_exp");
    if (g.contains("hi_exp")) c.grid.hi_exp = get_number(g["hi_exp"], "grid.hi_exp");
    if (g.contains("count")) c.grid.count = get_int(g["count"], "grid.count");
  }
  if (j.contains("partition")) c.partition = parse_partition(get_string(j["partition"], "partition"));
  if (j.contains("order") && j.contains("tol")) {
    throw ConfigError("config: give either order or tol, not both");
  }
  if (j.contains("order")) c.order = get_int(j["order"], "order");
  if (j.contains("tol")) c.tol = get_number(j["tol"], "tol");
  if (j.contains("output_dir")) c.output_dir = get_string(j["output_dir"], "output_dir");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("beam")) c.beam = beam_from_json(j["beam"]);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("{}: invalid JSON: {}", path, e.what()));
  }
  return config_from_json(j);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["plant"] = plant_to_json(c.plant);
  j["grid"] = {{"lo_exp", c.grid.lo_exp}, {"hi_exp", c.grid.hi_exp}, {"count", c.grid.count}};
  j["partition"] = partition_name(c.partition);
  if (c.order) {
    j["order"] = *c.order;
  } else {
    j["tol"] = c.tol;
  }
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["beam"] = {{"length", c.beam.length()},
               {"youngs", c.beam.youngs()},
               {"inertia", c.beam.inertia()},
               {"damping", c.beam.damping()}};
  return j;
}

}  // namespace loewner::io
