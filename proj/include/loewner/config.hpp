#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "loewner/beam_model.hpp"
#include "loewner/loewner_core.hpp"

namespace loewner::io {

enum class PlantKind { kBeamExact, kBeamFem, kModal, kSamples, kConstant, kArchive };

struct PlantSpec {
  PlantKind kind = PlantKind::kBeamExact;
  int n = 0;             // FEM intervals or modal terms
  std::string path;      // samples CSV or model archive
  double value = 1.0;    // constant plant
};

struct GridSpec {
  double lo_exp = 1.0;
  double hi_exp = 4.5;
  int count = 400;
};

struct ExperimentConfig {
  PlantSpec plant;
  GridSpec grid;
  PartitionScheme partition = PartitionScheme::kAlternating;
  std::optional<int> order;
  double tol = 1e-10;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  beam::BeamParams beam = beam::BeamParams::aluminum_cantilever();

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// beam | fem:N | modal:N | const:v | samples:path | path ending in .json (archive)
PlantSpec parse_plant(const std::string& text);
std::string plant_label(const PlantSpec& plant);

/// lo:hi:count
GridSpec parse_grid(const std::string& text);

PartitionScheme parse_partition(const std::string& text);
std::string partition_name(PartitionScheme scheme);

/// Strict: unknown keys and wrong types are ConfigErrors.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Canonical form used for the provenance hash.
nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace loewner::io
