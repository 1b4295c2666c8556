#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robsel/robustness.hpp"
#include "robsel/seg_eval.hpp"

namespace robsel {

/// Environment variable that overrides the manifest seed (an explicit --seed
/// flag still wins).
inline constexpr const char* kSeedEnvVar = "ROBSEL_SEED";

struct ManifestCheckpoint {
  std::string id;
  int epoch = 0;
  bool random_init = false;
  std::optional<std::filesystem::path> weights;     ///< float32 [P] encoder parameters
  std::optional<std::filesystem::path> embeddings;  ///< float32 [N, 2, ...] query/positive pairs
  std::optional<double> downstream;
};

/// JSON run description:
///
///   {
///     "config": {"distance": "cosine", "margin": 0.5, "level": "second_to_last",
///                "pooled": true, "seed": 7},
///     "task": {"mode": "binary", "classes": 1},
///     "images": ["img0.ptns", ...],
///     "checkpoints": [
///       {"id": "random", "epoch": 0, "random_init": true, "weights": "w0.ptns"},
///       {"id": "ep1", "epoch": 1, "embeddings": "e1.ptns", "downstream": 0.81}
///     ]
///   }
///
/// Relative paths resolve against the manifest's directory. "classes" counts
/// the non-background classes.
struct RunManifest {
  RobustnessConfig config;
  std::uint64_t seed = 0;
  TaskMode task = TaskMode::Binary;
  std::size_t classes = 1;
  std::vector<std::filesystem::path> images;
  std::vector<ManifestCheckpoint> checkpoints;

  /// Paths exist, epochs strictly increase, ids unique, at most one random
  /// init, each checkpoint names exactly one of weights / embeddings.
  void validate() const;
};

RunManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);
nlohmann::json manifest_to_json(const RunManifest& m);

/// Seed precedence: explicit flag, then kSeedEnvVar, then the manifest.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t manifest_seed);

nlohmann::json config_to_json(const RobustnessConfig& cfg);
RobustnessConfig config_from_json(const nlohmann::json& j);

}  // namespace robsel
