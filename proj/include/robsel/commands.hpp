#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "robsel/error.hpp"
#include "robsel/manifest.hpp"
#include "robsel/report.hpp"

namespace robsel {

/// Process exit codes; one per error category.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitInvalidArgument = 3,
  kExitDegenerateInput = 4,
  kExitDimensionMismatch = 5,
  kExitFileFormat = 6,
  kExitMissingData = 7,
  kExitIo = 8,
};

int exit_code_for(ErrorCategory category) noexcept;

/// Robustness of every manifest checkpoint. Images are read once; each image
/// is jittered twice with streams that depend only on (seed, image index).
Report cmd_robustness(const RunManifest& manifest, std::uint64_t seed);

/// Robustness of a single manifest checkpoint.
double checkpoint_robustness(const RunManifest& manifest, const ManifestCheckpoint& checkpoint,
                             const std::vector<Image>& images, std::uint64_t seed);

nlohmann::json cmd_select(const Report& report, SelectionMode mode, bool include_random_init = false);
nlohmann::json cmd_tis(const Report& report);
nlohmann::json cmd_corr(const Report& report);

/// Pairs pred_paths[i] with mask_paths[i]; counts are pooled over all pairs.
nlohmann::json cmd_seg_eval(const std::vector<std::filesystem::path>& pred_paths,
                            const std::vector<std::filesystem::path>& mask_paths, TaskMode mode);

enum class AugmentPipeline { ColorJitter, Idrid, ImagenetSimple, ImagenetAdvanced };
AugmentPipeline parse_pipeline(std::string_view name);
std::string_view to_string(AugmentPipeline p) noexcept;

struct AugmentRequest {
  AugmentPipeline pipeline = AugmentPipeline::ColorJitter;
  std::vector<std::filesystem::path> images;
  std::vector<std::filesystem::path> masks;  ///< required for idrid
  std::vector<std::size_t> labels;           ///< required for imagenet-*
  std::size_t classes = 0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
};

/// Writes <stem>.aug.ptns (and <stem>.mask.aug.ptns for idrid) into out_dir
/// and returns a summary listing outputs and mixed labels.
nlohmann::json cmd_augment(const AugmentRequest& request);

/// Encodes every image with the weights and writes float32 [N, D] (pooled)
/// or [N, C, H, W] to out.
nlohmann::json cmd_extract(const std::filesystem::path& weights,
                           const std::vector<std::filesystem::path>& images, Level level,
                           bool pooled, const std::filesystem::path& out);

/// Entry point of the command-line tool; argv[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robsel
