#include "robsel/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "robsel/augment.hpp"
#include "robsel/tensor_io.hpp"

namespace robsel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kAugmentDomain = 0x415547;  // "AUG"

std::vector<Image> load_images(const std::vector<fs::path>& paths) {
  std::vector<Image> images;
  images.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    try {
      images.push_back(tensor_to_image(read_ptns(paths[i])));
    } catch (const Error& e) {
      throw Error(e.category(), "image " + std::to_string(i) + " (" + paths[i].string() + "): " + e.what());
    }
  }
  return images;
}

json selection_json(const SelectionResult& s, const Report& r) {
  const auto& e = r.series.entries[s.chosen_index];
  json j{{"mode", to_string(s.mode)},
         {"id", s.chosen_id},
         {"epoch", e.epoch},
         {"index", s.chosen_index},
         {"robustness", e.robustness},
         {"evaluated_count", s.evaluated_count},
         {"checkpoint_count", r.series.entries.size()}};
  if (e.downstream) j["downstream"] = *e.downstream;
  return j;
}

void flatten_csv(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten_csv(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_csv(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_number_float()) {
    out += prefix + "," + format_number(j.get<double>()) + "\n";
  } else if (j.is_string()) {
    out += prefix + "," + j.get<std::string>() + "\n";
  } else if (j.is_null()) {
    out += prefix + ",\n";
  } else {
    out += prefix + "," + j.dump() + "\n";
  }
}

std::string render(const json& j, const std::string& format) {
  if (format == "csv") {
    std::string out = "key,value\n";
    flatten_csv(j, "", out);
    return out;
  }
  return j.dump(2) + "\n";
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrorCategory::Io, "cannot open '" + out_path + "' for writing");
  f << text;
  if (!f) fail(ErrorCategory::Io, "failed writing '" + out_path + "'");
}

Report load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::Io, "cannot open report '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::FileFormat, path + ": " + e.what());
  }
  return report_from_json(j);
}

void require_downstream(const Report& report, const char* op) {
  if (!report.series.has_downstream()) {
    for (const auto& e : report.series.entries) {
      if (!e.downstream) {
        fail(ErrorCategory::MissingData, std::string(op) + ": checkpoint '" + e.id + "' has no downstream score");
      }
    }
    fail(ErrorCategory::MissingData, std::string(op) + ": report has no checkpoints");
  }
}

}  // namespace

int exit_code_for(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::InvalidArgument:
      return kExitInvalidArgument;
    case ErrorCategory::DegenerateInput:
      return kExitDegenerateInput;
    case ErrorCategory::DimensionMismatch:
      return kExitDimensionMismatch;
    case ErrorCategory::FileFormat:
      return kExitFileFormat;
    case ErrorCategory::MissingData:
      return kExitMissingData;
    case ErrorCategory::Io:
      return kExitIo;
  }
  return kExitInternal;
}

double checkpoint_robustness(const RunManifest& manifest, const ManifestCheckpoint& ck,
                             const std::vector<Image>& images, std::uint64_t seed) {
  try {
    if (ck.weights) {
      const LeveledEncoder enc = tensor_to_encoder(read_ptns(*ck.weights), ck.id);
      return robustness(build_triplets(images, enc, manifest.config, seed), manifest.config);
    }
    if (ck.embeddings) {
      auto [queries, positives] = tensor_to_embedding_pairs(read_ptns(*ck.embeddings), manifest.config.pooled);
      return robustness(triplets_from_pairs(std::move(queries), std::move(positives), seed), manifest.config);
    }
  } catch (const Error& e) {
    throw Error(e.category(), "checkpoint '" + ck.id + "': " + e.what());
  }
  fail(ErrorCategory::MissingData, "checkpoint '" + ck.id + "' has neither weights nor embeddings");
}

Report cmd_robustness(const RunManifest& manifest, std::uint64_t seed) {
  manifest.validate();
  const bool needs_images = std::any_of(manifest.checkpoints.begin(), manifest.checkpoints.end(),
                                        [](const auto& c) { return c.weights.has_value(); });
  const std::vector<Image> images = needs_images ? load_images(manifest.images) : std::vector<Image>{};
  CheckpointSeries series;
  for (const auto& ck : manifest.checkpoints) {
    CheckpointEntry e;
    e.id = ck.id;
    e.epoch = ck.epoch;
    e.random_init = ck.random_init;
    e.downstream = ck.downstream;
    e.robustness = checkpoint_robustness(manifest, ck, images, seed);
    series.entries.push_back(std::move(e));
  }
  return make_report(std::move(series), manifest.config, seed);
}

json cmd_select(const Report& report, SelectionMode mode, bool include_random_init) {
  const SelectionResult s = mode == SelectionMode::Offline ? select_offline(report.series, include_random_init)
                                                           : select_online(report.series);
  return selection_json(s, report);
}

json cmd_tis(const Report& report) {
  require_downstream(report, "tis");
  const Report& r = report;
  const double best = r.series.downstream()[first_argmax(r.series.downstream())];
  return json{{"tis", r.tis->indicator},
              {"tis_offline", r.tis->offline},
              {"tis_online", r.tis->online},
              {"best_downstream", best},
              {"offline_id", r.offline.chosen_id},
              {"online_id", r.online.chosen_id},
              {"worst_best_ratio", *r.worst_best_ratio}};
}

json cmd_corr(const Report& report) {
  require_downstream(report, "corr");
  const auto rob = report.series.robustness();
  const auto down = report.series.downstream();
  return json{{"spearman", spearman(rob, down)}, {"pearson", pearson(rob, down)}, {"n", rob.size()}};
}

json cmd_seg_eval(const std::vector<fs::path>& pred_paths, const std::vector<fs::path>& mask_paths,
                  TaskMode mode) {
  if (pred_paths.empty() || pred_paths.size() != mask_paths.size()) {
    fail(ErrorCategory::InvalidArgument, "seg-eval needs equally many prediction and mask files");
  }
  json pairs = json::array();
  ConfusionCounts pooled;
  double loss_sum = 0.0;
  std::size_t classes = 0;
  for (std::size_t i = 0; i < pred_paths.size(); ++i) {
    try {
      const PredictionTensor pred = tensor_to_prediction(read_ptns(pred_paths[i]), mode);
      const MaskTensor truth = tensor_to_masks(read_ptns(mask_paths[i]));
      if (i == 0) {
        classes = pred.classes;
        pooled.per_class.assign(classes, ClassCounts{});
      } else if (pred.classes != classes) {
        fail(ErrorCategory::DimensionMismatch, "class count differs from the first pair");
      }
      const ConfusionCounts counts = confusion(binarize(pred), truth, pred.classes);
      const double loss = dice_loss(pred, truth);
      for (std::size_t c = 0; c < classes; ++c) {
        pooled.per_class[c].tp += counts.per_class[c].tp;
        pooled.per_class[c].fp += counts.per_class[c].fp;
        pooled.per_class[c].fn += counts.per_class[c].fn;
        pooled.per_class[c].tn += counts.per_class[c].tn;
      }
      loss_sum += loss;
      pairs.push_back(json{{"pred", pred_paths[i].string()},
                           {"mask", mask_paths[i].string()},
                           {"dice", dice_index(counts, mode)},
                           {"jaccard", jaccard_index(counts, mode)},
                           {"mcc", mcc(counts, mode)},
                           {"dice_loss", loss}});
    } catch (const Error& e) {
      throw Error(e.category(), "pair " + std::to_string(i) + " (" + pred_paths[i].string() + ", " +
                                    mask_paths[i].string() + "): " + e.what());
    }
  }
  return json{{"task", to_string(mode)},
              {"classes", classes},
              {"dice", dice_index(pooled, mode)},
              {"jaccard", jaccard_index(pooled, mode)},
              {"mcc", mcc(pooled, mode)},
              {"mean_dice_loss", loss_sum / static_cast<double>(pred_paths.size())},
              {"pairs", pairs}};
}

AugmentPipeline parse_pipeline(std::string_view name) {
  if (name == "colorjitter") return AugmentPipeline::ColorJitter;
  if (name == "idrid") return AugmentPipeline::Idrid;
  if (name == "imagenet-simple") return AugmentPipeline::ImagenetSimple;
  if (name == "imagenet-advanced") return AugmentPipeline::ImagenetAdvanced;
  fail(ErrorCategory::InvalidArgument, "unknown pipeline '" + std::string(name) + "'");
}

std::string_view to_string(AugmentPipeline p) noexcept {
  switch (p) {
    case AugmentPipeline::ColorJitter:
      return "colorjitter";
    case AugmentPipeline::Idrid:
      return "idrid";
    case AugmentPipeline::ImagenetSimple:
      return "imagenet-simple";
    case AugmentPipeline::ImagenetAdvanced:
      return "imagenet-advanced";
  }
  return "colorjitter";
}

json cmd_augment(const AugmentRequest& req) {
  if (req.images.empty()) fail(ErrorCategory::InvalidArgument, "augment needs at least one image");
  const bool imagenet =
      req.pipeline == AugmentPipeline::ImagenetSimple || req.pipeline == AugmentPipeline::ImagenetAdvanced;
  if (req.pipeline == AugmentPipeline::Idrid && req.masks.size() != req.images.size()) {
    fail(ErrorCategory::MissingData, "idrid pipeline needs one mask per image");
  }
  if (imagenet) {
    if (req.labels.size() != req.images.size()) {
      fail(ErrorCategory::MissingData, "imagenet pipelines need one label per image");
    }
    if (req.classes == 0) fail(ErrorCategory::InvalidArgument, "imagenet pipelines need --classes");
  }
  const std::vector<Image> images = load_images(req.images);
  std::vector<LabelVector> labels;
  for (std::size_t l : req.labels) labels.push_back(one_hot(l, req.classes));

  // Render everything before touching the output directory.
  struct Output {
    fs::path image_path;
    PortableTensor image;
    std::optional<std::pair<fs::path, PortableTensor>> mask;
    std::optional<LabelVector> label;
  };
  std::vector<Output> outputs;
  for (std::size_t i = 0; i < images.size(); ++i) {
    Prng rng(req.seed, stream_key({kAugmentDomain, i}));
    const std::string stem = std::to_string(i) + "_" + req.images[i].stem().string();
    Output o;
    o.image_path = req.out_dir / (stem + ".aug.ptns");
    try {
      switch (req.pipeline) {
        case AugmentPipeline::ColorJitter:
          o.image = image_to_tensor(color_jitter(images[i], JitterParams{}, rng));
          break;
        case AugmentPipeline::Idrid: {
          const Mask mask = tensor_to_mask(read_ptns(req.masks[i]));
          auto [img, m] = rotated_crop_idrid(images[i], mask, rng);
          o.image = image_to_tensor(img);
          o.mask.emplace(req.out_dir / (stem + ".mask.aug.ptns"), mask_to_tensor(m));
          break;
        }
        case AugmentPipeline::ImagenetSimple:
        case AugmentPipeline::ImagenetAdvanced: {
          PretrainAugmentOptions opts;
          opts.paired_sample = [&](Prng& r) {
            const std::size_t j = r.index(images.size());
            return MixedSample{images[j], labels[j]};
          };
          const auto scheme = req.pipeline == AugmentPipeline::ImagenetAdvanced ? PretrainScheme::Advanced
                                                                                : PretrainScheme::Simple;
          MixedSample s = imagenet_augment(images[i], labels[i], scheme, rng, opts);
          o.image = image_to_tensor(s.image);
          o.label = std::move(s.label);
          break;
        }
      }
    } catch (const Error& e) {
      throw Error(e.category(), "image " + std::to_string(i) + " (" + req.images[i].string() + "): " + e.what());
    }
    outputs.push_back(std::move(o));
  }

  std::error_code ec;
  fs::create_directories(req.out_dir, ec);
  if (ec) fail(ErrorCategory::Io, "cannot create '" + req.out_dir.string() + "': " + ec.message());
  json list = json::array();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const Output& o = outputs[i];
    write_ptns(o.image_path, o.image);
    json entry{{"input", req.images[i].string()}, {"image", o.image_path.string()}};
    if (o.mask) {
      write_ptns(o.mask->first, o.mask->second);
      entry["mask"] = o.mask->first.string();
    }
    if (o.label) entry["label"] = *o.label;
    list.push_back(std::move(entry));
  }
  return json{{"pipeline", to_string(req.pipeline)}, {"seed", req.seed}, {"outputs", list}};
}

json cmd_extract(const fs::path& weights, const std::vector<fs::path>& image_paths, Level level,
                 bool pooled, const fs::path& out) {
  if (image_paths.empty()) fail(ErrorCategory::InvalidArgument, "extract needs at least one image");
  const LeveledEncoder enc = tensor_to_encoder(read_ptns(weights), weights.stem().string());
  const std::vector<Image> images = load_images(image_paths);
  PortableTensor t;
  std::vector<FeatureMap> maps;
  for (std::size_t i = 0; i < images.size(); ++i) {
    try {
      maps.push_back(enc.forward(images[i], level));
    } catch (const Error& e) {
      throw Error(e.category(), "image " + std::to_string(i) + ": " + e.what());
    }
  }
  if (pooled) {
    std::vector<Embedding> rows;
    for (const auto& m : maps) rows.push_back(pool_or_flatten(m, true));
    t = stack_embeddings(rows);
  } else {
    t = stack_feature_maps(maps);
  }
  write_ptns(out, t);
  return json{{"weights", weights.string()},
              {"level", to_string(level)},
              {"pooled", pooled},
              {"out", out.string()},
              {"shape", t.dims}};
}

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robustness-based checkpoint selection and segmentation evaluation", "robsel"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string report_path;
  std::string out_path;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  const auto formats = CLI::IsMember({"json", "csv"});

  auto add_common = [&](CLI::App* sub, bool with_seed) {
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    sub->add_option("--format", format, "Output format")->check(formats);
    if (with_seed) sub->add_option("--seed", seed, "Master seed (overrides ROBSEL_SEED and the manifest)");
  };
  auto add_report_source = [&](CLI::App* sub) {
    auto* m = sub->add_option("--manifest", manifest_path, "Run manifest (computes robustness)");
    auto* r = sub->add_option("--report", report_path, "Report produced by `robustness`");
    m->excludes(r);
    r->excludes(m);
  };

  auto* robustness_cmd = app.add_subcommand("robustness", "Score every checkpoint of a manifest");
  robustness_cmd->add_option("--manifest", manifest_path, "Run manifest")->required();
  add_common(robustness_cmd, true);

  std::string mode = "offline";
  bool include_random = false;
  auto* select_cmd = app.add_subcommand("select", "Choose a checkpoint offline or online");
  add_report_source(select_cmd);
  select_cmd->add_option("--mode", mode, "Selection mode")->check(CLI::IsMember({"offline", "online"}))->required();
  select_cmd->add_flag("--include-random-init", include_random, "Let offline selection pick the random init");
  add_common(select_cmd, true);

  auto* tis_cmd = app.add_subcommand("tis", "Transferability indicator score against downstream scores");
  add_report_source(tis_cmd);
  add_common(tis_cmd, true);

  auto* corr_cmd = app.add_subcommand("corr", "Rank correlation of robustness and downstream scores");
  add_report_source(corr_cmd);
  add_common(corr_cmd, true);

  std::string task = "binary";
  std::vector<std::string> preds;
  std::vector<std::string> masks;
  auto* seg_cmd = app.add_subcommand("seg-eval", "Dice, Jaccard, MCC and Dice loss of predictions");
  seg_cmd->add_option("--task", task, "Task type")->check(CLI::IsMember({"binary", "multiclass"}))->required();
  seg_cmd->add_option("--pred", preds, "Prediction tensors")->required();
  seg_cmd->add_option("--mask", masks, "Ground-truth mask tensors")->required();
  add_common(seg_cmd, false);

  std::string pipeline;
  std::vector<std::string> images;
  std::vector<std::size_t> labels;
  std::size_t classes = 0;
  auto* aug_cmd = app.add_subcommand("augment", "Write augmented copies of images");
  aug_cmd->add_option("--pipeline", pipeline, "Augmentation pipeline")
      ->check(CLI::IsMember({"colorjitter", "idrid", "imagenet-simple", "imagenet-advanced"}))
      ->required();
  aug_cmd->add_option("--images", images, "Input image tensors")->required();
  aug_cmd->add_option("--masks", masks, "Masks (idrid)");
  aug_cmd->add_option("--labels", labels, "Class index per image (imagenet-*)");
  aug_cmd->add_option("--classes", classes, "Number of classes (imagenet-*)");
  aug_cmd->add_option("--seed", seed, "Master seed (overrides ROBSEL_SEED)");
  std::string out_dir;
  aug_cmd->add_option("--out", out_dir, "Output directory")->required();
  aug_cmd->add_option("--format", format, "Summary format")->check(formats);

  std::string weights;
  std::string level = "second-to-last";
  bool pooled = false;
  auto* ext_cmd = app.add_subcommand("extract", "Encode images with checkpoint weights");
  ext_cmd->add_option("--weights", weights, "Encoder weights tensor")->required();
  ext_cmd->add_option("--images", images, "Input image tensors")->required();
  ext_cmd->add_option("--level", level, "Encoder level")
      ->check(CLI::IsMember({"last", "second-to-last", "second_to_last"}));
  ext_cmd->add_flag("--pooled", pooled, "Average over spatial axes");
  std::string ext_out;
  ext_cmd->add_option("--out", ext_out, "Output embedding tensor")->required();
  ext_cmd->add_option("--format", format, "Summary format")->check(formats);

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  const std::string name = active->get_name();
  try {
    auto report_source = [&]() -> Report {
      if (!report_path.empty()) return load_report(report_path);
      if (manifest_path.empty()) fail(ErrorCategory::InvalidArgument, "pass --report or --manifest");
      const RunManifest m = load_manifest(manifest_path);
      return cmd_robustness(m, resolve_seed(seed, m.seed));
    };

    std::string text;
    if (name == "robustness") {
      const RunManifest m = load_manifest(manifest_path);
      const Report r = cmd_robustness(m, resolve_seed(seed, m.seed));
      text = format == "csv" ? report_to_csv(r) : report_to_json(r).dump(2) + "\n";
    } else if (name == "select") {
      text = render(cmd_select(report_source(), parse_selection_mode(mode), include_random), format);
    } else if (name == "tis") {
      text = render(cmd_tis(report_source()), format);
    } else if (name == "corr") {
      text = render(cmd_corr(report_source()), format);
    } else if (name == "seg-eval") {
      std::vector<fs::path> p(preds.begin(), preds.end());
      std::vector<fs::path> k(masks.begin(), masks.end());
      text = render(cmd_seg_eval(p, k, parse_task_mode(task)), format);
    } else if (name == "augment") {
      AugmentRequest req;
      req.pipeline = parse_pipeline(pipeline);
      req.images.assign(images.begin(), images.end());
      req.masks.assign(masks.begin(), masks.end());
      req.labels = labels;
      req.classes = classes;
      req.seed = resolve_seed(seed, 0);
      req.out_dir = out_dir;
      text = render(cmd_augment(req), format);
      out_path.clear();
    } else if (name == "extract") {
      text = render(cmd_extract(weights, std::vector<fs::path>(images.begin(), images.end()), parse_level(level),
                                pooled, ext_out),
                    format);
      out_path.clear();
    }
    emit(text, out_path, out);
    return kExitOk;
  } catch (const Error& e) {
    err << "robsel " << name << ": error[" << category_name(e.category()) << "]: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    err << "robsel " << name << ": internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace robsel
