#include "robsel/manifest.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

#include "robsel/error.hpp"

namespace robsel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
T field(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) {
    fail(ErrorCategory::FileFormat, std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCategory::FileFormat, std::string(where) + ": field '" + key + "': " + e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 10);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCategory::InvalidArgument, std::string(what) + " is not an unsigned 64-bit integer: '" +
                                             text + "'");
  }
}

}  // namespace

json config_to_json(const RobustnessConfig& cfg) {
  return json{{"distance", to_string(cfg.distance)},
              {"margin", cfg.margin},
              {"level", to_string(cfg.level)},
              {"pooled", cfg.pooled}};
}

RobustnessConfig config_from_json(const json& j) {
  RobustnessConfig cfg;
  if (!j.is_object()) fail(ErrorCategory::FileFormat, "config must be an object");
  if (j.contains("distance")) cfg.distance = parse_distance(field<std::string>(j, "distance", "config"));
  if (j.contains("margin")) cfg.margin = field<double>(j, "margin", "config");
  if (j.contains("level")) cfg.level = parse_level(field<std::string>(j, "level", "config"));
  if (j.contains("pooled")) cfg.pooled = field<bool>(j, "pooled", "config");
  cfg.validate();
  return cfg;
}

void RunManifest::validate() const {
  config.validate();
  if (images.size() < 2 && std::any_of(checkpoints.begin(), checkpoints.end(),
                                       [](const auto& c) { return c.weights.has_value(); })) {
    fail(ErrorCategory::InvalidArgument, "manifest needs at least two images");
  }
  for (const auto& img : images) {
    if (!fs::exists(img)) fail(ErrorCategory::MissingData, "image file not found: " + img.string());
  }
  if (checkpoints.empty()) fail(ErrorCategory::InvalidArgument, "manifest lists no checkpoints");
  std::set<std::string> ids;
  std::size_t random_count = 0;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const auto& c = checkpoints[i];
    if (!ids.insert(c.id).second) fail(ErrorCategory::InvalidArgument, "duplicate checkpoint id '" + c.id + "'");
    if (i > 0 && c.epoch <= checkpoints[i - 1].epoch) {
      fail(ErrorCategory::InvalidArgument, "checkpoint epochs must strictly increase (at '" + c.id + "')");
    }
    if (c.random_init) ++random_count;
    if (c.weights.has_value() == c.embeddings.has_value()) {
      fail(ErrorCategory::MissingData,
           "checkpoint '" + c.id + "' must name exactly one of weights or embeddings");
    }
    const fs::path& p = c.weights ? *c.weights : *c.embeddings;
    if (!fs::exists(p)) {
      fail(ErrorCategory::MissingData, "checkpoint '" + c.id + "': file not found: " + p.string());
    }
  }
  if (random_count > 1) fail(ErrorCategory::InvalidArgument, "at most one checkpoint may be random_init");
}

RunManifest parse_manifest(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) fail(ErrorCategory::FileFormat, "manifest must be a JSON object");
  RunManifest m;
  if (j.contains("config")) {
    const json& c = j.at("config");
    m.config = config_from_json(c);
    if (c.contains("seed")) {
      const json& s = c.at("seed");
      if (s.is_string()) {
        m.seed = parse_u64(s.get<std::string>(), "config.seed");
      } else if (s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
        m.seed = s.get<std::uint64_t>();
      } else {
        fail(ErrorCategory::FileFormat, "config.seed must be an unsigned integer");
      }
    }
  }
  if (j.contains("task")) {
    const json& t = j.at("task");
    m.task = parse_task_mode(field<std::string>(t, "mode", "task"));
    m.classes = t.contains("classes") ? field<std::size_t>(t, "classes", "task") : 1;
    if (m.classes == 0) fail(ErrorCategory::InvalidArgument, "task.classes must be >= 1");
    if (m.task == TaskMode::Binary && m.classes != 1) {
      fail(ErrorCategory::InvalidArgument, "binary tasks have exactly one foreground class");
    }
  }
  for (const auto& p : field<std::vector<std::string>>(j, "images", "manifest")) {
    m.images.push_back(resolve(base_dir, p));
  }
  const json& cks = j.contains("checkpoints") ? j.at("checkpoints") : json();
  if (!cks.is_array()) fail(ErrorCategory::FileFormat, "manifest: 'checkpoints' must be an array");
  for (const json& c : cks) {
    ManifestCheckpoint ck;
    ck.id = field<std::string>(c, "id", "checkpoint");
    ck.epoch = field<int>(c, "epoch", "checkpoint");
    ck.random_init = c.contains("random_init") && field<bool>(c, "random_init", "checkpoint");
    if (c.contains("weights")) ck.weights = resolve(base_dir, field<std::string>(c, "weights", "checkpoint"));
    if (c.contains("embeddings")) {
      ck.embeddings = resolve(base_dir, field<std::string>(c, "embeddings", "checkpoint"));
    }
    if (c.contains("downstream") && !c.at("downstream").is_null()) {
      ck.downstream = field<double>(c, "downstream", "checkpoint");
    }
    m.checkpoints.push_back(std::move(ck));
  }
  m.validate();
  return m;
}

RunManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::Io, "cannot open manifest '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::FileFormat, path.string() + ": " + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

json manifest_to_json(const RunManifest& m) {
  json cfg = config_to_json(m.config);
  cfg["seed"] = m.seed;
  json images = json::array();
  for (const auto& p : m.images) images.push_back(p.string());
  json cks = json::array();
  for (const auto& c : m.checkpoints) {
    json e{{"id", c.id}, {"epoch", c.epoch}, {"random_init", c.random_init}};
    if (c.weights) e["weights"] = c.weights->string();
    if (c.embeddings) e["embeddings"] = c.embeddings->string();
    if (c.downstream) e["downstream"] = *c.downstream;
    cks.push_back(std::move(e));
  }
  return json{{"config", cfg},
              {"task", {{"mode", to_string(m.task)}, {"classes", m.classes}}},
              {"images", images},
              {"checkpoints", cks}};
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t manifest_seed) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    return parse_u64(env, kSeedEnvVar);
  }
  return manifest_seed;
}

}  // namespace robsel
