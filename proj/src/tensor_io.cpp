#include "robsel/tensor_io.hpp"

#include <cmath>
#include <string>

#include "robsel/error.hpp"

namespace robsel {

namespace {

std::string shape_string(const PortableTensor& t) {
  std::string s = "[";
  for (std::size_t k = 0; k < t.dims.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(t.dims[k]);
  }
  return s + "]";
}

[[noreturn]] void bad_shape(const PortableTensor& t, const char* expected) {
  fail(ErrorCategory::DimensionMismatch,
       "tensor shape " + shape_string(t) + " does not match " + expected);
}

void require_float(const PortableTensor& t, const char* what) {
  if (t.dtype != DType::Float32) {
    fail(ErrorCategory::FileFormat, std::string(what) + " must be float32");
  }
}

std::int32_t label_at(const PortableTensor& t, std::size_t i) {
  const double v = t.value(i);
  if (!(v >= 0.0) || v != std::floor(v) || v > 255.0) {
    fail(ErrorCategory::FileFormat, "mask value at " + std::to_string(i) + " is not a class index");
  }
  return static_cast<std::int32_t>(v);
}

std::uint32_t u32(std::size_t v) { return static_cast<std::uint32_t>(v); }

}  // namespace

PortableTensor image_to_tensor(const Image& img) {
  std::vector<float> v(img.pixels.begin(), img.pixels.end());
  return PortableTensor::float32({u32(img.height), u32(img.width), 3}, std::move(v));
}

Image tensor_to_image(const PortableTensor& t) {
  if (t.rank() != 3 || t.dims[2] != 3 || t.dims[0] == 0 || t.dims[1] == 0) bad_shape(t, "[H, W, 3]");
  Image img(t.dims[0], t.dims[1]);
  const double scale = t.dtype == DType::UInt8 ? 1.0 / 255.0 : 1.0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double v = t.value(i) * scale;
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(ErrorCategory::FileFormat, "pixel value at " + std::to_string(i) + " outside [0, 1]");
    }
    img.pixels[i] = v;
  }
  return img;
}

PortableTensor mask_to_tensor(const Mask& mask) {
  std::vector<std::uint8_t> v(mask.labels.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint8_t>(mask.labels[i]);
  return PortableTensor::uint8({u32(mask.height), u32(mask.width)}, std::move(v));
}

Mask tensor_to_mask(const PortableTensor& t) {
  if (t.rank() != 2) bad_shape(t, "[H, W]");
  Mask m(t.dims[0], t.dims[1]);
  for (std::size_t i = 0; i < m.labels.size(); ++i) m.labels[i] = label_at(t, i);
  return m;
}

MaskTensor tensor_to_masks(const PortableTensor& t) {
  MaskTensor m;
  if (t.rank() == 2) {
    m.batch = 1;
    m.height = t.dims[0];
    m.width = t.dims[1];
  } else if (t.rank() == 3) {
    m.batch = t.dims[0];
    m.height = t.dims[1];
    m.width = t.dims[2];
  } else {
    bad_shape(t, "[B, H, W]");
  }
  m.labels.resize(t.element_count());
  for (std::size_t i = 0; i < m.labels.size(); ++i) m.labels[i] = label_at(t, i);
  return m;
}

PortableTensor masks_to_tensor(const MaskTensor& m) {
  std::vector<std::uint8_t> v(m.labels.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::uint8_t>(m.labels[i]);
  return PortableTensor::uint8({u32(m.batch), u32(m.height), u32(m.width)}, std::move(v));
}

PredictionTensor tensor_to_prediction(const PortableTensor& t, TaskMode mode) {
  require_float(t, "prediction tensor");
  PredictionTensor p;
  p.mode = mode;
  if (mode == TaskMode::Binary) {
    if (t.rank() == 2) {
      p.batch = 1;
      p.height = t.dims[0];
      p.width = t.dims[1];
    } else if (t.rank() == 3) {
      p.batch = t.dims[0];
      p.height = t.dims[1];
      p.width = t.dims[2];
    } else {
      bad_shape(t, "[B, H, W] binary prediction");
    }
    p.classes = 2;
  } else {
    if (t.rank() == 3) {
      p.batch = 1;
      p.height = t.dims[0];
      p.width = t.dims[1];
      p.classes = t.dims[2];
    } else if (t.rank() == 4) {
      p.batch = t.dims[0];
      p.height = t.dims[1];
      p.width = t.dims[2];
      p.classes = t.dims[3];
    } else {
      bad_shape(t, "[B, H, W, K] multiclass prediction");
    }
  }
  p.probs.assign(t.f32.begin(), t.f32.end());
  p.validate();
  return p;
}

PortableTensor prediction_to_tensor(const PredictionTensor& p) {
  std::vector<float> v(p.probs.begin(), p.probs.end());
  if (p.mode == TaskMode::Binary) {
    return PortableTensor::float32({u32(p.batch), u32(p.height), u32(p.width)}, std::move(v));
  }
  return PortableTensor::float32({u32(p.batch), u32(p.height), u32(p.width), u32(p.classes)},
                                 std::move(v));
}

PortableTensor encoder_to_tensor(const LeveledEncoder& enc) {
  auto params = enc.parameters();
  const auto n = u32(params.size());
  return PortableTensor::float32({n}, std::move(params));
}

LeveledEncoder tensor_to_encoder(const PortableTensor& t, std::string checkpoint_id) {
  require_float(t, "encoder weights");
  if (t.rank() != 1) bad_shape(t, "[P] encoder parameter vector");
  return LeveledEncoder::from_parameters(t.f32, std::move(checkpoint_id));
}

std::pair<std::vector<Embedding>, std::vector<Embedding>> tensor_to_embedding_pairs(
    const PortableTensor& t, bool pooled) {
  require_float(t, "embedding tensor");
  if ((t.rank() != 3 && t.rank() != 5) || t.dims[1] != 2) {
    bad_shape(t, "[N, 2, D] or [N, 2, C, H, W]");
  }
  const std::size_t n = t.dims[0];
  const std::size_t row = t.element_count() / (n == 0 ? 1 : n * 2);
  if (row == 0) bad_shape(t, "non-empty embeddings");
  std::pair<std::vector<Embedding>, std::vector<Embedding>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t base = (i * 2 + j) * row;
      Embedding e;
      if (t.rank() == 5) {
        FeatureMap fm(t.dims[2], t.dims[3], t.dims[4]);
        for (std::size_t k = 0; k < row; ++k) fm.values[k] = t.f32[base + k];
        e = pool_or_flatten(fm, pooled);
      } else {
        e.assign(t.f32.begin() + static_cast<std::ptrdiff_t>(base),
                 t.f32.begin() + static_cast<std::ptrdiff_t>(base + row));
      }
      (j == 0 ? out.first : out.second).push_back(std::move(e));
    }
  }
  return out;
}

PortableTensor embedding_pairs_to_tensor(const std::vector<Embedding>& queries,
                                         const std::vector<Embedding>& positives) {
  if (queries.size() != positives.size() || queries.empty()) {
    fail(ErrorCategory::DimensionMismatch, "embedding pair lists differ in length");
  }
  const std::size_t d = queries.front().size();
  std::vector<float> v;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (queries[i].size() != d || positives[i].size() != d) {
      fail(ErrorCategory::DimensionMismatch, "embedding dims differ");
    }
    v.insert(v.end(), queries[i].begin(), queries[i].end());
    v.insert(v.end(), positives[i].begin(), positives[i].end());
  }
  return PortableTensor::float32({u32(queries.size()), 2, u32(d)}, std::move(v));
}

PortableTensor stack_embeddings(const std::vector<Embedding>& rows) {
  if (rows.empty()) fail(ErrorCategory::InvalidArgument, "no embeddings to stack");
  const std::size_t d = rows.front().size();
  std::vector<float> v;
  for (const auto& r : rows) {
    if (r.size() != d) fail(ErrorCategory::DimensionMismatch, "embedding dims differ");
    v.insert(v.end(), r.begin(), r.end());
  }
  return PortableTensor::float32({u32(rows.size()), u32(d)}, std::move(v));
}

PortableTensor stack_feature_maps(const std::vector<FeatureMap>& maps) {
  if (maps.empty()) fail(ErrorCategory::InvalidArgument, "no feature maps to stack");
  const auto& f = maps.front();
  std::vector<float> v;
  for (const auto& m : maps) {
    if (m.channels != f.channels || m.height != f.height || m.width != f.width) {
      fail(ErrorCategory::DimensionMismatch, "feature map shapes differ");
    }
    v.insert(v.end(), m.values.begin(), m.values.end());
  }
  return PortableTensor::float32({u32(maps.size()), u32(f.channels), u32(f.height), u32(f.width)},
                                 std::move(v));
}

}  // namespace robsel
