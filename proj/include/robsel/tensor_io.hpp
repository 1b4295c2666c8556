#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "robsel/encoder.hpp"
#include "robsel/image.hpp"
#include "robsel/ptns.hpp"
#include "robsel/robustness.hpp"
#include "robsel/seg_eval.hpp"

namespace robsel {

// Conversions between domain types and portable tensors. Shapes:
//   image        float32 [H, W, 3] in [0, 1]   (uint8 [H, W, 3] read as v / 255)
//   mask         uint8   [H, W]
//   masks        uint8   [B, H, W]             ([H, W] read as B = 1)
//   prediction   float32 [B, H, W] binary, [B, H, W, K] multiclass
//   encoder      float32 [P], P = LeveledEncoder::parameter_count()
//   embeddings   float32 [N, 2, D] or [N, 2, C, H, W]; index 1 selects query (0)
//                or positive key (1)

PortableTensor image_to_tensor(const Image& img);
Image tensor_to_image(const PortableTensor& t);

PortableTensor mask_to_tensor(const Mask& mask);
Mask tensor_to_mask(const PortableTensor& t);

MaskTensor tensor_to_masks(const PortableTensor& t);
PortableTensor masks_to_tensor(const MaskTensor& m);

PredictionTensor tensor_to_prediction(const PortableTensor& t, TaskMode mode);
PortableTensor prediction_to_tensor(const PredictionTensor& p);

PortableTensor encoder_to_tensor(const LeveledEncoder& enc);
LeveledEncoder tensor_to_encoder(const PortableTensor& t, std::string checkpoint_id);

/// (queries, positives) from an embedding tensor; rank-5 feature maps are
/// pooled or flattened per `pooled`.
std::pair<std::vector<Embedding>, std::vector<Embedding>> tensor_to_embedding_pairs(
    const PortableTensor& t, bool pooled);
PortableTensor embedding_pairs_to_tensor(const std::vector<Embedding>& queries,
                                         const std::vector<Embedding>& positives);

/// [N, D] or [N, C, H, W] stack of per-image embeddings or feature maps.
PortableTensor stack_embeddings(const std::vector<Embedding>& rows);
PortableTensor stack_feature_maps(const std::vector<FeatureMap>& maps);

}  // namespace robsel
