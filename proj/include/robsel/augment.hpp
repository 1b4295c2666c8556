#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "robsel/image.hpp"
#include "robsel/prng.hpp"

namespace robsel {

/// Class probability vector, nonnegative and summing to one.
using LabelVector = std::vector<double>;

LabelVector one_hot(std::size_t cls, std::size_t num_classes);

// ---------------------------------------------------------------------------
// Color jitter

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct JitterParams {
  Interval brightness{0.9, 1.1};
  Interval contrast{0.95, 1.05};
  Interval saturation{0.9, 1.1};
  Interval hue{-0.05, 0.05};
  std::array<double, 3> grayscale_weights{0.2989, 0.587, 0.114};

  /// Jitter that always draws the identity parameters.
  static JitterParams identity();

  /// Throws when a range misses its identity value or the weights do not
  /// sum to one (within 1e-3, the listed weights sum to 0.9999).
  void validate() const;
};

/// One realization of the four jitter factors.
struct JitterDraw {
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  double hue = 0.0;
};

/// Draws brightness, contrast, saturation, hue in that order.
JitterDraw sample_jitter(const JitterParams& params, Prng& rng);

/// Brightness scale, grayscale by the weights, contrast blend toward the mean
/// gray level, saturation blend toward the grayscale image, hue shift mod 1.
/// Values are clamped to [0, 1] after every blend.
Image apply_color_jitter(const Image& img, const JitterDraw& draw,
                         const std::array<double, 3>& grayscale_weights = {0.2989, 0.587, 0.114});

Image color_jitter(const Image& img, const JitterParams& params, Prng& rng);
Image color_jitter(const Image& img, const JitterParams& params, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Geometry

struct Box {
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t area() const { return height * width; }
  friend bool operator==(const Box&, const Box&) = default;
};

Image flip_vertical(const Image& img);
Mask flip_vertical(const Mask& mask);
Image flip_horizontal(const Image& img);

Image crop(const Image& img, const Box& box);
Mask crop(const Mask& mask, const Box& box);

/// Half-pixel-centre bilinear resize.
Image resize_bilinear(const Image& img, std::size_t out_h, std::size_t out_w);

/// Places a rotation by `phi` (counter-clockwise as displayed) on a
/// canvas_h x canvas_w canvas whose centre coincides with the source centre,
/// and extracts `window` of that canvas. Pixels that fall outside the source
/// are zero.
Image rotate_window(const Image& img, double phi, std::size_t canvas_h, std::size_t canvas_w,
                    const Box& window);
/// Nearest-neighbour variant for label masks (outside = background 0).
Mask rotate_window(const Mask& mask, double phi, std::size_t canvas_h, std::size_t canvas_w,
                   const Box& window);

/// Rotation about the centre keeping the input size.
Image rotate(const Image& img, double phi);
Mask rotate(const Mask& mask, double phi);

/// Rotation by phi followed by an optional vertical flip, applied jointly.
std::pair<Image, Mask> rotate_flip(const Image& img, const Mask& mask, double phi, bool flip);
/// phi ~ U([0, pi]), flip with probability 0.5.
std::pair<Image, Mask> rotate_flip(const Image& img, const Mask& mask, Prng& rng);
std::pair<Image, Mask> rotate_flip(const Image& img, const Mask& mask, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Rotated crop for 448 x 448 fundus slices

inline constexpr std::size_t kIdridInput = 448;
inline constexpr std::size_t kIdridCrop = 224;

struct IdridWindow {
  double phi = 0.0;
  double h0 = 0.0;
  double w0 = 0.0;
  double ell = 0.0;
  std::size_t canvas = 0;  ///< side of the padded rotated canvas
  double h = 0.0;          ///< sampled top coordinate before clamping
  double w = 0.0;          ///< sampled left coordinate before clamping
  Box window;              ///< clamped crop window in canvas coordinates
};

/// Padded canvas side ceil(448 (|sin phi| + |cos phi|)).
std::size_t idrid_canvas_side(double phi);

/// Window geometry for angle phi, with h = h0 + u_h * ell and
/// w = w0 + u_w * ell, then clamped into [0, canvas - 224].
IdridWindow idrid_window(double phi, double u_h, double u_w);

std::pair<Image, Mask> rotated_crop_idrid(const Image& img, const Mask& mask, Prng& rng,
                                          const JitterParams& jitter = {});
std::pair<Image, Mask> rotated_crop_idrid(const Image& img, const Mask& mask, std::uint64_t seed,
                                          const JitterParams& jitter = {});

// ---------------------------------------------------------------------------
// ImageNet-style pipeline pieces

inline constexpr std::size_t kPretrainSize = 224;

/// Crop of relative area `area` keeping the source aspect ratio; the offset
/// is floor(u * (free + 1)) along each axis.
Box crop_box_for_area(std::size_t h, std::size_t w, double area, double u_top, double u_left);

/// A ~ U([0.8, 1]) crop then bilinear resize to out x out.
Image random_resized_crop(const Image& img, Prng& rng, std::size_t out = kPretrainSize);
Image random_resized_crop(const Image& img, std::uint64_t seed, std::size_t out = kPretrainSize);

struct MixedSample {
  Image image;
  LabelVector label;
};

MixedSample mixup(const Image& img1, const Image& img2, const LabelVector& lab1,
                  const LabelVector& lab2, double lambda);

/// img1 with `box` replaced by img2; labels mixed by the box's area fraction.
MixedSample cutmix_with_box(const Image& img1, const Image& img2, const LabelVector& lab1,
                            const LabelVector& lab2, const Box& box);

/// Box from lambda ~ Beta(1, 1): side ratio sqrt(1 - lambda), uniform centre,
/// clipped to the image.
Box cutmix_box(std::size_t h, std::size_t w, Prng& rng);

MixedSample cutmix(const Image& img1, const Image& img2, const LabelVector& lab1,
                   const LabelVector& lab2, Prng& rng);
MixedSample cutmix(const Image& img1, const Image& img2, const LabelVector& lab1,
                   const LabelVector& lab2, std::uint64_t seed);

/// Erased rectangle for relative size S and aspect r: h = sqrt(S r),
/// w = sqrt(S / r), each clamped to 1.
Box erasing_box(std::size_t h, std::size_t w, double area, double aspect, double u_top,
                double u_left);

Image erase(const Image& img, const Box& box);

/// With probability 0.25 blackens a rectangle, S ~ U([0.02, 0.33]),
/// r ~ U([0.3, 3.3]).
Image random_erasing(const Image& img, Prng& rng);
Image random_erasing(const Image& img, std::uint64_t seed);

/// (1 - eps) y + eps / K.
LabelVector smooth_label(const LabelVector& label, double eps = 0.1);

enum class PretrainScheme { Simple, Advanced };

enum class MixBranch { CutMix, Mixup, None };

/// xi <= 0.5 -> CutMix, xi <= 0.9 -> mixup, otherwise none.
MixBranch mixing_branch(double xi) noexcept;

struct PretrainAugmentOptions {
  /// Supplies the second (image, label) pair for mixing; required for the
  /// advanced scheme.
  std::function<MixedSample(Prng&)> paired_sample;
  /// Policy slot ahead of mixing. Identity when empty.
  std::function<Image(const Image&, Prng&)> policy;
  double mixup_alpha = 0.8;
  double label_smoothing = 0.1;
  std::size_t out_size = kPretrainSize;
};

MixedSample imagenet_augment(const Image& img, const LabelVector& label, PretrainScheme scheme,
                             Prng& rng, const PretrainAugmentOptions& options = {});
MixedSample imagenet_augment(const Image& img, const LabelVector& label, PretrainScheme scheme,
                             std::uint64_t seed, const PretrainAugmentOptions& options = {});

}  // namespace robsel
