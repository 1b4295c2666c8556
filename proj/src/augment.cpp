#include "robsel/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "robsel/color.hpp"
#include "robsel/error.hpp"

namespace robsel {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void check_labels(const LabelVector& a, const LabelVector& b) {
  if (a.empty() || a.size() != b.size()) {
    fail(ErrorCategory::DimensionMismatch, "label vectors differ in length");
  }
}

void check_same_shape(const Image& a, const Image& b, const char* op) {
  if (!a.same_shape(b)) fail(ErrorCategory::DimensionMismatch, std::string(op) + ": image shapes differ");
}

// Source coordinate of canvas pixel (y, x) under the inverse rotation.
struct RotationMapping {
  double cos_phi;
  double sin_phi;
  double src_cy;
  double src_cx;
  double dst_cy;
  double dst_cx;

  RotationMapping(double phi, std::size_t src_h, std::size_t src_w, std::size_t dst_h,
                  std::size_t dst_w)
      : cos_phi(std::cos(phi)),
        sin_phi(std::sin(phi)),
        src_cy((static_cast<double>(src_h) - 1.0) / 2.0),
        src_cx((static_cast<double>(src_w) - 1.0) / 2.0),
        dst_cy((static_cast<double>(dst_h) - 1.0) / 2.0),
        dst_cx((static_cast<double>(dst_w) - 1.0) / 2.0) {}

  std::pair<double, double> source(double y, double x) const {
    const double dx = x - dst_cx;
    const double dy = y - dst_cy;
    return {src_cy + sin_phi * dx + cos_phi * dy, src_cx + cos_phi * dx - sin_phi * dy};
  }
};

void check_window(std::size_t canvas_h, std::size_t canvas_w, const Box& window) {
  if (window.top + window.height > canvas_h || window.left + window.width > canvas_w) {
    fail(ErrorCategory::InvalidArgument, "rotation window exceeds canvas");
  }
}

}  // namespace

LabelVector one_hot(std::size_t cls, std::size_t num_classes) {
  if (cls >= num_classes) fail(ErrorCategory::InvalidArgument, "class index out of range");
  LabelVector v(num_classes, 0.0);
  v[cls] = 1.0;
  return v;
}

// -- color jitter ------------------------------------------------------------

JitterParams JitterParams::identity() {
  JitterParams p;
  p.brightness = {1.0, 1.0};
  p.contrast = {1.0, 1.0};
  p.saturation = {1.0, 1.0};
  p.hue = {0.0, 0.0};
  return p;
}

void JitterParams::validate() const {
  if (!brightness.contains(1.0) || !contrast.contains(1.0) || !saturation.contains(1.0) ||
      !hue.contains(0.0)) {
    fail(ErrorCategory::InvalidArgument, "jitter range must contain its identity value");
  }
  const double sum = grayscale_weights[0] + grayscale_weights[1] + grayscale_weights[2];
  if (std::abs(sum - 1.0) > 1e-3) fail(ErrorCategory::InvalidArgument, "grayscale weights must sum to 1");
}

JitterDraw sample_jitter(const JitterParams& params, Prng& rng) {
  JitterDraw d;
  d.brightness = rng.uniform(params.brightness.lo, params.brightness.hi);
  d.contrast = rng.uniform(params.contrast.lo, params.contrast.hi);
  d.saturation = rng.uniform(params.saturation.lo, params.saturation.hi);
  d.hue = rng.uniform(params.hue.lo, params.hue.hi);
  return d;
}

Image apply_color_jitter(const Image& img, const JitterDraw& draw,
                         const std::array<double, 3>& w) {
  Image x = img;
  for (double& v : x.pixels) v = clamp01(draw.brightness * v);

  const std::size_t n = x.height * x.width;
  std::vector<double> gray(n);
  double mean = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double* px = &x.pixels[p * 3];
    gray[p] = w[0] * px[0] + w[1] * px[1] + w[2] * px[2];
    mean += gray[p];
  }
  if (n > 0) mean /= static_cast<double>(n);

  for (double& v : x.pixels) v = clamp01(draw.contrast * v + (1.0 - draw.contrast) * mean);

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      double& v = x.pixels[p * 3 + c];
      v = clamp01(draw.saturation * v + (1.0 - draw.saturation) * gray[p]);
    }
  }

  for (std::size_t p = 0; p < n; ++p) {
    double* px = &x.pixels[p * 3];
    Hsv hsv = rgb_to_hsv(Rgb{px[0], px[1], px[2]});
    hsv[0] += draw.hue;
    hsv[0] -= std::floor(hsv[0]);
    const Rgb rgb = hsv_to_rgb(hsv);
    for (std::size_t c = 0; c < 3; ++c) px[c] = clamp01(rgb[c]);
  }
  return x;
}

Image color_jitter(const Image& img, const JitterParams& params, Prng& rng) {
  return apply_color_jitter(img, sample_jitter(params, rng), params.grayscale_weights);
}

Image color_jitter(const Image& img, const JitterParams& params, std::uint64_t seed) {
  Prng rng(seed, 0);
  return color_jitter(img, params, rng);
}

// -- geometry -----------------------------------------------------------------

Image flip_vertical(const Image& img) {
  Image out(img.height, img.width);
  for (std::size_t y = 0; y < img.height; ++y)
    for (std::size_t x = 0; x < img.width; ++x)
      for (std::size_t c = 0; c < 3; ++c) out.at(y, x, c) = img.at(img.height - 1 - y, x, c);
  return out;
}

Mask flip_vertical(const Mask& mask) {
  Mask out(mask.height, mask.width);
  for (std::size_t y = 0; y < mask.height; ++y)
    for (std::size_t x = 0; x < mask.width; ++x) out.at(y, x) = mask.at(mask.height - 1 - y, x);
  return out;
}

Image flip_horizontal(const Image& img) {
  Image out(img.height, img.width);
  for (std::size_t y = 0; y < img.height; ++y)
    for (std::size_t x = 0; x < img.width; ++x)
      for (std::size_t c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y, img.width - 1 - x, c);
  return out;
}

Image crop(const Image& img, const Box& box) {
  if (box.top + box.height > img.height || box.left + box.width > img.width) {
    fail(ErrorCategory::InvalidArgument, "crop box exceeds image");
  }
  Image out(box.height, box.width);
  for (std::size_t y = 0; y < box.height; ++y)
    for (std::size_t x = 0; x < box.width; ++x)
      for (std::size_t c = 0; c < 3; ++c) out.at(y, x, c) = img.at(box.top + y, box.left + x, c);
  return out;
}

Mask crop(const Mask& mask, const Box& box) {
  if (box.top + box.height > mask.height || box.left + box.width > mask.width) {
    fail(ErrorCategory::InvalidArgument, "crop box exceeds mask");
  }
  Mask out(box.height, box.width);
  for (std::size_t y = 0; y < box.height; ++y)
    for (std::size_t x = 0; x < box.width; ++x) out.at(y, x) = mask.at(box.top + y, box.left + x);
  return out;
}

Image resize_bilinear(const Image& img, std::size_t out_h, std::size_t out_w) {
  if (img.height == 0 || img.width == 0 || out_h == 0 || out_w == 0) {
    fail(ErrorCategory::InvalidArgument, "resize of an empty image");
  }
  Image out(out_h, out_w);
  const double sy = static_cast<double>(img.height) / static_cast<double>(out_h);
  const double sx = static_cast<double>(img.width) / static_cast<double>(out_w);
  const double max_y = static_cast<double>(img.height - 1);
  const double max_x = static_cast<double>(img.width - 1);
  for (std::size_t y = 0; y < out_h; ++y) {
    const double fy = std::clamp((static_cast<double>(y) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(fy);
    const std::size_t y1 = std::min(y0 + 1, img.height - 1);
    const double ty = fy - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      const double fx = std::clamp((static_cast<double>(x) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(fx);
      const std::size_t x1 = std::min(x0 + 1, img.width - 1);
      const double tx = fx - static_cast<double>(x0);
      for (std::size_t c = 0; c < 3; ++c) {
        const double top = (1.0 - tx) * img.at(y0, x0, c) + tx * img.at(y0, x1, c);
        const double bot = (1.0 - tx) * img.at(y1, x0, c) + tx * img.at(y1, x1, c);
        out.at(y, x, c) = clamp01((1.0 - ty) * top + ty * bot);
      }
    }
  }
  return out;
}

Image rotate_window(const Image& img, double phi, std::size_t canvas_h, std::size_t canvas_w,
                    const Box& window) {
  check_window(canvas_h, canvas_w, window);
  const RotationMapping map(phi, img.height, img.width, canvas_h, canvas_w);
  const auto h = static_cast<std::ptrdiff_t>(img.height);
  const auto w = static_cast<std::ptrdiff_t>(img.width);
  Image out(window.height, window.width);
  for (std::size_t y = 0; y < window.height; ++y) {
    for (std::size_t x = 0; x < window.width; ++x) {
      const auto [sy, sx] = map.source(static_cast<double>(window.top + y),
                                       static_cast<double>(window.left + x));
      const double fy = std::floor(sy);
      const double fx = std::floor(sx);
      const double ty = sy - fy;
      const double tx = sx - fx;
      const auto y0 = static_cast<std::ptrdiff_t>(fy);
      const auto x0 = static_cast<std::ptrdiff_t>(fx);
      if (y0 + 1 < 0 || y0 >= h || x0 + 1 < 0 || x0 >= w) continue;
      const double wts[4] = {(1 - ty) * (1 - tx), (1 - ty) * tx, ty * (1 - tx), ty * tx};
      const std::ptrdiff_t ys[4] = {y0, y0, y0 + 1, y0 + 1};
      const std::ptrdiff_t xs[4] = {x0, x0 + 1, x0, x0 + 1};
      for (std::size_t c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
          if (ys[k] < 0 || ys[k] >= h || xs[k] < 0 || xs[k] >= w) continue;
          acc += wts[k] * img.at(static_cast<std::size_t>(ys[k]), static_cast<std::size_t>(xs[k]), c);
        }
        out.at(y, x, c) = clamp01(acc);
      }
    }
  }
  return out;
}

Mask rotate_window(const Mask& mask, double phi, std::size_t canvas_h, std::size_t canvas_w,
                   const Box& window) {
  check_window(canvas_h, canvas_w, window);
  const RotationMapping map(phi, mask.height, mask.width, canvas_h, canvas_w);
  const auto h = static_cast<std::ptrdiff_t>(mask.height);
  const auto w = static_cast<std::ptrdiff_t>(mask.width);
  Mask out(window.height, window.width);
  for (std::size_t y = 0; y < window.height; ++y) {
    for (std::size_t x = 0; x < window.width; ++x) {
      const auto [sy, sx] = map.source(static_cast<double>(window.top + y),
                                       static_cast<double>(window.left + x));
      const auto ny = static_cast<std::ptrdiff_t>(std::floor(sy + 0.5));
      const auto nx = static_cast<std::ptrdiff_t>(std::floor(sx + 0.5));
      if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
      out.at(y, x) = mask.at(static_cast<std::size_t>(ny), static_cast<std::size_t>(nx));
    }
  }
  return out;
}

Image rotate(const Image& img, double phi) {
  return rotate_window(img, phi, img.height, img.width, Box{0, 0, img.height, img.width});
}

Mask rotate(const Mask& mask, double phi) {
  return rotate_window(mask, phi, mask.height, mask.width, Box{0, 0, mask.height, mask.width});
}

std::pair<Image, Mask> rotate_flip(const Image& img, const Mask& mask, double phi, bool flip) {
  if (img.height != mask.height || img.width != mask.width) {
    fail(ErrorCategory::DimensionMismatch, "rotate_flip: image and mask shapes differ");
  }
  Image out_img = rotate(img, phi);
  Mask out_mask = rotate(mask, phi);
  if (flip) {
    out_img = flip_vertical(out_img);
    out_mask = flip_vertical(out_mask);
  }
  return {std::move(out_img), std::move(out_mask)};
}

std::pair<Image, Mask> rotate_flip(const Image& img, const Mask& mask, Prng& rng) {
  const double phi = rng.uniform(0.0, std::numbers::pi);
  const bool flip = rng.bernoulli(0.5);
  return rotate_flip(img, mask, phi, flip);
}

std::pair<Image, Mask> rotate_flip(const Image& img, const Mask& mask, std::uint64_t seed) {
  Prng rng(seed, 0);
  return rotate_flip(img, mask, rng);
}

// -- rotated crop ---------------------------------------------------------------

std::size_t idrid_canvas_side(double phi) {
  const double side =
      static_cast<double>(kIdridInput) * (std::abs(std::sin(phi)) + std::abs(std::cos(phi)));
  return static_cast<std::size_t>(std::ceil(side - 1e-9));
}

IdridWindow idrid_window(double phi, double u_h, double u_w) {
  constexpr double in = kIdridInput;
  constexpr double crop_side = kIdridCrop;
  IdridWindow g;
  g.phi = phi;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  g.h0 = crop_side * c * s;
  g.w0 = (in - crop_side * c) * c;
  g.ell = in - crop_side * (s + c);
  g.canvas = idrid_canvas_side(phi);
  g.h = g.h0 + u_h * g.ell;
  g.w = g.w0 + u_w * g.ell;
  const double max_origin = static_cast<double>(g.canvas - kIdridCrop);
  g.window.top = static_cast<std::size_t>(std::floor(std::clamp(g.h, 0.0, max_origin)));
  g.window.left = static_cast<std::size_t>(std::floor(std::clamp(g.w, 0.0, max_origin)));
  g.window.height = kIdridCrop;
  g.window.width = kIdridCrop;
  return g;
}

std::pair<Image, Mask> rotated_crop_idrid(const Image& img, const Mask& mask, Prng& rng,
                                          const JitterParams& jitter) {
  if (img.height != kIdridInput || img.width != kIdridInput || mask.height != kIdridInput ||
      mask.width != kIdridInput) {
    fail(ErrorCategory::DimensionMismatch, "rotated crop expects 448x448 image and mask");
  }
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double u_h = rng.uniform();
  const double u_w = rng.uniform();
  const IdridWindow g = idrid_window(phi, u_h, u_w);
  Image out_img = rotate_window(img, phi, g.canvas, g.canvas, g.window);
  Mask out_mask = rotate_window(mask, phi, g.canvas, g.canvas, g.window);
  if (rng.bernoulli(0.5)) {
    out_img = flip_vertical(out_img);
    out_mask = flip_vertical(out_mask);
  }
  out_img = color_jitter(out_img, jitter, rng);
  return {std::move(out_img), std::move(out_mask)};
}

std::pair<Image, Mask> rotated_crop_idrid(const Image& img, const Mask& mask, std::uint64_t seed,
                                          const JitterParams& jitter) {
  Prng rng(seed, 0);
  return rotated_crop_idrid(img, mask, rng, jitter);
}

// -- pretraining pipeline ----------------------------------------------------------

Box crop_box_for_area(std::size_t h, std::size_t w, double area, double u_top, double u_left) {
  if (!(area > 0.0 && area <= 1.0)) fail(ErrorCategory::InvalidArgument, "crop area must be in (0, 1]");
  const double side = std::sqrt(area);
  Box b;
  b.height = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(side * static_cast<double>(h))), 1, h);
  b.width = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(side * static_cast<double>(w))), 1, w);
  const std::size_t free_h = h - b.height;
  const std::size_t free_w = w - b.width;
  b.top = std::min(free_h, static_cast<std::size_t>(u_top * static_cast<double>(free_h + 1)));
  b.left = std::min(free_w, static_cast<std::size_t>(u_left * static_cast<double>(free_w + 1)));
  return b;
}

Image random_resized_crop(const Image& img, Prng& rng, std::size_t out) {
  if (img.height == 0 || img.width == 0) fail(ErrorCategory::InvalidArgument, "empty image");
  const double area = rng.uniform(0.8, 1.0);
  const double u_top = rng.uniform();
  const double u_left = rng.uniform();
  const Box box = crop_box_for_area(img.height, img.width, area, u_top, u_left);
  return resize_bilinear(crop(img, box), out, out);
}

Image random_resized_crop(const Image& img, std::uint64_t seed, std::size_t out) {
  Prng rng(seed, 0);
  return random_resized_crop(img, rng, out);
}

MixedSample mixup(const Image& img1, const Image& img2, const LabelVector& lab1,
                  const LabelVector& lab2, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail(ErrorCategory::InvalidArgument, "mixup lambda outside [0, 1]");
  check_same_shape(img1, img2, "mixup");
  check_labels(lab1, lab2);
  MixedSample out{Image(img1.height, img1.width), LabelVector(lab1.size())};
  for (std::size_t k = 0; k < img1.pixels.size(); ++k) {
    out.image.pixels[k] = clamp01(lambda * img1.pixels[k] + (1.0 - lambda) * img2.pixels[k]);
  }
  for (std::size_t k = 0; k < lab1.size(); ++k) out.label[k] = lambda * lab1[k] + (1.0 - lambda) * lab2[k];
  return out;
}

MixedSample cutmix_with_box(const Image& img1, const Image& img2, const LabelVector& lab1,
                            const LabelVector& lab2, const Box& box) {
  check_same_shape(img1, img2, "cutmix");
  check_labels(lab1, lab2);
  if (box.top + box.height > img1.height || box.left + box.width > img1.width) {
    fail(ErrorCategory::InvalidArgument, "cutmix box exceeds image");
  }
  MixedSample out{img1, LabelVector(lab1.size())};
  for (std::size_t y = box.top; y < box.top + box.height; ++y)
    for (std::size_t x = box.left; x < box.left + box.width; ++x)
      for (std::size_t c = 0; c < 3; ++c) out.image.at(y, x, c) = img2.at(y, x, c);
  const double total = static_cast<double>(img1.height * img1.width);
  const double frac = total > 0.0 ? static_cast<double>(box.area()) / total : 0.0;
  for (std::size_t k = 0; k < lab1.size(); ++k) out.label[k] = (1.0 - frac) * lab1[k] + frac * lab2[k];
  return out;
}

Box cutmix_box(std::size_t h, std::size_t w, Prng& rng) {
  const double lambda = rng.beta(1.0, 1.0);
  const double ratio = std::sqrt(1.0 - lambda);
  const auto cut_h = static_cast<std::size_t>(static_cast<double>(h) * ratio);
  const auto cut_w = static_cast<std::size_t>(static_cast<double>(w) * ratio);
  const std::size_t cy = rng.index(h);
  const std::size_t cx = rng.index(w);
  const std::size_t y1 = cy > cut_h / 2 ? cy - cut_h / 2 : 0;
  const std::size_t x1 = cx > cut_w / 2 ? cx - cut_w / 2 : 0;
  const std::size_t y2 = std::min(h, cy + cut_h / 2);
  const std::size_t x2 = std::min(w, cx + cut_w / 2);
  return Box{y1, x1, y2 - y1, x2 - x1};
}

MixedSample cutmix(const Image& img1, const Image& img2, const LabelVector& lab1,
                   const LabelVector& lab2, Prng& rng) {
  check_same_shape(img1, img2, "cutmix");
  return cutmix_with_box(img1, img2, lab1, lab2, cutmix_box(img1.height, img1.width, rng));
}

MixedSample cutmix(const Image& img1, const Image& img2, const LabelVector& lab1,
                   const LabelVector& lab2, std::uint64_t seed) {
  Prng rng(seed, 0);
  return cutmix(img1, img2, lab1, lab2, rng);
}

Box erasing_box(std::size_t h, std::size_t w, double area, double aspect, double u_top,
                double u_left) {
  const double rel_h = std::min(1.0, std::sqrt(area * aspect));
  const double rel_w = std::min(1.0, std::sqrt(area / aspect));
  Box b;
  b.height = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(rel_h * static_cast<double>(h))), 1, h);
  b.width = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(rel_w * static_cast<double>(w))), 1, w);
  const std::size_t free_h = h - b.height;
  const std::size_t free_w = w - b.width;
  b.top = std::min(free_h, static_cast<std::size_t>(u_top * static_cast<double>(free_h + 1)));
  b.left = std::min(free_w, static_cast<std::size_t>(u_left * static_cast<double>(free_w + 1)));
  return b;
}

Image erase(const Image& img, const Box& box) {
  if (box.top + box.height > img.height || box.left + box.width > img.width) {
    fail(ErrorCategory::InvalidArgument, "erase box exceeds image");
  }
  Image out = img;
  for (std::size_t y = box.top; y < box.top + box.height; ++y)
    for (std::size_t x = box.left; x < box.left + box.width; ++x)
      for (std::size_t c = 0; c < 3; ++c) out.at(y, x, c) = 0.0;
  return out;
}

Image random_erasing(const Image& img, Prng& rng) {
  const double psi = rng.uniform();
  if (psi > 0.25 || img.height == 0 || img.width == 0) return img;
  const double area = rng.uniform(0.02, 0.33);
  const double aspect = rng.uniform(0.3, 3.3);
  const double u_top = rng.uniform();
  const double u_left = rng.uniform();
  return erase(img, erasing_box(img.height, img.width, area, aspect, u_top, u_left));
}

Image random_erasing(const Image& img, std::uint64_t seed) {
  Prng rng(seed, 0);
  return random_erasing(img, rng);
}

LabelVector smooth_label(const LabelVector& label, double eps) {
  if (label.empty()) fail(ErrorCategory::InvalidArgument, "empty label");
  const double uniform_mass = eps / static_cast<double>(label.size());
  LabelVector out(label.size());
  for (std::size_t k = 0; k < label.size(); ++k) out[k] = (1.0 - eps) * label[k] + uniform_mass;
  return out;
}

MixBranch mixing_branch(double xi) noexcept {
  if (xi <= 0.5) return MixBranch::CutMix;
  if (xi <= 0.9) return MixBranch::Mixup;
  return MixBranch::None;
}

MixedSample imagenet_augment(const Image& img, const LabelVector& label, PretrainScheme scheme,
                             Prng& rng, const PretrainAugmentOptions& options) {
  if (scheme == PretrainScheme::Advanced && !options.paired_sample) {
    fail(ErrorCategory::InvalidArgument, "advanced augmentation needs a paired-sample provider");
  }
  MixedSample s{random_resized_crop(img, rng, options.out_size), label};
  if (rng.bernoulli(0.5)) s.image = flip_horizontal(s.image);

  if (scheme == PretrainScheme::Advanced) {
    if (options.policy) s.image = options.policy(s.image, rng);
    const double xi = rng.uniform();
    const MixBranch branch = mixing_branch(xi);
    if (branch != MixBranch::None) {
      MixedSample other = options.paired_sample(rng);
      if (!other.image.same_shape(s.image)) {
        other.image = resize_bilinear(other.image, s.image.height, s.image.width);
      }
      if (branch == MixBranch::CutMix) {
        s = cutmix(s.image, other.image, s.label, other.label, rng);
      } else {
        const double lambda = rng.beta(options.mixup_alpha, options.mixup_alpha);
        s = mixup(s.image, other.image, s.label, other.label, lambda);
      }
    }
    s.image = random_erasing(s.image, rng);
  }
  s.label = smooth_label(s.label, options.label_smoothing);
  return s;
}

MixedSample imagenet_augment(const Image& img, const LabelVector& label, PretrainScheme scheme,
                             std::uint64_t seed, const PretrainAugmentOptions& options) {
  Prng rng(seed, 0);
  return imagenet_augment(img, label, scheme, rng, options);
}

}  // namespace robsel
