#include "robsel/color.hpp"

#include <algorithm>
#include <cmath>

namespace robsel {

Hsv rgb_to_hsv(const Rgb& rgb) noexcept {
  const auto [r, g, b] = rgb;
  const double maxc = std::max({r, g, b});
  const double minc = std::min({r, g, b});
  const double v = maxc;
  if (maxc == minc) return {0.0, 0.0, v};
  const double delta = maxc - minc;
  const double s = delta / maxc;
  const double rc = (maxc - r) / delta;
  const double gc = (maxc - g) / delta;
  const double bc = (maxc - b) / delta;
  double h = 0.0;
  if (r == maxc) {
    h = bc - gc;
  } else if (g == maxc) {
    h = 2.0 + rc - bc;
  } else {
    h = 4.0 + gc - rc;
  }
  h /= 6.0;
  h -= std::floor(h);
  return {h, s, v};
}

Rgb hsv_to_rgb(const Hsv& hsv) noexcept {
  const auto [h, s, v] = hsv;
  if (s == 0.0) return {v, v, v};
  const double h6 = (h - std::floor(h)) * 6.0;
  const auto sector = static_cast<int>(h6) % 6;
  const double f = h6 - std::floor(h6);
  const double p = v * (1.0 - s);
  const double q = v * (1.0 - s * f);
  const double t = v * (1.0 - s * (1.0 - f));
  switch (sector) {
    case 0:
      return {v, t, p};
    case 1:
      return {q, v, p};
    case 2:
      return {p, v, t};
    case 3:
      return {p, q, v};
    case 4:
      return {t, p, v};
    default:
      return {v, p, q};
  }
}

namespace {

template <typename Fn>
Image map_pixels(const Image& img, Fn fn) {
  Image out(img.height, img.width);
  for (std::size_t k = 0; k < img.pixels.size(); k += 3) {
    const auto px = fn(std::array<double, 3>{img.pixels[k], img.pixels[k + 1], img.pixels[k + 2]});
    out.pixels[k] = px[0];
    out.pixels[k + 1] = px[1];
    out.pixels[k + 2] = px[2];
  }
  return out;
}

}  // namespace

Image rgb_to_hsv(const Image& img) {
  return map_pixels(img, [](const Rgb& p) { return rgb_to_hsv(p); });
}

Image hsv_to_rgb(const Image& img) {
  return map_pixels(img, [](const Hsv& p) { return hsv_to_rgb(p); });
}

}  // namespace robsel
