#pragma once

#include <array>

#include "robsel/image.hpp"

namespace robsel {

using Rgb = std::array<double, 3>;
using Hsv = std::array<double, 3>;

/// Hue in [0, 1), saturation and value in [0, 1]. Gray pixels get hue 0.
Hsv rgb_to_hsv(const Rgb& rgb) noexcept;
Rgb hsv_to_rgb(const Hsv& hsv) noexcept;

/// Channel-wise conversions; the HSV image stores (h, s, v) in channels 0..2.
Image rgb_to_hsv(const Image& img);
Image hsv_to_rgb(const Image& img);

}  // namespace robsel
