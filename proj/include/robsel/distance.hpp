#pragma once

#include <span>
#include <string_view>

namespace robsel {

enum class Distance { Cosine, L2, Pearson };

std::string_view to_string(Distance d) noexcept;
Distance parse_distance(std::string_view name);

/// 1 - <a,b> / (|a| |b|). Throws DegenerateInput on a zero-norm vector.
double cosine_distance(std::span<const double> a, std::span<const double> b);

/// Euclidean norm of a - b. Embeddings are not normalized first.
double l2_distance(std::span<const double> a, std::span<const double> b);

/// 1 - r(a, b) with r the sample Pearson correlation. Needs dim >= 2 and
/// nonzero variance on both sides.
double pearson_distance(std::span<const double> a, std::span<const double> b);

double distance(Distance kind, std::span<const double> a, std::span<const double> b);

}  // namespace robsel
