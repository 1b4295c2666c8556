#include "robsel/distance.hpp"

#include <cmath>
#include <string>

#include "robsel/error.hpp"

namespace robsel {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(ErrorCategory::DimensionMismatch, "empty embedding");
  if (a.size() != b.size()) {
    fail(ErrorCategory::DimensionMismatch, "embedding dims differ: " + std::to_string(a.size()) +
                                               " vs " + std::to_string(b.size()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      fail(ErrorCategory::DegenerateInput, "non-finite embedding value at " + std::to_string(i));
    }
  }
}

}  // namespace

std::string_view to_string(Distance d) noexcept {
  switch (d) {
    case Distance::Cosine:
      return "cosine";
    case Distance::L2:
      return "l2";
    case Distance::Pearson:
      return "pearson";
  }
  return "cosine";
}

Distance parse_distance(std::string_view name) {
  if (name == "cosine") return Distance::Cosine;
  if (name == "l2") return Distance::L2;
  if (name == "pearson") return Distance::Pearson;
  fail(ErrorCategory::InvalidArgument, "unknown distance '" + std::string(name) + "'");
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) fail(ErrorCategory::DegenerateInput, "zero-norm embedding");
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

double l2_distance(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double pearson_distance(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  if (a.size() < 2) fail(ErrorCategory::DegenerateInput, "pearson distance needs dim >= 2");
  const auto n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) fail(ErrorCategory::DegenerateInput, "zero-variance embedding");
  return 1.0 - sab / (std::sqrt(saa) * std::sqrt(sbb));
}

double distance(Distance kind, std::span<const double> a, std::span<const double> b) {
  switch (kind) {
    case Distance::Cosine:
      return cosine_distance(a, b);
    case Distance::L2:
      return l2_distance(a, b);
    case Distance::Pearson:
      return pearson_distance(a, b);
  }
  fail(ErrorCategory::InvalidArgument, "unknown distance kind");
}

}  // namespace robsel
