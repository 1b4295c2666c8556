#pragma once

// Scalar reference implementations shared by the unit and acceptance tests.
// They are written directly from the formulas and share no code with the
// library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return 1.0 - dot(a, b) / (std::sqrt(dot(a, a)) * std::sqrt(dot(b, b)));
}

inline double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return 1.0 - sab / std::sqrt(saa * sbb);
}

/// kind: 0 cosine, 1 l2, 2 pearson.
inline double robustness(const std::vector<std::vector<double>>& q, const std::vector<std::vector<double>>& kp,
                         const std::vector<std::vector<double>>& kn, int kind, double eps) {
  auto d = [kind](const auto& a, const auto& b) {
    return kind == 0 ? cosine(a, b) : kind == 1 ? l2(a, b) : pearson(a, b);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double h = d(q[i], kp[i]) - d(q[i], kn[i]) + eps;
    total += h > 0.0 ? h : 0.0;
  }
  return 1.0 - total / static_cast<double>(q.size());
}

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// One-vs-rest pixel tallies for class c.
inline Counts count(const std::vector<int>& pred, const std::vector<int>& truth, int c) {
  Counts k;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == c;
    const bool t = truth[i] == c;
    if (p && t) ++k.tp;
    else if (p) ++k.fp;
    else if (t) ++k.fn;
    else ++k.tn;
  }
  return k;
}

inline double dice(const Counts& k) {
  return (2.0 * k.tp + 1.0) / (2.0 * k.tp + k.fp + k.fn + 1.0);
}

/// probs[p * K + c]; truth labels in 0..K-1.
inline double dice_loss(const std::vector<double>& probs, const std::vector<int>& truth, int K, double zeta) {
  double acc = 0.0;
  for (int c = 0; c < K; ++c) {
    double inter = 0.0;
    double pp = 0.0;
    double yy = 0.0;
    for (std::size_t p = 0; p < truth.size(); ++p) {
      const double pr = probs[p * K + c];
      const double y = truth[p] == c ? 1.0 : 0.0;
      inter += pr * y;
      pp += pr * pr;
      yy += y * y;
    }
    acc += (2.0 * inter + zeta) / (pp + yy + zeta);
  }
  return 1.0 - acc / K;
}

}  // namespace oracle
