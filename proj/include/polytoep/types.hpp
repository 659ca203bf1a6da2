#pragma once

#include <complex>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace polytoep {

using complexd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Emit a non-fatal diagnostic to stderr. Library code never aborts on
/// soft-contract violations; it warns and proceeds.
inline void warn(const std::string& msg) {
  std::fprintf(stderr, "[polytoep] warning: %s\n", msg.c_str());
}

/// Vector of non-negative integers indexing tensor-product bases.
/// Houses window degrees, analytic indices and derivative orders alike.
struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) { validate(); }
  MultiIndex(std::initializer_list<int> e) : entries(e) { validate(); }

  /// Scalar convenience for the d=1 paths.
  static MultiIndex scalar(int k) { return MultiIndex{k}; }

  int dim() const { return static_cast<int>(entries.size()); }
  int operator[](int i) const { return entries[static_cast<size_t>(i)]; }

  /// |k| = sum of entries.
  int order() const { return std::accumulate(entries.begin(), entries.end(), 0); }

  bool operator==(const MultiIndex& o) const { return entries == o.entries; }

  void validate() const {
    for (int e : entries)
      if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
  }
};

/// Semiclassical parameter. Positive; values outside (0,1] are legal but
/// outside the regime the expansions are built for, hence the warning.
struct Hbar {
  double value = 1.0;

  Hbar() = default;
  explicit Hbar(double v) : value(v) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("Hbar: value must be positive and finite");
    if (v > 1.0) warn("hbar = " + std::to_string(v) + " outside the soft bound (0,1]");
  }
};

/// Uniform 1-d sampling axis: points origin + i*step, i = 0..count-1.
struct GridAxis {
  double origin = 0.0;
  double step = 1.0;
  int count = 0;

  double operator[](int i) const { return origin + step * i; }
  double last() const { return origin + step * (count - 1); }
};

/// Symmetric axis of `count` points covering [-halfwidth, +halfwidth].
inline GridAxis symmetric_axis(double halfwidth, int count) {
  if (count < 2) throw std::invalid_argument("symmetric_axis: need at least 2 points");
  return GridAxis{-halfwidth, 2.0 * halfwidth / (count - 1), count};
}

}  // namespace polytoep
