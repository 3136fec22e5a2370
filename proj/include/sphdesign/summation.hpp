#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sphdesign {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Fixed block size for deterministic reductions: terms are summed with
/// compensation inside each block, block totals are then summed pairwise.
inline constexpr std::size_t kReductionBlock = 1024;

/// Pairwise (tree) sum of already-reduced partials; the tree shape depends
/// only on the number of partials.
inline double pairwise_sum(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() <= 8) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value();
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Deterministic compensated sum of a sequence.
inline double stable_sum(std::span<const double> v) {
  std::vector<double> partial;
  partial.reserve(v.size() / kReductionBlock + 1);
  for (std::size_t b = 0; b < v.size(); b += kReductionBlock) {
    CompensatedSum s;
    const std::size_t e = std::min(v.size(), b + kReductionBlock);
    for (std::size_t i = b; i < e; ++i) s.add(v[i]);
    partial.push_back(s.value());
  }
  return pairwise_sum(partial);
}

}  // namespace sphdesign
