#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace threshold_lab {

/// Streaming log-sum-exp. Terms may be -infinity (exact zeros).
class LogSumAccumulator {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  void merge(const LogSumAccumulator& other) {
    if (other.empty()) return;
    if (empty()) {
      *this = other;
      return;
    }
    if (other.max_ <= max_) {
      sum_ += other.sum_ * std::exp(other.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
      max_ = other.max_;
    }
  }

  bool empty() const { return sum_ == 0.0; }

  /// ln of the accumulated sum; -infinity when nothing finite was added.
  double value() const {
    return empty() ? -std::numeric_limits<double>::infinity() : max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

/// Table of ln(i!) for i = 0..n.
class LogFactorials {
 public:
  explicit LogFactorials(int n) : table_(static_cast<std::size_t>(n) + 1) {
    for (int i = 0; i <= n; ++i) table_[i] = std::lgamma(double(i) + 1.0);
  }

  double operator()(int i) const { return table_[static_cast<std::size_t>(i)]; }

  /// ln C(a, b); -infinity when b > a or b < 0.
  double choose(int a, int b) const {
    if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
    return table_[a] - table_[b] - table_[a - b];
  }

  int size() const { return static_cast<int>(table_.size()) - 1; }

 private:
  std::vector<double> table_;
};

}  // namespace threshold_lab
