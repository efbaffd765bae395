#pragma once

#include <span>
#include <vector>

namespace rjdbase {

/// Cluster assignment of n points into labels 0..k-1.
class ClusterLabels {
 public:
  ClusterLabels() = default;
  /// k defaults to max label + 1.
  explicit ClusterLabels(std::vector<int> assignments, int k = -1);

  std::size_t size() const noexcept { return a_.size(); }
  int k() const noexcept { return k_; }
  int operator[](std::size_t i) const { return a_[i]; }
  const std::vector<int>& assignments() const noexcept { return a_; }
  /// Number of labels actually used.
  int distinct() const;

  bool operator==(const ClusterLabels&) const = default;

 private:
  std::vector<int> a_;
  int k_ = 0;
};

}  // namespace rjdbase
