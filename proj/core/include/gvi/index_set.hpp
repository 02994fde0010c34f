#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace gvi {

/// Ordered set of constraint indices. Always strictly increasing.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> indices) : IndexSet(std::vector<int>(indices)) {}
  explicit IndexSet(std::vector<int> indices);

  static IndexSet range(int count);

  bool empty() const noexcept { return indices_.empty(); }
  std::size_t size() const noexcept { return indices_.size(); }
  int operator[](std::size_t k) const { return indices_[k]; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }
  const std::vector<int>& indices() const noexcept { return indices_; }

  bool contains(int index) const {
    return std::binary_search(indices_.begin(), indices_.end(), index);
  }
  bool is_subset_of(const IndexSet& other) const {
    return std::includes(other.indices_.begin(), other.indices_.end(),
                         indices_.begin(), indices_.end());
  }
  /// Position of `index` inside the set, or -1.
  int position(int index) const;

  IndexSet united(const IndexSet& other) const;
  IndexSet without(int index) const;
  IndexSet with(int index) const;

  /// Throws IndexError-style std::out_of_range if any index is >= bound.
  void check_bound(int bound) const;

  std::string to_string() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<int> indices_;
};

}  // namespace gvi
