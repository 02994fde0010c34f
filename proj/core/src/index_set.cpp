#include "gvi/index_set.hpp"

#include <sstream>
#include <stdexcept>

namespace gvi {

IndexSet::IndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (!indices_.empty() && indices_.front() < 0) {
    throw std::out_of_range("IndexSet: negative index " + std::to_string(indices_.front()));
  }
}

IndexSet IndexSet::range(int count) {
  std::vector<int> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = i;
  return IndexSet(std::move(v));
}

int IndexSet::position(int index) const {
  auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
  if (it == indices_.end() || *it != index) return -1;
  return static_cast<int>(it - indices_.begin());
}

IndexSet IndexSet::united(const IndexSet& other) const {
  std::vector<int> out;
  out.reserve(indices_.size() + other.indices_.size());
  std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                 std::back_inserter(out));
  IndexSet s;
  s.indices_ = std::move(out);
  return s;
}

IndexSet IndexSet::without(int index) const {
  IndexSet s = *this;
  auto it = std::lower_bound(s.indices_.begin(), s.indices_.end(), index);
  if (it != s.indices_.end() && *it == index) s.indices_.erase(it);
  return s;
}

IndexSet IndexSet::with(int index) const {
  IndexSet s = *this;
  auto it = std::lower_bound(s.indices_.begin(), s.indices_.end(), index);
  if (it == s.indices_.end() || *it != index) s.indices_.insert(it, index);
  return s;
}

void IndexSet::check_bound(int bound) const {
  if (!indices_.empty() && indices_.back() >= bound) {
    throw std::out_of_range("constraint index " + std::to_string(indices_.back()) +
                            " out of range (count " + std::to_string(bound) + ")");
  }
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) os << ',';
    os << indices_[k];
  }
  os << '}';
  return os.str();
}

}  // namespace gvi
