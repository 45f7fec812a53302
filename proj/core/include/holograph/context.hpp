#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <unordered_map>
#include <vector>

#include "holograph/errors.hpp"

namespace holograph {

/// An ordered set of variable indices. Indices are strictly increasing and
/// nonempty; every causal state lives over a Context.
class Context {
 public:
  Context() = default;

  explicit Context(std::vector<int> ids) : ids_(std::move(ids)) { validate(); }

  Context(std::initializer_list<int> ids) : ids_(ids) { validate(); }

  /// The full context {0, 1, ..., n-1}.
  static Context full(int n) {
    if (n < 1) throw InvalidDimension("context must be nonempty");
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    return Context(std::move(ids));
  }

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<int>& ids() const { return ids_; }
  int operator[](int pos) const { return ids_[static_cast<std::size_t>(pos)]; }

  bool contains(int id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
  }

  /// Position of a variable id within this context, or -1.
  int index_of(int id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return -1;
    return static_cast<int>(it - ids_.begin());
  }

  bool is_subset_of(const Context& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                         ids_.end());
  }

  bool operator==(const Context& other) const { return ids_ == other.ids_; }
  bool operator!=(const Context& other) const { return ids_ != other.ids_; }

  Context intersect(const Context& other) const {
    std::vector<int> out;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(),
                          other.ids_.end(), std::back_inserter(out));
    return Context(std::move(out));
  }

  bool intersects(const Context& other) const {
    std::vector<int> out;
    std::set_intersection(ids_.begin(), ids_.end(), other.ids_.begin(),
                          other.ids_.end(), std::back_inserter(out));
    return !out.empty();
  }

  /// Set difference this \ other; may be empty (returned as a plain vector
  /// since Context itself must be nonempty).
  std::vector<int> minus(const Context& other) const {
    std::vector<int> out;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(),
                        other.ids_.end(), std::back_inserter(out));
    return out;
  }

 private:
  void validate() const {
    if (ids_.empty()) throw InvalidContext("context must be nonempty");
    for (std::size_t k = 1; k < ids_.size(); ++k) {
      if (ids_[k] <= ids_[k - 1])
        throw InvalidContext("context indices must be strictly increasing");
    }
    if (ids_.front() < 0) throw InvalidContext("negative variable index");
  }

  std::vector<int> ids_;
};

}  // namespace holograph
