#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace dagger {

/// Per-slot scratch values that are invalidated in O(1) by bumping an epoch.
template <class T>
class EpochArray {
 public:
  /// Starts a fresh generation; every slot reads as unset afterwards.
  void next() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0u);
      epoch_ = 1;
    }
  }

  bool has(std::size_t i) const { return i < stamp_.size() && stamp_[i] == epoch_; }

  void set(std::size_t i, T value) {
    grow(i);
    stamp_[i] = epoch_;
    value_[i] = value;
  }

  /// Returns `fallback` for unset slots.
  T get(std::size_t i, T fallback = T{}) const { return has(i) ? value_[i] : fallback; }

  void erase(std::size_t i) {
    if (i < stamp_.size()) stamp_[i] = 0;
  }

 private:
  void grow(std::size_t i) {
    if (i >= stamp_.size()) {
      const std::size_t n = std::max<std::size_t>(i + 1, stamp_.size() * 2);
      stamp_.resize(n, 0u);
      value_.resize(n);
    }
  }

  std::vector<std::uint32_t> stamp_;
  std::vector<T> value_;
  std::uint32_t epoch_ = 1;
};

/// Membership-only flavour of EpochArray.
class EpochMarks {
 public:
  void next() { values_.next(); }
  bool test(std::size_t i) const { return values_.has(i); }
  void set(std::size_t i) { values_.set(i, 1); }

 private:
  EpochArray<std::uint8_t> values_;
};

}  // namespace dagger
