#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

namespace dagger {

/// Neighbor multiset: each neighbor appears once with a positive count.
///
/// Entries keep insertion order until an erase, which swaps the last entry
/// into the hole. Large bags get a hash index for O(1) lookup.
class EdgeBag {
 public:
  using Slot = std::uint32_t;
  struct Entry {
    Slot slot;
    std::uint32_t count;
  };

  EdgeBag() = default;
  EdgeBag(EdgeBag&&) noexcept = default;
  EdgeBag& operator=(EdgeBag&&) noexcept = default;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

  std::uint32_t count(Slot s) const {
    const std::size_t pos = position(s);
    return pos == kMissing ? 0 : entries_[pos].count;
  }

  void add(Slot s, std::uint32_t c) {
    const std::size_t pos = position(s);
    if (pos != kMissing) {
      entries_[pos].count += c;
      return;
    }
    entries_.push_back({s, c});
    if (index_) {
      (*index_)[s] = entries_.size() - 1;
    } else if (entries_.size() > kIndexThreshold) {
      build_index();
    }
  }

  /// Decrements the count of `s` by `c`, erasing at zero. Returns the
  /// remaining count.
  std::uint32_t subtract(Slot s, std::uint32_t c) {
    const std::size_t pos = position(s);
    if (pos == kMissing) return 0;
    Entry& e = entries_[pos];
    if (e.count > c) {
      e.count -= c;
      return e.count;
    }
    erase_at(pos);
    return 0;
  }

  void clear() {
    entries_.clear();
    index_.reset();
  }

 private:
  static constexpr std::size_t kMissing = static_cast<std::size_t>(-1);
  static constexpr std::size_t kIndexThreshold = 16;

  std::size_t position(Slot s) const {
    if (index_) {
      auto it = index_->find(s);
      return it == index_->end() ? kMissing : it->second;
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].slot == s) return i;
    }
    return kMissing;
  }

  void erase_at(std::size_t pos) {
    const Slot gone = entries_[pos].slot;
    if (pos + 1 != entries_.size()) {
      entries_[pos] = entries_.back();
      if (index_) (*index_)[entries_[pos].slot] = pos;
    }
    entries_.pop_back();
    if (index_) index_->erase(gone);
  }

  void build_index() {
    index_ = std::make_unique<std::unordered_map<Slot, std::size_t>>();
    index_->reserve(entries_.size() * 2);
    for (std::size_t i = 0; i < entries_.size(); ++i) (*index_)[entries_[i].slot] = i;
  }

  std::vector<Entry> entries_;
  std::unique_ptr<std::unordered_map<Slot, std::size_t>> index_;
};

}  // namespace dagger
