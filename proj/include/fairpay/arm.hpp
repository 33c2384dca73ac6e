#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairpay {

/// Arm identifier. Stored 0-based; `label()` gives the 1-based name used in
/// traces and on the command line.
class ArmId {
 public:
  constexpr ArmId() = default;

  static constexpr ArmId from_index(std::size_t index) { return ArmId(index); }
  static ArmId from_label(std::size_t label) {
    if (label == 0) throw std::invalid_argument("arm labels start at 1");
    return ArmId(label - 1);
  }

  [[nodiscard]] constexpr std::size_t index() const { return index_; }
  [[nodiscard]] constexpr std::size_t label() const { return index_ + 1; }

  constexpr auto operator<=>(const ArmId&) const = default;

 private:
  constexpr explicit ArmId(std::size_t index) : index_(index) {}
  std::size_t index_ = 0;
};

inline std::string to_string(ArmId arm) { return std::to_string(arm.label()); }

/// Subset of the arms [k], iterated in increasing index order.
class ArmSet {
 public:
  ArmSet() = default;
  explicit ArmSet(std::size_t k) : members_(k, false) {}

  static ArmSet all(std::size_t k) {
    ArmSet s(k);
    s.members_.assign(k, true);
    s.count_ = k;
    return s;
  }

  void insert(ArmId arm) {
    if (!members_.at(arm.index())) {
      members_[arm.index()] = true;
      ++count_;
    }
  }

  [[nodiscard]] bool contains(ArmId arm) const {
    return arm.index() < members_.size() && members_[arm.index()];
  }

  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] bool empty() const { return count_ == 0; }
  /// Number of arms in the universe [k].
  [[nodiscard]] std::size_t universe() const { return members_.size(); }

  [[nodiscard]] std::vector<ArmId> members() const {
    std::vector<ArmId> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i]) out.push_back(ArmId::from_index(i));
    }
    return out;
  }

  [[nodiscard]] bool is_subset_of(const ArmSet& other) const {
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i] && !other.contains(ArmId::from_index(i))) return false;
    }
    return true;
  }

  bool operator==(const ArmSet& other) const {
    return members_ == other.members_;
  }

 private:
  std::vector<bool> members_;
  std::size_t count_ = 0;
};

}  // namespace fairpay
