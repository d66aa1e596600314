#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace herbrand {

// A ground (variable-free) first-order term: either a numeric literal or a
// symbol applied to ground arguments. Constants are nullary applications.
// Immutable value type with structural equality.
class GroundTerm {
 public:
  GroundTerm() : num_(0), weight_(1), is_num_(true) {}

  static GroundTerm numeral(std::uint64_t n);
  static GroundTerm apply(std::string symbol, std::vector<GroundTerm> args = {});
  static GroundTerm constant(std::string name) { return apply(std::move(name)); }

  bool is_numeral() const { return is_num_; }
  std::uint64_t numeral_value() const { return num_; }
  const std::string& symbol() const { return sym_; }
  const std::vector<GroundTerm>& args() const { return args_; }

  // Term size; a numeral n weighs n + 1 so that enumerating literals by
  // weight yields them in magnitude order. Computed once at construction.
  std::uint64_t weight() const { return weight_; }

  std::string str() const;

  bool operator==(const GroundTerm& o) const {
    return weight_ == o.weight_ && is_num_ == o.is_num_ && num_ == o.num_ &&
           sym_ == o.sym_ && args_ == o.args_;
  }

  // Structural order, suitable for ordered containers. This is not the
  // signature-dependent enumeration order.
  std::strong_ordering operator<=>(const GroundTerm& o) const;

 private:
  std::string sym_;
  std::vector<GroundTerm> args_;
  std::uint64_t num_;
  std::uint64_t weight_;
  bool is_num_;
};

}  // namespace herbrand
