#include "herbrand/term.hpp"

#include "herbrand/support.hpp"

namespace herbrand {

GroundTerm GroundTerm::numeral(std::uint64_t n) {
  GroundTerm t;
  t.is_num_ = true;
  t.num_ = n;
  t.weight_ = sat_add(n, 1);
  return t;
}

GroundTerm GroundTerm::apply(std::string symbol, std::vector<GroundTerm> args) {
  GroundTerm t;
  t.is_num_ = false;
  t.num_ = 0;
  t.sym_ = std::move(symbol);
  t.args_ = std::move(args);
  std::uint64_t w = 1;
  for (const auto& a : t.args_) w = sat_add(w, a.weight_);
  t.weight_ = w;
  return t;
}

std::string GroundTerm::str() const {
  if (is_num_) return std::to_string(num_);
  if (args_.empty()) return sym_;
  std::string out = sym_ + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) out += ",";
    out += args_[i].str();
  }
  out += ")";
  return out;
}

std::strong_ordering GroundTerm::operator<=>(const GroundTerm& o) const {
  if (auto c = is_num_ <=> o.is_num_; c != 0) return c;
  if (is_num_) return num_ <=> o.num_;
  if (auto c = sym_ <=> o.sym_; c != 0) return c;
  return args_ <=> o.args_;
}

}  // namespace herbrand
