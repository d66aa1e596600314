#include "herbrand/debugger.hpp"

namespace herbrand {

std::string CounterExample::str() const {
  std::string out = "axiom " + index.str() + " falsified under [";
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (i) out += ", ";
    out += assignment[i].first.str();
    out += assignment[i].second ? "=true" : "=false";
  }
  return out + "]";
}

CounterExample walk(const GroundTheory& th, const HerbrandTree& t,
                    const Valuation& oracle) {
  if (auto report = htree_check(th, t); !report)
    throw WalkError("refusing to walk a rejected tree: " + report.detail);
  CounterExample cex;
  const HerbrandTree* cur = &t;
  while (!cur->is_leaf()) {
    bool v = oracle(cur->atom());
    cex.assignment.emplace_back(cur->atom(), v);
    cur = v ? &cur->when_true() : &cur->when_false();
  }
  cex.index = cur->leaf_index();
  return cex;
}

bool verify(const GroundTheory& th, const CounterExample& cex) {
  if (!th.make_index(cex.index.axiom, cex.index.args))
    throw std::invalid_argument("unknown index " + cex.index.str());
  Path p;
  for (const auto& [atom, value] : cex.assignment) p = p.extended(atom, value);
  return peval(p, th.th(cex.index)) == Truth::False;
}

}  // namespace herbrand
