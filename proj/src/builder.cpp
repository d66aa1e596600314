#include "herbrand/builder.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>
#include <variant>

namespace herbrand {

NodeDecision NodeDecision::make_leaf(Index i) {
  NodeDecision d;
  d.kind = Kind::Leaf;
  d.leaf = std::move(i);
  return d;
}

NodeDecision NodeDecision::make_branch(Atom a) {
  NodeDecision d;
  d.kind = Kind::Branch;
  d.branch = std::move(a);
  return d;
}

NodeDecision NodeDecision::exhausted(Reason r, std::string detail) {
  NodeDecision d;
  d.kind = Kind::Exhausted;
  d.reason = r;
  d.detail = std::move(detail);
  return d;
}

namespace {

std::optional<Atom> first_unassigned_atom(const Path& p, const Compound& c) {
  for (const auto& a : atoms_of(c))
    if (find(p, a) == Truth::Unknown) return a;
  return std::nullopt;
}

class Scan {
 public:
  Scan(const GroundTheory& th, const BuildConfig& cfg)
      : th_(th), cfg_(cfg), fuel_(cfg.fuel) {}

  std::uint64_t fuel_left() const { return fuel_; }
  std::uint64_t scanned() const { return scanned_; }

  // Evaluates one index against the path: Leaf on false, Branch on unknown,
  // nothing on true. Consumes one unit of fuel.
  std::optional<NodeDecision> probe(const Path& p, const Index& i) {
    --fuel_;
    ++scanned_;
    Compound c = th_.th(i);
    switch (peval(p, c)) {
      case Truth::False:
        return NodeDecision::make_leaf(i);
      case Truth::Unknown: {
        auto a = first_unassigned_atom(p, c);
        assert(a.has_value());
        return NodeDecision::make_branch(std::move(*a));
      }
      default:
        return std::nullopt;
    }
  }

  // decided_rank receives the rank at which the fair scan stopped, so the
  // caller can advance the frontier past it.
  NodeDecision fair_from(const Path& p, std::uint64_t from,
                         const std::set<std::uint64_t>& skip,
                         std::uint64_t* decided_rank) {
    auto total = th_.index_count();
    for (std::uint64_t rank = from;; ++rank) {
      if (total && rank >= *total)
        return NodeDecision::exhausted(
            NodeDecision::Reason::ModelFound,
            "every index evaluates to true on [" + p.str() +
                "]; the theory is satisfiable");
      if (fuel_ == 0)
        return NodeDecision::exhausted(NodeDecision::Reason::Fuel,
                                       "fuel exhausted during the fair scan at rank " +
                                           std::to_string(rank));
      if (skip.count(rank)) continue;
      if (auto d = probe(p, th_.nth_index(rank))) {
        if (decided_rank) *decided_rank = rank;
        return *d;
      }
    }
  }

  NodeDecision relevance_first(const Path& p, std::uint64_t frontier,
                               std::uint64_t* decided_rank) {
    std::vector<Index> candidates;
    std::set<std::uint64_t> seen;
    for (const auto& e : p.entries()) {
      for (auto& i : th_.relevant(e.atom, frontier)) {
        if (seen.insert(i.rank).second) candidates.push_back(std::move(i));
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Index& a, const Index& b) { return a.rank < b.rank; });
    for (const auto& i : candidates) {
      if (fuel_ == 0)
        return NodeDecision::exhausted(NodeDecision::Reason::Fuel,
                                       "fuel exhausted while scanning relevant indices");
      if (auto d = probe(p, i)) return *d;
    }
    return fair_from(p, frontier, seen, decided_rank);
  }

  NodeDecision decide(const Path& p, std::uint64_t frontier,
                      std::uint64_t* decided_rank) {
    if (cfg_.strategy == Strategy::Fair)
      return fair_from(p, 0, {}, decided_rank);
    return relevance_first(p, frontier, decided_rank);
  }

 private:
  const GroundTheory& th_;
  const BuildConfig& cfg_;
  std::uint64_t fuel_;
  std::uint64_t scanned_ = 0;
};

struct Builder {
  const GroundTheory& th;
  const BuildConfig& cfg;
  Scan scan;
  BuildStats stats;

  Builder(const GroundTheory& t, const BuildConfig& c) : th(t), cfg(c), scan(t, c) {}

  static constexpr std::uint64_t kNotFairScan = ~std::uint64_t(0);

  std::variant<HerbrandTree, BuildError> grow(const Path& p, std::uint64_t frontier,
                                              std::uint32_t depth) {
    stats.deepest = std::max(stats.deepest, depth);
    ++stats.decisions;
    std::uint64_t decided_rank = kNotFairScan;
    NodeDecision d = scan.decide(p, frontier, &decided_rank);
    if (d.kind == NodeDecision::Kind::Branch && decided_rank != kNotFairScan) {
      // Split on a fair-scan index: its atoms become relevant below, so the
      // children resume the fair scan past it.
      frontier = decided_rank + 1;
    }
    switch (d.kind) {
      case NodeDecision::Kind::Leaf:
        return HerbrandTree::leaf(std::move(*d.leaf));
      case NodeDecision::Kind::Exhausted:
        return BuildError{BuildError::Kind::FuelExhausted, p, d.detail};
      case NodeDecision::Kind::Branch:
        break;
    }
    const Atom& a = *d.branch;
    assert(find(p, a) == Truth::Unknown);
    if (depth + 1 > cfg.max_depth)
      return BuildError{BuildError::Kind::DepthExceeded, p,
                        "maximum depth " + std::to_string(cfg.max_depth) +
                            " exceeded while branching on " + a.str()};
    auto t = grow(p.extended(a, true), frontier, depth + 1);
    if (std::holds_alternative<BuildError>(t)) return t;
    auto f = grow(p.extended(a, false), frontier, depth + 1);
    if (std::holds_alternative<BuildError>(f)) return f;
    return HerbrandTree::node(a, std::get<HerbrandTree>(std::move(t)),
                              std::get<HerbrandTree>(std::move(f)));
  }
};

}  // namespace

NodeDecision decide(const GroundTheory& th, const Path& p, const BuildConfig& cfg,
                    std::uint64_t frontier) {
  if (!p.well_formed())
    throw std::invalid_argument("malformed path (duplicate atom): " + p.str());
  Scan scan(th, cfg);
  return scan.decide(p, frontier, nullptr);
}

BuildResult build_tree(const GroundTheory& th, const BuildConfig& cfg) {
  if (cfg.fuel < 1 || cfg.max_depth < 1)
    throw std::invalid_argument("fuel and max_depth must be at least 1");
  BuildResult result;
  Builder b(th, cfg);
  auto out = b.grow(Path::empty(), 0, 0);
  result.stats = b.stats;
  result.stats.scanned = b.scan.scanned();
  if (std::holds_alternative<BuildError>(out)) {
    result.error = std::get<BuildError>(std::move(out));
    return result;
  }
  HerbrandTree tree = std::get<HerbrandTree>(std::move(out));
  if (auto report = htree_check(th, tree); !report)
    throw std::logic_error("builder produced an invalid tree: " + report.detail);
  result.tree = std::move(tree);
  return result;
}

}  // namespace herbrand
