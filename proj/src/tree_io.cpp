#include "herbrand/tree_io.hpp"

#include <json.hpp>

#include "herbrand/theory.hpp"

namespace herbrand {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json to_json_rec(const HerbrandTree& t) {
  if (t.is_leaf()) {
    ordered_json args = ordered_json::array();
    for (const auto& a : t.leaf_index().args) args.push_back(a.str());
    return ordered_json{{"leaf", {{"axiom", t.leaf_index().axiom}, {"args", args}}}};
  }
  return ordered_json{{"node",
                       {{"atom", t.atom().str()},
                        {"true", to_json_rec(t.when_true())},
                        {"false", to_json_rec(t.when_false())}}}};
}

HerbrandTree from_json_rec(const GroundTheory& th, const ordered_json& j) {
  if (!j.is_object()) throw TreeIoError("tree node must be a JSON object");
  if (j.contains("leaf")) {
    const auto& leaf = j.at("leaf");
    if (!leaf.contains("axiom") || !leaf.at("axiom").is_string())
      throw TreeIoError("leaf needs a string 'axiom' field");
    std::vector<GroundTerm> args;
    if (leaf.contains("args")) {
      if (!leaf.at("args").is_array()) throw TreeIoError("'args' must be an array");
      for (const auto& s : leaf.at("args")) {
        if (!s.is_string()) throw TreeIoError("leaf arguments must be term strings");
        try {
          args.push_back(parse_ground_term(s.get<std::string>()));
        } catch (const ParseError& e) {
          throw TreeIoError(std::string("bad term in leaf args: ") + e.what());
        }
      }
    }
    auto idx = th.make_index(leaf.at("axiom").get<std::string>(), std::move(args));
    if (!idx)
      throw TreeIoError("unknown axiom instance '" +
                        leaf.at("axiom").get<std::string>() + "' in leaf");
    return HerbrandTree::leaf(std::move(*idx));
  }
  if (j.contains("node")) {
    const auto& node = j.at("node");
    if (!node.contains("atom") || !node.at("atom").is_string())
      throw TreeIoError("node needs a string 'atom' field");
    if (!node.contains("true") || !node.contains("false"))
      throw TreeIoError("node needs 'true' and 'false' subtrees");
    Atom a;
    try {
      a = parse_ground_atom(node.at("atom").get<std::string>());
    } catch (const ParseError& e) {
      throw TreeIoError(std::string("bad atom text: ") + e.what());
    }
    try {
      th.atom_rank(a);  // validates against the theory's signature
    } catch (const std::invalid_argument& e) {
      throw TreeIoError(std::string("atom not in the theory: ") + e.what());
    }
    return HerbrandTree::node(std::move(a), from_json_rec(th, node.at("true")),
                              from_json_rec(th, node.at("false")));
  }
  throw TreeIoError("tree node must contain 'leaf' or 'node'");
}

void dot_rec(const HerbrandTree& t, std::string& out, int& counter, int id) {
  if (t.is_leaf()) {
    out += "  n" + std::to_string(id) + " [shape=box,label=\"" +
           t.leaf_index().str() + "\"];\n";
    return;
  }
  out += "  n" + std::to_string(id) + " [label=\"" + t.atom().str() + "\"];\n";
  int tid = ++counter;
  int fid = ++counter;
  dot_rec(t.when_true(), out, counter, tid);
  dot_rec(t.when_false(), out, counter, fid);
  out += "  n" + std::to_string(id) + " -> n" + std::to_string(tid) +
         " [label=\"T\"];\n";
  out += "  n" + std::to_string(id) + " -> n" + std::to_string(fid) +
         " [label=\"F\"];\n";
}

void text_rec(const HerbrandTree& t, std::string& out, const std::string& pad) {
  if (t.is_leaf()) {
    out += pad + "leaf " + t.leaf_index().str() + "\n";
    return;
  }
  out += pad + t.atom().str() + "\n";
  out += pad + "+ true:\n";
  text_rec(t.when_true(), out, pad + "    ");
  out += pad + "+ false:\n";
  text_rec(t.when_false(), out, pad + "    ");
}

}  // namespace

std::string tree_to_json(const HerbrandTree& t) { return to_json_rec(t).dump(); }

HerbrandTree tree_from_json(const GroundTheory& th, const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw TreeIoError(std::string("invalid JSON: ") + e.what());
  }
  return from_json_rec(th, j);
}

std::string tree_to_dot(const HerbrandTree& t) {
  std::string out = "digraph herbrand {\n";
  int counter = 0;
  dot_rec(t, out, counter, 0);
  out += "}\n";
  return out;
}

std::string tree_to_text(const HerbrandTree& t) {
  std::string out;
  text_rec(t, out, "");
  return out;
}

}  // namespace herbrand
