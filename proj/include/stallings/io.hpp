#pragma once

// JSON and DOT emitters. Objects keep insertion order so output is
// byte-stable.

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stallings/automaton.hpp"
#include "stallings/error.hpp"
#include "stallings/extensions.hpp"
#include "stallings/lattice.hpp"
#include "stallings/subgroup.hpp"
#include "stallings/sync_fold.hpp"
#include "stallings/word.hpp"

namespace stallings::io {

using Json = nlohmann::ordered_json;

inline Json words_json(std::vector<Word> const& words) {
  Json out = Json::array();
  for (Word const& w : words) out.push_back(to_string(w));
  return out;
}

inline Json to_json(Automaton const& g) {
  Json edges = Json::array();
  for (Edge const& e : g.edges()) edges.push_back({e.src, e.letter, e.dst});
  return Json{{"alphabet_size", g.alphabet_size()},
              {"basepoint", g.basepoint()},
              {"edges", std::move(edges)}};
}

// Inverse of to_json. The vertex count is one more than the largest vertex
// mentioned.
inline Automaton automaton_from_json(Json const& j) {
  try {
    auto const alphabet = j.at("alphabet_size").get<std::size_t>();
    auto const base = j.at("basepoint").get<Vertex>();
    std::vector<Edge> edges;
    std::size_t n = std::size_t{base} + 1;
    for (Json const& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw InvalidAutomaton("edge entries must be [src, letter, dst]");
      }
      Edge x{e[0].get<Vertex>(), e[1].get<std::uint32_t>(), e[2].get<Vertex>()};
      n = std::max<std::size_t>(n, std::max(x.src, x.dst) + std::size_t{1});
      edges.push_back(x);
    }
    return Automaton(alphabet, n, base, std::move(edges));
  } catch (nlohmann::json::exception const& e) {
    throw InvalidAutomaton(std::string("malformed automaton JSON: ") + e.what());
  }
}

inline Automaton automaton_from_json(std::string const& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (nlohmann::json::parse_error const& e) {
    throw InvalidAutomaton(std::string("malformed automaton JSON: ") + e.what());
  }
  return automaton_from_json(j);
}

inline Json to_json(Subgroup const& h) {
  return Json{{"rank", h.rank()},
              {"basis", words_json(h.basis())},
              {"automaton", to_json(h.graph())}};
}

inline Json to_json(std::vector<Subgroup> const& hs) {
  Json out = Json::array();
  for (Subgroup const& h : hs) out.push_back(to_json(h));
  return out;
}

inline Json to_json(Verdict const& v) {
  Json witness = nullptr;
  if (v.witness) witness = words_json(v.witness->images());
  return Json{{"outcome", to_string(v.outcome)},
              {"witness_images", std::move(witness)},
              {"depth", v.depth},
              {"extra_letters", v.extra_letters}};
}

inline Json to_json(ClosureResult const& c) {
  Json candidates = Json::array();
  for (auto const& [member, verdict] : c.candidates) {
    Json entry{{"subgroup", words_json(member.basis())}};
    entry["verdict"] = verdict ? to_json(*verdict) : Json(nullptr);
    candidates.push_back(std::move(entry));
  }
  return Json{{"closure", to_json(c.closure)},
              {"status", to_string(c.status)},
              {"candidates", std::move(candidates)}};
}

inline Json to_json(Morphism const& m) {
  return Json{{"source", to_json(m.source)},
              {"target", to_json(m.target)},
              {"vertex_map", m.vertex_map},
              {"edge_map", m.edge_map}};
}

inline Json to_json(SyncFoldResult const& r) {
  Json steps = Json::array();
  for (std::size_t i = 0; i < r.trace.steps.size(); ++i) {
    SyncFoldStep const& s = r.trace.steps[i];
    Json step{{"step", i},
              {"onto", s.onto},
              {"source_vertices", s.source_vertices},
              {"source_edges", s.source_edges},
              {"target_vertices", s.target_vertices},
              {"target_edges", s.target_edges}};
    if (i > 0) step["empty"] = r.trace.step_empty(i);
    steps.push_back(std::move(step));
  }
  return Json{{"theta", to_json(r.theta)},
              {"onto", is_onto(r.theta)},
              {"steps", std::move(steps)}};
}

inline Json to_json(ExtensionLattice const& l) {
  Json elements = Json::array();
  for (Subgroup const& x : l.elements()) elements.push_back(words_json(x.basis()));
  Json covers = Json::array();
  for (auto const& [i, j] : l.cover_relation()) covers.push_back({i, j});
  return Json{{"elements", std::move(elements)}, {"covers", std::move(covers)}};
}

inline std::string dot_quote(std::string const& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Vertices as circles, the basepoint doubled; one arrow per positive edge.
inline std::string to_dot(Automaton const& g, std::string const& name = "G") {
  std::ostringstream os;
  os << "digraph " << dot_quote(name) << " {\n";
  os << "  rankdir=LR;\n  node [shape=circle];\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    os << "  " << v;
    if (v == g.basepoint()) os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (Edge const& e : g.edges()) {
    os << "  " << e.src << " -> " << e.dst << " [label="
       << dot_quote(to_string(Word::generator(e.letter))) << "];\n";
  }
  os << "}\n";
  return os.str();
}

// Hasse diagram with the base subgroup at the bottom.
inline std::string to_dot(ExtensionLattice const& l, std::string const& name = "L") {
  std::ostringstream os;
  os << "digraph " << dot_quote(name) << " {\n";
  os << "  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < l.size(); ++i) {
    os << "  " << i << " [label=" << dot_quote(to_string(l.element(i))) << "];\n";
  }
  for (auto const& [i, j] : l.cover_relation()) {
    os << "  " << i << " -> " << j << " [arrowhead=none];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace stallings::io
