#pragma once

// Text reports in the style of herd, and DOT renderings of executions.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rvlitmus/enumerator.hpp"
#include "rvlitmus/model.hpp"
#include "rvlitmus/semantics.hpp"

namespace rvlitmus {

/// Short event names: program memory events get a, b, c, ... in id order,
/// initial writes continue the sequence. Fences get no name.
inline std::vector<std::string> event_tags(const EventStructure& s) {
  std::vector<std::string> tags(s.size());
  std::size_t next = 0;
  auto letters = [](std::size_t k) {
    std::string out;
    for (++k; k > 0; k = (k - 1) / 26) out.insert(out.begin(), char('a' + (k - 1) % 26));
    return out;
  };
  for (const Event& e : s.events)
    if (!e.is_initial() && e.is_memory()) tags[e.id] = letters(next++);
  for (EventId id : s.initial_writes) tags[id] = letters(next++);
  return tags;
}

inline std::string value_text(const Value& v, const std::vector<std::string>& locations) {
  if (const auto* w = std::get_if<Word>(&v)) return std::to_string(*w);
  const std::size_t loc = std::get<LocationId>(v).index;
  return "&" + (loc < locations.size() ? locations[loc] : std::string("?"));
}

/// `Wx=1`, `Ry=0 [aq]`, `Wy=1 [rl]`, or `F r,rw` for fences.
inline std::string event_text(const EventStructure& s, const CandidateExecution& x,
                              EventId id) {
  const Event& e = s[id];
  if (e.kind == EventKind::Fence)
    return "F " + e.fence_predecessors.str() + "," + e.fence_successors.str();
  std::string out = e.is_read() ? "R" : "W";
  out += e.location ? s.locations[e.location->index] : "?";
  out += "=" + std::to_string(id < x.values.size() ? x.values[id] : 0);
  if (e.annotation == Annotation::Acquire) out += " [aq]";
  if (e.annotation == Annotation::Release) out += " [rl]";
  return out;
}

/// po restricted to immediate successors between memory events.
inline Relation immediate_po(const EventStructure& s) {
  Relation out(s.size());
  for (const auto& ids : s.hart_events) {
    EventId prev = s.size();
    for (EventId id : ids) {
      if (!s[id].is_memory()) continue;
      if (prev != s.size()) out.insert(prev, id);
      prev = id;
    }
  }
  return out;
}

/// co restricted to immediate successors.
inline Relation immediate_co(const CandidateExecution& x) {
  Relation out(x.co.carrier());
  for (const auto& order : x.coherence)
    for (std::size_t i = 0; i + 1 < order.size(); ++i) out.insert(order[i], order[i + 1]);
  return out;
}

/// The relations drawn by default: po, ppo, rf, co, fr.
inline std::vector<NamedRelation> diagram_relations(const EventStructure& s,
                                                    const CandidateExecution& x,
                                                    const Relation& ppo) {
  return {{"po", immediate_po(s)}, {"ppo", ppo}, {"rf", x.rf}, {"co", immediate_co(x)},
          {"fr", x.fr}};
}

namespace detail {

inline std::string dot_quote(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline const char* relation_color(const std::string& name) {
  static const std::map<std::string, const char*> colors = {
      {"po", "black"}, {"ppo", "darkgreen"}, {"rf", "red"},  {"co", "brown"},
      {"fr", "orange"}, {"hb", "blue"},      {"po-loc", "gray40"}};
  auto it = colors.find(name);
  return it == colors.end() ? "black" : it->second;
}

}  // namespace detail

/// DOT digraph of one execution: a cluster per hart (initial writes in their
/// own cluster), one labelled edge per relation pair, cycle edges drawn bold.
inline std::string emit_dot(const EventStructure& s, const CandidateExecution& x,
                            const std::vector<NamedRelation>& relations,
                            const std::optional<LabeledCycle>& highlight = std::nullopt,
                            const std::string& title = "execution") {
  const auto tags = event_tags(s);
  std::ostringstream out;
  out << "digraph " << detail::dot_quote(title) << " {\n";
  if (s.size() == 0) {
    out << "}\n";
    return out.str();
  }
  out << "  node [shape=none, fontname=\"Helvetica\"];\n";
  out << "  edge [fontname=\"Helvetica\", fontsize=10];\n";

  auto node = [&](EventId id) { return "e" + std::to_string(id); };
  auto cluster = [&](const std::string& name, const std::string& label,
                     const std::vector<EventId>& ids) {
    out << "  subgraph " << name << " {\n";
    out << "    label=" << detail::dot_quote(label) << ";\n";
    for (EventId id : ids)
      if (s[id].is_memory())
        out << "    " << node(id) << " [label="
            << detail::dot_quote(tags[id] + ": " + event_text(s, x, id)) << "];\n";
    out << "  }\n";
  };
  if (!s.initial_writes.empty()) cluster("cluster_init", "init", s.initial_writes);
  for (std::size_t h = 0; h < s.hart_events.size(); ++h)
    cluster("cluster_P" + std::to_string(h), "P" + std::to_string(h), s.hart_events[h]);

  std::set<std::pair<std::pair<EventId, EventId>, std::string>> hot;
  if (highlight)
    for (std::size_t i = 0; i < highlight->edges.size(); ++i)
      hot.insert({{highlight->cycle.events[i], highlight->cycle.events[i + 1]},
                  highlight->edges[i]});

  auto edge = [&](EventId a, EventId b, const std::string& name, bool bold) {
    out << "  " << node(a) << " -> " << node(b) << " [label=" << detail::dot_quote(name)
        << ", color=" << detail::dot_quote(detail::relation_color(name))
        << ", fontcolor=" << detail::dot_quote(detail::relation_color(name));
    if (bold) out << ", penwidth=3, style=bold";
    out << "];\n";
  };
  std::set<std::pair<std::pair<EventId, EventId>, std::string>> drawn;
  for (const auto& [name, rel] : relations)
    for (const auto& [a, b] : rel.pairs()) {
      if (!s[a].is_memory() || !s[b].is_memory()) continue;
      const bool bold = hot.count({{a, b}, name}) != 0;
      edge(a, b, name, bold);
      drawn.insert({{a, b}, name});
    }
  for (const auto& h : hot)
    if (!drawn.count(h)) edge(h.first.first, h.first.second, h.second, true);
  out << "}\n";
  return out.str();
}

/// `a:Wx=1 -ppo-> b:Wy=1 [rl] -rf-> ...`
inline std::string cycle_text(const EventStructure& s, const CandidateExecution& x,
                              const LabeledCycle& c) {
  const auto tags = event_tags(s);
  std::string out;
  for (std::size_t i = 0; i < c.cycle.events.size(); ++i) {
    const EventId id = c.cycle.events[i];
    out += tags[id] + ":" + event_text(s, x, id);
    if (i < c.edges.size()) out += " -" + c.edges[i] + "-> ";
  }
  return out;
}

inline std::string format_report(const Verdict& v) {
  std::ostringstream out;
  out << "Test " << v.test_name << ' ' << to_string(v.status) << '\n';
  out << "States " << v.states.size() << '\n';
  for (const auto& [state, count] : v.states) {
    for (std::size_t i = 0; i < v.observables.size() && i < state.size(); ++i)
      out << (i ? " " : "") << observable_name(v.observables[i]) << '='
          << value_text(state[i], v.structure.locations) << ';';
    out << '\n';
  }
  out << (v.predicate_satisfiable ? "Ok" : "No") << '\n';
  out << "Witnesses\n";
  out << "Positive: " << v.positive << " Negative: " << v.negative << '\n';
  out << "Condition " << v.condition_text << '\n';
  const char* observation = v.positive == 0    ? "Never"
                            : v.negative == 0 ? "Always"
                                              : "Sometimes";
  out << "Observation " << v.test_name << ' ' << observation << ' ' << v.positive << ' '
      << v.negative << '\n';
  out << "Candidates " << v.candidates << " (inconsistent values " << v.inconsistent
      << ", axiom failures " << (v.candidates - v.positive - v.negative) << ")\n";
  if (v.status == Outcome::Forbidden && !v.forbidding_cycles.empty()) {
    const NearMiss& m = v.forbidding_cycles.front();
    out << "Cycle (" << m.axiom << ") " << cycle_text(v.structure, m.execution, m.cycle)
        << '\n';
  }
  if (v.expected)
    out << "Expected " << (*v.expected == Outcome::Allowed ? "allowed" : "forbidden")
        << ": " << (*v.expected == v.status ? "Match" : "Mismatch") << '\n';
  return out.str();
}

}  // namespace rvlitmus
