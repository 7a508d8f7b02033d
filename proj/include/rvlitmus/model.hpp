#pragma once

// The axiomatic model: preserved program order, the per-location coherence
// axiom, the global ordering axiom and happened-before.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rvlitmus/relation.hpp"
#include "rvlitmus/semantics.hpp"

namespace rvlitmus {

enum class PpoRule { Fence, Acquire, Release, CoherenceWW, Dependency };

inline constexpr std::array<PpoRule, 5> kAllPpoRules = {
    PpoRule::Fence, PpoRule::Acquire, PpoRule::Release, PpoRule::CoherenceWW,
    PpoRule::Dependency};

inline std::string_view rule_name(PpoRule rule) {
  switch (rule) {
    case PpoRule::Fence: return "fence";
    case PpoRule::Acquire: return "acquire";
    case PpoRule::Release: return "release";
    case PpoRule::CoherenceWW: return "coherence-ww";
    case PpoRule::Dependency: return "dep";
  }
  return "?";
}

inline std::optional<PpoRule> rule_from_name(std::string_view name) {
  for (PpoRule r : kAllPpoRules)
    if (rule_name(r) == name) return r;
  return std::nullopt;
}

class PpoRuleSet {
 public:
  static PpoRuleSet all() {
    PpoRuleSet s;
    s.enabled_.fill(true);
    return s;
  }
  static PpoRuleSet none() { return PpoRuleSet{}; }

  bool enabled(PpoRule r) const { return enabled_[index(r)]; }
  PpoRuleSet& enable(PpoRule r) {
    enabled_[index(r)] = true;
    return *this;
  }
  PpoRuleSet& disable(PpoRule r) {
    enabled_[index(r)] = false;
    return *this;
  }

  bool operator==(const PpoRuleSet&) const = default;

 private:
  static std::size_t index(PpoRule r) { return static_cast<std::size_t>(r); }
  std::array<bool, kAllPpoRules.size()> enabled_{};
};

namespace detail {

inline bool fence_orders(const FenceSet& set, const Event& e) {
  return (e.is_read() && set.reads) || (e.is_write() && set.writes);
}

}  // namespace detail

/// Pairs (a, b) of memory events, a po-before b, that every observer sees in
/// program order. Fences mediate but never appear as endpoints.
inline Relation compute_ppo(const EventStructure& s, const PpoRuleSet& rules) {
  Relation ppo(s.size());
  for (const auto& ids : s.hart_events) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Event& a = s[ids[i]];
      if (!a.is_memory()) continue;
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const Event& b = s[ids[j]];
        if (!b.is_memory()) continue;
        bool ordered = false;
        if (rules.enabled(PpoRule::Acquire))
          ordered |= a.is_read() && a.annotation == Annotation::Acquire;
        if (rules.enabled(PpoRule::Release))
          ordered |= b.is_write() && b.annotation == Annotation::Release;
        if (rules.enabled(PpoRule::CoherenceWW))
          ordered |= a.is_write() && b.is_write() && a.location == b.location;
        if (rules.enabled(PpoRule::Dependency))
          ordered |= s.addr_dep.contains(a.id, b.id) || s.data_dep.contains(a.id, b.id);
        if (rules.enabled(PpoRule::Fence) && !ordered) {
          for (std::size_t k = i + 1; k < j && !ordered; ++k) {
            const Event& f = s[ids[k]];
            ordered = f.kind == EventKind::Fence &&
                      detail::fence_orders(f.fence_predecessors, a) &&
                      detail::fence_orders(f.fence_successors, b);
          }
        }
        if (ordered) ppo.insert(a.id, b.id);
      }
    }
  }
  return ppo;
}

/// One choice of reads-from and coherence order, with resolved values.
struct CandidateExecution {
  std::size_t ordinal = 0;  // position in enumeration order
  std::vector<EventId> read_source;  // per event; meaningful for reads
  std::vector<std::vector<EventId>> coherence;  // per location, initial write first
  Relation rf;  // (write, read)
  Relation co;  // transitive, per location
  Relation fr;  // (read, write)
  std::vector<Word> values;  // per event; reads and writes
  std::vector<RegisterFile> registers;  // final register file per hart
  bool consistent = false;

  /// Final memory contents: the value of each location's co-last write.
  std::vector<Word> final_memory() const {
    std::vector<Word> out;
    for (const auto& order : coherence) out.push_back(values[order.back()]);
    return out;
  }
};

inline Relation rf_external(const EventStructure& s, const CandidateExecution& x) {
  return x.rf.filter([&](EventId w, EventId r) { return s[w].hart != s[r].hart; });
}

inline Relation po_loc(const EventStructure& s) {
  return s.po.filter([&](EventId a, EventId b) {
    return s[a].is_memory() && s[b].is_memory() && s[a].location == s[b].location;
  });
}

/// A failing axiom's cycle, with each edge named by a relation containing it.
struct LabeledCycle {
  Cycle cycle;
  std::vector<std::string> edges;  // edges[i] labels events[i] -> events[i+1]
};

struct AxiomCheck {
  std::optional<LabeledCycle> failure;
  bool passed() const { return !failure.has_value(); }
};

using NamedRelation = std::pair<std::string, Relation>;

/// Labels every edge of `cycle` with the first relation in `parts` holding it.
inline LabeledCycle label_cycle(const Cycle& cycle, const std::vector<NamedRelation>& parts) {
  LabeledCycle out{cycle, {}};
  for (std::size_t i = 0; i + 1 < cycle.events.size(); ++i) {
    std::string label = "?";
    for (const auto& [name, rel] : parts)
      if (rel.contains(cycle.events[i], cycle.events[i + 1])) {
        label = name;
        break;
      }
    out.edges.push_back(label);
  }
  return out;
}

inline AxiomCheck check_union_acyclic(std::vector<NamedRelation> parts) {
  Relation all;
  for (const auto& [name, rel] : parts) all |= rel;
  if (auto cycle = acyclic_or_cycle(all)) return {label_cycle(*cycle, parts)};
  return {};
}

/// Per-location sequential consistency: po-loc | rf | co | fr is acyclic.
inline AxiomCheck coherence_check(const EventStructure& s, const CandidateExecution& x) {
  return check_union_acyclic(
      {{"po-loc", po_loc(s)}, {"rf", x.rf}, {"co", x.co}, {"fr", x.fr}});
}

/// ppo | rfe | co | fr is acyclic. Same-hart rf is left out (store forwarding).
inline AxiomCheck main_axiom_check(const EventStructure& s, const CandidateExecution& x,
                                   const Relation& ppo) {
  return check_union_acyclic(
      {{"ppo", ppo}, {"rf", rf_external(s, x)}, {"co", x.co}, {"fr", x.fr}});
}

/// Transitive closure of ppo | rfe. Reporting only; verdicts never use it.
inline Relation happens_before(const EventStructure& s, const CandidateExecution& x,
                               const Relation& ppo) {
  return transitive_closure(ppo | rf_external(s, x));
}

}  // namespace rvlitmus
