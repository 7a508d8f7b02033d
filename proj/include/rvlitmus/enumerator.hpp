#pragma once

// Exhaustive enumeration of candidate executions and verdict computation.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rvlitmus/litmus.hpp"
#include "rvlitmus/model.hpp"
#include "rvlitmus/relation.hpp"
#include "rvlitmus/semantics.hpp"
#include "rvlitmus/validate.hpp"

namespace rvlitmus {

/// Thrown when a configured search bound would be exceeded.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by solve_test for tests that fail validation.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> diagnostics)
      : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  static std::string join(const std::vector<std::string>& d) {
    std::string out;
    for (const auto& s : d) out += (out.empty() ? "" : "; ") + s;
    return out;
  }
  std::vector<std::string> diagnostics_;
};

inline constexpr std::size_t kDefaultCandidateCap = 1'000'000;
inline constexpr std::size_t kDefaultWitnessCap = 16;

struct EnumerationStats {
  std::size_t generated = 0;     // every (rf, co) combination visited
  std::size_t inconsistent = 0;  // dropped because values did not stabilize
};

namespace detail {

inline std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
    return std::numeric_limits<std::size_t>::max();
  return a * b;
}

inline std::vector<std::vector<EventId>> rf_sources(const EventStructure& s) {
  std::vector<std::vector<EventId>> sources(s.size());
  for (const Event& e : s.events)
    if (e.is_read() && e.location) sources[e.id] = s.writes_to(*e.location);
  return sources;
}

}  // namespace detail

/// Number of (rf, co) combinations: for every read the number of same-location
/// writes (initial included), times the orderings of each location's program
/// writes. Saturates at SIZE_MAX.
inline std::size_t candidate_space_size(const EventStructure& s) {
  std::size_t total = 1;
  for (const auto& src : detail::rf_sources(s))
    if (!src.empty()) total = detail::saturating_mul(total, src.size());
  for (std::size_t loc = 0; loc < s.locations.size(); ++loc) {
    const std::size_t writes = s.writes_to(LocationId{loc}).size() - 1;
    for (std::size_t k = 2; k <= writes; ++k) total = detail::saturating_mul(total, k);
  }
  return total;
}

/// Visits every value-consistent candidate once, in a fixed order. Throws
/// ResourceLimitError up front if the space exceeds `cap`.
inline EnumerationStats enumerate_candidates(
    const LitmusTest& test, const EventStructure& s, std::size_t cap,
    const std::function<void(const CandidateExecution&)>& visit) {
  const std::size_t space = candidate_space_size(s);
  if (space > cap)
    throw ResourceLimitError("test '" + test.name + "' has " +
                             (space == std::numeric_limits<std::size_t>::max()
                                  ? std::string("too many")
                                  : std::to_string(space)) +
                             " candidate executions, cap is " + std::to_string(cap));

  const auto sources = detail::rf_sources(s);
  std::vector<EventId> reads;
  for (const Event& e : s.events)
    if (e.is_read()) reads.push_back(e.id);

  // Program writes per location, permuted in place for co.
  std::vector<std::vector<EventId>> co_tail(s.locations.size());
  for (std::size_t loc = 0; loc < s.locations.size(); ++loc) {
    auto w = s.writes_to(LocationId{loc});
    co_tail[loc].assign(w.begin() + 1, w.end());
  }

  const auto init_regs = initial_registers(test);
  const std::size_t harts = test.hart_count();
  std::vector<std::vector<EventId>> hart_reads(harts), hart_writes(harts);
  for (std::size_t h = 0; h < harts; ++h)
    for (EventId id : s.hart_events[h]) {
      if (s[id].is_read()) hart_reads[h].push_back(id);
      if (s[id].is_write()) hart_writes[h].push_back(id);
    }

  EnumerationStats stats;
  std::vector<std::size_t> choice(reads.size(), 0);
  for (;;) {  // co odometer (outer)
    std::fill(choice.begin(), choice.end(), 0);
    for (;;) {  // rf odometer (inner)
      CandidateExecution x;
      x.ordinal = stats.generated++;
      x.read_source.assign(s.size(), s.size());
      x.rf = Relation(s.size());
      x.co = Relation(s.size());
      for (std::size_t i = 0; i < reads.size(); ++i) {
        const EventId w = sources[reads[i]][choice[i]];
        x.read_source[reads[i]] = w;
        x.rf.insert(w, reads[i]);
      }
      for (std::size_t loc = 0; loc < co_tail.size(); ++loc) {
        std::vector<EventId> order{s.initial_writes[loc]};
        order.insert(order.end(), co_tail[loc].begin(), co_tail[loc].end());
        for (std::size_t i = 0; i < order.size(); ++i)
          for (std::size_t j = i + 1; j < order.size(); ++j) x.co.insert(order[i], order[j]);
        x.coherence.push_back(std::move(order));
      }
      x.fr = derive_fr(x.rf, x.co);

      // Value fixpoint: reads take their source's value, writes are recomputed
      // from the reads. Bounded by the event count.
      x.values.assign(s.size(), 0);
      for (std::size_t loc = 0; loc < s.initial_writes.size(); ++loc)
        x.values[s.initial_writes[loc]] = test.memory_init[loc].value;
      x.registers.assign(harts, RegisterFile{});
      const std::size_t bound = s.size() + 1;
      for (std::size_t round = 0; round <= bound && !x.consistent; ++round) {
        for (std::size_t h = 0; h < harts; ++h) {
          std::vector<Word> rv;
          for (EventId r : hart_reads[h]) rv.push_back(x.values[r]);
          HartResult res = hart_eval(test.programs[h], init_regs[h], rv);
          for (std::size_t k = 0; k < hart_writes[h].size(); ++k)
            x.values[hart_writes[h][k]] = res.write_values[k];
          x.registers[h] = std::move(res.registers);
        }
        bool stable = true;
        for (EventId r : reads) {
          const Word v = x.values[x.read_source[r]];
          stable = stable && x.values[r] == v;
          x.values[r] = v;
        }
        x.consistent = stable;
      }
      if (x.consistent)
        visit(x);
      else
        ++stats.inconsistent;

      std::size_t i = 0;
      for (; i < reads.size(); ++i) {
        if (++choice[i] < sources[reads[i]].size()) break;
        choice[i] = 0;
      }
      if (i == reads.size()) break;
    }
    std::size_t loc = 0;
    for (; loc < co_tail.size(); ++loc)
      if (std::next_permutation(co_tail[loc].begin(), co_tail[loc].end())) break;
    if (loc == co_tail.size()) break;
  }
  return stats;
}

/// Values of `keys` in the candidate's final state.
inline FinalState final_state(const LitmusTest& test, const CandidateExecution& x,
                              const std::vector<Observable>& keys) {
  FinalState out;
  const auto memory = x.final_memory();
  for (const Observable& key : keys) {
    if (const auto* r = std::get_if<RegisterKey>(&key)) {
      out.push_back(static_cast<std::size_t>(r->hart) < x.registers.size()
                        ? read_register(x.registers[r->hart], r->reg)
                        : Value{Word{0}});
    } else {
      const auto loc = test.find_location(std::get<LocationKey>(key).location);
      out.push_back(loc ? Value{memory[loc->index]} : Value{Word{0}});
    }
  }
  return out;
}

inline bool evaluate_condition(const CandidateExecution& x, const ExistsPredicate& condition,
                               const LitmusTest& test) {
  for (const Atom& atom : condition.atoms) {
    Value actual;
    Word expected = 0;
    if (const auto* r = std::get_if<RegisterAtom>(&atom)) {
      if (static_cast<std::size_t>(r->hart) >= x.registers.size()) return false;
      actual = read_register(x.registers[r->hart], r->reg);
      expected = r->value;
    } else {
      const auto& l = std::get<LocationAtom>(atom);
      const auto loc = test.find_location(l.location);
      if (!loc) return false;
      actual = x.final_memory()[loc->index];
      expected = l.value;
    }
    if (actual != Value{expected}) return false;
  }
  return true;
}

struct SolveOptions {
  PpoRuleSet rules = PpoRuleSet::all();
  std::size_t candidate_cap = kDefaultCandidateCap;
  std::size_t witness_cap = kDefaultWitnessCap;
};

/// A candidate that satisfies the predicate but fails an axiom.
struct NearMiss {
  CandidateExecution execution;
  std::string axiom;  // "coherence" or "main"
  LabeledCycle cycle;
};

struct Verdict {
  std::string test_name;
  std::vector<Observable> observables;
  Outcome status = Outcome::Forbidden;
  bool predicate_satisfiable = false;
  std::size_t candidates = 0;    // value-consistent candidates
  std::size_t inconsistent = 0;  // dropped by value resolution
  std::size_t positive = 0;      // axiom-consistent, predicate holds
  std::size_t negative = 0;      // axiom-consistent, predicate fails
  std::size_t near_misses = 0;
  std::map<FinalState, std::size_t> states;
  std::vector<CandidateExecution> witnesses;
  std::vector<NearMiss> forbidding_cycles;
  std::optional<Outcome> expected;
  std::string condition_text;
  EventStructure structure;

  std::set<FinalState> state_set() const {
    std::set<FinalState> out;
    for (const auto& [state, count] : states) out.insert(state);
    return out;
  }
};

inline std::string condition_string(const ExistsPredicate& c) {
  std::string out = "exists (";
  for (std::size_t i = 0; i < c.atoms.size(); ++i) {
    if (i) out += " /\\ ";
    if (const auto* r = std::get_if<RegisterAtom>(&c.atoms[i]))
      out += std::to_string(r->hart) + ":" + r->reg.name() + "=" + std::to_string(r->value);
    else {
      const auto& l = std::get<LocationAtom>(c.atoms[i]);
      out += l.location + "=" + std::to_string(l.value);
    }
  }
  return out + ")";
}

inline Verdict solve_test(const LitmusTest& test, const SolveOptions& options = {}) {
  if (auto diags = validate(test); !diags.empty()) throw ValidationError(std::move(diags));

  Verdict v;
  v.structure = elaborate_events(test);
  const EventStructure& s = v.structure;
  const Relation ppo = compute_ppo(s, options.rules);

  v.test_name = test.name;
  v.observables = observables(test);
  v.expected = test.expected;
  v.condition_text = condition_string(test.condition);

  const EnumerationStats stats =
      enumerate_candidates(test, s, options.candidate_cap, [&](const CandidateExecution& x) {
        ++v.candidates;
        const bool holds = evaluate_condition(x, test.condition, test);
        AxiomCheck check = coherence_check(s, x);
        std::string axiom = "coherence";
        if (check.passed()) {
          check = main_axiom_check(s, x, ppo);
          axiom = "main";
        }
        if (!check.passed()) {
          if (holds) {
            ++v.near_misses;
            if (v.forbidding_cycles.size() < options.witness_cap)
              v.forbidding_cycles.push_back({x, axiom, *check.failure});
          }
          return;
        }
        ++v.states[final_state(test, x, v.observables)];
        if (holds) {
          ++v.positive;
          if (v.witnesses.size() < options.witness_cap) v.witnesses.push_back(x);
        } else {
          ++v.negative;
        }
      });
  v.inconsistent = stats.inconsistent;
  v.predicate_satisfiable = v.positive > 0;
  v.status = v.predicate_satisfiable ? Outcome::Allowed : Outcome::Forbidden;
  return v;
}

enum class ExpectationResult { Match, Mismatch, NoExpectation };

inline const char* to_string(ExpectationResult r) {
  switch (r) {
    case ExpectationResult::Match: return "Match";
    case ExpectationResult::Mismatch: return "Mismatch";
    case ExpectationResult::NoExpectation: return "NoExpectation";
  }
  return "?";
}

inline ExpectationResult check_expectation(const Verdict& verdict, const LitmusTest& test) {
  if (!test.expected) return ExpectationResult::NoExpectation;
  return *test.expected == verdict.status ? ExpectationResult::Match
                                          : ExpectationResult::Mismatch;
}

}  // namespace rvlitmus
