#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rvlitmus/enumerator.hpp"
#include "rvlitmus/parser.hpp"
#include "rvlitmus/report.hpp"
#include "test_support.hpp"

using namespace rvlitmus;
using rvlitmus::fixtures::event_at;
using rvlitmus::fixtures::listing;

namespace {

// Closed-form candidate count from the program text alone: each load picks
// any write to its location (initial write included), each location's
// program writes take any order.
std::size_t expected_candidates(const LitmusTest& t) {
  std::map<std::string, std::size_t> loads, stores;
  for (std::size_t h = 0; h < t.programs.size(); ++h) {
    std::map<int, std::string> base;
    for (const RegisterInit& r : t.register_init)
      if (r.hart == static_cast<int>(h))
        if (const auto* loc = std::get_if<std::string>(&r.value)) base[r.reg.index] = *loc;
    for (const Instruction& insn : t.programs[h]) {
      if (const auto* l = std::get_if<Load>(&insn)) ++loads[base.at(l->base.index)];
      if (const auto* s = std::get_if<Store>(&insn)) ++stores[base.at(s->base.index)];
    }
  }
  std::size_t n = 1;
  for (const auto& [loc, k] : loads)
    for (std::size_t i = 0; i < k; ++i) n *= stores[loc] + 1;
  for (const auto& [loc, k] : stores)
    for (std::size_t i = 2; i <= k; ++i) n *= i;
  return n;
}

const CandidateExecution* find_source(const std::vector<CandidateExecution>& xs,
                                      const std::vector<std::pair<EventId, EventId>>& rf) {
  for (const auto& x : xs) {
    bool ok = true;
    for (const auto& [w, r] : rf) ok = ok && x.read_source[r] == w;
    if (ok) return &x;
  }
  return nullptr;
}

std::vector<CandidateExecution> all_candidates(const LitmusTest& t, const EventStructure& s) {
  std::vector<CandidateExecution> out;
  enumerate_candidates(t, s, kDefaultCandidateCap,
                       [&](const CandidateExecution& x) { out.push_back(x); });
  return out;
}

}  // namespace

TEST(EnumerateCandidates, ListingTwoHasFour) {
  const LitmusTest t = listing(2);
  const EventStructure s = elaborate_events(t);
  EXPECT_EQ(candidate_space_size(s), 4u);
  const auto xs = all_candidates(t, s);
  EXPECT_EQ(xs.size(), 4u);
}

TEST(EnumerateCandidates, ListingFourHasSixteen) {
  const LitmusTest t = listing(4);
  const EventStructure s = elaborate_events(t);
  EXPECT_EQ(candidate_space_size(s), 16u);
  EXPECT_EQ(all_candidates(t, s).size(), 16u);
}

TEST(EnumerateCandidates, NoMemoryEventsGivesOneCandidate) {
  const LitmusTest t = parse_litmus(
      "RISCV empty\n{x=0;}\nP0 ;\naddi x3,x0,1 ;\nexists (0:x3=1)\n");
  const EventStructure s = elaborate_events(t);
  EXPECT_EQ(s.program_event_count(), 0u);
  const auto xs = all_candidates(t, s);
  ASSERT_EQ(xs.size(), 1u);
  EXPECT_TRUE(evaluate_condition(xs[0], t.condition, t));
  EXPECT_EQ(solve_test(t).status, Outcome::Allowed);
}

TEST(EnumerateCandidates, CoherenceOrdersArePermuted) {
  const LitmusTest t = parse_litmus(
      "RISCV 2+2W\n{0:x1=x; 1:x1=x; 2:x1=x; x=0;}\nP0 | P1 | P2 ;\n"
      "addi x3,x0,1 | addi x3,x0,2 | addi x3,x0,3 ;\n"
      "sw x3,0(x1) | sw x3,0(x1) | sw x3,0(x1) ;\nexists (x=1)\n");
  const EventStructure s = elaborate_events(t);
  const auto xs = all_candidates(t, s);
  ASSERT_EQ(xs.size(), 6u);
  std::set<std::vector<EventId>> orders;
  for (const auto& x : xs) {
    ASSERT_EQ(x.coherence.size(), 1u);
    EXPECT_EQ(x.coherence[0].front(), s.initial_writes[0]);
    orders.insert(x.coherence[0]);
  }
  EXPECT_EQ(orders.size(), 6u);
  const Verdict v = solve_test(t);
  EXPECT_EQ(v.status, Outcome::Allowed);
  EXPECT_EQ(v.states.size(), 3u);  // x ends as 1, 2 or 3
}

TEST(EnumerateCandidates, ExhaustiveAndDistinctOnRandomTests) {
  std::mt19937 rng(29);
  for (int i = 0; i < 120; ++i) {
    const LitmusTest t = fixtures::random_test(rng);
    const EventStructure s = elaborate_events(t);
    EXPECT_EQ(candidate_space_size(s), expected_candidates(t));
    std::set<std::pair<std::vector<EventId>, std::vector<std::vector<EventId>>>> seen;
    std::size_t ordinal = 0;
    bool in_order = true;
    const EnumerationStats stats =
        enumerate_candidates(t, s, kDefaultCandidateCap, [&](const CandidateExecution& x) {
          seen.insert({x.read_source, x.coherence});
          in_order = in_order && x.ordinal >= ordinal;
          ordinal = x.ordinal + 1;
          EXPECT_TRUE(x.consistent);
          // Every read's value is its source write's value.
          for (const auto& [w, r] : x.rf.pairs()) EXPECT_EQ(x.values[w], x.values[r]);
          EXPECT_EQ(x.fr, derive_fr(x.rf, x.co));
        });
    EXPECT_EQ(stats.generated, expected_candidates(t));
    EXPECT_EQ(seen.size() + stats.inconsistent, stats.generated);
    EXPECT_TRUE(in_order);
  }
}

TEST(EnumerateCandidates, CapIsCheckedBeforeWork) {
  const LitmusTest t = listing(4);
  const EventStructure s = elaborate_events(t);
  bool visited = false;
  EXPECT_THROW(enumerate_candidates(t, s, 15, [&](const CandidateExecution&) { visited = true; }),
               ResourceLimitError);
  EXPECT_FALSE(visited);
  SolveOptions options;
  options.candidate_cap = 3;
  EXPECT_THROW(solve_test(listing(2), options), ResourceLimitError);
  options.candidate_cap = 4;
  EXPECT_NO_THROW(solve_test(listing(2), options));
}

TEST(EvaluateCondition, ListingOne) {
  const LitmusTest t = listing(1);
  const EventStructure s = elaborate_events(t);
  const auto xs = all_candidates(t, s);
  const EventId wx = event_at(s, 0, 0), wy = event_at(s, 0, 1);
  const EventId ry = event_at(s, 1, 0), rx = event_at(s, 1, 1);
  const EventId ix = s.initial_writes[0], iy = s.initial_writes[1];
  ASSERT_EQ(s.locations, (std::vector<std::string>{"x", "y"}));

  const auto* relaxed = find_source(xs, {{wy, ry}, {ix, rx}});
  ASSERT_NE(relaxed, nullptr);
  EXPECT_TRUE(evaluate_condition(*relaxed, t.condition, t));
  for (const auto* other : {find_source(xs, {{iy, ry}, {ix, rx}}),
                            find_source(xs, {{iy, ry}, {wx, rx}}),
                            find_source(xs, {{wy, ry}, {wx, rx}})}) {
    ASSERT_NE(other, nullptr);
    EXPECT_FALSE(evaluate_condition(*other, t.condition, t));
  }
  const auto keys = observables(t);
  EXPECT_EQ(final_state(t, *relaxed, keys), (FinalState{Word{1}, Word{0}}));
}

TEST(EvaluateCondition, LocationAtomsUseCoLastWrite) {
  const LitmusTest t = parse_litmus(
      "RISCV co\n{0:x1=x; 1:x1=x; x=0;}\nP0 | P1 ;\naddi x3,x0,1 | addi x3,x0,2 ;\n"
      "sw x3,0(x1) | sw x3,0(x1) ;\nexists (x=2)\n");
  const EventStructure s = elaborate_events(t);
  for (const auto& x : all_candidates(t, s))
    EXPECT_EQ(evaluate_condition(x, t.condition, t),
              x.coherence[0].back() == event_at(s, 1, 0));
}

TEST(SolveTest, AppendixVerdicts) {
  EXPECT_EQ(solve_test(listing(1)).status, Outcome::Allowed);
  EXPECT_EQ(solve_test(listing(2)).status, Outcome::Forbidden);
  EXPECT_EQ(solve_test(listing(3)).status, Outcome::Forbidden);
  EXPECT_EQ(solve_test(listing(4)).status, Outcome::Allowed);
}

TEST(SolveTest, ListingOneSeesAllFourStates) {
  const Verdict v = solve_test(listing(1));
  EXPECT_EQ(v.states.size(), 4u);
  EXPECT_EQ(v.positive, 1u);
  EXPECT_EQ(v.negative, 3u);
  EXPECT_EQ(v.witnesses.size(), 1u);
  EXPECT_TRUE(v.forbidding_cycles.empty());
}

TEST(SolveTest, ForbiddenTestsCarryCycles) {
  for (int n : {2, 3}) {
    const Verdict v = solve_test(listing(n));
    EXPECT_EQ(v.positive, 0u);
    EXPECT_TRUE(v.witnesses.empty());
    ASSERT_FALSE(v.forbidding_cycles.empty());
    EXPECT_EQ(v.forbidding_cycles.front().axiom, "main");
  }
}

TEST(SolveTest, CountsAddUp) {
  std::mt19937 rng(31);
  for (int i = 0; i < 80; ++i) {
    const LitmusTest t = fixtures::random_test(rng);
    const Verdict v = solve_test(t);
    std::size_t in_states = 0;
    for (const auto& [state, count] : v.states) in_states += count;
    EXPECT_EQ(in_states, v.positive + v.negative);
    EXPECT_LE(v.positive + v.negative + v.near_misses, v.candidates);
    EXPECT_EQ(v.candidates + v.inconsistent, candidate_space_size(v.structure));
    EXPECT_EQ(v.status == Outcome::Allowed, v.positive > 0);
    const Relation ppo = compute_ppo(v.structure, PpoRuleSet::all());
    for (const auto& w : v.witnesses) {
      EXPECT_TRUE(evaluate_condition(w, t.condition, t));
      EXPECT_TRUE(coherence_check(v.structure, w).passed());
      EXPECT_TRUE(main_axiom_check(v.structure, w, ppo).passed());
    }
  }
}

TEST(SolveTest, RejectsInvalidTests) {
  const LitmusTest t = parse_litmus(
      "RISCV bad\n{0:x1=x; x=0;}\nP0 ;\nsw x3,0(x1) ;\nexists (x=0)\n");
  try {
    solve_test(t);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_NE(e.diagnostics()[0].find("x3"), std::string::npos);
  }
}

TEST(SolveTest, AnnotationsOnlyRemoveStates) {
  // Listing 2 is Listing 1 with acquire/release added; Listing 3 and 4 share
  // a condition, and 4 replaces fences with weaker annotations.
  const auto s1 = solve_test(listing(1)).state_set(), s2 = solve_test(listing(2)).state_set();
  EXPECT_TRUE(std::includes(s1.begin(), s1.end(), s2.begin(), s2.end()));
  EXPECT_LT(s2.size(), s1.size());
  const auto s3 = solve_test(listing(3)).state_set(), s4 = solve_test(listing(4)).state_set();
  EXPECT_TRUE(std::includes(s4.begin(), s4.end(), s3.begin(), s3.end()));
  EXPECT_GT(s4.size(), s3.size());
}

TEST(SolveTest, StrengtheningNeverAddsStates) {
  std::mt19937 rng(37);
  int applied = 0;
  for (int i = 0; i < 100; ++i) {
    const LitmusTest t = fixtures::random_test(rng);
    LitmusTest stronger = t;
    if (!fixtures::strengthen(stronger, rng)) continue;
    ++applied;
    const auto weak = solve_test(t).state_set(), strong = solve_test(stronger).state_set();
    EXPECT_TRUE(std::includes(weak.begin(), weak.end(), strong.begin(), strong.end()))
        << print_litmus(stronger);
  }
  EXPECT_GT(applied, 50);
}

TEST(SolveTest, RuleAblationsNeverRemoveStates) {
  std::mt19937 rng(41);
  for (int i = 0; i < 60; ++i) {
    const LitmusTest t = fixtures::random_test(rng);
    const auto full = solve_test(t).state_set();
    for (PpoRule r : kAllPpoRules) {
      SolveOptions o;
      o.rules.disable(r);
      const auto weaker = solve_test(t, o).state_set();
      EXPECT_TRUE(std::includes(weaker.begin(), weaker.end(), full.begin(), full.end()));
    }
  }
}

TEST(SolveTest, Deterministic) {
  for (int n = 1; n <= 4; ++n)
    EXPECT_EQ(format_report(solve_test(listing(n))), format_report(solve_test(listing(n))));
}

TEST(CheckExpectation, AllThreeResults) {
  LitmusTest t = listing(2);
  const Verdict v = solve_test(t);
  EXPECT_EQ(check_expectation(v, t), ExpectationResult::NoExpectation);
  t.expected = Outcome::Forbidden;
  EXPECT_EQ(check_expectation(v, t), ExpectationResult::Match);
  t.expected = Outcome::Allowed;
  EXPECT_EQ(check_expectation(v, t), ExpectationResult::Mismatch);
  EXPECT_STREQ(to_string(ExpectationResult::Mismatch), "Mismatch");
}

TEST(CheckExpectation, AppendixSidecarsMatch) {
  for (int n = 1; n <= 4; ++n) {
    const LitmusTest t = parse_litmus(fixtures::read_text(
        fixtures::appendix_path(n).substr(std::string(RVLITMUS_SOURCE_DIR).size() + 1)));
    ASSERT_TRUE(t.expected);
    EXPECT_EQ(check_expectation(solve_test(t), t), ExpectationResult::Match) << n;
  }
}
