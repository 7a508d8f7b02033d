#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "rvlitmus/relation.hpp"

using namespace rvlitmus;

namespace {

// Reachability by explicit path search, independent of the Warshall closure.
bool reachable(const Relation& r, EventId from, EventId to) {
  std::vector<bool> seen(r.carrier(), false);
  std::vector<EventId> work = r.successors(from);
  while (!work.empty()) {
    const EventId n = work.back();
    work.pop_back();
    if (n == to) return true;
    if (seen[n]) continue;
    seen[n] = true;
    for (EventId m : r.successors(n)) work.push_back(m);
  }
  return false;
}

bool is_walk(const Relation& r, const Cycle& c) {
  if (c.events.size() < 2 || c.events.front() != c.events.back()) return false;
  for (std::size_t i = 0; i + 1 < c.events.size(); ++i)
    if (!r.contains(c.events[i], c.events[i + 1])) return false;
  return true;
}

Relation random_relation(std::mt19937& rng, std::size_t n, double density) {
  Relation r(n);
  std::bernoulli_distribution edge(density);
  for (EventId a = 0; a < n; ++a)
    for (EventId b = 0; b < n; ++b)
      if (edge(rng)) r.insert(a, b);
  return r;
}

}  // namespace

TEST(TransitiveClosure, ChainOfTwo) {
  const Relation r(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(transitive_closure(r), Relation(3, {{0, 1}, {1, 2}, {0, 2}}));
}

TEST(TransitiveClosure, Empty) {
  EXPECT_TRUE(transitive_closure(Relation(5)).empty());
}

TEST(TransitiveClosure, ProgramOrderOfFourEventsIsAlreadyTransitive) {
  Relation po(4);
  for (EventId a = 0; a < 4; ++a)
    for (EventId b = a + 1; b < 4; ++b) po.insert(a, b);
  EXPECT_EQ(po.size(), 6u);
  EXPECT_EQ(transitive_closure(po), po);
}

TEST(TransitiveClosure, MatchesPathSearchAndIsIdempotent) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 9;
    const Relation r = random_relation(rng, n, 0.2);
    const Relation c = transitive_closure(r);
    for (EventId a = 0; a < n; ++a)
      for (EventId b = 0; b < n; ++b)
        ASSERT_EQ(c.contains(a, b), reachable(r, a, b)) << a << "->" << b;
    EXPECT_EQ(transitive_closure(c), c);
    EXPECT_TRUE(r.subset_of(c));
  }
}

TEST(AcyclicOrCycle, TwoCycle) {
  const auto c = acyclic_or_cycle(Relation(2, {{0, 1}, {1, 0}}));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->events, (std::vector<EventId>{0, 1, 0}));
}

TEST(AcyclicOrCycle, ChainIsAcyclic) {
  Relation po(6);
  for (EventId a = 0; a < 6; ++a)
    for (EventId b = a + 1; b < 6; ++b) po.insert(a, b);
  EXPECT_FALSE(acyclic_or_cycle(po));
}

TEST(AcyclicOrCycle, SelfLoop) {
  const auto c = acyclic_or_cycle(Relation(3, {{0, 1}, {2, 2}}));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->events, (std::vector<EventId>{2, 2}));
}

TEST(AcyclicOrCycle, AgreesWithClosureAndReturnsRealCycles) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const Relation r = random_relation(rng, n, 0.12);
    const Relation c = transitive_closure(r);
    bool cyclic = false;
    for (EventId a = 0; a < n; ++a) cyclic = cyclic || c.contains(a, a);
    const auto found = acyclic_or_cycle(r);
    ASSERT_EQ(found.has_value(), cyclic);
    EXPECT_EQ(acyclic_or_cycle(c).has_value(), cyclic);
    if (found) {
      EXPECT_TRUE(is_walk(r, *found));
      EXPECT_EQ(acyclic_or_cycle(r), found);  // deterministic
    }
  }
}

TEST(DeriveFr, ReadOfInitialValueIsBeforeEveryWrite) {
  // 0 = initial write, 1 and 2 program writes, 3 the read.
  const Relation co(4, {{0, 1}, {0, 2}, {1, 2}});
  const Relation rf(4, {{0, 3}});
  EXPECT_EQ(derive_fr(rf, co), Relation(4, {{3, 1}, {3, 2}}));
}

TEST(DeriveFr, ReadOfCoMaximalWriteHasNoFr) {
  const Relation co(4, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_TRUE(derive_fr(Relation(4, {{2, 3}}), co).empty());
}

TEST(DeriveFr, ReadFromMiddleWrite) {
  const Relation co(4, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_EQ(derive_fr(Relation(4, {{1, 3}}), co), Relation(4, {{3, 2}}));
}

TEST(DeriveFr, DisjointFromInverseRf) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    // Writes 0..3 to one location in a random co order, reads 4..6.
    std::vector<EventId> order{0, 1, 2, 3};
    std::shuffle(order.begin() + 1, order.end(), rng);
    Relation co(7);
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) co.insert(order[i], order[j]);
    Relation rf(7);
    std::uniform_int_distribution<EventId> src(0, 3);
    for (EventId r = 4; r < 7; ++r) rf.insert(src(rng), r);
    const Relation fr = derive_fr(rf, co);
    for (const auto& [r, w] : fr.pairs()) {
      EXPECT_GE(r, 4u);
      EXPECT_LT(w, 4u);
      EXPECT_FALSE(rf.contains(w, r));
    }
  }
}

TEST(RelationAlgebra, ComposeAndInverse) {
  const Relation a(4, {{0, 1}, {1, 2}});
  const Relation b(4, {{1, 3}, {2, 0}});
  EXPECT_EQ(a.compose(b), Relation(4, {{0, 3}, {1, 0}}));
  EXPECT_EQ(a.inverse(), Relation(4, {{1, 0}, {2, 1}}));
  EXPECT_EQ((a | b).size(), 4u);
}
