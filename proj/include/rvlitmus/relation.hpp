#pragma once

// Finite binary relations over dense event ids [0, carrier).

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace rvlitmus {

using EventId = std::size_t;

class Relation {
 public:
  using Pair = std::pair<EventId, EventId>;

  Relation() = default;
  explicit Relation(std::size_t carrier) : carrier_(carrier) {}
  Relation(std::size_t carrier, std::initializer_list<Pair> pairs)
      : carrier_(carrier) {
    for (const Pair& p : pairs) insert(p.first, p.second);
  }

  std::size_t carrier() const { return carrier_; }
  const std::set<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  void insert(EventId a, EventId b) {
    carrier_ = std::max({carrier_, a + 1, b + 1});
    pairs_.emplace(a, b);
  }
  bool contains(EventId a, EventId b) const { return pairs_.count({a, b}) != 0; }

  std::vector<EventId> successors(EventId a) const {
    std::vector<EventId> out;
    for (auto it = pairs_.lower_bound({a, 0}); it != pairs_.end() && it->first == a; ++it)
      out.push_back(it->second);
    return out;
  }

  Relation& operator|=(const Relation& other) {
    carrier_ = std::max(carrier_, other.carrier_);
    pairs_.insert(other.pairs_.begin(), other.pairs_.end());
    return *this;
  }
  friend Relation operator|(Relation a, const Relation& b) { return a |= b; }

  /// Relational composition: {(a, c) : (a, b) in this, (b, c) in other}.
  Relation compose(const Relation& other) const {
    Relation out(std::max(carrier_, other.carrier_));
    for (const auto& [a, b] : pairs_)
      for (EventId c : other.successors(b)) out.insert(a, c);
    return out;
  }

  Relation inverse() const {
    Relation out(carrier_);
    for (const auto& [a, b] : pairs_) out.insert(b, a);
    return out;
  }

  Relation filter(const std::function<bool(EventId, EventId)>& keep) const {
    Relation out(carrier_);
    for (const auto& [a, b] : pairs_)
      if (keep(a, b)) out.pairs_.emplace(a, b);
    return out;
  }

  bool subset_of(const Relation& other) const {
    return std::includes(other.pairs_.begin(), other.pairs_.end(), pairs_.begin(),
                         pairs_.end());
  }

  bool operator==(const Relation& other) const { return pairs_ == other.pairs_; }

 private:
  std::size_t carrier_ = 0;
  std::set<Pair> pairs_;
};

/// Smallest transitive relation containing `r`.
inline Relation transitive_closure(const Relation& r) {
  const std::size_t n = r.carrier();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [a, b] : r.pairs()) reach[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  Relation out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) out.insert(i, j);
  return out;
}

/// A closed walk [e0, e1, ..., e0] along relation edges.
struct Cycle {
  std::vector<EventId> events;
  std::size_t length() const { return events.empty() ? 0 : events.size() - 1; }
  bool operator==(const Cycle&) const = default;
};

/// nullopt if `r` is acyclic, otherwise one cycle. The witness is the first
/// back edge met by a depth-first search visiting ids in increasing order.
inline std::optional<Cycle> acyclic_or_cycle(const Relation& r) {
  const std::size_t n = r.carrier();
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(n, Mark::White);
  std::vector<std::vector<EventId>> succ(n);
  for (const auto& [a, b] : r.pairs()) succ[a].push_back(b);

  struct Frame {
    EventId node;
    std::size_t next;
  };
  for (EventId root = 0; root < n; ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<Frame> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.next == succ[top.node].size()) {
        mark[top.node] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const EventId to = succ[top.node][top.next++];
      if (mark[to] == Mark::Grey) {
        Cycle cycle;
        auto it = std::find_if(stack.begin(), stack.end(),
                               [&](const Frame& f) { return f.node == to; });
        for (; it != stack.end(); ++it) cycle.events.push_back(it->node);
        cycle.events.push_back(to);
        return cycle;
      }
      if (mark[to] == Mark::White) {
        mark[to] = Mark::Grey;
        stack.push_back({to, 0});
      }
    }
  }
  return std::nullopt;
}

/// From-reads: a read is fr-before every write coherence-after its source.
/// `rf` holds (write, read) pairs and `co` (write, write) pairs.
inline Relation derive_fr(const Relation& rf, const Relation& co) {
  Relation fr(std::max(rf.carrier(), co.carrier()));
  for (const auto& [w, r] : rf.pairs())
    for (EventId later : co.successors(w)) fr.insert(r, later);
  return fr;
}

}  // namespace rvlitmus
