#pragma once

// Core data model for RISC-V litmus tests: registers, instructions, initial
// state, the final-state predicate and the optional expected outcome.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace rvlitmus {

using Word = std::int64_t;

/// Integer register x0..x31. x0 is hard-wired to zero.
struct Register {
  std::uint8_t index = 0;

  static constexpr std::uint8_t kCount = 32;

  bool is_zero() const { return index == 0; }
  std::string name() const { return "x" + std::to_string(index); }

  auto operator<=>(const Register&) const = default;
};

/// Index of a declared memory location (declaration order in the init block).
struct LocationId {
  std::size_t index = 0;
  auto operator<=>(const LocationId&) const = default;
};

/// A register or memory value: either an integer or the address of a
/// location. Addresses never compare equal to integers.
using Value = std::variant<Word, LocationId>;

/// Access kinds a fence orders, e.g. `rw` or `w`.
struct FenceSet {
  bool reads = false;
  bool writes = false;

  bool empty() const { return !reads && !writes; }
  std::string str() const {
    return std::string(reads ? "r" : "") + (writes ? "w" : "");
  }

  static constexpr FenceSet rw() { return {true, true}; }

  bool operator==(const FenceSet&) const = default;
};

enum class AccessWidth { Word, Double };

struct AddImmediate {
  Register dst;
  Register src;
  Word immediate = 0;
  bool operator==(const AddImmediate&) const = default;
};

struct Load {
  Register dst;
  Word offset = 0;
  Register base;
  bool acquire = false;
  AccessWidth width = AccessWidth::Word;
  bool operator==(const Load&) const = default;
};

struct Store {
  Register src;
  Word offset = 0;
  Register base;
  bool release = false;
  AccessWidth width = AccessWidth::Word;
  bool operator==(const Store&) const = default;
};

struct Fence {
  FenceSet predecessors = FenceSet::rw();
  FenceSet successors = FenceSet::rw();
  bool operator==(const Fence&) const = default;
};

using Instruction = std::variant<AddImmediate, Load, Store, Fence>;
using Program = std::vector<Instruction>;

inline bool is_memory_instruction(const Instruction& insn) {
  return !std::holds_alternative<AddImmediate>(insn);
}

/// Initial register contents: an integer or the address of a named location.
using InitValue = std::variant<Word, std::string>;

struct RegisterInit {
  int hart = 0;
  Register reg;
  InitValue value;
  bool operator==(const RegisterInit&) const = default;
};

struct MemoryInit {
  std::string location;
  Word value = 0;
  bool operator==(const MemoryInit&) const = default;
};

/// `hart:reg = value` in an exists clause.
struct RegisterAtom {
  int hart = 0;
  Register reg;
  Word value = 0;
  bool operator==(const RegisterAtom&) const = default;
};

/// `loc = value` in an exists clause; compared against the final memory value.
struct LocationAtom {
  std::string location;
  Word value = 0;
  bool operator==(const LocationAtom&) const = default;
};

using Atom = std::variant<RegisterAtom, LocationAtom>;

/// Conjunction of atoms, `exists (a /\ b /\ ...)`.
struct ExistsPredicate {
  std::vector<Atom> atoms;
  bool operator==(const ExistsPredicate&) const = default;
};

enum class Outcome { Allowed, Forbidden };

inline const char* to_string(Outcome o) {
  return o == Outcome::Allowed ? "Allowed" : "Forbidden";
}

struct LitmusTest {
  std::string arch = "RISCV";
  std::string name;
  std::vector<RegisterInit> register_init;
  std::vector<MemoryInit> memory_init;
  std::vector<Program> programs;
  ExistsPredicate condition;
  std::optional<Outcome> expected;

  std::size_t hart_count() const { return programs.size(); }

  std::optional<LocationId> find_location(const std::string& name) const {
    for (std::size_t i = 0; i < memory_init.size(); ++i)
      if (memory_init[i].location == name) return LocationId{i};
    return std::nullopt;
  }

  bool operator==(const LitmusTest&) const = default;
};

/// Something the final-state predicate observes: a hart register or a
/// memory location.
struct RegisterKey {
  int hart = 0;
  Register reg;
  auto operator<=>(const RegisterKey&) const = default;
};

struct LocationKey {
  std::string location;
  auto operator<=>(const LocationKey&) const = default;
};

using Observable = std::variant<RegisterKey, LocationKey>;

/// Observables named by the condition, deduplicated, in order of appearance.
inline std::vector<Observable> observables(const LitmusTest& test) {
  std::vector<Observable> out;
  for (const Atom& atom : test.condition.atoms) {
    Observable key = std::visit(
        [](const auto& a) -> Observable {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, RegisterAtom>)
            return RegisterKey{a.hart, a.reg};
          else
            return LocationKey{a.location};
        },
        atom);
    bool seen = false;
    for (const Observable& o : out) seen = seen || o == key;
    if (!seen) out.push_back(std::move(key));
  }
  return out;
}

inline std::string observable_name(const Observable& o) {
  if (const auto* r = std::get_if<RegisterKey>(&o))
    return std::to_string(r->hart) + ":" + r->reg.name();
  return std::get<LocationKey>(o).location;
}

/// Values of the observables, aligned with `observables(test)`.
using FinalState = std::vector<Value>;

inline std::string value_string(const Value& v, const LitmusTest& test) {
  if (const auto* w = std::get_if<Word>(&v)) return std::to_string(*w);
  const auto loc = std::get<LocationId>(v).index;
  return loc < test.memory_init.size() ? "&" + test.memory_init[loc].location
                                       : "&?";
}

/// Herd-style rendering, e.g. `1:x3=1; 1:x4=0;`.
inline std::string state_string(const FinalState& state,
                                const std::vector<Observable>& keys,
                                const LitmusTest& test) {
  std::string out;
  for (std::size_t i = 0; i < keys.size() && i < state.size(); ++i) {
    if (i) out += ' ';
    out += observable_name(keys[i]) + "=" + value_string(state[i], test) + ";";
  }
  return out;
}

}  // namespace rvlitmus
