#pragma once

// Brute-force sequential consistency: every interleaving of the harts'
// instructions against a single flat memory.

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rvlitmus/enumerator.hpp"
#include "rvlitmus/litmus.hpp"
#include "rvlitmus/semantics.hpp"
#include "rvlitmus/validate.hpp"

namespace rvlitmus {

inline constexpr std::size_t kDefaultInterleavingCap = 5'000'000;

struct ScState {
  std::vector<std::size_t> pc;
  std::vector<RegisterFile> registers;
  std::vector<Word> memory;

  bool operator<(const ScState& o) const {
    if (pc != o.pc) return pc < o.pc;
    if (memory != o.memory) return memory < o.memory;
    return registers < o.registers;
  }
};

/// Distinct final states over the condition's observables. `cap` bounds the
/// number of distinct machine states explored.
inline std::set<FinalState> sc_outcomes(const LitmusTest& test,
                                        std::size_t cap = kDefaultInterleavingCap) {
  if (auto diags = validate(test); !diags.empty()) throw ValidationError(std::move(diags));

  const std::vector<Observable> keys = observables(test);
  const std::size_t harts = test.hart_count();

  ScState start;
  start.pc.assign(harts, 0);
  start.registers = initial_registers(test);
  for (const MemoryInit& m : test.memory_init) start.memory.push_back(m.value);

  auto location_of = [](const RegisterFile& regs, Register base) {
    return std::get<LocationId>(read_register(regs, base)).index;
  };
  auto as_word = [](const Value& v) {
    return std::holds_alternative<Word>(v) ? std::get<Word>(v) : Word{0};
  };

  std::set<FinalState> outcomes;
  std::set<ScState> visited;
  std::vector<ScState> stack{start};
  while (!stack.empty()) {
    ScState state = std::move(stack.back());
    stack.pop_back();
    if (!visited.insert(state).second) continue;
    if (visited.size() > cap)
      throw ResourceLimitError("test '" + test.name + "' exceeds the SC state cap of " +
                               std::to_string(cap));

    bool done = true;
    // Push in reverse so hart 0 is explored first.
    for (std::size_t h = harts; h-- > 0;) {
      if (state.pc[h] >= test.programs[h].size()) continue;
      done = false;
      ScState next = state;
      RegisterFile& regs = next.registers[h];
      auto set = [&](Register r, Value v) {
        if (!r.is_zero()) regs[r.index] = v;
      };
      const Instruction& insn = test.programs[h][state.pc[h]];
      if (const auto* a = std::get_if<AddImmediate>(&insn)) {
        const Value src = read_register(regs, a->src);
        if (const auto* w = std::get_if<Word>(&src))
          set(a->dst, static_cast<Word>(static_cast<std::uint64_t>(*w) +
                                        static_cast<std::uint64_t>(a->immediate)));
        else
          set(a->dst, src);
      } else if (const auto* l = std::get_if<Load>(&insn)) {
        set(l->dst, next.memory[location_of(regs, l->base)]);
      } else if (const auto* s = std::get_if<Store>(&insn)) {
        next.memory[location_of(regs, s->base)] = as_word(read_register(regs, s->src));
      }
      ++next.pc[h];
      stack.push_back(std::move(next));
    }
    if (!done) continue;

    FinalState final;
    for (const Observable& key : keys) {
      if (const auto* r = std::get_if<RegisterKey>(&key))
        final.push_back(read_register(state.registers[r->hart], r->reg));
      else
        final.push_back(
            state.memory[test.find_location(std::get<LocationKey>(key).location)->index]);
    }
    outcomes.insert(std::move(final));
  }
  return outcomes;
}

}  // namespace rvlitmus
