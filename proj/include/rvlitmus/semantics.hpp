#pragma once

// Elaboration of hart programs into memory events, and straight-line register
// semantics used to resolve values once reads-from is fixed.

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rvlitmus/litmus.hpp"
#include "rvlitmus/relation.hpp"

namespace rvlitmus {

enum class EventKind { Read, Write, Fence };
enum class Annotation { None, Acquire, Release };

inline constexpr int kInitialHart = -1;

struct Event {
  EventId id = 0;
  int hart = kInitialHart;     // kInitialHart for initial writes
  std::size_t index = 0;       // position among the hart's events
  std::size_t instruction = 0; // position in the hart's program
  EventKind kind = EventKind::Write;
  std::optional<LocationId> location;
  Annotation annotation = Annotation::None;
  FenceSet fence_predecessors;
  FenceSet fence_successors;
  std::vector<EventId> addr_deps;
  std::vector<EventId> data_deps;

  bool is_initial() const { return hart == kInitialHart; }
  bool is_memory() const { return kind != EventKind::Fence; }
  bool is_read() const { return kind == EventKind::Read; }
  bool is_write() const { return kind == EventKind::Write; }
};

/// Per-hart register contents; nullopt means never assigned.
using RegisterFile = std::array<std::optional<Value>, Register::kCount>;

inline Value read_register(const RegisterFile& file, Register r) {
  if (r.is_zero()) return Word{0};
  return file[r.index].value_or(Value{Word{0}});
}

/// Initial register files built from the test's init block.
inline std::vector<RegisterFile> initial_registers(const LitmusTest& test) {
  std::vector<RegisterFile> files(test.hart_count());
  for (const RegisterInit& init : test.register_init) {
    if (init.hart < 0 || static_cast<std::size_t>(init.hart) >= files.size()) continue;
    Value v = Word{0};
    if (const auto* w = std::get_if<Word>(&init.value))
      v = *w;
    else if (auto loc = test.find_location(std::get<std::string>(init.value)))
      v = *loc;
    if (!init.reg.is_zero()) files[init.hart][init.reg.index] = v;
  }
  return files;
}

struct HartResult {
  RegisterFile registers;
  std::vector<Word> write_values;  // one per Store, in program order

  bool operator==(const HartResult&) const = default;
};

/// Runs one hart forward. `read_values[k]` is the value returned by the
/// hart's k-th Load.
inline HartResult hart_eval(const Program& program, const RegisterFile& initial,
                            std::span<const Word> read_values) {
  HartResult out;
  out.registers = initial;
  std::size_t next_read = 0;
  auto set = [&](Register r, Value v) {
    if (!r.is_zero()) out.registers[r.index] = v;
  };
  for (const Instruction& insn : program) {
    if (const auto* a = std::get_if<AddImmediate>(&insn)) {
      const Value src = read_register(out.registers, a->src);
      if (const auto* w = std::get_if<Word>(&src))
        set(a->dst, static_cast<Word>(static_cast<std::uint64_t>(*w) +
                                      static_cast<std::uint64_t>(a->immediate)));
      else
        set(a->dst, src);
    } else if (const auto* l = std::get_if<Load>(&insn)) {
      const Word v = next_read < read_values.size() ? read_values[next_read] : 0;
      ++next_read;
      set(l->dst, v);
    } else if (const auto* s = std::get_if<Store>(&insn)) {
      const Value v = read_register(out.registers, s->src);
      out.write_values.push_back(std::holds_alternative<Word>(v) ? std::get<Word>(v) : 0);
    }
  }
  return out;
}

/// Dependency pairs of one program, over the hart's local event indices.
struct SyntacticDeps {
  Relation addr_dep;  // (read, memory event) via the address register
  Relation data_dep;  // (read, write) via the stored register
};

inline SyntacticDeps syntactic_deps(const Program& program) {
  std::size_t events = 0;
  for (const Instruction& insn : program) events += is_memory_instruction(insn);
  SyntacticDeps deps{Relation(events), Relation(events)};

  // Reads each register's current value depends on.
  std::array<std::vector<std::size_t>, Register::kCount> sources;
  std::size_t event = 0;
  for (const Instruction& insn : program) {
    if (const auto* a = std::get_if<AddImmediate>(&insn)) {
      if (!a->dst.is_zero())
        sources[a->dst.index] = a->src.is_zero() ? std::vector<std::size_t>{}
                                                  : sources[a->src.index];
      continue;
    }
    if (const auto* l = std::get_if<Load>(&insn)) {
      for (std::size_t r : sources[l->base.index]) deps.addr_dep.insert(r, event);
      if (!l->dst.is_zero()) sources[l->dst.index] = {event};
    } else if (const auto* s = std::get_if<Store>(&insn)) {
      for (std::size_t r : sources[s->base.index]) deps.addr_dep.insert(r, event);
      for (std::size_t r : sources[s->src.index]) deps.data_dep.insert(r, event);
    }
    ++event;
  }
  return deps;
}

/// Events of a whole test plus the static relations between them.
struct EventStructure {
  std::vector<Event> events;  // initial writes first, then hart by hart
  std::vector<EventId> initial_writes;  // indexed by location
  std::vector<std::vector<EventId>> hart_events;
  std::vector<std::string> locations;
  Relation po;
  Relation addr_dep;
  Relation data_dep;

  std::size_t size() const { return events.size(); }
  const Event& operator[](EventId id) const { return events[id]; }

  std::size_t program_event_count() const {
    return events.size() - initial_writes.size();
  }

  std::vector<EventId> writes_to(LocationId loc) const {
    std::vector<EventId> out;
    for (const Event& e : events)
      if (e.is_write() && e.location == loc) out.push_back(e.id);
    return out;
  }
};

namespace detail {

// Location each memory instruction accesses, from statically known addresses.
inline std::vector<std::optional<LocationId>> resolve_addresses(const Program& program,
                                                                RegisterFile regs) {
  std::vector<std::optional<LocationId>> out;
  auto location_of = [&](Register base) -> std::optional<LocationId> {
    const Value v = read_register(regs, base);
    if (const auto* loc = std::get_if<LocationId>(&v)) return *loc;
    return std::nullopt;
  };
  for (const Instruction& insn : program) {
    if (const auto* a = std::get_if<AddImmediate>(&insn)) {
      if (!a->dst.is_zero()) regs[a->dst.index] = read_register(regs, a->src);
    } else if (const auto* l = std::get_if<Load>(&insn)) {
      out.push_back(location_of(l->base));
      if (!l->dst.is_zero()) regs[l->dst.index] = Value{Word{0}};
    } else if (const auto* s = std::get_if<Store>(&insn)) {
      out.push_back(location_of(s->base));
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace detail

/// Expects a test for which `validate` reports nothing.
inline EventStructure elaborate_events(const LitmusTest& test) {
  EventStructure s;
  for (const MemoryInit& m : test.memory_init) s.locations.push_back(m.location);

  for (std::size_t loc = 0; loc < s.locations.size(); ++loc) {
    Event e;
    e.id = s.events.size();
    e.index = loc;
    e.kind = EventKind::Write;
    e.location = LocationId{loc};
    s.initial_writes.push_back(e.id);
    s.events.push_back(std::move(e));
  }

  const auto registers = initial_registers(test);
  s.hart_events.resize(test.hart_count());
  std::vector<SyntacticDeps> local_deps;
  for (std::size_t h = 0; h < test.hart_count(); ++h) {
    const Program& program = test.programs[h];
    const auto locations = detail::resolve_addresses(program, registers[h]);
    std::size_t local = 0;
    for (std::size_t i = 0; i < program.size(); ++i) {
      if (!is_memory_instruction(program[i])) continue;
      Event e;
      e.id = s.events.size();
      e.hart = static_cast<int>(h);
      e.index = local;
      e.instruction = i;
      if (const auto* l = std::get_if<Load>(&program[i])) {
        e.kind = EventKind::Read;
        e.annotation = l->acquire ? Annotation::Acquire : Annotation::None;
        e.location = locations[local];
      } else if (const auto* st = std::get_if<Store>(&program[i])) {
        e.kind = EventKind::Write;
        e.annotation = st->release ? Annotation::Release : Annotation::None;
        e.location = locations[local];
      } else {
        const auto& f = std::get<Fence>(program[i]);
        e.kind = EventKind::Fence;
        e.fence_predecessors = f.predecessors;
        e.fence_successors = f.successors;
      }
      s.hart_events[h].push_back(e.id);
      s.events.push_back(std::move(e));
      ++local;
    }
    local_deps.push_back(syntactic_deps(program));
  }

  const std::size_t n = s.events.size();
  s.po = Relation(n);
  s.addr_dep = Relation(n);
  s.data_dep = Relation(n);
  for (std::size_t h = 0; h < s.hart_events.size(); ++h) {
    const auto& ids = s.hart_events[h];
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) s.po.insert(ids[i], ids[j]);
    for (const auto& [a, b] : local_deps[h].addr_dep.pairs()) {
      s.addr_dep.insert(ids[a], ids[b]);
      s.events[ids[b]].addr_deps.push_back(ids[a]);
    }
    for (const auto& [a, b] : local_deps[h].data_dep.pairs()) {
      s.data_dep.insert(ids[a], ids[b]);
      s.events[ids[b]].data_deps.push_back(ids[a]);
    }
  }
  return s;
}

}  // namespace rvlitmus
