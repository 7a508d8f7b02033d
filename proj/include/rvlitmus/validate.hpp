#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rvlitmus/litmus.hpp"
#include "rvlitmus/parser.hpp"

namespace rvlitmus {

/// Checks the well-formedness rules a parsed test must satisfy before it can
/// be elaborated. Returns one message per violation; empty means valid.
inline std::vector<std::string> validate(const LitmusTest& test) {
  std::vector<std::string> diags;
  const std::size_t harts = test.hart_count();
  auto hart_name = [](std::size_t h) { return "P" + std::to_string(h); };

  if (test.arch != "RISCV")
    diags.push_back("unsupported architecture tag '" + test.arch + "'");
  if (test.condition.atoms.empty())
    diags.push_back("exists clause has no atoms");

  {
    std::set<std::string> seen;
    for (const MemoryInit& m : test.memory_init)
      if (!seen.insert(m.location).second)
        diags.push_back("location '" + m.location + "' initialized twice");
  }

  // What a register holds during straight-line abstract execution.
  enum class Slot { Unset, Integer, Loaded, Address };
  std::vector<std::array<Slot, Register::kCount>> slots(harts);
  for (auto& file : slots) {
    file.fill(Slot::Unset);
    file[0] = Slot::Integer;
  }

  {
    std::set<std::pair<int, Register>> seen;
    for (const RegisterInit& init : test.register_init) {
      const std::string who = std::to_string(init.hart) + ":" + init.reg.name();
      if (init.hart < 0 || static_cast<std::size_t>(init.hart) >= harts) {
        diags.push_back("initial state names undeclared hart " +
                        std::to_string(init.hart) + " (" + who + ")");
        continue;
      }
      if (init.reg.is_zero()) {
        diags.push_back("initial state assigns hard-wired register " + who);
        continue;
      }
      if (!seen.insert({init.hart, init.reg}).second)
        diags.push_back("register " + who + " initialized twice");
      Slot slot = Slot::Integer;
      if (const auto* loc = std::get_if<std::string>(&init.value)) {
        slot = Slot::Address;
        if (!test.find_location(*loc))
          diags.push_back("initial state of " + who + " names undeclared location '" +
                          *loc + "'");
      }
      slots[init.hart][init.reg.index] = slot;
    }
  }

  for (std::size_t h = 0; h < harts; ++h) {
    auto& file = slots[h];
    const Program& program = test.programs[h];
    for (std::size_t i = 0; i < program.size(); ++i) {
      const std::string where =
          hart_name(h) + " instruction " + std::to_string(i) + " ('" +
          format_instruction(program[i]) + "')";
      auto use = [&](Register r) {
        if (file[r.index] == Slot::Unset)
          diags.push_back(where + " reads uninitialized register " +
                          std::to_string(h) + ":" + r.name());
        return file[r.index];
      };
      auto define = [&](Register r, Slot s) {
        if (!r.is_zero()) file[r.index] = s;
      };
      auto address = [&](Register base, Word offset) {
        const Slot s = use(base);
        if (s == Slot::Integer || s == Slot::Loaded)
          diags.push_back(where + " base register " + base.name() +
                          " does not hold a location address");
        if (offset != 0)
          diags.push_back(where + " has nonzero effective offset " +
                          std::to_string(offset));
      };

      if (const auto* a = std::get_if<AddImmediate>(&program[i])) {
        const Slot s = use(a->src);
        if (s == Slot::Address && a->immediate != 0)
          diags.push_back(where + " performs address arithmetic (nonzero offset " +
                          std::to_string(a->immediate) + ")");
        define(a->dst, s == Slot::Unset ? Slot::Integer : s);
      } else if (const auto* l = std::get_if<Load>(&program[i])) {
        address(l->base, l->offset);
        define(l->dst, Slot::Loaded);
      } else if (const auto* st = std::get_if<Store>(&program[i])) {
        address(st->base, st->offset);
        if (use(st->src) == Slot::Address)
          diags.push_back(where + " stores a location address, which is unsupported");
      } else if (const auto* f = std::get_if<Fence>(&program[i])) {
        if (f->predecessors.empty() || f->successors.empty())
          diags.push_back(where + " has an empty fence set");
      }
    }
  }

  for (const Atom& atom : test.condition.atoms) {
    if (const auto* r = std::get_if<RegisterAtom>(&atom)) {
      const std::string who = std::to_string(r->hart) + ":" + r->reg.name();
      if (r->hart < 0 || static_cast<std::size_t>(r->hart) >= harts)
        diags.push_back("condition references undeclared hart in " + who);
      else if (slots[r->hart][r->reg.index] == Slot::Unset)
        diags.push_back("condition references register " + who +
                        " which is never initialized or written on " +
                        hart_name(r->hart));
    } else {
      const auto& l = std::get<LocationAtom>(atom);
      if (!test.find_location(l.location))
        diags.push_back("condition references undeclared location '" + l.location + "'");
    }
  }
  return diags;
}

}  // namespace rvlitmus
