#pragma once

// Reader and writer for the herd-style RISC-V litmus format:
//
//   RISCV <name>
//   { 0:x1=x; 1:x2=y; x=0; y=0; }
//   P0            | P1              ;
//   addi x3,x0,1  | lw.aq x3, 0(x2) ;
//   exists (1:x3=1 /\ 1:x4=0)
//
// Lines starting with `#` are comments. `# expect: allowed|forbidden` records
// the expected outcome.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "rvlitmus/litmus.hpp"

namespace rvlitmus {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

namespace detail {

struct Pos {
  std::size_t line = 1;
  std::size_t column = 1;
};

// Text fragment carrying the source position of every character.
struct Span {
  std::string text;
  std::vector<Pos> pos;
  Pos end;

  Pos at(std::size_t i) const { return i < pos.size() ? pos[i] : end; }

  Span sub(std::size_t first, std::size_t count) const {
    Span s;
    const std::size_t last = std::min(text.size(), first + count);
    first = std::min(first, last);
    s.text = text.substr(first, last - first);
    s.pos.assign(pos.begin() + static_cast<std::ptrdiff_t>(first),
                 pos.begin() + static_cast<std::ptrdiff_t>(last));
    s.end = last < pos.size() ? pos[last] : end;
    return s;
  }

  Span trimmed() const {
    std::size_t b = 0, e = text.size();
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    return sub(b, e - b);
  }

  std::vector<Span> split(std::string_view sep) const {
    std::vector<Span> parts;
    std::size_t start = 0;
    for (;;) {
      const std::size_t hit = text.find(sep, start);
      if (hit == std::string::npos) {
        parts.push_back(sub(start, text.size() - start));
        return parts;
      }
      parts.push_back(sub(start, hit - start));
      start = hit + sep.size();
    }
  }

  [[noreturn]] void fail(const std::string& message, std::size_t i = 0) const {
    const Pos p = at(i);
    throw ParseError(p.line, p.column, message);
  }

  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
  }
};

inline Span make_span(std::string_view text, std::size_t line) {
  Span s;
  s.text = std::string(text);
  for (std::size_t i = 0; i < text.size(); ++i) s.pos.push_back({line, i + 1});
  s.end = {line, text.size() + 1};
  return s;
}

inline void append(Span& into, const Span& more) {
  into.text += more.text;
  into.pos.insert(into.pos.end(), more.pos.begin(), more.pos.end());
  into.end = more.end;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(s.front())) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9');
  });
}

inline std::optional<Word> to_word(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  std::uint64_t magnitude = 0;
  const auto [ptr, ec] =
      std::from_chars(s.data(), s.data() + s.size(), magnitude, base);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  constexpr auto kMax = static_cast<std::uint64_t>(INT64_MAX);
  if (negative) {
    if (magnitude > kMax + 1) return std::nullopt;
    return static_cast<Word>(0 - magnitude);
  }
  if (magnitude > kMax) return std::nullopt;
  return static_cast<Word>(magnitude);
}

inline Word parse_word(const Span& s) {
  const Span t = s.trimmed();
  if (auto w = to_word(t.text)) return *w;
  t.fail("expected integer, got '" + t.text + "'");
}

inline Register parse_register(const Span& s) {
  const Span t = s.trimmed();
  const std::string& r = t.text;
  if (r.size() >= 2 && r.size() <= 3 && r[0] == 'x' &&
      std::all_of(r.begin() + 1, r.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
      !(r.size() == 3 && r[1] == '0')) {
    const int index = std::stoi(r.substr(1));
    if (index < Register::kCount) return Register{static_cast<std::uint8_t>(index)};
  }
  t.fail("expected register x0..x31, got '" + r + "'");
}

inline int parse_hart(const Span& s) {
  const Span t = s.trimmed();
  const auto w = to_word(t.text);
  if (!w || *w < 0 || *w > 1'000'000 || t.text.front() == '+' ||
      t.text.front() == '-')
    t.fail("expected hart number, got '" + t.text + "'");
  return static_cast<int>(*w);
}

// `off(reg)` with an optional offset.
inline std::pair<Word, Register> parse_memory_operand(const Span& s) {
  const Span t = s.trimmed();
  const std::size_t open = t.text.find('(');
  if (open == std::string::npos || t.text.back() != ')')
    t.fail("expected memory operand 'offset(register)', got '" + t.text + "'");
  const Span offset = t.sub(0, open).trimmed();
  const Word value = offset.text.empty() ? 0 : parse_word(offset);
  return {value, parse_register(t.sub(open + 1, t.text.size() - open - 2))};
}

inline FenceSet parse_fence_set(const Span& s) {
  const Span t = s.trimmed();
  if (t.text == "r") return {true, false};
  if (t.text == "w") return {false, true};
  if (t.text == "rw") return {true, true};
  t.fail("invalid fence set '" + t.text + "', expected r, w or rw");
}

inline Instruction parse_instruction(const Span& cell) {
  const Span t = cell.trimmed();
  std::size_t cut = 0;
  while (cut < t.text.size() && !Span::is_space(t.text[cut])) ++cut;
  const std::string mnemonic = t.text.substr(0, cut);
  const Span rest = t.sub(cut, t.text.size() - cut).trimmed();
  std::vector<Span> ops;
  if (!rest.text.empty()) ops = rest.split(",");

  auto expect_operands = [&](std::size_t n) {
    if (ops.size() != n)
      t.fail("'" + mnemonic + "' expects " + std::to_string(n) +
             " operands, got " + std::to_string(ops.size()));
  };

  if (mnemonic == "addi") {
    expect_operands(3);
    return AddImmediate{parse_register(ops[0]), parse_register(ops[1]),
                        parse_word(ops[2])};
  }
  if (mnemonic == "lw" || mnemonic == "ld" || mnemonic == "lw.aq" ||
      mnemonic == "ld.aq") {
    expect_operands(2);
    const auto [offset, base] = parse_memory_operand(ops[1]);
    return Load{parse_register(ops[0]), offset, base,
                mnemonic.size() > 2,
                mnemonic[1] == 'd' ? AccessWidth::Double : AccessWidth::Word};
  }
  if (mnemonic == "sw" || mnemonic == "sd" || mnemonic == "sw.rl" ||
      mnemonic == "sd.rl") {
    expect_operands(2);
    const auto [offset, base] = parse_memory_operand(ops[1]);
    return Store{parse_register(ops[0]), offset, base,
                 mnemonic.size() > 2,
                 mnemonic[1] == 'd' ? AccessWidth::Double : AccessWidth::Word};
  }
  if (mnemonic == "fence") {
    if (ops.empty()) return Fence{};
    expect_operands(2);
    return Fence{parse_fence_set(ops[0]), parse_fence_set(ops[1])};
  }
  t.fail("unknown mnemonic '" + mnemonic + "'");
}

inline bool starts_with_word(std::string_view text, std::string_view word) {
  if (text.substr(0, word.size()) != word) return false;
  return text.size() == word.size() || Span::is_space(text[word.size()]) ||
         text[word.size()] == '(';
}

}  // namespace detail

inline std::string format_instruction(const Instruction& insn) {
  struct Printer {
    std::string operator()(const AddImmediate& a) const {
      return "addi " + a.dst.name() + ", " + a.src.name() + ", " +
             std::to_string(a.immediate);
    }
    std::string operator()(const Load& l) const {
      return std::string(l.width == AccessWidth::Double ? "ld" : "lw") +
             (l.acquire ? ".aq " : " ") + l.dst.name() + ", " +
             std::to_string(l.offset) + "(" + l.base.name() + ")";
    }
    std::string operator()(const Store& s) const {
      return std::string(s.width == AccessWidth::Double ? "sd" : "sw") +
             (s.release ? ".rl " : " ") + s.src.name() + ", " +
             std::to_string(s.offset) + "(" + s.base.name() + ")";
    }
    std::string operator()(const Fence& f) const {
      return "fence " + f.predecessors.str() + "," + f.successors.str();
    }
  };
  return std::visit(Printer{}, insn);
}

/// Parses one litmus test. Throws ParseError with the offending line/column.
inline LitmusTest parse_litmus(std::string_view source) {
  using detail::Span;
  LitmusTest test;

  std::vector<Span> lines;
  {
    std::size_t start = 0, number = 1;
    while (start <= source.size()) {
      std::size_t nl = source.find('\n', start);
      if (nl == std::string_view::npos) nl = source.size();
      Span line = detail::make_span(source.substr(start, nl - start), number);
      const Span body = line.trimmed();
      if (!body.text.empty() && body.text.front() == '#') {
        Span comment = body.sub(1, body.text.size() - 1).trimmed();
        if (comment.text.rfind("expect:", 0) == 0) {
          const Span value = comment.sub(7, comment.text.size() - 7).trimmed();
          if (value.text == "allowed")
            test.expected = Outcome::Allowed;
          else if (value.text == "forbidden")
            test.expected = Outcome::Forbidden;
          else
            value.fail("expectation must be 'allowed' or 'forbidden'");
        }
        line = detail::make_span("", number);
        line.end = {number, 1};
      }
      lines.push_back(std::move(line));
      start = nl + 1;
      ++number;
    }
  }

  std::size_t cursor = 0;
  auto next_line = [&]() -> const Span* {
    while (cursor < lines.size() && lines[cursor].trimmed().text.empty()) ++cursor;
    return cursor < lines.size() ? &lines[cursor] : nullptr;
  };
  auto eof_error = [&](const std::string& what) {
    const std::size_t last = lines.empty() ? 1 : lines.back().end.line;
    throw ParseError(last, 1, "unexpected end of input: " + what);
  };

  // Header: architecture tag and name.
  const Span* header = next_line();
  if (!header) eof_error("expected 'RISCV <name>' header");
  {
    const Span h = header->trimmed();
    std::size_t cut = 0;
    while (cut < h.text.size() && !Span::is_space(h.text[cut])) ++cut;
    const std::string tag = h.text.substr(0, cut);
    if (tag != "RISCV") h.fail("unsupported architecture tag '" + tag + "'");
    test.arch = tag;
    test.name = h.sub(cut, h.text.size() - cut).trimmed().text;
    if (test.name.empty()) h.fail("missing test name after architecture tag", cut);
    ++cursor;
  }

  // Initial state block.
  const Span* open = next_line();
  if (!open) eof_error("expected '{' opening the initial state");
  Span block;
  {
    Span first = open->trimmed();
    if (first.text.front() != '{') first.fail("expected '{' opening the initial state");
    Span rest = first.sub(1, first.text.size() - 1);
    bool closed = false;
    for (;;) {
      const std::size_t close = rest.text.find('}');
      if (close != std::string::npos) {
        detail::append(block, rest.sub(0, close));
        const Span after = rest.sub(close + 1, rest.text.size() - close - 1).trimmed();
        if (!after.text.empty()) after.fail("unexpected text after '}'");
        closed = true;
        break;
      }
      detail::append(block, rest);
      block.text += ' ';
      block.pos.push_back(rest.end);
      ++cursor;
      if (cursor >= lines.size()) break;
      rest = lines[cursor];
    }
    if (!closed) eof_error("unterminated initial state block");
    ++cursor;
  }
  for (const Span& raw : block.split(";")) {
    const Span item = raw.trimmed();
    if (item.text.empty()) continue;
    const std::size_t eq = item.text.find('=');
    if (eq == std::string::npos) item.fail("expected 'name=value' in initial state");
    const Span lhs = item.sub(0, eq).trimmed();
    const Span rhs = item.sub(eq + 1, item.text.size() - eq - 1).trimmed();
    if (rhs.text.empty()) rhs.fail("missing initial value");
    const std::size_t colon = lhs.text.find(':');
    if (colon != std::string::npos) {
      RegisterInit init;
      init.hart = detail::parse_hart(lhs.sub(0, colon));
      init.reg = detail::parse_register(lhs.sub(colon + 1, lhs.text.size() - colon - 1));
      if (auto w = detail::to_word(rhs.text))
        init.value = *w;
      else if (detail::is_identifier(rhs.text))
        init.value = rhs.text;
      else
        rhs.fail("expected integer or location name, got '" + rhs.text + "'");
      test.register_init.push_back(std::move(init));
    } else {
      if (!detail::is_identifier(lhs.text))
        lhs.fail("invalid location name '" + lhs.text + "'");
      test.memory_init.push_back({lhs.text, detail::parse_word(rhs)});
    }
  }

  // Program table header: P0 | P1 | ... ;
  const Span* table = next_line();
  if (!table) eof_error("expected program table header");
  std::size_t harts = 0;
  {
    Span h = table->trimmed();
    if (h.text.back() != ';') h.fail("program table header must end with ';'",
                                     h.text.size() - 1);
    h = h.sub(0, h.text.size() - 1);
    for (const Span& raw : h.split("|")) {
      const Span cell = raw.trimmed();
      const std::string expect = "P" + std::to_string(harts);
      if (cell.text != expect)
        cell.fail("expected hart name '" + expect + "', got '" + cell.text + "'");
      ++harts;
    }
    test.programs.resize(harts);
    ++cursor;
  }

  // Instruction rows up to the exists clause.
  const Span* row = nullptr;
  while ((row = next_line()) != nullptr) {
    Span r = row->trimmed();
    if (detail::starts_with_word(r.text, "exists")) break;
    if (detail::starts_with_word(r.text, "~exists") ||
        detail::starts_with_word(r.text, "forall"))
      r.fail("only 'exists' conditions are supported");
    if (r.text.back() != ';') r.fail("instruction row must end with ';'",
                                     r.text.size() - 1);
    r = r.sub(0, r.text.size() - 1);
    const std::vector<Span> cells = r.split("|");
    if (cells.size() != harts)
      r.fail("row has " + std::to_string(cells.size()) + " columns, expected " +
             std::to_string(harts));
    for (std::size_t h = 0; h < harts; ++h) {
      const Span cell = cells[h].trimmed();
      if (cell.text.empty()) continue;
      test.programs[h].push_back(detail::parse_instruction(cell));
    }
    ++cursor;
  }
  if (!row) eof_error("missing 'exists' clause");

  // Condition (may continue over several lines).
  Span cond;
  for (; cursor < lines.size(); ++cursor) {
    detail::append(cond, lines[cursor]);
    cond.text += ' ';
    cond.pos.push_back(lines[cursor].end);
  }
  cond = cond.trimmed();
  Span body = cond.sub(6, cond.text.size() - 6).trimmed();
  if (!body.text.empty() && body.text.front() == '(') {
    if (body.text.back() != ')') body.fail("unbalanced '(' in exists clause");
    body = body.sub(1, body.text.size() - 2);
  }
  for (const Span& raw : body.split("/\\")) {
    const Span atom = raw.trimmed();
    if (atom.text.empty()) atom.fail("empty atom in exists clause");
    const std::size_t eq = atom.text.find('=');
    if (eq == std::string::npos) atom.fail("expected 'name=value' atom");
    const Span lhs = atom.sub(0, eq).trimmed();
    const Span rhs = atom.sub(eq + 1, atom.text.size() - eq - 1).trimmed();
    const Word value = detail::parse_word(rhs);
    const std::size_t colon = lhs.text.find(':');
    if (colon != std::string::npos) {
      const Span hart_text = lhs.sub(0, colon);
      const int hart = detail::parse_hart(hart_text);
      if (static_cast<std::size_t>(hart) >= harts)
        hart_text.trimmed().fail("condition references undeclared hart " +
                                 std::to_string(hart));
      test.condition.atoms.push_back(RegisterAtom{
          hart, detail::parse_register(lhs.sub(colon + 1, lhs.text.size() - colon - 1)),
          value});
    } else {
      if (!detail::is_identifier(lhs.text))
        lhs.fail("invalid location name '" + lhs.text + "'");
      if (!test.find_location(lhs.text))
        lhs.fail("condition references undeclared location '" + lhs.text + "'");
      test.condition.atoms.push_back(LocationAtom{lhs.text, value});
    }
  }
  return test;
}

/// Canonical text for a test; `parse_litmus(print_litmus(t)) == t`.
inline std::string print_litmus(const LitmusTest& test) {
  std::ostringstream out;
  out << test.arch << ' ' << test.name << '\n';
  if (test.expected)
    out << "# expect: "
        << (*test.expected == Outcome::Allowed ? "allowed" : "forbidden") << '\n';
  out << "{\n";
  for (std::size_t i = 0; i < test.register_init.size(); ++i) {
    const RegisterInit& init = test.register_init[i];
    if (i > 0) out << (test.register_init[i - 1].hart == init.hart ? " " : "\n");
    out << init.hart << ':' << init.reg.name() << '=';
    if (const auto* w = std::get_if<Word>(&init.value))
      out << *w;
    else
      out << std::get<std::string>(init.value);
    out << ';';
  }
  if (!test.register_init.empty()) out << '\n';
  for (std::size_t i = 0; i < test.memory_init.size(); ++i)
    out << (i ? " " : "") << test.memory_init[i].location << '='
        << test.memory_init[i].value << ';';
  if (!test.memory_init.empty()) out << '\n';
  out << "}\n";

  const std::size_t harts = test.programs.size();
  std::size_t rows = 0;
  std::vector<std::vector<std::string>> cells(harts);
  std::vector<std::size_t> width(harts, 0);
  for (std::size_t h = 0; h < harts; ++h) {
    cells[h].push_back("P" + std::to_string(h));
    for (const Instruction& insn : test.programs[h])
      cells[h].push_back(format_instruction(insn));
    rows = std::max(rows, test.programs[h].size());
    for (const auto& c : cells[h]) width[h] = std::max(width[h], c.size());
  }
  for (std::size_t r = 0; r <= rows; ++r) {
    for (std::size_t h = 0; h < harts; ++h) {
      const std::string cell = r < cells[h].size() ? cells[h][r] : "";
      out << (h ? " | " : "") << cell << std::string(width[h] - cell.size(), ' ');
    }
    out << " ;\n";
  }

  out << "exists (";
  for (std::size_t i = 0; i < test.condition.atoms.size(); ++i) {
    if (i) out << " /\\ ";
    const Atom& atom = test.condition.atoms[i];
    if (const auto* r = std::get_if<RegisterAtom>(&atom))
      out << r->hart << ':' << r->reg.name() << '=' << r->value;
    else {
      const auto& l = std::get<LocationAtom>(atom);
      out << l.location << '=' << l.value;
    }
  }
  out << ")\n";
  return out.str();
}

}  // namespace rvlitmus
