#pragma once

// Command-line driver: `check`, `test` and `oracle` subcommands.
//
// Exit codes: 0 all expectations matched, 1 a mismatch or SC-subset failure,
// 2 parse/validation/I-O error, 3 resource cap exceeded.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvlitmus/enumerator.hpp"
#include "rvlitmus/model.hpp"
#include "rvlitmus/parser.hpp"
#include "rvlitmus/report.hpp"
#include "rvlitmus/sc_oracle.hpp"

namespace rvlitmus::cli {

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kInputError = 2,
  kResourceLimit = 3,
};

enum class Subcommand { Check, Test, Oracle };

struct RunConfig {
  Subcommand subcommand = Subcommand::Check;
  std::vector<std::filesystem::path> inputs;
  PpoRuleSet rules = PpoRuleSet::all();
  std::size_t candidate_cap = kDefaultCandidateCap;
  std::size_t witness_cap = kDefaultWitnessCap;
  std::optional<std::filesystem::path> dot_dir;
  std::optional<Outcome> expect_override;
  int verbosity = 0;
};

/// `<test-name>.<index>.dot` with characters outside [A-Za-z0-9._-] mapped to '_'.
inline std::string dot_file_name(const std::string& test_name, std::size_t index) {
  std::string stem = test_name;
  for (char& c : stem)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_')
      c = '_';
  return stem + "." + std::to_string(index) + ".dot";
}

namespace detail {

struct FileOutcome {
  int code = kOk;
  std::string text;
  std::string errors;
};

inline std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses and validates; on failure fills `result` and returns nullopt.
inline std::optional<LitmusTest> load(const std::filesystem::path& path,
                                      const RunConfig& config, FileOutcome& result) {
  const auto text = read_file(path);
  if (!text) {
    result.code = kInputError;
    result.errors += path.string() + ": cannot read file\n";
    return std::nullopt;
  }
  try {
    LitmusTest test = parse_litmus(*text);
    if (config.expect_override) test.expected = config.expect_override;
    const auto diags = validate(test);
    if (!diags.empty()) {
      result.code = kInputError;
      for (const auto& d : diags) result.errors += path.string() + ": " + d + "\n";
      return std::nullopt;
    }
    return test;
  } catch (const ParseError& e) {
    result.code = kInputError;
    result.errors += path.string() + ":" + e.what() + "\n";
    return std::nullopt;
  }
}

inline void write_dots(const Verdict& v, const LitmusTest& test, const RunConfig& config,
                       FileOutcome& result) {
  if (!config.dot_dir) return;
  std::error_code ec;
  std::filesystem::create_directories(*config.dot_dir, ec);
  const Relation ppo = compute_ppo(v.structure, config.rules);
  auto write = [&](std::size_t index, const CandidateExecution& x,
                   const std::optional<LabeledCycle>& cycle) {
    const auto path = *config.dot_dir / dot_file_name(test.name, index);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      result.code = kInputError;
      result.errors += path.string() + ": cannot write file\n";
      return;
    }
    out << emit_dot(v.structure, x, diagram_relations(v.structure, x, ppo), cycle, test.name);
  };
  // Allowed tests draw their witnesses; forbidden ones the near misses with
  // the cycle that rules them out.
  if (!v.witnesses.empty()) {
    for (std::size_t i = 0; i < v.witnesses.size(); ++i)
      write(i, v.witnesses[i], std::nullopt);
  } else {
    for (std::size_t i = 0; i < v.forbidding_cycles.size(); ++i)
      write(i, v.forbidding_cycles[i].execution, v.forbidding_cycles[i].cycle);
  }
}

inline std::string verbose_details(const Verdict& v, const RunConfig& config) {
  std::ostringstream out;
  const auto tags = event_tags(v.structure);
  const Relation ppo = compute_ppo(v.structure, config.rules);
  for (std::size_t i = 0; i < v.witnesses.size(); ++i) {
    const CandidateExecution& x = v.witnesses[i];
    out << "Witness " << i << " (candidate " << x.ordinal << "):";
    for (const auto& [w, r] : x.rf.pairs())
      out << ' ' << tags[w] << "-rf->" << tags[r];
    const Relation hb = happens_before(v.structure, x, ppo);
    out << "; hb pairs " << hb.size() << '\n';
  }
  for (const NearMiss& m : v.forbidding_cycles)
    out << "Forbidden candidate " << m.execution.ordinal << " (" << m.axiom
        << "): " << cycle_text(v.structure, m.execution, m.cycle) << '\n';
  return out.str();
}

inline FileOutcome solve_file(const std::filesystem::path& path, const RunConfig& config,
                              bool summary_line) {
  FileOutcome result;
  const auto test = load(path, config, result);
  if (!test) return result;
  try {
    const Verdict v = solve_test(
        *test, SolveOptions{config.rules, config.candidate_cap, config.witness_cap});
    const ExpectationResult match = check_expectation(v, *test);
    if (summary_line) {
      result.text += path.generic_string() + ": " + to_string(v.status) + " " +
                     to_string(match) + "\n";
      if (config.verbosity > 0) result.text += format_report(v);
    } else {
      result.text += format_report(v);
    }
    if (config.verbosity > 0) result.text += verbose_details(v, config);
    if (match == ExpectationResult::Mismatch) result.code = kMismatch;
    write_dots(v, *test, config, result);
  } catch (const ResourceLimitError& e) {
    result.code = kResourceLimit;
    result.errors += path.string() + ": " + e.what() + "\n";
  }
  return result;
}

inline FileOutcome oracle_file(const std::filesystem::path& path, const RunConfig& config) {
  FileOutcome result;
  const auto test = load(path, config, result);
  if (!test) return result;
  try {
    const auto sc = sc_outcomes(*test);
    const Verdict v = solve_test(
        *test, SolveOptions{config.rules, config.candidate_cap, config.witness_cap});
    const auto weak = v.state_set();
    std::ostringstream out;
    out << "Test " << test->name << " SC states " << sc.size() << '\n';
    std::size_t missing = 0;
    for (const FinalState& state : sc) {
      const bool present = weak.count(state) != 0;
      missing += !present;
      for (std::size_t i = 0; i < v.observables.size(); ++i)
        out << (i ? " " : "") << observable_name(v.observables[i]) << '='
            << value_text(state[i], v.structure.locations) << ';';
      out << (present ? "\n" : "  (missing from axiomatic states)\n");
    }
    out << "Axiomatic states " << weak.size() << '\n';
    out << "SC-subset " << (missing == 0 ? "holds" : "VIOLATED") << '\n';
    result.text = out.str();
    if (missing) result.code = kMismatch;
  } catch (const ResourceLimitError& e) {
    result.code = kResourceLimit;
    result.errors += path.string() + ": " + e.what() + "\n";
  }
  return result;
}

// Input errors dominate resource errors, which dominate mismatches.
inline int combine(int a, int b) {
  auto rank = [](int c) {
    switch (c) {
      case kInputError: return 3;
      case kResourceLimit: return 2;
      case kMismatch: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

inline std::vector<std::filesystem::path> litmus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".litmus")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace detail

inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  int code = kOk;
  if (config.inputs.empty()) {
    err << "no input given\n";
    return kInputError;
  }
  auto emit = [&](const detail::FileOutcome& r) {
    out << r.text;
    err << r.errors;
    code = detail::combine(code, r.code);
  };

  switch (config.subcommand) {
    case Subcommand::Check:
      for (const auto& path : config.inputs) emit(detail::solve_file(path, config, false));
      break;
    case Subcommand::Oracle:
      for (const auto& path : config.inputs) emit(detail::oracle_file(path, config));
      break;
    case Subcommand::Test: {
      std::vector<std::filesystem::path> files;
      for (const auto& input : config.inputs) {
        std::error_code ec;
        if (std::filesystem::is_directory(input, ec)) {
          auto found = detail::litmus_files(input);
          files.insert(files.end(), found.begin(), found.end());
        } else if (std::filesystem::is_regular_file(input, ec)) {
          files.push_back(input);
        } else {
          err << input.string() << ": no such file or directory\n";
          code = detail::combine(code, kInputError);
        }
      }
      std::sort(files.begin(), files.end());
      std::size_t matched = 0, mismatched = 0, failed = 0;
      for (const auto& path : files) {
        const auto r = detail::solve_file(path, config, true);
        if (r.code == kOk) ++matched;
        else if (r.code == kMismatch) ++mismatched;
        else ++failed;
        emit(r);
      }
      out << "Summary: " << files.size() << " tests, " << matched << " ok, " << mismatched
          << " mismatched, " << failed << " errors\n";
      break;
    }
  }
  return code;
}

/// Builds the CLI11 parser writing into `config`.
inline void configure(CLI::App& app, RunConfig& config) {
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("inputs", config.inputs, "Litmus files or directories")->required();
    for (PpoRule rule : kAllPpoRules) {
      const std::string name(rule_name(rule));
      sub->add_flag_callback("--no-rule-" + name,
                             [&config, rule] { config.rules.disable(rule); },
                             "Disable the " + name + " ppo rule");
    }
    sub->add_option("--candidate-cap", config.candidate_cap,
                    "Maximum candidate executions per test")
        ->check(CLI::PositiveNumber);
    sub->add_option("--witness-cap", config.witness_cap,
                    "Maximum stored witnesses per test")
        ->check(CLI::PositiveNumber);
    sub->add_option("--dot-dir", config.dot_dir, "Write DOT diagrams into this directory");
    sub->add_option_function<std::string>(
           "--expect",
           [&config](const std::string& v) {
             config.expect_override =
                 v == "allowed" ? Outcome::Allowed : Outcome::Forbidden;
           },
           "Override the expected outcome")
        ->check(CLI::IsMember({"allowed", "forbidden"}));
    // A callback, not a bound int: CLI11 resets flags shared across
    // subcommands from the ones that were not invoked.
    sub->add_flag_function(
        "-v,--verbose",
        [&config](std::int64_t n) { config.verbosity = static_cast<int>(n); }, "More output");
  };
  auto* check = app.add_subcommand("check", "Solve litmus files and print reports");
  auto* test = app.add_subcommand("test", "Run every .litmus file under a directory");
  auto* oracle = app.add_subcommand("oracle", "Compare against sequential consistency");
  for (auto* sub : {check, test, oracle}) add_common(sub);
  check->callback([&config] { config.subcommand = Subcommand::Check; });
  test->callback([&config] { config.subcommand = Subcommand::Test; });
  oracle->callback([&config] { config.subcommand = Subcommand::Oracle; });
}

/// Parses argv and runs. Usage errors exit with kInputError.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"RISC-V weak memory litmus checker", "rvlitmus"};
  RunConfig config;
  configure(app, config);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }
  return run(config, out, err);
}

}  // namespace rvlitmus::cli
