// Command-line front end: `check` and `type` run the synthesizer, `run`
// evaluates with an optional trace, `repl` wraps both in a loop, and `fuzz`
// drives the property harness. Exit codes follow one table everywhere:
// 0 value/ok, 2 evaluated to error, 3 stuck, 4 fuel exhausted, 5 parse
// error, 6 type error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <ubr/eval.hpp>
#include <ubr/jsonio.hpp>
#include <ubr/parse.hpp>
#include <ubr/print.hpp>
#include <ubr/props.hpp>
#include <ubr/typecheck.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 2;
constexpr int kExitStuck = 3;
constexpr int kExitFuel = 4;
constexpr int kExitParse = 5;
constexpr int kExitType = 6;

bool slurp(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

void print_parse_error(const ubr::ParseError& e, bool json) {
  if (json) {
    std::cout << ubr::diagnostic_json(e).dump() << "\n";
    return;
  }
  std::cerr << "parse error at " << e.span.start << ".." << e.span.end << ": "
            << e.what() << "\n";
}

void print_type_error(const ubr::TypeError& e, bool json) {
  if (json) {
    std::cout << ubr::diagnostic_json(e).dump() << "\n";
    return;
  }
  std::cerr << "type error at " << e.span.start << ".." << e.span.end << ": "
            << ubr::type_error_code_name(e.code) << ": " << e.message << "\n";
}

// Shared by `check` and `type`: synthesize under the empty context and
// report the canonical type.
int report_type(const std::string& src, bool json) {
  ubr::TermPtr t;
  try {
    t = ubr::parse_term(src);
  } catch (const ubr::ParseError& e) {
    print_parse_error(e, json);
    return kExitParse;
  }
  ubr::SynthResult r = ubr::synth(ubr::TypeCtx{}, t);
  if (!ubr::synth_ok(r)) {
    print_type_error(ubr::synth_error(r), json);
    return kExitType;
  }
  const ubr::CanonType& ty = ubr::synth_type(r);
  if (json) {
    ubr::Json out{{"type", ubr::canon_type_json(ty)},
                  {"value_type", ubr::is_value_type(ty)}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << ubr::print_canon_type(ty) << "\n";
    std::cout << "value type: " << (ubr::is_value_type(ty) ? "yes" : "no")
              << "\n";
  }
  return kExitOk;
}

int exit_of_status(ubr::RunResult::Status s) {
  switch (s) {
    case ubr::RunResult::Status::Value: return kExitOk;
    case ubr::RunResult::Status::Error: return kExitError;
    case ubr::RunResult::Status::Stuck: return kExitStuck;
    case ubr::RunResult::Status::FuelExhausted: return kExitFuel;
  }
  return kExitOk;
}

int run_source(const std::string& src, ubr::Strategy strategy,
               std::uint64_t fuel, bool trace, bool json) {
  ubr::TermPtr t;
  try {
    t = ubr::parse_term(src);
  } catch (const ubr::ParseError& e) {
    print_parse_error(e, json);
    return kExitParse;
  }
  ubr::RunResult r = ubr::run(t, strategy, fuel, trace || json);
  if (json) {
    ubr::write_trace_json(std::cout, r);
    return exit_of_status(r.status);
  }
  if (trace) {
    for (std::size_t i = 0; i < r.trace.size(); ++i)
      std::cout << (i + 1) << ". [" << ubr::rule_name(r.trace[i].rule) << "] "
                << ubr::print_term(r.trace[i].term) << "\n";
  }
  switch (r.status) {
    case ubr::RunResult::Status::Value:
      std::cout << ubr::print_term(r.final) << "\n";
      break;
    case ubr::RunResult::Status::Error:
      std::cout << "error\n";
      break;
    case ubr::RunResult::Status::Stuck:
      std::cout << "stuck: " << ubr::stuck_reason_name(r.stuck) << " at "
                << ubr::print_term(r.final) << "\n";
      break;
    case ubr::RunResult::Status::FuelExhausted:
      std::cout << "fuel exhausted after " << r.steps << " steps\n";
      break;
  }
  return exit_of_status(r.status);
}

int repl() {
  std::string line;
  std::cout << "> " << std::flush;
  while (std::getline(std::cin, line)) {
    if (line == ":q" || line == ":quit") break;
    if (!line.empty()) {
      try {
        ubr::TermPtr t = ubr::parse_term(line);
        ubr::SynthResult r = ubr::synth(ubr::TypeCtx{}, t);
        if (ubr::synth_ok(r))
          std::cout << "type: " << ubr::print_canon_type(ubr::synth_type(r))
                    << "\n";
        else
          print_type_error(ubr::synth_error(r), false);
        ubr::RunResult res = ubr::run(t, ubr::Strategy::CBV, 100000, false);
        switch (res.status) {
          case ubr::RunResult::Status::Value:
            std::cout << "=> " << ubr::print_term(res.final) << "\n";
            break;
          case ubr::RunResult::Status::Error:
            std::cout << "=> error\n";
            break;
          case ubr::RunResult::Status::Stuck:
            std::cout << "=> stuck: " << ubr::stuck_reason_name(res.stuck)
                      << "\n";
            break;
          case ubr::RunResult::Status::FuelExhausted:
            std::cout << "=> fuel exhausted\n";
            break;
        }
      } catch (const ubr::ParseError& e) {
        print_parse_error(e, false);
      }
    }
    std::cout << "> " << std::flush;
  }
  return kExitOk;
}

int fuzz(std::uint64_t seed, int count, int max_depth, int max_level,
         const std::string& report_path) {
  ubr::PropertyConfig cfg;
  cfg.gen.seed = seed;
  cfg.gen.max_depth = max_depth;
  cfg.gen.max_level = max_level;
  cfg.count = count;
  ubr::PropertyReport rep = ubr::run_properties(cfg);
  ubr::Json j = ubr::property_report_json(rep);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return 1;
    }
    out << j.dump(2) << "\n";
  }
  bool ok = rep.sr_ok() && rep.progress_ok() && rep.determinism_ok() &&
            rep.canonical_ok();
  std::cout << "corpus " << rep.corpus << ", steps " << rep.steps
            << ", preservation violations " << rep.sr_violations.size()
            << " (all triaged: " << (rep.sr_ok() ? "yes" : "NO") << ")"
            << ", stuck witnesses " << rep.stuck_witnesses.size()
            << " (all certified: " << (rep.progress_ok() ? "yes" : "NO") << ")"
            << ", determinism " << (rep.determinism_ok() ? "ok" : "VIOLATED")
            << ", canonical forms " << (rep.canonical_ok() ? "ok" : "VIOLATED")
            << "\n";
  return ok ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"unbind/rebind calculus tool"};
  app.require_subcommand(1);

  std::string file;
  std::string expr;
  std::string strategy = "cbv";
  std::uint64_t fuel = 100000;
  bool trace = false;
  bool json = false;

  auto* check = app.add_subcommand("check", "type check a file");
  check->add_option("file", file)->required();
  check->add_flag("--json", json);

  auto* run = app.add_subcommand("run", "evaluate a file");
  run->add_option("file", file)->required();
  run->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"cbv", "cbn"}));
  run->add_option("--fuel", fuel);
  run->add_flag("--trace", trace);
  run->add_flag("--json", json);

  auto* type = app.add_subcommand("type", "type check an expression");
  type->add_option("expr", expr)->required();
  type->add_flag("--json", json);

  auto* rep = app.add_subcommand("repl", "interactive loop");

  std::uint64_t seed = 1;
  int count = 1000;
  int max_depth = 5;
  int max_level = 3;
  std::string report_path;
  auto* fz = app.add_subcommand("fuzz", "run the property harness");
  fz->add_option("--seed", seed);
  fz->add_option("--count", count);
  fz->add_option("--max-depth", max_depth);
  fz->add_option("--max-level", max_level);
  fz->add_option("--report", report_path);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed() || run->parsed()) {
    std::string src;
    if (!slurp(file, src)) {
      std::cerr << "cannot read " << file << "\n";
      return 1;
    }
    if (check->parsed()) return report_type(src, json);
    ubr::Strategy s =
        strategy == "cbn" ? ubr::Strategy::CBN : ubr::Strategy::CBV;
    return run_source(src, s, fuel, trace, json);
  }
  if (type->parsed()) return report_type(expr, json);
  if (rep->parsed()) return repl();
  if (fz->parsed()) return fuzz(seed, count, max_depth, max_level, report_path);
  return 0;
}
