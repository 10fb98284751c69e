// Runs every program in corpus/ against its .json sidecar: expected type
// or error code, the full rule-labelled trace, the printed final term,
// and the stuck reason where applicable.
#include <catch2/catch_amalgamated.hpp>

#include <ubr/eval.hpp>
#include <ubr/jsonio.hpp>
#include <ubr/parse.hpp>
#include <ubr/print.hpp>
#include <ubr/typecheck.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ubr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> trace_rules(const RunResult& r) {
  std::vector<std::string> out;
  for (const auto& e : r.trace) out.push_back(rule_name(e.rule));
  return out;
}

void check_run(const TermPtr& t, Strategy st, const Json& expect) {
  RunResult r = run(t, st, 1000);
  CHECK(run_status_name(r.status) == expect.at("status").get<std::string>());
  CHECK(r.steps == expect.at("steps").get<std::uint64_t>());
  CHECK(print_term(r.final) == expect.at("final").get<std::string>());
  CHECK(trace_rules(r) == expect.at("rules").get<std::vector<std::string>>());
  if (expect.contains("reason")) {
    REQUIRE(r.status == RunResult::Status::Stuck);
    CHECK(stuck_reason_name(r.stuck) == expect.at("reason").get<std::string>());
  }
}

}  // namespace

TEST_CASE("corpus programs match their sidecars") {
  const fs::path dir = UBR_CORPUS_DIR;
  REQUIRE(fs::is_directory(dir));

  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".ubr") continue;
    ++seen;
    DYNAMIC_SECTION(entry.path().stem().string()) {
      const std::string src = slurp(entry.path());
      fs::path sidecar = entry.path();
      sidecar.replace_extension(".json");
      const Json expect = Json::parse(slurp(sidecar));

      TermPtr t = parse_term(src);
      // Print then reparse must reproduce the term exactly.
      CHECK(term_eq(t, parse_term(print_term(t))));

      auto r = synth(TypeCtx{}, t);
      if (expect.contains("type")) {
        REQUIRE(synth_ok(r));
        CHECK(print_canon_type(synth_type(r)) == expect.at("type").get<std::string>());
        CHECK(is_value_type(synth_type(r)) == expect.at("value_type").get<bool>());
      } else {
        REQUIRE_FALSE(synth_ok(r));
        CHECK(type_error_code_name(synth_error(r).code) ==
              expect.at("type_error").get<std::string>());
      }

      check_run(t, Strategy::CBV, expect.at("cbv"));
      if (expect.contains("cbn")) check_run(t, Strategy::CBN, expect.at("cbn"));
    }
  }
  CHECK(seen == 20);
}
