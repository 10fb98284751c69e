// The small-step machine: rule-labelled golden traces, strategy contrast,
// stuck classification, fuel accounting, and the one-applicable-rule
// audit that backs the determinism claim.
#include <catch2/catch_amalgamated.hpp>

#include <ubr/eval.hpp>
#include <ubr/parse.hpp>
#include <ubr/print.hpp>

#include <string>
#include <vector>

using namespace ubr;

static TermPtr T(const char* s) { return parse_term(s); }

static std::vector<std::string> trace_rules(const RunResult& r) {
  std::vector<std::string> out;
  out.reserve(r.trace.size());
  for (const auto& e : r.trace) out.push_back(rule_name(e.rule));
  return out;
}

static void expect_trace(const char* src, Strategy st,
                         const std::vector<std::string>& rules,
                         RunResult::Status status, const char* final_src) {
  INFO(src);
  RunResult r = run(T(src), st, 1000);
  CHECK(trace_rules(r) == rules);
  CHECK(r.status == status);
  if (final_src) CHECK(term_eq(r.final, T(final_src)));
}

TEST_CASE("golden reduction traces") {
  expect_trace("<x:int | x + <x:int | x>>[x:int := 1][x:int := 2]", Strategy::CBV,
               {"RebindRebind", "RebindSum", "Ctx(RebindNum)",
                "Ctx(RebindUnbindYes)", "Sum"},
               RunResult::Status::Value, "3");
  expect_trace("<x:int | x + 1>[y:int := 5]", Strategy::CBV,
               {"RebindUnbindNo"}, RunResult::Status::Error, nullptr);
  expect_trace("<x:int | x + 1>[x:(int -> int) := \\y:int. y + 1]", Strategy::CBV,
               {"RebindUnbindNo"}, RunResult::Status::Error, nullptr);
  expect_trace("(\\x. x + <x:int | x>)[x:int := 1] 2", Strategy::CBV,
               {"Ctx(RebindAbs)", "App", "RebindSum", "Ctx(RebindNum)",
                "Ctx(RebindUnbindYes)", "Sum"},
               RunResult::Status::Value, "3");
  expect_trace("((\\x:int. \\y:(code^0 & int^1). (y[x:int := x]) + x) 1) <x:int | x + 2>",
               Strategy::CBV,
               {"Ctx(App)", "App", "Ctx(RebindUnbindYes)", "Ctx(Sum)", "Sum"},
               RunResult::Status::Value, "4");
  expect_trace("(\\y:(code^0 & int^1). y[x:int := 2]) <x:int | x + 1>", Strategy::CBV,
               {"App", "RebindUnbindYes", "Sum"},
               RunResult::Status::Value, "3");
}

TEST_CASE("intermediate terms of the two-rebind chain") {
  RunResult r = run(T("<x:int | x + <x:int | x>>[x:int := 1][x:int := 2]"),
                    Strategy::CBV, 1000);
  REQUIRE(r.trace.size() == 5);
  CHECK(print_term(r.trace[0].term) == "(1 + <x:int | x>)[x:int := 2]");
  CHECK(print_term(r.trace[1].term) == "1[x:int := 2] + <x:int | x>[x:int := 2]");
  CHECK(print_term(r.trace[2].term) == "1 + <x:int | x>[x:int := 2]");
  CHECK(print_term(r.trace[3].term) == "1 + 2");
  CHECK(print_term(r.trace[4].term) == "3");
}

TEST_CASE("rebind distributes over sums, lambdas, and applications") {
  expect_trace("(\\y. y[x:int := 1]) 5", Strategy::CBV,
               {"App", "RebindNum"}, RunResult::Status::Value, "5");
  expect_trace("(\\x:int. x + <y:int | y + <z:int | z>>)[y:int := 5]", Strategy::CBV,
               {"RebindAbs"}, RunResult::Status::Value,
               "\\x:int. (x + <y:int | y + <z:int | z>>)[y:int := 5]");
  expect_trace("<x:int, y:int | x + y>[x:int := 1, y:int := 2]", Strategy::CBV,
               {"RebindUnbindYes", "Sum"},
               RunResult::Status::Value, "3");
  // Extra entries are restricted away, missing ones are fatal.
  expect_trace("<x:int, y:int | x + y>[x:int := 1, y:int := 2, z:int := 9]",
               Strategy::CBV, {"RebindUnbindYes", "Sum"},
               RunResult::Status::Value, "3");
  expect_trace("<x:int, y:int | x + y>[x:int := 1]", Strategy::CBV,
               {"RebindUnbindNo"}, RunResult::Status::Error, nullptr);
}

TEST_CASE("errors collapse their evaluation context in one step") {
  expect_trace("(<x:int | x>[y:int := 5]) + 1", Strategy::CBV,
               {"CtxError"}, RunResult::Status::Error, nullptr);
  expect_trace("error + 1", Strategy::CBV,
               {"CtxError"}, RunResult::Status::Error, nullptr);
  expect_trace("error[x:int := 1]", Strategy::CBV,
               {"RebindError"}, RunResult::Status::Error, nullptr);
  expect_trace("<x:int | x>[x:int := error][y:int := 1]", Strategy::CBV,
               {"RebindRebind", "RebindError"}, RunResult::Status::Error, nullptr);
}

TEST_CASE("numeral addition overflows to error") {
  expect_trace("9223372036854775807 + 1", Strategy::CBV,
               {"Sum"}, RunResult::Status::Error, nullptr);
}

TEST_CASE("strategy contrast") {
  // CBV insists on a value argument; CBN substitutes the redex unevaluated
  // and the rebind then distributes through the sum.
  const char* contrast = "(\\y. y[x:int := 2]) (1 + <x:int | x>)";
  RunResult cbv = run(T(contrast), Strategy::CBV, 1000);
  CHECK(cbv.status == RunResult::Status::Stuck);
  CHECK(cbv.stuck == StuckReason::IllFormedSum);
  CHECK(term_eq(cbv.final, T(contrast)));
  expect_trace(contrast, Strategy::CBN,
               {"App", "RebindSum", "Ctx(RebindNum)", "Ctx(RebindUnbindYes)", "Sum"},
               RunResult::Status::Value, "3");

  // With a value argument the strategies coincide.
  const char* both = "(\\y. y[x:int := 2]) <x:int | 1 + x>";
  expect_trace(both, Strategy::CBV, {"App", "RebindUnbindYes", "Sum"},
               RunResult::Status::Value, "3");
  expect_trace(both, Strategy::CBN, {"App", "RebindUnbindYes", "Sum"},
               RunResult::Status::Value, "3");
}

TEST_CASE("nested contexts nest their labels") {
  expect_trace("((1 + 2) + 3) + 4", Strategy::CBV,
               {"Ctx(Ctx(Sum))", "Ctx(Sum)", "Sum"},
               RunResult::Status::Value, "10");
}

static void expect_stuck(const char* src, StuckReason why) {
  INFO(src);
  RunResult r = run(T(src), Strategy::CBV, 1000);
  REQUIRE(r.status == RunResult::Status::Stuck);
  CHECK(r.stuck == why);
}

TEST_CASE("stuck classification") {
  expect_stuck("1 2", StuckReason::AppNonFunction);
  expect_stuck("<x:int | \\y:int. \\z:int. z> 3", StuckReason::AppNonFunction);
  expect_stuck("(\\x:int. x) + 1", StuckReason::IllFormedSum);
  expect_stuck("y + 1", StuckReason::FreeVariable);
  expect_stuck("y[x:int := 1]", StuckReason::RebindVariable);
  // Substitution refuses to capture: the argument's free x would be
  // captured by the unbinder the redex sits under.
  expect_stuck("(\\x. \\y. x 0) (\\z. y)", StuckReason::SubstUndefined);
  expect_stuck("(\\y:(int -> int). <x:int | y>) (\\z:int. x)",
               StuckReason::SubstUndefined);
}

TEST_CASE("fuel accounting") {
  RunResult cut = run(T("((1 + 2) + 3) + 4"), Strategy::CBV, 2);
  CHECK(cut.status == RunResult::Status::FuelExhausted);
  CHECK(cut.steps == 2);
  RunResult exact = run(T("((1 + 2) + 3) + 4"), Strategy::CBV, 3);
  CHECK(exact.status == RunResult::Status::Value);
  CHECK(exact.steps == 3);
}

// Walks a CBV run re-checking that the rule that fired is the only rule
// that could have fired, and that terminal states admit none.
static void audit_run(const char* src) {
  INFO(src);
  TermPtr cur = T(src);
  for (int i = 0; i < 1000; ++i) {
    Outcome o = step_cbv(cur);
    auto rules = applicable_rules(cur);
    if (o.kind == Outcome::Kind::Stepped) {
      REQUIRE(rules.size() == 1);
      CHECK(rule_eq(rules[0].rule, o.rule));
      CHECK(term_eq(rules[0].result, o.next));
      cur = o.next;
    } else {
      CHECK(rules.empty());
      return;
    }
  }
  FAIL("run did not terminate");
}

TEST_CASE("exactly one rule applies at every non-terminal state") {
  audit_run("<x:int | x + <x:int | x>>[x:int := 1][x:int := 2]");
  audit_run("(\\x. x + <x:int | x>)[x:int := 1] 2");
  audit_run("(<x:int | x>[y:int := 5]) + 1");
  audit_run("<x:int | x>[x:int := error][y:int := 1]");
  audit_run("1 2");
  audit_run("((1 + 2) + 3) + 4");
  audit_run("<x:int | x>[x:int := 1 + 2]");
  audit_run("((\\w:(code & code^1). 1) <x:int | <y:int | y>>)[z:int := 0]");
}
