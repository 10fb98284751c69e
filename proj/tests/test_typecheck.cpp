// The bidirectional checker: synthesis goldens, checking mode, error
// codes, and typing certificates (construct, replay, oracle re-check of
// the embedded subtyping steps).
#include <catch2/catch_amalgamated.hpp>

#include <ubr/oracle.hpp>
#include <ubr/parse.hpp>
#include <ubr/print.hpp>
#include <ubr/typecheck.hpp>
#include <ubr/typing_cert.hpp>

#include <string>
#include <vector>

using namespace ubr;

// Renders a synthesis outcome as either the canonical type or the error
// code name, which keeps the golden table below one-line-per-case.
static std::string syn(const char* src) {
  auto r = synth(TypeCtx{}, parse_term(src));
  if (synth_ok(r)) return print_canon_type(synth_type(r));
  return std::string("ERR ") + type_error_code_name(synth_error(r).code);
}

TEST_CASE("synthesis goldens") {
  struct Row { const char* src; const char* expect; };
  const Row rows[] = {
      {"5", "int^0"},
      {"error", "bottom"},
      {"x", "ERR UnboundVariable"},
      {"\\x. x", "ERR AnnotationRequired"},
      {"(\\x. x + 1) 2", "int^0"},
      {"(\\x. x) <y:int | y>", "code^0 & int^1"},
      {"1 + <x:int | x>", "int^1"},
      {"<x:int | x + <x:int | x>>", "code^0 & int^2"},
      {"<x:int | <y:int | x + y>>", "code^0 & code^1 & int^2"},
      {"\\x:int. x + <y:int | y + <z:int | z>>", "int -> int^2"},
      {"(\\x:int. x + <y:int | y + <z:int | z>>)[y:int := 5]", "int -> int^1"},
      {"(\\x. 2 + x[y:int := 3]) <y:int | y>", "int^0"},
      {"(\\x:(code^0 & int^1). 2 + x[y:int := 3]) <y:int | y>", "int^0"},
      {"(\\y:int^1. y[x:int := 2]) (1 + <x:int | x>)", "ERR ArgumentNotValueType"},
      {"<x:int | \\y:int. \\z:int. z> 3", "int -> int^1"},
      {"(\\y:(code^0 & int^1). y[x:int := 2]) <x:int | x + 1>", "int^0"},
      {"<x:int | x>[y:int := 1]", "int^0"},
      {"<x:int | x + y>", "ERR UnboundVariable"},
      {"\\x:int. <x:int | x>", "ERR UnbinderClash"},
      {"<x:int | <x:int | x>>", "code^0 & code^1 & int^2"},
      {"1[x:int := 1 + <x:int | x>]", "ERR SubstEntryIllTyped"},
      {"2[x:int := 1]", "int^0"},
      {"<x:int | error>[x:int := 1]", "ERR RebindTargetLevelZero"},
      {"(\\x:int. error) 1", "bottom"},
      {"error[x:int := 1]", "bottom"},
      {"error error", "bottom"},
      {"1 2", "ERR NotAFunction"},
      {"1 + (\\x:int. x)", "ERR NotAnInt"},
  };
  for (const auto& r : rows) {
    INFO(r.src);
    CHECK(syn(r.src) == r.expect);
  }
}

TEST_CASE("checking mode") {
  TermPtr id = parse_term("\\x. x");
  CHECK_FALSE(check(TypeCtx{}, id, normalize(parse_type("int -> int"))));

  TermPtr staged = parse_term("\\x. x + <y:int | y + <z:int | z>>");
  CHECK_FALSE(check(TypeCtx{}, staged, normalize(parse_type("(int -> int^1)^1"))));

  auto wrong = check(TypeCtx{}, id, normalize(parse_type("code")));
  REQUIRE(wrong.has_value());
  CHECK(wrong->code == TypeErrorCode::CheckFailed);

  // The error term checks against anything.
  CHECK_FALSE(check(TypeCtx{}, parse_term("error"),
                    normalize(parse_type("(int -> code^2) & int"))));
}

TEST_CASE("static contexts do not leak into unbinders") {
  // The lambda-bound y must not be visible inside <x:int | y>, whatever
  // the annotation says; otherwise the capture below would typecheck and
  // then evaluate into a capture, which substitution refuses.
  for (const char* T : {"int", "code", "int -> int", "code^1", "(int -> int)^1"}) {
    std::string src = std::string("(\\y:") + T + ". <x:int | y>) (\\z:int. x)";
    INFO(src);
    auto r = synth(TypeCtx{}, parse_term(src));
    CHECK_FALSE(synth_ok(r));
  }
}

TEST_CASE("rebinder entries are typed against their annotations") {
  CHECK_FALSE(check_subst_ok(TypeCtx{},
                             parse_term("1[x:(int -> int) := \\y:int. y + 1]")->subst));
  CHECK(check_subst_ok(TypeCtx{}, parse_term("1[x:int := 1 + <x:int | x>]")->subst)
            .has_value());
}

TEST_CASE("synthesis under a nonempty context") {
  TypeCtx ctx({{"w", parse_type("int^1")}});
  auto r = synth(ctx, parse_term("<y:int | w + y>"));
  REQUIRE(synth_ok(r));
  CHECK(print_canon_type(synth_type(r)) == "code^0 & int^2");
}

// Builds the typing certificate for a closed term, replays it, then
// re-verifies every embedded subtyping step with the bounded oracle.
static void cert_roundtrip(const char* src, SubtypeOracle& oracle) {
  INFO(src);
  TermPtr t = parse_term(src);
  auto c = certify(TypeCtx{}, t);
  REQUIRE(c.has_value());
  std::vector<CertPtr> subs;
  CHECK(replay_typing(*c, TypeCtx{}, &subs));
  for (const auto& s : subs) {
    if (!cert_rule_is_sub(s->rule)) continue;
    INFO(print_type(s->lhs) << " <= " << print_type(s->rhs));
    auto r = oracle.query(s->lhs, s->rhs, 8);
    CHECK(r.status == OracleStatus::Proved);
  }
  CHECK(typing_cert_size(*c) > 0);
}

TEST_CASE("typing certificates replay and their subtyping steps re-verify") {
  SubtypeOracle oracle;
  cert_roundtrip("<x:int | <y:int^1 | x + y>>", oracle);
  cert_roundtrip("<x:int | x + <x:int | x>>[x:int := 1][x:int := 2]", oracle);
  cert_roundtrip("\\x:int. <y:int | x + y>", oracle);
  cert_roundtrip("(\\x:code. x) <y:int | y>", oracle);
  cert_roundtrip("<x:int | \\y:int. \\z:int. z> 3", oracle);
  cert_roundtrip("(\\x. x + 1) 2", oracle);
  cert_roundtrip("error + 1", oracle);
  cert_roundtrip("(\\x. x) error", oracle);
  cert_roundtrip("error[x:int := 1]", oracle);
  cert_roundtrip("<x:int | x>[x:int := 1 + 2]", oracle);
  cert_roundtrip("(\\f:(int -> int). f 1) (\\x:int. x + 1)", oracle);
}

TEST_CASE("certification at a requested type") {
  TermPtr one = parse_term("1");
  auto up = certify_at(TypeCtx{}, one, parse_type("int^3"));
  REQUIRE(up.has_value());
  CHECK(replay_typing(*up, TypeCtx{}));
  CHECK_FALSE(certify_at(TypeCtx{}, one, parse_type("code")).has_value());
}

TEST_CASE("open-term certificates need the right context to replay") {
  TypeCtx ctx({{"w", parse_type("int^1")}});
  TermPtr t = parse_term("<y:int | w + y>");
  auto c = certify_at(ctx, t, parse_type("code & int^3"));
  REQUIRE(c.has_value());
  CHECK(replay_typing(*c, ctx));
  CHECK_FALSE(replay_typing(*c, TypeCtx{}));
}
