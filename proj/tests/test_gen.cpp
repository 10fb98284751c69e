// The typed term generator and the harness built on it: soundness of the
// announced types, stream determinism, JSON output shape, and a medium
// property sweep (the full-size sweep lives in the acceptance binary).
#include <catch2/catch_amalgamated.hpp>

#include <ubr/gen.hpp>
#include <ubr/jsonio.hpp>
#include <ubr/parse.hpp>
#include <ubr/print.hpp>
#include <ubr/props.hpp>
#include <ubr/typecheck.hpp>

#include <map>
#include <sstream>

using namespace ubr;

namespace {

void count_kinds(const TermPtr& t, std::map<Term::Kind, int>& out) {
  out[t->kind]++;
  switch (t->kind) {
    case Term::Kind::Sum:
    case Term::Kind::App:
      count_kinds(t->a, out);
      count_kinds(t->b, out);
      break;
    case Term::Kind::Lam:
      count_kinds(t->b, out);
      break;
    case Term::Kind::Unbind:
      count_kinds(t->b, out);
      break;
    case Term::Kind::Rebind:
      count_kinds(t->a, out);
      for (const auto& e : t->subst.entries()) count_kinds(e.term, out);
      break;
    default:
      break;
  }
}

}  // namespace

TEST_CASE("generated terms are closed and synthesize their announced type") {
  GenConfig cfg;
  cfg.seed = 20260816;
  TermGen g(cfg);
  std::map<Term::Kind, int> kinds;
  for (int i = 0; i < 800; ++i) {
    auto [t, ty] = g.next();
    INFO(print_term(t));
    REQUIRE(free_vars(t).empty());
    auto r = synth(TypeCtx{}, t);
    REQUIRE(synth_ok(r));
    REQUIRE(canon_eq(synth_type(r), ty));
    count_kinds(t, kinds);
  }
  // Every production shows up in a sample this size.
  CHECK(kinds[Term::Kind::Var] > 0);
  CHECK(kinds[Term::Kind::Num] > 0);
  CHECK(kinds[Term::Kind::Sum] > 0);
  CHECK(kinds[Term::Kind::Lam] > 0);
  CHECK(kinds[Term::Kind::App] > 0);
  CHECK(kinds[Term::Kind::Unbind] > 0);
  CHECK(kinds[Term::Kind::Rebind] > 0);
  CHECK(kinds[Term::Kind::Error] > 0);
}

TEST_CASE("equal seeds give equal streams") {
  GenConfig cfg;
  cfg.seed = 77;
  TermGen g1(cfg), g2(cfg);
  for (int i = 0; i < 300; ++i) {
    auto a = g1.next();
    auto b = g2.next();
    REQUIRE(term_eq(a.first, b.first));
    REQUIRE(canon_eq(a.second, b.second));
  }
}

TEST_CASE("zero depth degenerates to the numeral leaf") {
  GenConfig cfg;
  cfg.max_depth = 0;
  TermGen g(cfg);
  auto [t, ty] = g.next();
  CHECK(t->kind == Term::Kind::Num);
  CHECK(t->num == 0);
  CHECK(canon_eq(ty, normalize(RawType::int_at(0))));
}

TEST_CASE("generated raw types round-trip through the printer") {
  GenConfig cfg;
  cfg.seed = 5150;
  TermGen g(cfg);
  for (int i = 0; i < 500; ++i) {
    RawTypePtr ty = g.next_type();
    INFO(print_type(ty));
    REQUIRE(type_eq(ty, parse_type(print_type(ty))));
  }
}

TEST_CASE("trace JSON is one object per step plus a summary line") {
  auto r = run(parse_term("(<x:int | x + 1>[x:int := 2]) + 4"), Strategy::CBV,
               1000, true);
  std::ostringstream os;
  write_trace_json(os, r);
  std::istringstream in(os.str());
  std::string line;
  std::uint64_t lines = 0;
  bool saw_final = false;
  while (std::getline(in, line)) {
    Json j = Json::parse(line);
    if (j.contains("final")) {
      saw_final = true;
      CHECK(j["status"] == "Value");
      CHECK(j["steps"] == r.steps);
      CHECK_FALSE(j.contains("reason"));
    } else {
      CHECK(j.contains("step"));
      CHECK(j.contains("rule"));
      CHECK(j.contains("term"));
    }
    ++lines;
  }
  CHECK(saw_final);
  CHECK(lines == r.steps + 1);

  // A stuck run reports its reason on the summary line.
  auto rs = run(parse_term("(\\y. y[x:int := 2]) (1 + <x:int | x>)"),
                Strategy::CBV, 1000, true);
  std::ostringstream os2;
  write_trace_json(os2, rs);
  std::istringstream in2(os2.str());
  bool reason_ok = false;
  while (std::getline(in2, line)) {
    Json j = Json::parse(line);
    if (j.contains("final"))
      reason_ok = j["status"] == "Stuck" && j.contains("reason");
  }
  CHECK(reason_ok);
}

TEST_CASE("canonical type JSON lists atoms") {
  CanonType ty = normalize(parse_type("code & int^2 & (int -> int^1)"));
  Json j = canon_type_json(ty);
  REQUIRE(j.contains("atoms"));
  REQUIRE(j["atoms"].is_array());
  CHECK(j["atoms"].size() == 3);
}

TEST_CASE("medium property sweep is green and reproducible") {
  PropertyConfig cfg;
  cfg.gen.seed = 424242;
  cfg.count = 400;
  PropertyReport rep = run_properties(cfg);

  CHECK(rep.runs > 0);
  CHECK(rep.sr_checked > 0);
  // Violations are tolerated only when shrunk, certificate-backed, and in
  // a known family; sr_ok covers exactly that.
  CHECK(rep.sr_ok());
  CHECK(rep.progress_ok());
  CHECK(rep.determinism_ok());
  CHECK(rep.canonical_ok());
  CHECK(rep.candidate_seen);
  for (const auto& v : rep.sr_violations) {
    INFO(v.before << " [" << v.triage << "]");
    CHECK(v.known_family);
    CHECK(v.cert_ok);
    CHECK_FALSE(v.shrunk_before.empty());
  }

  PropertyReport again = run_properties(cfg);
  CHECK(property_report_json(rep).dump() == property_report_json(again).dump());
}

TEST_CASE("normalization soundness sweep over the enumerated universe") {
  UniverseReport ns = check_normalization_soundness();
  for (const auto& m : ns.mismatches) { INFO(m); CHECK(false); }
  CHECK(ns.ok());
  CHECK(ns.types > 100);
}
