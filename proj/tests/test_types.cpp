// Type algebra: normalization to canonical form, the subtype algorithm,
// level arithmetic, and the value-type predicate.
#include <catch2/catch_amalgamated.hpp>

#include <ubr/parse.hpp>
#include <ubr/print.hpp>
#include <ubr/types.hpp>

#include <string>

using namespace ubr;

static CanonType N(const char* s) { return normalize(parse_type(s)); }
static std::string NC(const char* s) { return print_canon_type(N(s)); }

TEST_CASE("normalization collapses to sorted, deduplicated atoms") {
  CHECK(NC("int") == "int^0");
  CHECK(NC("int^1 & int^1") == "int^1");
  CHECK(NC("int & int") == "int^0");
  CHECK(NC("code & int^2 & code") == "code^0 & int^2");
  // Arrow levels shift into the codomain, leaving every arrow at level 0.
  CHECK(NC("(int -> int)^1") == "int -> int^1");
  CHECK(NC("(int -> (int^1 & code^0))^1") == "(int -> int^2) & (int -> code^1)");
  CHECK(NC("((int -> int)^2 -> (int^1 & int^1))^3") ==
        "(int -> int^2) -> int^4");
  // Intersections distribute out of codomains.
  CHECK(NC("int -> (int & code)") == "(int -> int) & (int -> code)");
  CHECK(NC("(code -> code)^1 & (code -> code)^1") == "code -> code^1");
}

TEST_CASE("normalization is idempotent") {
  const char* samples[] = {
      "int", "code^2", "int -> int", "(int -> (int^1 & code^0))^1",
      "int^1 & int & code", "(int & code) -> (code & int^1)",
      "((int -> int)^2 -> (int^1 & int^1))^3",
      "(int -> int^1)^1 & (int -> code)^1 & int^2",
  };
  for (const char* s : samples) {
    INFO(s);
    CanonType once = N(s);
    CanonType twice = normalize(raw_of_canon(once));
    CHECK(canon_eq(once, twice));
  }
}

TEST_CASE("subtype algorithm on the frozen matrix") {
  struct Row { const char* s; const char* t; bool expect; };
  const Row rows[] = {
      // int atoms lift to higher levels, code atoms do not.
      {"int", "int^3", true},
      {"int^3", "int", false},
      {"code", "code^1", false},
      {"code^1", "code", false},
      {"int & code", "code & int^2", true},
      {"(int -> int^1)^1", "(int -> int^2)", true},
      // Domains are contravariant.
      {"(int^1 -> int)", "(int -> int)", true},
      {"(int -> int)", "(int^1 -> int)", false},
      {"(int -> (int^1 & code))^1", "(int -> int^2)", true},
      {"int & (code & int^1)", "int^1", true},
      {"int", "int & int", true},
      {"(code -> code)^1", "((code & code) -> code)^1", true},
      {"int -> int", "code -> code", false},
      {"int^2", "int", false},
  };
  for (const auto& r : rows) {
    INFO(r.s << " <= " << r.t);
    CHECK(subtype(N(r.s), N(r.t)) == r.expect);
  }
}

TEST_CASE("subtype is a preorder on a mixed sample") {
  const char* sample[] = {"int", "int^2", "code", "code & int^1",
                          "int -> int^1", "(int -> int)^1", "int & code & int^1"};
  for (const char* s : sample) CHECK(subtype(N(s), N(s)));
  for (const char* a : sample)
    for (const char* b : sample)
      for (const char* c : sample) {
        if (subtype(N(a), N(b)) && subtype(N(b), N(c))) {
          INFO(a << " <= " << b << " <= " << c);
          CHECK(subtype(N(a), N(c)));
        }
      }
}

TEST_CASE("bottom is minimal and empty") {
  CanonType bot;
  CHECK(bot.is_bottom());
  CHECK(subtype(bot, N("code^2")));
  CHECK(subtype(bot, bot));
  CHECK_FALSE(subtype(N("int"), bot));
  // Watch out: the int-level floor of bottom is an engaged 0, because the
  // error term may be used at any int level. Callers probing for an int
  // atom must test is_bottom first.
  CHECK(min_int_level(bot).has_value());
  CHECK(*min_int_level(bot) == 0);
}

TEST_CASE("min int level") {
  CHECK(*min_int_level(N("int")) == 0);
  CHECK(*min_int_level(N("int^2 & code")) == 2);
  CHECK(*min_int_level(N("int^3 & int^1")) == 1);
  CHECK_FALSE(min_int_level(N("code")).has_value());
  CHECK_FALSE(min_int_level(N("int -> int")).has_value());
}

TEST_CASE("decrement models one rebind") {
  auto dec = [](const char* s) {
    auto d = decrement(N(s));
    REQUIRE(d.has_value());
    return print_canon_type(*d);
  };
  CHECK(dec("code^0 & int^1") == "int^0");
  CHECK(dec("code & code^1 & int^2") == "code^0 & int^1");
  CHECK(dec("(int -> int^2)") == "int -> int^1");
  CHECK(dec("int") == "int^0");  // rebinds are no-ops on numerals
  // A lone level-0 code atom has nowhere to go.
  CHECK_FALSE(decrement(N("code")).has_value());
  // Bottom stays bottom.
  CHECK(decrement(CanonType{})->is_bottom());
}

TEST_CASE("value types have a level-0 conjunct") {
  CHECK(is_value_type(N("int")));
  CHECK(is_value_type(N("code")));
  CHECK(is_value_type(N("code^0 & int^2")));
  // Arrows sit at level 0 in canonical form, so arrow types always qualify.
  CHECK(is_value_type(N("(int -> int)^1")));
  CHECK(is_value_type(N("int -> int^1")));
  CHECK_FALSE(is_value_type(N("int^1")));
  CHECK_FALSE(is_value_type(N("code^1")));
  CHECK_FALSE(is_value_type(N("int^1 & code^2")));
}

TEST_CASE("raw rendition of canonical types round-trips") {
  const char* samples[] = {"int", "code^2 & int", "(int -> (code & int^1))^2",
                           "(int & code) -> code"};
  for (const char* s : samples) {
    INFO(s);
    CanonType c = N(s);
    CHECK(canon_eq(c, normalize(raw_of_canon(c))));
  }
}
