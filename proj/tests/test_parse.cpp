// Parser and printer: grammar shape, precedence, diagnostics, and the
// print/parse round trip.
#include <catch2/catch_amalgamated.hpp>

#include <ubr/parse.hpp>
#include <ubr/print.hpp>

#include <string>

using namespace ubr;

static std::string rt(const char* s) { return print_term(parse_term(s)); }
static std::string rtt(const char* s) { return print_type(parse_type(s)); }

TEST_CASE("term printing normal forms") {
  // Sums are left associative and print without redundant parens.
  CHECK(rt("1 + 2 + 4") == "1 + 2 + 4");
  CHECK(rt("(1 + 2) + 4") == "1 + 2 + 4");
  CHECK(rt("1 + (2 + 4)") == "1 + (2 + 4)");
  // Application binds tighter than sum, lambda bodies extend right.
  CHECK(rt("(\\x. x) 1 + 2") == "(\\x. x) 1 + 2");
  CHECK(rt("\\x. x + 1") == "\\x. x + 1");
  CHECK(rt("(\\x. x) (\\y. y) 3") == "(\\x. x) (\\y. y) 3");
  // Rebind is a postfix that outranks application and sum.
  CHECK(rt("<x:int | x>[x:int := 1][x:int := 2]") ==
        "<x:int | x>[x:int := 1][x:int := 2]");
  CHECK(rt("(\\x. x + <x:int | x>)[x:int := 1] 2") ==
        "(\\x. x + <x:int | x>)[x:int := 1] 2");
  CHECK(rt("<x:int, y:int | x + y>[x:int := 1, y:int := 2]") ==
        "<x:int, y:int | x + y>[x:int := 1, y:int := 2]");
  CHECK(rt("\\w:code & code^1. 1") == "\\w:code & code^1. 1");
}

TEST_CASE("type printing normal forms") {
  CHECK(rtt("int") == "int");
  CHECK(rtt("int^0") == "int");
  CHECK(rtt("code^2") == "code^2");
  CHECK(rtt("int -> int -> int") == "int -> int -> int");
  CHECK(rtt("(int -> int) -> int") == "(int -> int) -> int");
  CHECK(rtt("int & code & int^1") == "int & code & int^1");
  CHECK(rtt("(int -> (int^1 & code^0))^1") == "(int -> (int^1 & code))^1");
  CHECK(rtt("(int & code) -> code") == "(int & code) -> code");
}

TEST_CASE("numeric literals") {
  CHECK(rt("0") == "0");
  CHECK(rt("9223372036854775807") == "9223372036854775807");
  CHECK_THROWS_AS(parse_term("9223372036854775808"), ParseError);
}

TEST_CASE("rebind needs at least one entry") {
  CHECK_THROWS_AS(parse_term("1[]"), ParseError);
  CHECK_NOTHROW(parse_term("1[x:int := 2]"));
}

TEST_CASE("bare lambda cannot be a sum operand") {
  CHECK_THROWS_AS(parse_term("1 + \\x. x"), ParseError);
  CHECK_NOTHROW(parse_term("1 + (\\x. x)"));
}

TEST_CASE("parse errors carry spans and expectations") {
  try {
    parse_term("<x:int | x + >");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.start < e.span.end);
    CHECK_FALSE(e.expected.empty());
  }
  CHECK_THROWS_AS(parse_term(""), ParseError);
  CHECK_THROWS_AS(parse_term("1 +"), ParseError);
  CHECK_THROWS_AS(parse_term("<x | x>"), ParseError);
  CHECK_THROWS_AS(parse_term("1[x := 2]"), ParseError);
  CHECK_THROWS_AS(parse_term("1 2 }"), ParseError);
  CHECK_THROWS_AS(parse_type("int &"), ParseError);
  CHECK_THROWS_AS(parse_type("int ^ -1"), ParseError);
  CHECK_THROWS_AS(parse_type(""), ParseError);
}

TEST_CASE("trailing input is rejected") {
  // Note "1 + 2 x" would parse: application binds tighter than sum and x
  // is an ordinary variable. A bracket can only be trailing garbage.
  CHECK_THROWS_AS(parse_term("1 + 2 ]"), ParseError);
  CHECK_THROWS_AS(parse_type("int int"), ParseError);
}

TEST_CASE("whitespace is insignificant") {
  CHECK(rt("  <x:int | x + 1>[x:int := 2]  \n") == "<x:int | x + 1>[x:int := 2]");
  CHECK(rt("1+2") == "1 + 2");
  CHECK(rt("\\x.x") == "\\x. x");
}

TEST_CASE("print then parse is the identity on handwritten programs") {
  const char* programs[] = {
      "<x:int | x + <x:int | x>>[x:int := 1][x:int := 2]",
      "<x:int | x + 1>[y:int := 5]",
      "<x:int | x + 1>[x:(int -> int) := \\y:int. y + 1]",
      "(\\x. x + <x:int | x>)[x:int := 1] 2",
      "((\\x:int. \\y:(code^0 & int^1). (y[x:int := x]) + x) 1) <x:int | x + 2>",
      "(\\y:(code^0 & int^1). y[x:int := 2]) <x:int | x + 1>",
      "<x:int | <y:int | x + y>>",
      "\\x:int. x + <y:int | y + <z:int | z>>",
      "(\\x. 2 + x[y:int := 3]) <y:int | y>",
      "(\\y:int^1. y[x:int := 2]) (1 + <x:int | x>)",
      "(\\y. y[x:int := 2]) (1 + <x:int | x>)",
      "(\\y:(int -> int). <x:int | y>) (\\z:int. x)",
      "<x:int | \\y:int. \\z:int. z> 3",
      "((\\w:(code & code^1). 1) <x:int | <y:int | y>>)[z:int := 0]",
      "error + 1",
      "error[x:int := 1]",
  };
  for (const char* p : programs) {
    INFO(p);
    TermPtr once = parse_term(p);
    TermPtr twice = parse_term(print_term(once));
    CHECK(term_eq(once, twice));
  }

  const char* types[] = {
      "int", "code^2", "int -> int", "(int -> (int^1 & code^0))^1",
      "int & int", "int^1 & int & code", "(int & code) -> (code & int^1)",
      "((int -> int)^2 -> (int^1 & int^1))^3",
      "(int -> int^1)^1 & (int -> code)^1 & int^2",
  };
  for (const char* s : types) {
    INFO(s);
    RawTypePtr once = parse_type(s);
    RawTypePtr twice = parse_type(print_type(once));
    CHECK(type_eq(once, twice));
  }
}
