// Structural layer: term/type construction, syntactic equality, free
// variables, the value predicate.
#include <catch2/catch_amalgamated.hpp>

#include <ubr/parse.hpp>
#include <ubr/print.hpp>
#include <ubr/syntax.hpp>

#include <set>
#include <string>

using namespace ubr;

static TermPtr T(const char* s) { return parse_term(s); }

TEST_CASE("term equality is syntactic") {
  CHECK(term_eq(T("\\x. x"), T("\\x. x")));
  // Unbinders are not renamable, so equality does not identify terms up to
  // renaming anywhere, binders included.
  CHECK_FALSE(term_eq(T("\\x. x"), T("\\y. y")));
  CHECK_FALSE(term_eq(T("1 + 2"), T("2 + 1")));
  CHECK_FALSE(term_eq(T("\\x:int. x"), T("\\x. x")));
  CHECK(term_eq(T("<x:int | x + 1>[x:int := 2]"),
                T("<x:int | x + 1>[x:int := 2]")));
  CHECK_FALSE(term_eq(T("<x:int | x>[x:int := 2]"),
                      T("<x:int | x>[x:int^1 := 2]")));
  // Unbind contexts are finite maps, so declaration order is immaterial.
  CHECK(term_eq(T("<x:int, y:int | x>"), T("<y:int, x:int | x>")));
}

TEST_CASE("type equality is syntactic") {
  CHECK(type_eq(parse_type("int & code"), parse_type("int & code")));
  CHECK_FALSE(type_eq(parse_type("int & code"), parse_type("code & int")));
  CHECK_FALSE(type_eq(parse_type("int"), parse_type("int^1")));
  CHECK(type_eq(parse_type("(int -> code^1)^2"), parse_type("(int -> code^1)^2")));
  CHECK_FALSE(type_eq(parse_type("int -> code"), parse_type("int -> code^1")));
}

TEST_CASE("free variables") {
  auto fv = [](const char* s) { return free_vars(parse_term(s)); };
  using Set = std::set<std::string>;

  CHECK(fv("x + y") == Set{"x", "y"});
  CHECK(fv("\\x. x + y") == Set{"y"});
  CHECK(fv("\\x. x") == Set{});
  // An unbind binds its declared names in the body.
  CHECK(fv("<x:int | x + y>") == Set{"y"});
  CHECK(fv("<x:int, y:int | x + y>") == Set{});
  // Rebind entries are ordinary subterms; the target's binders do not
  // scope over them.
  CHECK(fv("<x:int | x>[x:int := y]") == Set{"y"});
  CHECK(fv("(\\z:int. z)[x:int := z]") == Set{"z"});
  CHECK(fv("error") == Set{});
}

TEST_CASE("values are numerals, lambdas, and unbinds") {
  CHECK(is_value(T("42")));
  CHECK(is_value(T("\\x. x")));
  CHECK(is_value(T("\\x:int. x + 1")));
  CHECK(is_value(T("<x:int | x + <x:int | x>>")));
  CHECK_FALSE(is_value(T("error")));
  CHECK_FALSE(is_value(T("1 + 2")));
  CHECK_FALSE(is_value(T("(\\x. x) 1")));
  CHECK_FALSE(is_value(T("1[x:int := 2]")));
  CHECK_FALSE(is_value(T("x")));
}

TEST_CASE("identifier rules") {
  CHECK(is_valid_ident("x"));
  CHECK(is_valid_ident("foo_bar2"));
  CHECK_FALSE(is_valid_ident("2x"));
  CHECK_FALSE(is_valid_ident(""));
  // Reserved words cannot be binders or variables.
  CHECK(is_reserved_word("error"));
  CHECK(is_reserved_word("int"));
  CHECK(is_reserved_word("code"));
  CHECK_THROWS_AS(parse_term("\\error. 1"), ParseError);
  CHECK_THROWS_AS(parse_term("int + 1"), ParseError);
}

TEST_CASE("rebind entries preserve declaration order") {
  auto t = T("1[x:int := 2, y:code := <z:int | z>]");
  REQUIRE(t->kind == Term::Kind::Rebind);
  const auto& entries = t->subst.entries();
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].name == "x");
  CHECK(entries[1].name == "y");
  CHECK(entries[0].term->kind == Term::Kind::Num);
  CHECK(entries[1].term->kind == Term::Kind::Unbind);
}
