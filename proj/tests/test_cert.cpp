// Certificates: equivalence certificates from normalization, subtyping
// certificates from the algorithm, and the bounded declarative oracle.
// Every certificate must replay against the checker and anchor the exact
// raw endpoints it claims to relate.
#include <catch2/catch_amalgamated.hpp>

#include <ubr/cert.hpp>
#include <ubr/oracle.hpp>
#include <ubr/parse.hpp>
#include <ubr/print.hpp>

#include <vector>

using namespace ubr;

TEST_CASE("normalization certificates replay and anchor both ends") {
  const char* samples[] = {
      "int", "code^2", "int -> int", "(int -> (int^1 & code^0))^1",
      "int & int", "int^1 & int & code", "(int & code) -> (code & int^1)",
      "((int -> int)^2 -> (int^1 & int^1))^3",
      "(int -> int^1)^1 & (int -> code)^1 & int^2",
      "(code -> code)^1 & (code -> code)^1",
  };
  for (const char* s : samples) {
    INFO(s);
    RawTypePtr t = parse_type(s);
    NormCert nc = norm_cert(t);
    CHECK(replay(nc.cert));
    CHECK(type_eq(nc.cert->lhs, t));
    CHECK(type_eq(nc.cert->rhs, raw_of_canon(nc.canon)));
    CHECK(canon_eq(nc.canon, normalize(t)));
  }
}

TEST_CASE("subtype certificates exist exactly for algorithm-true pairs") {
  struct Row { const char* s; const char* t; bool expect; };
  const Row rows[] = {
      {"int", "int^3", true},
      {"int^3", "int", false},
      {"code", "code^1", false},
      {"int & code", "code & int^2", true},
      {"(int -> int^1)^1", "(int -> int^2)", true},
      {"(int^1 -> int)", "(int -> int)", true},
      {"(int -> int)", "(int^1 -> int)", false},
      {"(int -> (int^1 & code))^1", "(int -> int^2)", true},
      {"int & (code & int^1)", "int^1", true},
      {"int", "int & int", true},
      {"(code -> code)^1", "((code & code) -> code)^1", true},
  };
  for (const auto& r : rows) {
    INFO(r.s << " <= " << r.t);
    RawTypePtr S = parse_type(r.s);
    RawTypePtr T = parse_type(r.t);
    CHECK(subtype(normalize(S), normalize(T)) == r.expect);
    auto c = subtype_cert_raw(S, T);
    REQUIRE(c.has_value() == r.expect);
    if (c) {
      CHECK(replay(*c));
      CHECK(type_eq((*c)->lhs, S));
      CHECK(type_eq((*c)->rhs, T));
      CHECK(cert_size(*c) > 0);
    }
  }
}

TEST_CASE("tampered certificates do not replay") {
  auto c = subtype_cert_raw(parse_type("int"), parse_type("int^3"));
  REQUIRE(c.has_value());
  REQUIRE(replay(*c));
  // Swapping an endpoint must be caught by the replayer.
  Cert broken = **c;
  broken.rhs = parse_type("code^3");
  CHECK_FALSE(replay(std::make_shared<Cert>(broken)));
}

TEST_CASE("oracle verdicts on the frozen query set") {
  SubtypeOracle oracle;
  auto proved = [&](const char* s, const char* t) {
    auto r = oracle.query(parse_type(s), parse_type(t), 8);
    if (r.status != OracleStatus::Proved) return false;
    return replay(r.cert) && type_eq(r.cert->lhs, parse_type(s)) &&
           type_eq(r.cert->rhs, parse_type(t));
  };
  auto unproved = [&](const char* s, const char* t) {
    return oracle.query(parse_type(s), parse_type(t), 8).status ==
           OracleStatus::NotWithinBound;
  };
  CHECK(proved("int", "int^3"));
  CHECK(proved("(int -> int^1)^1", "int -> int^2"));
  CHECK(proved("(int -> (int^1 & code))^1", "(int -> int^2) & (int -> code^1)"));
  CHECK(proved("(int -> int^2) & (int -> code^1)", "(int -> (int^1 & code))^1"));
  CHECK(proved("int -> int^1", "(int -> int)^1"));
  CHECK(proved("int", "int & int"));
  CHECK(proved("int & code", "code & int^2"));
  CHECK(proved("code & code^1", "code^1 & code & code"));
  CHECK(unproved("code", "code^1"));
  CHECK(unproved("code", "int"));
  CHECK(unproved("int^2", "int"));
}

TEST_CASE("oracle agrees with the algorithm on a small universe") {
  // Atoms over int/code at levels 0..2 plus one layer of arrows, then a
  // sprinkling of binary intersections. Small enough to sweep exhaustively.
  std::vector<RawTypePtr> prims;
  for (int l = 0; l <= 2; ++l) {
    prims.push_back(RawType::int_at(l));
    prims.push_back(RawType::code_at(l));
  }
  std::vector<RawTypePtr> doms = {RawType::int_at(0), RawType::int_at(1),
                                  RawType::code_at(0)};
  std::vector<RawTypePtr> atoms = prims;
  for (const auto& d : doms)
    for (const auto& c : doms)
      for (int l = 0; l <= 1; ++l) atoms.push_back(RawType::arrow(d, c, l));
  std::vector<RawTypePtr> universe = atoms;
  for (std::size_t i = 0; i < atoms.size(); i += 3)
    for (std::size_t j = 1; j < atoms.size(); j += 4)
      universe.push_back(RawType::inter(atoms[i], atoms[j]));

  SubtypeOracle oracle;
  int alg_true = 0, proved = 0;
  for (const auto& S : universe)
    for (const auto& T : universe) {
      bool alg = subtype(normalize(S), normalize(T));
      if (alg) {
        ++alg_true;
        auto c = subtype_cert_raw(S, T);
        REQUIRE(c.has_value());
        CHECK(replay(*c));
      }
      auto r = oracle.query(S, T, 8);
      if (r.status == OracleStatus::Proved) {
        ++proved;
        INFO(print_type(S) << " <= " << print_type(T));
        CHECK(alg);
        CHECK(replay(r.cert));
      }
    }
  // The bounded search proves every algorithm-true pair at this depth.
  CHECK(proved == alg_true);
  CHECK(alg_true > 0);
}

TEST_CASE("oracle memoization persists across queries") {
  SubtypeOracle oracle;
  auto a = oracle.query(parse_type("int & code"), parse_type("code & int^2"), 8);
  std::size_t after_first = oracle.memo_size();
  auto b = oracle.query(parse_type("int & code"), parse_type("code & int^2"), 8);
  CHECK(a.status == OracleStatus::Proved);
  CHECK(b.status == OracleStatus::Proved);
  CHECK(after_first > 0);
  CHECK(oracle.memo_size() == after_first);
}
