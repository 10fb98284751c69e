// oracle.hpp -- bounded proof search for declarative subtyping.
//
// The oracle answers "is there a derivation of S <= T within the given
// depth?" by goal-directed search over the declarative rules, without ever
// consulting normalize() or the algorithmic subtype(). A positive answer
// comes with a certificate (see cert.hpp) so it can be replayed. A negative
// answer only means no derivation was found within the bound.
//
// Search structure, in a fixed order for determinism:
//   - syntactic equality (reflexivity)
//   - intersection goals split: S <= T1 & T2 reduces to both conjuncts,
//     certified through idempotence (S <= S & S <= T1 & T2)
//   - structural last rules (int lift chains, arrow congruence)
//   - transitivity through a one-step supertype of S: a projection or a
//     single equivalence rewrite at some position
//   - a single equivalence rewrite of the goal side
//
// Every rewrite offered is size-nonincreasing (idempotence is only used in
// the contracting direction; the expanding direction is recovered by the
// goal-splitting rule), which keeps refutation searches finite in practice.
// Results are memoized; Proved entries are depth-independent, failures
// remember the deepest bound they exhausted.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ubr/cert.hpp"
#include "ubr/print.hpp"
#include "ubr/types.hpp"

namespace ubr {

enum class OracleStatus { Proved, NotWithinBound };

struct OracleResult {
  OracleStatus status;
  CertPtr cert; // set iff Proved; concludes S <= T
};

class SubtypeOracle {
 public:
  explicit SubtypeOracle(std::uint64_t node_budget = 2'000'000)
      : node_budget_(node_budget) {}

  OracleResult query(const RawTypePtr& s, const RawTypePtr& t, int depth = 8) {
    nodes_left_ = node_budget_;
    auto c = search(s, t, depth);
    if (c) return {OracleStatus::Proved, *c};
    return {OracleStatus::NotWithinBound, nullptr};
  }

  // Number of distinct sub-goals ever examined (across queries).
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct MemoEntry {
    bool proved = false;
    CertPtr cert;          // when proved
    int failed_depth = -1; // deepest bound that exhausted without a proof
    bool in_progress = false;
  };

  std::uint64_t node_budget_;
  std::uint64_t nodes_left_ = 0;
  std::map<std::string, MemoEntry> memo_;

  static std::string key_of(const RawTypePtr& s, const RawTypePtr& t) {
    // print_type is injective on raw types (parsing the output gives the
    // input back), so the printed pair is a faithful key
    return print_type(s) + " <= " + print_type(t);
  }

  // A rewrite by one equivalence step at one position, with certificate
  // from == to.
  struct Rewrite {
    RawTypePtr to;
    CertPtr cert;
  };

  // Every conjunct of `t` is at outer level >= 1, so an inverse shift applies.
  static bool outer_levels_positive(const RawTypePtr& t) {
    if (t->kind == RawType::Kind::Inter)
      return outer_levels_positive(t->lhs) && outer_levels_positive(t->rhs);
    return t->level >= 1;
  }

  static RawTypePtr lower_outer(const RawTypePtr& t) {
    switch (t->kind) {
      case RawType::Kind::Inter:
        return RawType::inter(lower_outer(t->lhs), lower_outer(t->rhs));
      case RawType::Kind::Int: return RawType::int_at(t->level - 1);
      case RawType::Kind::Code: return RawType::code_at(t->level - 1);
      case RawType::Kind::Arrow: return RawType::arrow(t->dom, t->cod, t->level - 1);
    }
    return t;
  }

  static void local_rewrites(const RawTypePtr& t, std::vector<Rewrite>& out) {
    if (t->kind == RawType::Kind::Inter) {
      // idempotence, contracting direction only
      if (type_eq(t->lhs, t->rhs))
        out.push_back({t->lhs, eq_sym(eq_idem(t->lhs))});
      // commutativity
      out.push_back({RawType::inter(t->rhs, t->lhs), eq_comm(t->lhs, t->rhs)});
      // associativity, both directions
      if (t->rhs->kind == RawType::Kind::Inter)
        out.push_back({RawType::inter(RawType::inter(t->lhs, t->rhs->lhs), t->rhs->rhs),
                       eq_assoc(t->lhs, t->rhs->lhs, t->rhs->rhs)});
      if (t->lhs->kind == RawType::Kind::Inter)
        out.push_back({RawType::inter(t->lhs->lhs, RawType::inter(t->lhs->rhs, t->rhs)),
                       eq_sym(eq_assoc(t->lhs->lhs, t->lhs->rhs, t->rhs))});
      // distributivity, merging direction
      if (t->lhs->kind == RawType::Kind::Arrow && t->rhs->kind == RawType::Kind::Arrow &&
          t->lhs->level == t->rhs->level && type_eq(t->lhs->dom, t->rhs->dom))
        out.push_back({RawType::arrow(t->lhs->dom,
                                      RawType::inter(t->lhs->cod, t->rhs->cod),
                                      t->lhs->level),
                       eq_distrib(t->lhs->dom, t->lhs->cod, t->rhs->cod, t->lhs->level)});
    }
    if (t->kind == RawType::Kind::Arrow) {
      // distributivity, splitting direction
      if (t->cod->kind == RawType::Kind::Inter)
        out.push_back({RawType::inter(RawType::arrow(t->dom, t->cod->lhs, t->level),
                                      RawType::arrow(t->dom, t->cod->rhs, t->level)),
                       eq_sym(eq_distrib(t->dom, t->cod->lhs, t->cod->rhs, t->level))});
      // shift down: (T -> U)^(l+1) == (T -> U lifted)^l
      if (t->level >= 1)
        out.push_back({RawType::arrow(t->dom, lift_raw_outer(t->cod, 1), t->level - 1),
                       eq_shift(t->dom, t->cod, t->level - 1)});
      // shift up: (T -> U)^l == (T -> U lowered)^(l+1) when U admits it
      if (outer_levels_positive(t->cod)) {
        RawTypePtr lowered = lower_outer(t->cod);
        if (type_eq(lift_raw_outer(lowered, 1), t->cod))
          out.push_back({RawType::arrow(t->dom, lowered, t->level + 1),
                         eq_sym(eq_shift(t->dom, lowered, t->level))});
      }
    }
  }

  static void all_rewrites(const RawTypePtr& t, std::vector<Rewrite>& out) {
    local_rewrites(t, out);
    if (t->kind == RawType::Kind::Inter) {
      std::vector<Rewrite> ls, rs;
      all_rewrites(t->lhs, ls);
      all_rewrites(t->rhs, rs);
      for (auto& r : ls)
        out.push_back({RawType::inter(r.to, t->rhs),
                       eq_cong_inter(r.cert, eq_refl(t->rhs))});
      for (auto& r : rs)
        out.push_back({RawType::inter(t->lhs, r.to),
                       eq_cong_inter(eq_refl(t->lhs), r.cert)});
    } else if (t->kind == RawType::Kind::Arrow) {
      std::vector<Rewrite> ds, cs;
      all_rewrites(t->dom, ds);
      all_rewrites(t->cod, cs);
      for (auto& r : ds)
        out.push_back({RawType::arrow(r.to, t->cod, t->level),
                       eq_cong_arrow(r.cert, eq_refl(t->cod), t->level)});
      for (auto& r : cs)
        out.push_back({RawType::arrow(t->dom, r.to, t->level),
                       eq_cong_arrow(eq_refl(t->dom), r.cert, t->level)});
    }
  }

  std::optional<CertPtr> search(const RawTypePtr& s, const RawTypePtr& t, int depth) {
    if (type_eq(s, t)) return sub_refl(s);
    if (depth <= 0 || nodes_left_ == 0) return std::nullopt;
    --nodes_left_;

    std::string key = key_of(s, t);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second.proved) return it->second.cert;
      if (it->second.in_progress) return std::nullopt; // guard against cycles
      if (it->second.failed_depth >= depth) return std::nullopt;
    }
    MemoEntry& entry = memo_[key]; // map references stay valid across inserts
    entry.in_progress = true;

    auto done = [&](CertPtr c) -> std::optional<CertPtr> {
      entry.in_progress = false;
      entry.proved = true;
      entry.cert = c;
      return c;
    };

    // intersection goal: prove both conjuncts, glue with idempotence
    if (t->kind == RawType::Kind::Inter) {
      auto l = search(s, t->lhs, depth);
      if (l) {
        auto r = search(s, t->rhs, depth);
        if (r) {
          CertPtr dup = sub_from_equiv(eq_idem(s));
          return done(sub_trans(dup, sub_inter(*l, *r)));
        }
      }
      entry.in_progress = false;
      if (nodes_left_ > 0 && entry.failed_depth < depth) entry.failed_depth = depth;
      return std::nullopt;
    }

    // structural last rules against an atomic goal
    if (s->kind == RawType::Kind::Int && t->kind == RawType::Kind::Int &&
        s->level <= t->level) {
      CertPtr c = sub_refl(s);
      for (int l = s->level; l < t->level; ++l) c = sub_trans(c, sub_int_lift(l));
      return done(c);
    }
    if (s->kind == RawType::Kind::Arrow && t->kind == RawType::Kind::Arrow &&
        s->level == t->level) {
      auto dom = search(t->dom, s->dom, depth - 1);
      if (dom) {
        auto cod = search(s->cod, t->cod, depth - 1);
        if (cod) return done(sub_arrow(*dom, *cod, s->level));
      }
    }

    // transitivity through one-step supertypes of s
    struct Move {
      RawTypePtr to;
      CertPtr cert; // s <= to
    };
    std::vector<Move> moves;
    if (s->kind == RawType::Kind::Inter) {
      moves.push_back({s->lhs, sub_inter_elim(s->lhs, s->rhs)});
      moves.push_back({s->rhs, sub_trans(sub_from_equiv(eq_comm(s->lhs, s->rhs)),
                                         sub_inter_elim(s->rhs, s->lhs))});
    }
    std::vector<Rewrite> rws;
    all_rewrites(s, rws);
    for (auto& r : rws) moves.push_back({r.to, sub_from_equiv(r.cert)});
    for (auto& m : moves) {
      if (type_eq(m.to, s)) continue;
      auto rest = search(m.to, t, depth - 1);
      if (rest) return done(sub_trans(m.cert, *rest));
    }

    // rewriting the goal side
    std::vector<Rewrite> trws;
    all_rewrites(t, trws);
    for (auto& r : trws) {
      if (type_eq(r.to, t)) continue;
      auto rest = search(s, r.to, depth - 1);
      if (rest) return done(sub_trans(*rest, sub_from_equiv(eq_sym(r.cert))));
    }

    entry.in_progress = false;
    // only trust a failure as depth-exhaustion if the node budget survived
    if (nodes_left_ > 0 && entry.failed_depth < depth) entry.failed_depth = depth;
    return std::nullopt;
  }
};

// One-shot convenience wrapper.
inline OracleResult oracle_subtype(const RawTypePtr& s, const RawTypePtr& t,
                                   int depth = 8) {
  SubtypeOracle oracle;
  return oracle.query(s, t, depth);
}

} // namespace ubr
