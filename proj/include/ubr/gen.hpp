// gen.hpp -- deterministic random generation of well-typed closed terms.
//
// Generation is type-directed bottom-up: every constructor is emitted
// together with its canonical type, so the synthesizer never fails on the
// output (asserted by the test suite, not here). The same stream also
// produces random raw types for round-trip and annotation use.
//
// Naming discipline: lambda binders draw from one pool and unbinders from a
// disjoint pool. That keeps generated terms clear of UnbinderClash rejections
// and keeps every runtime substitution trivially capture-free (an entry's
// free variables can never meet an unbinder set).
//
// The generator does not steer around the known rebind-distribution
// subject-reduction hazard (a rebind over an application whose argument
// type carries code atoms): those terms are well typed and the property
// harness is responsible for triaging what happens to them.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ubr/syntax.hpp"
#include "ubr/types.hpp"

namespace ubr {

// splitmix64; tiny, seedable, stable across platforms
struct SplitMix64 {
  std::uint64_t state = 0;
  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  bool chance(unsigned percent) { return below(100) < percent; }
};

struct GenConfig {
  std::uint64_t seed = 1;
  int max_depth = 5;
  int max_level = 3;
  std::int64_t num_min = 0;
  std::int64_t num_max = 99;
  int var_pool = 4; // number of distinct lambda-binder names
};

class TermGen {
 public:
  explicit TermGen(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  // next well-typed closed term with its canonical type
  std::pair<TermPtr, CanonType> next() {
    Scope scope;
    return gen(cfg_.max_depth, scope);
  }

  // next random raw type (for round-trip corpora)
  RawTypePtr next_type() { return gen_raw_type(2); }

 private:
  struct Scope {
    std::vector<std::pair<std::string, CanonType>> vars; // statics + unbinders
    void bind(const std::string& n, const CanonType& t) {
      for (auto& v : vars)
        if (v.first == n) { v.second = t; return; }
      vars.push_back({n, t});
    }
  };

  GenConfig cfg_;
  SplitMix64 rng_;

  static const std::vector<std::string>& binder_pool() {
    static const std::vector<std::string> p{"a", "b", "c", "d", "e", "f"};
    return p;
  }
  static const std::vector<std::string>& unbinder_pool() {
    static const std::vector<std::string> p{"x", "y", "z", "u", "v", "w"};
    return p;
  }

  std::string pick_binder() {
    int n = std::min<int>(cfg_.var_pool, (int)binder_pool().size());
    return binder_pool()[rng_.below(std::max(n, 1))];
  }

  std::int64_t pick_num() {
    std::uint64_t width = (std::uint64_t)(cfg_.num_max - cfg_.num_min) + 1;
    return cfg_.num_min + (std::int64_t)rng_.below(width);
  }

  int pick_level() { return (int)rng_.below((std::uint64_t)cfg_.max_level + 1); }

  RawTypePtr gen_raw_type(int depth) {
    std::uint64_t roll = rng_.below(100);
    if (depth <= 0 || roll < 35) return RawType::int_at(pick_level());
    if (roll < 60) return RawType::code_at(pick_level());
    if (roll < 85)
      return RawType::arrow(gen_raw_type(depth - 1), gen_raw_type(depth - 1),
                            (int)rng_.below(2));
    return RawType::inter(gen_raw_type(depth - 1), gen_raw_type(depth - 1));
  }

  // term whose type is guaranteed to carry an int atom
  std::pair<TermPtr, CanonType> gen_int(int depth, Scope& scope) {
    if (depth > 0) {
      auto c = gen(depth, scope);
      if (!c.second.is_bottom() && min_int_level(c.second)) return c;
    }
    TermPtr n = Term::num_lit(pick_num());
    return {n, normalize(RawType::int_at(0))};
  }

  // syntactic value with a value type that has a raw form
  std::pair<TermPtr, CanonType> gen_value(int depth, Scope& scope) {
    std::uint64_t roll = rng_.below(100);
    if (depth <= 0 || roll < 40) {
      TermPtr n = Term::num_lit(pick_num());
      return {n, normalize(RawType::int_at(0))};
    }
    if (roll < 70) { // annotated lambda over an int-typed body
      RawTypePtr annot = gen_raw_type(1);
      std::string name = pick_binder();
      Scope inner = scope;
      inner.bind(name, normalize(annot));
      auto body = gen_int(depth - 1, inner);
      TermPtr t = Term::lam(name, annot, body.first);
      std::vector<CanonAtom> atoms;
      for (const auto& a : body.second.atoms)
        atoms.push_back(arrow_atom(normalize(annot), a));
      return {t, canon_of_atoms(std::move(atoms))};
    }
    return gen_unbind(depth, scope);
  }

  std::pair<TermPtr, CanonType> gen_unbind(int depth, Scope& scope) {
    int k = 1 + (int)rng_.below(2);
    const auto& pool = unbinder_pool();
    std::size_t off = rng_.below(pool.size());
    std::vector<TypeCtx::Binding> bs;
    Scope inner = scope;
    for (int i = 0; i < k; ++i) {
      std::string name = pool[(off + i) % pool.size()];
      RawTypePtr ty = gen_raw_type(1);
      bs.push_back({name, ty});
      inner.bind(name, normalize(ty));
    }
    auto body = depth > 0 ? gen(depth - 1, inner)
                          : std::pair<TermPtr, CanonType>{Term::num_lit(0),
                                                          normalize(RawType::int_at(0))};
    TermPtr t = Term::unbind(TypeCtx(std::move(bs)), body.first);
    std::vector<CanonAtom> atoms{code_atom(0)};
    for (const auto& a : body.second.atoms) atoms.push_back(lift_atom(a, 1));
    return {t, canon_of_atoms(std::move(atoms))};
  }

  // rebind whose target is a fresh unbind; annotations are taken from the
  // generated entry values so the runtime check agrees, except when the
  // mismatch flag deliberately perturbs one entry to exercise RebindUnbindNo
  std::pair<TermPtr, CanonType> gen_rebind_of_unbind(int depth, Scope& scope) {
    int k = 1 + (int)rng_.below(2);
    const auto& pool = unbinder_pool();
    std::size_t off = rng_.below(pool.size());
    // widening one unbinder annotation keeps the term well typed but makes
    // the runtime annotation check fail, exercising RebindUnbindNo
    int mismatch_at = rng_.chance(15) ? (int)rng_.below(k) : -1;
    std::vector<TypeCtx::Binding> bs;
    std::vector<TypedSubstEntry> entries;
    Scope inner = scope;
    for (int i = 0; i < k; ++i) {
      std::string name = pool[(off + i) % pool.size()];
      auto v = gen_value(depth > 0 ? depth - 1 : 0, scope);
      RawTypePtr ty = raw_of_canon(v.second);
      RawTypePtr ctx_ty =
          i == mismatch_at ? RawType::inter(ty, RawType::code_at(1)) : ty;
      bs.push_back({name, ctx_ty});
      entries.push_back({name, ty, v.first});
      inner.bind(name, normalize(ctx_ty));
    }
    auto body = gen_int(depth > 0 ? depth - 1 : 0, inner); // int atom keeps the
                                                           // rebind typeable
    TermPtr u = Term::unbind(TypeCtx(std::move(bs)), body.first);
    TermPtr t = Term::rebind(u, TypedSubst(std::move(entries)));
    return {t, body.second}; // decrement({code^0} u lift(S)) = S
  }

  std::pair<TermPtr, CanonType> gen(int depth, Scope& scope) {
    if (depth <= 0) return {Term::num_lit(0), normalize(RawType::int_at(0))};
    std::uint64_t roll = rng_.below(100);

    if (roll < 12) { // numeral
      return {Term::num_lit(pick_num()), normalize(RawType::int_at(0))};
    }
    if (roll < 22) { // variable
      if (!scope.vars.empty()) {
        const auto& v = scope.vars[rng_.below(scope.vars.size())];
        return {Term::var(v.first), v.second};
      }
      return {Term::num_lit(pick_num()), normalize(RawType::int_at(0))};
    }
    if (roll < 37) { // sum
      auto l = gen_int(depth - 1, scope);
      auto r = gen_int(depth - 1, scope);
      int lvl = std::max(*min_int_level(l.second), *min_int_level(r.second));
      return {Term::sum(l.first, r.first),
              normalize(RawType::int_at(lvl))};
    }
    if (roll < 49) { // annotated lambda
      RawTypePtr annot = gen_raw_type(2);
      std::string name = pick_binder();
      Scope inner = scope;
      inner.bind(name, normalize(annot));
      auto body = gen(depth - 1, inner);
      TermPtr t = Term::lam(name, annot, body.first);
      if (body.second.is_bottom()) return {t, body.second}; // empty stays empty
      std::vector<CanonAtom> atoms;
      for (const auto& a : body.second.atoms)
        atoms.push_back(arrow_atom(normalize(annot), a));
      return {t, canon_of_atoms(std::move(atoms))};
    }
    if (roll < 64) { // application (annotated or bare beta redex)
      auto arg = gen(depth - 1, scope);
      if (!is_value_type(arg.second) || arg.second.is_bottom()) {
        arg = {Term::num_lit(pick_num()), normalize(RawType::int_at(0))};
      }
      RawTypePtr dom = raw_of_canon(arg.second);
      std::string name = pick_binder();
      Scope inner = scope;
      inner.bind(name, arg.second);
      auto body = gen(depth - 1, inner);
      bool annotate = rng_.chance(50);
      TermPtr f = Term::lam(name, annotate ? dom : nullptr, body.first);
      return {Term::app(f, arg.first), body.second};
    }
    if (roll < 76) { // unbind
      return gen_unbind(depth, scope);
    }
    if (roll < 94) { // rebind
      std::uint64_t flavor = rng_.below(100);
      if (flavor < 45) return gen_rebind_of_unbind(depth, scope);
      if (flavor < 65) { // nested rebind over a rebind-of-unbind
        auto in = gen_rebind_of_unbind(depth > 0 ? depth - 1 : 0, scope);
        auto d = decrement(in.second);
        if (d && !d->is_bottom()) {
          auto v = gen_value(0, scope);
          TypedSubst extra({{unbinder_pool()[rng_.below(unbinder_pool().size())],
                             raw_of_canon(v.second), v.first}});
          return {Term::rebind(in.first, extra), *d};
        }
        return in;
      }
      // general target: anything whose type survives a decrement
      auto in = gen(depth - 1, scope);
      std::optional<CanonType> d;
      if (!in.second.is_bottom()) d = decrement(in.second);
      if (!d || d->is_bottom()) {
        in = {Term::num_lit(pick_num()), normalize(RawType::int_at(0))};
        d = in.second;
      }
      auto v = gen_value(depth > 1 ? 1 : 0, scope);
      TypedSubst r({{unbinder_pool()[rng_.below(unbinder_pool().size())],
                     raw_of_canon(v.second), v.first}});
      return {Term::rebind(in.first, r), *d};
    }
    // error leaf (kept rare; its type is the empty intersection)
    return {Term::error(), CanonType{}};
  }
};

// single draw, deterministic in cfg
inline std::pair<TermPtr, CanonType> gen_typed_term(const GenConfig& cfg) {
  TermGen g(cfg);
  return g.next();
}

} // namespace ubr
