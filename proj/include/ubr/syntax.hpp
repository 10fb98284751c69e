#pragma once

// Core term and type syntax for the unbind/rebind calculus.
//
// Terms:   t ::= x | n | t + t | \x.t | t t | <G | t> | t[r] | error
// Types:   T ::= int^l | code^l | (T -> T)^l | T & T
//
// Everything is immutable after construction and freely shared via
// shared_ptr<const ...>. Substitution is partial: binders are never
// renamed, so a substitution whose free variables would be captured
// is undefined (nullopt) rather than alpha-converted.

#include <cassert>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ubr {

// ---------------------------------------------------------------------------
// Source positions

struct SourceSpan {
  int start = 0;  // byte offset, inclusive
  int end = 0;    // byte offset, exclusive
  int line = 1;   // 1-based, of start
  int col = 1;    // 1-based, of start
};

// ---------------------------------------------------------------------------
// Identifiers

inline bool is_reserved_word(const std::string& s) {
  return s == "error" || s == "int" || s == "code";
}

inline bool is_valid_ident(const std::string& s) {
  if (s.empty() || is_reserved_word(s)) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Raw types (exactly as written in source, before canonicalization)

class RawType;
using RawTypePtr = std::shared_ptr<const RawType>;

class RawType {
 public:
  enum class Kind { Int, Code, Arrow, Inter };

  Kind kind;
  int level = 0;        // Int / Code / Arrow only
  RawTypePtr dom, cod;  // Arrow
  RawTypePtr lhs, rhs;  // Inter

  static RawTypePtr int_at(int level) {
    return std::make_shared<RawType>(RawType{Kind::Int, level, nullptr, nullptr, nullptr, nullptr});
  }
  static RawTypePtr code_at(int level) {
    return std::make_shared<RawType>(RawType{Kind::Code, level, nullptr, nullptr, nullptr, nullptr});
  }
  static RawTypePtr arrow(RawTypePtr dom, RawTypePtr cod, int level = 0) {
    return std::make_shared<RawType>(
        RawType{Kind::Arrow, level, std::move(dom), std::move(cod), nullptr, nullptr});
  }
  static RawTypePtr inter(RawTypePtr lhs, RawTypePtr rhs) {
    return std::make_shared<RawType>(
        RawType{Kind::Inter, 0, nullptr, nullptr, std::move(lhs), std::move(rhs)});
  }

  bool is_prim() const { return kind != Kind::Inter; }
};

inline bool type_eq(const RawTypePtr& a, const RawTypePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case RawType::Kind::Int:
    case RawType::Kind::Code:
      return a->level == b->level;
    case RawType::Kind::Arrow:
      return a->level == b->level && type_eq(a->dom, b->dom) && type_eq(a->cod, b->cod);
    case RawType::Kind::Inter:
      return type_eq(a->lhs, b->lhs) && type_eq(a->rhs, b->rhs);
  }
  return false;
}

// Bumps the outer level of every conjunct. This is the T^l lift on raw
// types; the canonical-form lift lives in types.hpp.
inline RawTypePtr lift_raw_outer(const RawTypePtr& t, int k) {
  if (k == 0) return t;
  if (t->kind == RawType::Kind::Inter)
    return RawType::inter(lift_raw_outer(t->lhs, k), lift_raw_outer(t->rhs, k));
  switch (t->kind) {
    case RawType::Kind::Int: return RawType::int_at(t->level + k);
    case RawType::Kind::Code: return RawType::code_at(t->level + k);
    default: return RawType::arrow(t->dom, t->cod, t->level + k);
  }
}

// ---------------------------------------------------------------------------
// Contexts and substitutions

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Ordered, duplicate-free name -> type map. Order is the source order and
// matters only for printing; equality ignores it.
class TypeCtx {
 public:
  struct Binding {
    std::string name;
    RawTypePtr type;
  };

  TypeCtx() = default;
  explicit TypeCtx(std::vector<Binding> bs) : bindings_(std::move(bs)) {
    for (size_t i = 0; i < bindings_.size(); ++i)
      for (size_t j = i + 1; j < bindings_.size(); ++j)
        assert(bindings_[i].name != bindings_[j].name && "duplicate unbinder");
  }

  const std::vector<Binding>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  size_t size() const { return bindings_.size(); }

  const RawTypePtr* lookup(const std::string& name) const {
    for (const auto& b : bindings_)
      if (b.name == name) return &b.type;
    return nullptr;
  }
  bool contains(const std::string& name) const { return lookup(name) != nullptr; }

  std::set<std::string> names() const {
    std::set<std::string> out;
    for (const auto& b : bindings_) out.insert(b.name);
    return out;
  }

 private:
  std::vector<Binding> bindings_;
};

inline bool ctx_eq(const TypeCtx& a, const TypeCtx& b) {
  if (a.size() != b.size()) return false;
  for (const auto& bind : a.bindings()) {
    const RawTypePtr* other = b.lookup(bind.name);
    if (!other || !type_eq(bind.type, *other)) return false;
  }
  return true;
}

// One rebind entry: x : T := t
struct TypedSubstEntry {
  std::string name;
  RawTypePtr type;
  TermPtr term;
};

// Ordered, duplicate-free entries of a rebind. Evaluation steps entries in
// this (source) order; equality ignores it.
class TypedSubst {
 public:
  TypedSubst() = default;
  explicit TypedSubst(std::vector<TypedSubstEntry> es) : entries_(std::move(es)) {
    for (size_t i = 0; i < entries_.size(); ++i)
      for (size_t j = i + 1; j < entries_.size(); ++j)
        assert(entries_[i].name != entries_[j].name && "duplicate rebind entry");
  }

  const std::vector<TypedSubstEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

  const TypedSubstEntry* lookup(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }

 private:
  std::vector<TypedSubstEntry> entries_;
};

// Plain name -> term map. In call-by-value evaluation the mapped terms are
// values; the reconstructed call-by-name mode maps arbitrary terms.
using UntypedSubst = std::vector<std::pair<std::string, TermPtr>>;

inline const TermPtr* subst_lookup(const UntypedSubst& s, const std::string& name) {
  for (const auto& [n, t] : s)
    if (n == name) return &t;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Terms

class Term {
 public:
  enum class Kind { Var, Num, Sum, Lam, App, Unbind, Rebind, Error };

  Kind kind;
  SourceSpan span;

  std::string name;        // Var, Lam binder
  std::int64_t num = 0;    // Num
  RawTypePtr annot;        // Lam annotation, may be null
  TermPtr a, b;            // Sum(a,b), App(a,b), Lam body in b, Rebind target in a
  TypeCtx ctx;             // Unbind
  TypedSubst subst;        // Rebind

  static TermPtr var(std::string n, SourceSpan sp = {}) {
    auto t = base(Kind::Var, sp);
    t->name = std::move(n);
    return t;
  }
  static TermPtr num_lit(std::int64_t v, SourceSpan sp = {}) {
    auto t = base(Kind::Num, sp);
    t->num = v;
    return t;
  }
  static TermPtr sum(TermPtr l, TermPtr r, SourceSpan sp = {}) {
    auto t = base(Kind::Sum, sp);
    t->a = std::move(l);
    t->b = std::move(r);
    return t;
  }
  static TermPtr lam(std::string binder, RawTypePtr annot, TermPtr body, SourceSpan sp = {}) {
    auto t = base(Kind::Lam, sp);
    t->name = std::move(binder);
    t->annot = std::move(annot);
    t->b = std::move(body);
    return t;
  }
  static TermPtr app(TermPtr f, TermPtr arg, SourceSpan sp = {}) {
    auto t = base(Kind::App, sp);
    t->a = std::move(f);
    t->b = std::move(arg);
    return t;
  }
  static TermPtr unbind(TypeCtx ctx, TermPtr body, SourceSpan sp = {}) {
    auto t = base(Kind::Unbind, sp);
    t->ctx = std::move(ctx);
    t->b = std::move(body);
    return t;
  }
  static TermPtr rebind(TermPtr target, TypedSubst s, SourceSpan sp = {}) {
    auto t = base(Kind::Rebind, sp);
    t->a = std::move(target);
    t->subst = std::move(s);
    return t;
  }
  static TermPtr error(SourceSpan sp = {}) { return base(Kind::Error, sp); }

 private:
  static std::shared_ptr<Term> base(Kind k, SourceSpan sp) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->span = sp;
    return t;
  }
};

inline bool term_eq(const TermPtr& x, const TermPtr& y);

inline bool typed_subst_eq(const TypedSubst& a, const TypedSubst& b) {
  if (a.size() != b.size()) return false;
  for (const auto& e : a.entries()) {
    const TypedSubstEntry* o = b.lookup(e.name);
    if (!o || !type_eq(e.type, o->type) || !term_eq(e.term, o->term)) return false;
  }
  return true;
}

// Structural equality. No alpha-equivalence: \x.x and \y.y differ. Spans are
// ignored; context/substitution entry order is ignored (they are maps).
inline bool term_eq(const TermPtr& x, const TermPtr& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case Term::Kind::Var: return x->name == y->name;
    case Term::Kind::Num: return x->num == y->num;
    case Term::Kind::Sum:
    case Term::Kind::App: return term_eq(x->a, y->a) && term_eq(x->b, y->b);
    case Term::Kind::Lam:
      if (x->name != y->name) return false;
      if ((x->annot == nullptr) != (y->annot == nullptr)) return false;
      if (x->annot && !type_eq(x->annot, y->annot)) return false;
      return term_eq(x->b, y->b);
    case Term::Kind::Unbind: return ctx_eq(x->ctx, y->ctx) && term_eq(x->b, y->b);
    case Term::Kind::Rebind: return term_eq(x->a, y->a) && typed_subst_eq(x->subst, y->subst);
    case Term::Kind::Error: return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Free variables

inline void free_vars_into(const TermPtr& t, std::set<std::string>& out);

inline std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  free_vars_into(t, out);
  return out;
}

inline std::set<std::string> free_vars(const UntypedSubst& s) {
  std::set<std::string> out;
  for (const auto& [_, t] : s) free_vars_into(t, out);
  return out;
}

inline void free_vars_into(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      out.insert(t->name);
      return;
    case Term::Kind::Num:
    case Term::Kind::Error:
      return;
    case Term::Kind::Sum:
    case Term::Kind::App:
      free_vars_into(t->a, out);
      free_vars_into(t->b, out);
      return;
    case Term::Kind::Lam: {
      std::set<std::string> body;
      free_vars_into(t->b, body);
      body.erase(t->name);
      out.insert(body.begin(), body.end());
      return;
    }
    case Term::Kind::Unbind: {
      std::set<std::string> body;
      free_vars_into(t->b, body);
      for (const auto& b : t->ctx.bindings()) body.erase(b.name);
      out.insert(body.begin(), body.end());
      return;
    }
    case Term::Kind::Rebind:
      // Rebinder names are not binders here: FV(t[r]) = FV(t) u FV(entries).
      free_vars_into(t->a, out);
      for (const auto& e : t->subst.entries()) free_vars_into(e.term, out);
      return;
  }
}

// ---------------------------------------------------------------------------
// Values

inline bool is_value(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Num:
    case Term::Kind::Lam:
    case Term::Kind::Unbind:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Substitution helpers

inline std::pair<TypeCtx, UntypedSubst> subst_parts(const TypedSubst& r) {
  std::vector<TypeCtx::Binding> bs;
  UntypedSubst us;
  for (const auto& e : r.entries()) {
    bs.push_back({e.name, e.type});
    us.emplace_back(e.name, e.term);
  }
  return {TypeCtx(std::move(bs)), std::move(us)};
}

inline UntypedSubst restrict_subst(const UntypedSubst& s, const std::set<std::string>& keep) {
  UntypedSubst out;
  for (const auto& p : s)
    if (keep.count(p.first)) out.push_back(p);
  return out;
}

inline UntypedSubst remove_subst(const UntypedSubst& s, const std::set<std::string>& drop) {
  UntypedSubst out;
  for (const auto& p : s)
    if (!drop.count(p.first)) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// Partial substitution
//
// Binders are never renamed. The two side conditions below make the result
// undefined instead of capturing:
//   (\x.t){s}    requires x not free in s
//   (<G|t>){s}   requires dom(G) disjoint from the free variables of s
// A rebind distributes the whole substitution into its target and entry
// terms and never touches the rebinder names themselves.

inline std::optional<TermPtr> apply_subst(const TermPtr& t, const UntypedSubst& s) {
  if (s.empty()) return t;
  switch (t->kind) {
    case Term::Kind::Var: {
      const TermPtr* hit = subst_lookup(s, t->name);
      return hit ? *hit : t;
    }
    case Term::Kind::Num:
    case Term::Kind::Error:
      return t;
    case Term::Kind::Sum: {
      auto l = apply_subst(t->a, s);
      if (!l) return std::nullopt;
      auto r = apply_subst(t->b, s);
      if (!r) return std::nullopt;
      return Term::sum(*l, *r, t->span);
    }
    case Term::Kind::App: {
      auto f = apply_subst(t->a, s);
      if (!f) return std::nullopt;
      auto a = apply_subst(t->b, s);
      if (!a) return std::nullopt;
      return Term::app(*f, *a, t->span);
    }
    case Term::Kind::Lam: {
      if (free_vars(s).count(t->name)) return std::nullopt;
      auto body = apply_subst(t->b, remove_subst(s, {t->name}));
      if (!body) return std::nullopt;
      return Term::lam(t->name, t->annot, *body, t->span);
    }
    case Term::Kind::Unbind: {
      std::set<std::string> dom = t->ctx.names();
      std::set<std::string> fv = free_vars(s);
      for (const auto& n : dom)
        if (fv.count(n)) return std::nullopt;
      auto body = apply_subst(t->b, remove_subst(s, dom));
      if (!body) return std::nullopt;
      return Term::unbind(t->ctx, *body, t->span);
    }
    case Term::Kind::Rebind: {
      auto target = apply_subst(t->a, s);
      if (!target) return std::nullopt;
      std::vector<TypedSubstEntry> entries;
      for (const auto& e : t->subst.entries()) {
        auto v = apply_subst(e.term, s);
        if (!v) return std::nullopt;
        entries.push_back({e.name, e.type, *v});
      }
      return Term::rebind(*target, TypedSubst(std::move(entries)), t->span);
    }
  }
  return std::nullopt;
}

}  // namespace ubr
