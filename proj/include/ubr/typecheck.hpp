// typecheck.hpp -- bidirectional type synthesis and checking over canonical
// types.
//
// Synthesis handles every term form except unannotated lambdas, which are
// check-only; the one exception is a syntactic beta redex (\x. b) a, where
// the argument's type is synthesized first and fed to the binder. Closely
// tracked invariant: context entries remember whether they were introduced
// by a lambda binder ("static") or by an unbinder. A lambda binder may
// shadow anything (binders rename freely); an unbinder may shadow only
// other unbinders, because unbinders cannot be renamed and shadowing a
// static binder would let a later rebind capture it.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ubr/print.hpp"
#include "ubr/syntax.hpp"
#include "ubr/types.hpp"

namespace ubr {

enum class TypeErrorCode {
  UnboundVariable,
  NotAnInt,
  NotAFunction,
  ArgumentNotValueType,
  RebindTargetLevelZero,
  SubstEntryIllTyped,
  UnbinderClash,
  AnnotationRequired,
  CheckFailed,
};

inline const char* type_error_code_name(TypeErrorCode c) {
  switch (c) {
    case TypeErrorCode::UnboundVariable: return "UnboundVariable";
    case TypeErrorCode::NotAnInt: return "NotAnInt";
    case TypeErrorCode::NotAFunction: return "NotAFunction";
    case TypeErrorCode::ArgumentNotValueType: return "ArgumentNotValueType";
    case TypeErrorCode::RebindTargetLevelZero: return "RebindTargetLevelZero";
    case TypeErrorCode::SubstEntryIllTyped: return "SubstEntryIllTyped";
    case TypeErrorCode::UnbinderClash: return "UnbinderClash";
    case TypeErrorCode::AnnotationRequired: return "AnnotationRequired";
    case TypeErrorCode::CheckFailed: return "CheckFailed";
  }
  return "?";
}

struct TypeError {
  TypeErrorCode code;
  SourceSpan span;
  std::string message;
};

// Either a synthesized type or the first error encountered.
using SynthResult = std::variant<CanonType, TypeError>;

inline bool synth_ok(const SynthResult& r) { return r.index() == 0; }
inline const CanonType& synth_type(const SynthResult& r) { return std::get<0>(r); }
inline const TypeError& synth_error(const SynthResult& r) { return std::get<1>(r); }

// Internal typing environment. Entries carry both the raw annotation (for
// diagnostics and certificates) and its canonical form, plus provenance.
struct TypeEnv {
  struct Entry {
    std::string name;
    RawTypePtr raw;
    CanonType canon;
    bool unbinder = false;
  };
  std::vector<Entry> entries;

  const Entry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }

  // Lambda binders update in place: shadowing is harmless for them.
  void set_static(const std::string& name, RawTypePtr raw, CanonType canon) {
    for (auto& e : entries)
      if (e.name == name) {
        e.raw = std::move(raw);
        e.canon = std::move(canon);
        e.unbinder = false;
        return;
      }
    entries.push_back({name, std::move(raw), std::move(canon), false});
  }

  // Unbinder extension; refuses to shadow a static binder.
  bool set_unbinder(const std::string& name, RawTypePtr raw, CanonType canon) {
    for (auto& e : entries)
      if (e.name == name) {
        if (!e.unbinder) return false;
        e.raw = std::move(raw);
        e.canon = std::move(canon);
        return true;
      }
    entries.push_back({name, std::move(raw), std::move(canon), true});
    return true;
  }

  static TypeEnv of_ctx(const TypeCtx& ctx) {
    TypeEnv env;
    for (const auto& b : ctx.bindings())
      env.set_static(b.name, b.type, normalize(b.type));
    return env;
  }
};

namespace detail {

inline TypeError err(TypeErrorCode code, const SourceSpan& span, std::string msg) {
  return TypeError{code, span, std::move(msg)};
}

// raw rendering used for environment entries created from canonical types;
// bottom has no raw form, so fall back to int (the entry is unreachable in
// that case: a bottom-typed binder means the argument was the error term)
inline RawTypePtr raw_of_canon_or_int(const CanonType& c) {
  if (c.is_bottom()) return RawType::int_at(0);
  return raw_of_canon(c);
}

inline SynthResult synth_env(const TypeEnv& env, const TermPtr& t);

inline std::optional<TypeError> check_subst_env(const TypeEnv& env, const TypedSubst& r) {
  for (const auto& e : r.entries()) {
    SynthResult vr = synth_env(env, e.term);
    if (!synth_ok(vr)) return synth_error(vr);
    const CanonType& v = synth_type(vr);
    if (!is_value_type(v))
      return err(TypeErrorCode::SubstEntryIllTyped, e.term->span,
                 "substitution entry for '" + e.name + "' has type " +
                     print_canon_type(v) + ", which is not a value type");
    if (!subtype(v, normalize(e.type)))
      return err(TypeErrorCode::SubstEntryIllTyped, e.term->span,
                 "substitution entry for '" + e.name + "' has type " +
                     print_canon_type(v) + ", not a subtype of " + print_type(e.type));
  }
  return std::nullopt;
}

// Shared tail of both application paths: select the arrow atoms whose domain
// accepts `arg_ty` and union their codomain atoms.
inline SynthResult apply_fun_type(const CanonType& fun_ty, const CanonType& arg_ty,
                                  const TermPtr& at) {
  if (fun_ty.is_bottom()) return fun_ty; // error applied to anything
  std::vector<CanonAtom> cods;
  for (const auto& a : fun_ty.atoms) {
    if (a.kind != CanonAtom::Kind::Arrow) continue;
    if (subtype(arg_ty, *a.dom)) cods.push_back(*a.cod);
  }
  if (cods.empty())
    return err(TypeErrorCode::NotAFunction, at->span,
               "type " + print_canon_type(fun_ty) + " has no arrow accepting " +
                   print_canon_type(arg_ty));
  return canon_of_atoms(std::move(cods));
}

inline SynthResult synth_env(const TypeEnv& env, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: {
      const auto* e = env.find(t->name);
      if (!e)
        return err(TypeErrorCode::UnboundVariable, t->span,
                   "unbound variable '" + t->name + "'");
      return e->canon;
    }
    case Term::Kind::Num:
      return canon_of_atoms({int_atom(0)});
    case Term::Kind::Sum: {
      SynthResult l = synth_env(env, t->a);
      if (!synth_ok(l)) return l;
      SynthResult r = synth_env(env, t->b);
      if (!synth_ok(r)) return r;
      auto ll = min_int_level(synth_type(l));
      if (!ll)
        return err(TypeErrorCode::NotAnInt, t->a->span,
                   "left operand has type " + print_canon_type(synth_type(l)) +
                       ", which has no int atom");
      auto rl = min_int_level(synth_type(r));
      if (!rl)
        return err(TypeErrorCode::NotAnInt, t->b->span,
                   "right operand has type " + print_canon_type(synth_type(r)) +
                       ", which has no int atom");
      return canon_of_atoms({int_atom(std::max(*ll, *rl))});
    }
    case Term::Kind::Lam: {
      if (!t->annot)
        return err(TypeErrorCode::AnnotationRequired, t->span,
                   "cannot synthesize a type for an unannotated lambda");
      TypeEnv inner = env;
      CanonType dom = normalize(t->annot);
      inner.set_static(t->name, t->annot, dom);
      SynthResult b = synth_env(inner, t->b);
      if (!synth_ok(b)) return b;
      std::vector<CanonAtom> atoms;
      for (const auto& c : synth_type(b).atoms) atoms.push_back(arrow_atom(dom, c));
      // an error-typed body leaves no atoms; the result is then bottom
      return canon_of_atoms(std::move(atoms));
    }
    case Term::Kind::App: {
      const TermPtr& f = t->a;
      if (f->kind == Term::Kind::Lam && !f->annot) {
        // beta-redex exception: type the argument, feed it to the binder
        SynthResult ar = synth_env(env, t->b);
        if (!synth_ok(ar)) return ar;
        const CanonType& v = synth_type(ar);
        if (!is_value_type(v))
          return err(TypeErrorCode::ArgumentNotValueType, t->b->span,
                     "argument has type " + print_canon_type(v) +
                         ", which is not a value type");
        TypeEnv inner = env;
        inner.set_static(f->name, raw_of_canon_or_int(v), v);
        return synth_env(inner, f->b);
      }
      SynthResult fr = synth_env(env, f);
      if (!synth_ok(fr)) return fr;
      SynthResult ar = synth_env(env, t->b);
      if (!synth_ok(ar)) return ar;
      const CanonType& v = synth_type(ar);
      if (!is_value_type(v))
        return err(TypeErrorCode::ArgumentNotValueType, t->b->span,
                   "argument has type " + print_canon_type(v) +
                       ", which is not a value type");
      return apply_fun_type(synth_type(fr), v, t);
    }
    case Term::Kind::Unbind: {
      TypeEnv inner = env;
      for (const auto& b : t->ctx.bindings()) {
        if (!inner.set_unbinder(b.name, b.type, normalize(b.type)))
          return err(TypeErrorCode::UnbinderClash, t->span,
                     "unbinder '" + b.name + "' clashes with a lambda-bound variable");
      }
      SynthResult b = synth_env(inner, t->b);
      if (!synth_ok(b)) return b;
      std::vector<CanonAtom> atoms{code_atom(0)};
      for (const auto& a : lift(synth_type(b), 1).atoms) atoms.push_back(a);
      return canon_of_atoms(std::move(atoms));
    }
    case Term::Kind::Rebind: {
      SynthResult s = synth_env(env, t->a);
      if (!synth_ok(s)) return s;
      if (auto e = check_subst_env(env, t->subst)) return *e;
      auto d = decrement(synth_type(s));
      if (!d)
        return err(TypeErrorCode::RebindTargetLevelZero, t->span,
                   "rebind target has type " + print_canon_type(synth_type(s)) +
                       ", which has no component above level 0");
      return *d;
    }
    case Term::Kind::Error:
      return CanonType{}; // bottom: checks against everything
  }
  return err(TypeErrorCode::CheckFailed, t->span, "unreachable term kind");
}

inline std::optional<TypeError> check_env(const TypeEnv& env, const TermPtr& t,
                                          const CanonType& expected) {
  if (t->kind == Term::Kind::Lam && !t->annot) {
    if (expected.is_bottom())
      return err(TypeErrorCode::CheckFailed, t->span,
                 "cannot check a lambda against the empty type");
    for (const auto& a : expected.atoms) {
      if (a.kind != CanonAtom::Kind::Arrow)
        return err(TypeErrorCode::CheckFailed, t->span,
                   "lambda cannot have non-arrow type " +
                       print_canon_type(canon_of_atoms({a})));
      TypeEnv inner = env;
      inner.set_static(t->name, raw_of_canon_or_int(*a.dom), *a.dom);
      if (auto e = check_env(inner, t->b, canon_of_atoms({*a.cod}))) return e;
    }
    return std::nullopt;
  }
  SynthResult s = synth_env(env, t);
  if (!synth_ok(s)) return synth_error(s);
  if (!subtype(synth_type(s), expected))
    return err(TypeErrorCode::CheckFailed, t->span,
               "term has type " + print_canon_type(synth_type(s)) +
                   ", not a subtype of " + print_canon_type(expected));
  return std::nullopt;
}

} // namespace detail

inline SynthResult synth(const TypeCtx& ctx, const TermPtr& t) {
  return detail::synth_env(TypeEnv::of_ctx(ctx), t);
}

inline std::optional<TypeError> check(const TypeCtx& ctx, const TermPtr& t,
                                      const CanonType& expected) {
  return detail::check_env(TypeEnv::of_ctx(ctx), t, expected);
}

inline std::optional<TypeError> check_subst_ok(const TypeCtx& ctx, const TypedSubst& r) {
  return detail::check_subst_env(TypeEnv::of_ctx(ctx), r);
}

} // namespace ubr
