// typing_cert.hpp -- derivation trees for typing judgments, with a
// structural replay checker.
//
// A TypingCert records a derivation of  env |- term : type  over the
// declarative rules (T-Var, T-Num, T-Sum, T-Abs, T-App, T-Inter, T-Sub,
// T-Error, T-Unbind-0, T-Unbind, T-Rebind, T-Rebinding). Subtyping steps
// embed the certificates of cert.hpp, so the whole tree bottoms out in
// primitive, syntactically checkable rule applications.
//
// replay_typing() re-validates a tree from the root context downward. It
// recomputes each premise's context from the rule shape (lambda binders
// extend statically, unbinders extend with unbinder provenance and may not
// shadow static entries), so certificates carry no contexts of their own.
//
// certify() constructs a derivation for any term the synthesizer accepts,
// at any raw type the synthesized type subtypes. It re-walks the term
// rather than instrumenting synth, because subterms typed at the bottom
// type (error-headed ones) need their concrete derivation types chosen by
// the enclosing node.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ubr/cert.hpp"
#include "ubr/typecheck.hpp"

namespace ubr {

struct TypingCert;
using TypingCertPtr = std::shared_ptr<const TypingCert>;

struct TypingCert {
  std::string rule;   // "T-Var", ..., "T-Rebinding"
  TermPtr term;       // subject term (for T-Rebinding: the enclosing rebind)
  RawTypePtr type;    // concluded type; null for T-Rebinding
  std::vector<TypingCertPtr> typing_premises;
  std::vector<CertPtr> sub_premises;
};

inline TypingCertPtr make_typing(std::string rule, TermPtr term, RawTypePtr type,
                                 std::vector<TypingCertPtr> tp = {},
                                 std::vector<CertPtr> sp = {}) {
  auto c = std::make_shared<TypingCert>();
  c->rule = std::move(rule);
  c->term = std::move(term);
  c->type = std::move(type);
  c->typing_premises = std::move(tp);
  c->sub_premises = std::move(sp);
  return c;
}

inline std::size_t typing_cert_size(const TypingCertPtr& c) {
  std::size_t n = 1;
  for (const auto& p : c->typing_premises) n += typing_cert_size(p);
  for (const auto& p : c->sub_premises) n += cert_size(p);
  return n;
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

namespace detail {

// `subs` collects every embedded subtyping/equivalence certificate so a
// caller can re-verify the conclusions independently (e.g. via the bounded
// declarative oracle).
inline bool replay_typing_node(const TypingCertPtr& c, const TypeEnv& env,
                               std::vector<CertPtr>* subs) {
  if (!c || !c->term) return false;
  const Term& t = *c->term;
  const auto& tp = c->typing_premises;
  const auto& sp = c->sub_premises;
  auto has_type = [&](const RawTypePtr& ty) { return c->type && type_eq(c->type, ty); };

  if (c->rule == "T-Var") {
    if (t.kind != Term::Kind::Var || !tp.empty() || !sp.empty()) return false;
    const auto* e = env.find(t.name);
    return e && has_type(e->raw);
  }
  if (c->rule == "T-Num") {
    return t.kind == Term::Kind::Num && tp.empty() && sp.empty() &&
           has_type(RawType::int_at(0));
  }
  if (c->rule == "T-Error") {
    return t.kind == Term::Kind::Error && tp.empty() && sp.empty() && c->type != nullptr;
  }
  if (c->rule == "T-Sum") {
    if (t.kind != Term::Kind::Sum || tp.size() != 2 || !sp.empty()) return false;
    if (!c->type || c->type->kind != RawType::Kind::Int) return false;
    if (!term_eq(tp[0]->term, t.a) || !term_eq(tp[1]->term, t.b)) return false;
    if (!type_eq(tp[0]->type, c->type) || !type_eq(tp[1]->type, c->type)) return false;
    return replay_typing_node(tp[0], env, subs) && replay_typing_node(tp[1], env, subs);
  }
  if (c->rule == "T-Abs") {
    if (t.kind != Term::Kind::Lam || tp.size() != 1 || !sp.empty()) return false;
    if (!c->type || c->type->kind != RawType::Kind::Arrow || c->type->level != 0)
      return false;
    if (t.annot && !type_eq(t.annot, c->type->dom)) return false;
    if (!term_eq(tp[0]->term, t.b) || !type_eq(tp[0]->type, c->type->cod)) return false;
    TypeEnv inner = env;
    inner.set_static(t.name, c->type->dom, normalize(c->type->dom));
    return replay_typing_node(tp[0], inner, subs);
  }
  if (c->rule == "T-App") {
    if (t.kind != Term::Kind::App || tp.size() != 2 || !sp.empty()) return false;
    const auto& pf = tp[0];
    const auto& pa = tp[1];
    if (!term_eq(pf->term, t.a) || !term_eq(pa->term, t.b)) return false;
    if (!pf->type || pf->type->kind != RawType::Kind::Arrow || pf->type->level != 0)
      return false;
    if (!type_eq(pf->type->cod, c->type)) return false;
    if (!type_eq(pf->type->dom, pa->type)) return false;
    if (!is_value_type(normalize(pa->type))) return false; // argument discipline
    return replay_typing_node(pf, env, subs) && replay_typing_node(pa, env, subs);
  }
  if (c->rule == "T-Inter") {
    if (tp.size() != 2 || !sp.empty()) return false;
    if (!term_eq(tp[0]->term, c->term) || !term_eq(tp[1]->term, c->term)) return false;
    if (!c->type || c->type->kind != RawType::Kind::Inter) return false;
    if (!type_eq(c->type->lhs, tp[0]->type) || !type_eq(c->type->rhs, tp[1]->type))
      return false;
    return replay_typing_node(tp[0], env, subs) && replay_typing_node(tp[1], env, subs);
  }
  if (c->rule == "T-Sub") {
    if (tp.size() != 1 || sp.size() != 1) return false;
    if (!term_eq(tp[0]->term, c->term)) return false;
    const CertPtr& sub = sp[0];
    if (!cert_rule_is_sub(sub->rule)) return false;
    if (!type_eq(sub->lhs, tp[0]->type) || !type_eq(sub->rhs, c->type)) return false;
    if (!replay(sub)) return false;
    if (subs) subs->push_back(sub);
    return replay_typing_node(tp[0], env, subs);
  }
  if (c->rule == "T-Unbind-0" || c->rule == "T-Unbind") {
    if (t.kind != Term::Kind::Unbind || tp.size() != 1 || !sp.empty()) return false;
    if (!term_eq(tp[0]->term, t.b)) return false;
    TypeEnv inner = env;
    for (const auto& b : t.ctx.bindings())
      if (!inner.set_unbinder(b.name, b.type, normalize(b.type))) return false;
    if (c->rule == "T-Unbind-0") {
      if (!has_type(RawType::code_at(0))) return false;
    } else {
      if (!c->type || !tp[0]->type) return false;
      if (!type_eq(c->type, lift_raw_outer(tp[0]->type, 1))) return false;
    }
    return replay_typing_node(tp[0], inner, subs);
  }
  if (c->rule == "T-Rebind") {
    if (t.kind != Term::Kind::Rebind || tp.size() != 2 || !sp.empty()) return false;
    const auto& pt = tp[0];
    const auto& pr = tp[1];
    if (!term_eq(pt->term, t.a)) return false;
    if (!c->type || !pt->type) return false;
    if (!type_eq(pt->type, lift_raw_outer(c->type, 1))) return false;
    if (pr->rule != "T-Rebinding" || !term_eq(pr->term, c->term)) return false;
    return replay_typing_node(pt, env, subs) && replay_typing_node(pr, env, subs);
  }
  if (c->rule == "T-Rebinding") {
    if (t.kind != Term::Kind::Rebind) return false;
    const auto& entries = t.subst.entries();
    if (tp.size() != entries.size() || sp.size() != entries.size()) return false;
    if (c->type) return false; // judgment is about the substitution, not a type
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!term_eq(tp[i]->term, entries[i].term)) return false;
      if (!tp[i]->type) return false;
      // entry value typed at V_i, a value type, with V_i <= T_i certified
      if (!is_value_type(normalize(tp[i]->type))) return false;
      const CertPtr& sub = sp[i];
      if (!cert_rule_is_sub(sub->rule)) return false;
      if (!type_eq(sub->lhs, tp[i]->type) || !type_eq(sub->rhs, entries[i].type))
        return false;
      if (!replay(sub)) return false;
      if (subs) subs->push_back(sub);
      if (!replay_typing_node(tp[i], env, subs)) return false;
    }
    return true;
  }
  return false;
}

} // namespace detail

// Validate a derivation under the given root context. When `subs` is
// non-null it receives every embedded subtyping certificate (already
// replayed) for independent re-verification.
inline bool replay_typing(const TypingCertPtr& c, const TypeCtx& ctx,
                          std::vector<CertPtr>* subs = nullptr) {
  return detail::replay_typing_node(c, TypeEnv::of_ctx(ctx), subs);
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<TypingCertPtr> certify_at(const TypeEnv& env, const TermPtr& t,
                                               const RawTypePtr& target);

// Wrap a derivation with T-Sub when its type differs from the requested one.
inline std::optional<TypingCertPtr> cert_coerce(TypingCertPtr node,
                                                const RawTypePtr& target) {
  if (type_eq(node->type, target)) return node;
  auto sub = subtype_cert_raw(node->type, target);
  if (!sub) return std::nullopt;
  return make_typing("T-Sub", node->term, target, {node}, {*sub});
}

// Value type to use for an error-typed operand in a position that demands a
// concrete value type below `bound`: bound & int^0 is always a value type,
// always below bound, and the error term inhabits it.
inline RawTypePtr bottom_value_below(const RawTypePtr& bound) {
  return RawType::inter(bound, RawType::int_at(0));
}

inline std::optional<TypingCertPtr> certify_lam(const TypeEnv& env, const TermPtr& t,
                                                const RawTypePtr& target) {
  // direct arrow target: a single T-Abs
  if (target->kind == RawType::Kind::Arrow && target->level == 0 &&
      (!t->annot || type_eq(t->annot, target->dom))) {
    TypeEnv inner = env;
    inner.set_static(t->name, target->dom, normalize(target->dom));
    auto body = certify_at(inner, t->b, target->cod);
    if (!body) return std::nullopt;
    return make_typing("T-Abs", t, target, {*body});
  }
  // general target: derive one arrow per canonical atom and intersect
  CanonType want = normalize(target);
  if (want.is_bottom()) return std::nullopt;
  std::vector<TypingCertPtr> parts;
  for (const auto& a : want.atoms) {
    if (a.kind != CanonAtom::Kind::Arrow) return std::nullopt;
    RawTypePtr dom_raw = t->annot ? t->annot : raw_of_canon(*a.dom);
    RawTypePtr cod_raw = raw_of_atom(*a.cod);
    TypeEnv inner = env;
    inner.set_static(t->name, dom_raw, normalize(dom_raw));
    auto body = certify_at(inner, t->b, cod_raw);
    if (!body) return std::nullopt;
    TypingCertPtr core =
        make_typing("T-Abs", t, RawType::arrow(dom_raw, cod_raw, 0), {*body});
    auto fixed = cert_coerce(core, raw_of_atom(a));
    if (!fixed) return std::nullopt;
    parts.push_back(*fixed);
  }
  TypingCertPtr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;)
    acc = make_typing("T-Inter", t, RawType::inter(parts[i]->type, acc->type),
                      {parts[i], acc});
  return cert_coerce(acc, target);
}

inline std::optional<TypingCertPtr> certify_app(const TypeEnv& env, const TermPtr& t,
                                                const RawTypePtr& target) {
  const TermPtr& f = t->a;
  const TermPtr& arg = t->b;

  auto apply_at = [&](const RawTypePtr& v_raw,
                      const RawTypePtr& out) -> std::optional<TypingCertPtr> {
    auto pf = certify_at(env, f, RawType::arrow(v_raw, out, 0));
    if (!pf) return std::nullopt;
    auto pa = certify_at(env, arg, v_raw);
    if (!pa) return std::nullopt;
    return make_typing("T-App", t, out, {*pf, *pa});
  };

  SynthResult ar = synth_env(env, arg);
  if (!synth_ok(ar)) return std::nullopt;
  const CanonType& v = synth_type(ar);

  if (f->kind == Term::Kind::Lam && !f->annot) {
    // beta redex: the binder takes exactly the argument's type
    RawTypePtr v_raw = v.is_bottom() ? bottom_value_below(target) : raw_of_canon(v);
    return apply_at(v_raw, target);
  }

  SynthResult fr = synth_env(env, f);
  if (!synth_ok(fr)) return std::nullopt;
  const CanonType& fty = synth_type(fr);
  if (fty.is_bottom()) {
    RawTypePtr v_raw =
        v.is_bottom() ? RawType::int_at(0) : raw_of_canon(v);
    return apply_at(v_raw, target);
  }
  SynthResult res = apply_fun_type(fty, v, t);
  if (!synth_ok(res)) return std::nullopt;
  const CanonType& out = synth_type(res);
  if (out.is_bottom()) {
    // possible only when the result was requested at a concrete type anyway
    return std::nullopt;
  }
  if (!v.is_bottom()) {
    auto node = apply_at(raw_of_canon(v), raw_of_canon(out));
    if (!node) return std::nullopt;
    return cert_coerce(*node, target);
  }
  // error argument: derive each needed codomain through its own arrow and
  // intersect the results
  std::vector<TypingCertPtr> parts;
  for (const auto& c : out.atoms) {
    std::optional<TypingCertPtr> part;
    for (const auto& a : fty.atoms) {
      if (a.kind != CanonAtom::Kind::Arrow || !atom_eq(*a.cod, c)) continue;
      RawTypePtr v_raw = bottom_value_below(raw_of_canon(*a.dom));
      part = apply_at(v_raw, raw_of_atom(c));
      if (part) break;
    }
    if (!part) return std::nullopt;
    parts.push_back(*part);
  }
  TypingCertPtr acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;)
    acc = make_typing("T-Inter", t, RawType::inter(parts[i]->type, acc->type),
                      {parts[i], acc});
  return cert_coerce(acc, target);
}

inline std::optional<TypingCertPtr> certify_at(const TypeEnv& env, const TermPtr& t,
                                               const RawTypePtr& target) {
  switch (t->kind) {
    case Term::Kind::Error:
      return make_typing("T-Error", t, target);
    case Term::Kind::Var: {
      const auto* e = env.find(t->name);
      if (!e) return std::nullopt;
      return cert_coerce(make_typing("T-Var", t, e->raw), target);
    }
    case Term::Kind::Num:
      return cert_coerce(make_typing("T-Num", t, RawType::int_at(0)), target);
    case Term::Kind::Sum: {
      SynthResult l = synth_env(env, t->a);
      SynthResult r = synth_env(env, t->b);
      if (!synth_ok(l) || !synth_ok(r)) return std::nullopt;
      auto ll = min_int_level(synth_type(l));
      auto rl = min_int_level(synth_type(r));
      if (!ll || !rl) return std::nullopt;
      RawTypePtr at = RawType::int_at(std::max(*ll, *rl));
      auto pl = certify_at(env, t->a, at);
      if (!pl) return std::nullopt;
      auto pr = certify_at(env, t->b, at);
      if (!pr) return std::nullopt;
      return cert_coerce(make_typing("T-Sum", t, at, {*pl, *pr}), target);
    }
    case Term::Kind::Lam:
      return certify_lam(env, t, target);
    case Term::Kind::App:
      return certify_app(env, t, target);
    case Term::Kind::Unbind: {
      TypeEnv inner = env;
      for (const auto& b : t->ctx.bindings())
        if (!inner.set_unbinder(b.name, b.type, normalize(b.type)))
          return std::nullopt;
      SynthResult br = synth_env(inner, t->b);
      if (!synth_ok(br)) return std::nullopt;
      const CanonType& sb = synth_type(br);
      if (sb.is_bottom()) {
        auto body = certify_at(inner, t->b, RawType::int_at(0));
        if (!body) return std::nullopt;
        return cert_coerce(
            make_typing("T-Unbind-0", t, RawType::code_at(0), {*body}), target);
      }
      RawTypePtr u_raw = raw_of_canon(sb);
      auto body = certify_at(inner, t->b, u_raw);
      if (!body) return std::nullopt;
      TypingCertPtr c0 = make_typing("T-Unbind-0", t, RawType::code_at(0), {*body});
      TypingCertPtr c1 =
          make_typing("T-Unbind", t, lift_raw_outer(u_raw, 1), {*body});
      TypingCertPtr both =
          make_typing("T-Inter", t, RawType::inter(c0->type, c1->type), {c0, c1});
      return cert_coerce(both, target);
    }
    case Term::Kind::Rebind: {
      // the substitution derivation
      std::vector<TypingCertPtr> entry_typings;
      std::vector<CertPtr> entry_subs;
      for (const auto& e : t->subst.entries()) {
        SynthResult vr = synth_env(env, e.term);
        if (!synth_ok(vr)) return std::nullopt;
        const CanonType& v = synth_type(vr);
        RawTypePtr v_raw =
            v.is_bottom() ? bottom_value_below(e.type) : raw_of_canon(v);
        auto pv = certify_at(env, e.term, v_raw);
        if (!pv) return std::nullopt;
        auto sub = subtype_cert_raw(v_raw, e.type);
        if (!sub) return std::nullopt;
        entry_typings.push_back(*pv);
        entry_subs.push_back(*sub);
      }
      TypingCertPtr rebinding = make_typing("T-Rebinding", t, nullptr,
                                            std::move(entry_typings),
                                            std::move(entry_subs));
      SynthResult sr = synth_env(env, t->a);
      if (!synth_ok(sr)) return std::nullopt;
      const CanonType& s = synth_type(sr);
      if (s.is_bottom()) {
        auto pt = certify_at(env, t->a, lift_raw_outer(target, 1));
        if (!pt) return std::nullopt;
        return make_typing("T-Rebind", t, target, {*pt, rebinding});
      }
      auto d = decrement(s);
      if (!d || d->is_bottom()) return std::nullopt;
      RawTypePtr d_raw = raw_of_canon(*d);
      auto pt = certify_at(env, t->a, lift_raw_outer(d_raw, 1));
      if (!pt) return std::nullopt;
      return cert_coerce(make_typing("T-Rebind", t, d_raw, {*pt, rebinding}), target);
    }
  }
  return std::nullopt;
}

} // namespace detail

// Build a derivation of ctx |- t : target (target raw). The target must be a
// supertype of the synthesized type; synthesis failures give nullopt.
inline std::optional<TypingCertPtr> certify_at(const TypeCtx& ctx, const TermPtr& t,
                                               const RawTypePtr& target) {
  return detail::certify_at(TypeEnv::of_ctx(ctx), t, target);
}

// Build a derivation at the canonical synthesized type itself. Terms whose
// synthesized type is bottom (error-headed terms) are certified at int^0.
inline std::optional<TypingCertPtr> certify(const TypeCtx& ctx, const TermPtr& t) {
  SynthResult r = synth(ctx, t);
  if (!synth_ok(r)) return std::nullopt;
  const CanonType& s = synth_type(r);
  RawTypePtr target =
      s.is_bottom() ? RawType::int_at(0) : raw_of_canon(s);
  return certify_at(ctx, t, target);
}

} // namespace ubr
