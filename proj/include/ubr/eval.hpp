// eval.hpp -- deterministic small-step reduction.
//
// step_cbv implements the call-by-value strategy: evaluation proceeds
// left-to-right through sums, applications and rebind substitution entries;
// rebind targets are dispatched by head form once all entries are values.
// The rebind target position is not an evaluation context: an inner rebind
// stepping to error rewraps as Rebind(error, r) (rule RebindRebind) and only
// the next step discharges it (rule RebindError). Everywhere a genuine
// context surrounds a subterm that is error or steps to error, the whole
// term collapses to error in one step (rule CtxError).
//
// step_cbn is the reconstructed call-by-name variant: applications fire on
// unevaluated arguments and rebind entries are never evaluated. Sums remain
// strict on both sides. CBN exists to reproduce the documented CBV/CBN
// contrast and is excluded from the metatheory suites.
//
// applicable_rules re-derives the set of applicable rules per the context
// grammar, independently of step_cbv's control flow, for determinism audits.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ubr/syntax.hpp"
#include "ubr/types.hpp"

namespace ubr {

// ---------------------------------------------------------------------------
// Rule names and outcomes
// ---------------------------------------------------------------------------

struct RuleName;
using RuleNamePtr = std::shared_ptr<const RuleName>;

struct RuleName {
  enum class Kind {
    Sum,
    App,
    RebindUnbindYes,
    RebindUnbindNo,
    RebindNum,
    RebindSum,
    RebindAbs,
    RebindApp,
    RebindRebind,
    RebindError,
    Ctx,      // inner holds the wrapped rule
    CtxError, // context collapsed on an error subterm
  };
  Kind kind = Kind::Sum;
  RuleNamePtr inner; // only for Ctx
};

inline RuleName rule(RuleName::Kind k) { return RuleName{k, nullptr}; }
inline RuleName rule_ctx(RuleName innerRule) {
  return RuleName{RuleName::Kind::Ctx,
                  std::make_shared<RuleName>(std::move(innerRule))};
}

inline bool rule_eq(const RuleName& a, const RuleName& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != RuleName::Kind::Ctx) return true;
  return rule_eq(*a.inner, *b.inner);
}

inline std::string rule_name(const RuleName& r) {
  switch (r.kind) {
    case RuleName::Kind::Sum: return "Sum";
    case RuleName::Kind::App: return "App";
    case RuleName::Kind::RebindUnbindYes: return "RebindUnbindYes";
    case RuleName::Kind::RebindUnbindNo: return "RebindUnbindNo";
    case RuleName::Kind::RebindNum: return "RebindNum";
    case RuleName::Kind::RebindSum: return "RebindSum";
    case RuleName::Kind::RebindAbs: return "RebindAbs";
    case RuleName::Kind::RebindApp: return "RebindApp";
    case RuleName::Kind::RebindRebind: return "RebindRebind";
    case RuleName::Kind::RebindError: return "RebindError";
    case RuleName::Kind::Ctx: return "Ctx(" + rule_name(*r.inner) + ")";
    case RuleName::Kind::CtxError: return "CtxError";
  }
  return "?";
}

enum class StuckReason {
  FreeVariable,
  AppNonFunction,
  IllFormedSum,
  RebindVariable,
  SubstUndefined,
};

inline const char* stuck_reason_name(StuckReason r) {
  switch (r) {
    case StuckReason::FreeVariable: return "FreeVariable";
    case StuckReason::AppNonFunction: return "AppNonFunction";
    case StuckReason::IllFormedSum: return "IllFormedSum";
    case StuckReason::RebindVariable: return "RebindVariable";
    case StuckReason::SubstUndefined: return "SubstUndefined";
  }
  return "?";
}

struct Outcome {
  enum class Kind { Stepped, IsValue, IsError, Stuck };
  Kind kind;
  TermPtr next;      // Stepped
  RuleName rule;     // Stepped
  StuckReason stuck; // Stuck

  static Outcome stepped(TermPtr t, RuleName r) {
    return {Kind::Stepped, std::move(t), std::move(r), StuckReason::FreeVariable};
  }
  static Outcome value() { return {Kind::IsValue, nullptr, {}, StuckReason::FreeVariable}; }
  static Outcome is_error() { return {Kind::IsError, nullptr, {}, StuckReason::FreeVariable}; }
  static Outcome stuck_on(StuckReason r) { return {Kind::Stuck, nullptr, {}, r}; }
};

// ---------------------------------------------------------------------------
// Single steps
// ---------------------------------------------------------------------------

namespace detail {

inline TermPtr error_term(const SourceSpan& sp) { return Term::error(sp); }

// Wrap a subterm's outcome for an enclosing evaluation context. `rebuild`
// reassembles the whole term from the stepped subterm.
template <typename Rebuild>
inline Outcome in_context(const TermPtr& sub, const SourceSpan& whole_span,
                          Outcome inner, Rebuild&& rebuild) {
  (void)sub;
  switch (inner.kind) {
    case Outcome::Kind::Stepped:
      if (inner.next->kind == Term::Kind::Error)
        return Outcome::stepped(error_term(whole_span), rule(RuleName::Kind::CtxError));
      return Outcome::stepped(rebuild(inner.next), rule_ctx(inner.rule));
    case Outcome::Kind::Stuck:
      return inner;
    case Outcome::Kind::IsError:
      return Outcome::stepped(error_term(whole_span), rule(RuleName::Kind::CtxError));
    case Outcome::Kind::IsValue:
      break; // callers only descend into non-values
  }
  return Outcome::stuck_on(StuckReason::FreeVariable);
}

inline bool unbinders_covered(const TypeCtx& ctx, const TypedSubst& r) {
  for (const auto& b : ctx.bindings()) {
    const TypedSubstEntry* e = r.lookup(b.name);
    if (!e) return false;
    // annotation agreement is equivalence, decided on canonical forms
    if (!canon_eq(normalize(b.type), normalize(e->type))) return false;
  }
  return true;
}

inline Outcome step_impl(const TermPtr& t, bool cbv);

// Dispatch for a rebind whose substitution entries are ready (all values in
// CBV; unconditionally in CBN).
inline Outcome step_rebind_dispatch(const TermPtr& t, bool cbv) {
  const TermPtr& target = t->a;
  const TypedSubst& r = t->subst;
  switch (target->kind) {
    case Term::Kind::Unbind: {
      if (!unbinders_covered(target->ctx, r))
        return Outcome::stepped(error_term(t->span),
                                rule(RuleName::Kind::RebindUnbindNo));
      auto [rctx, rsubst] = subst_parts(r);
      UntypedSubst restricted = restrict_subst(rsubst, target->ctx.names());
      auto out = apply_subst(target->b, restricted);
      if (!out) return Outcome::stuck_on(StuckReason::SubstUndefined);
      return Outcome::stepped(*out, rule(RuleName::Kind::RebindUnbindYes));
    }
    case Term::Kind::Num:
      return Outcome::stepped(target, rule(RuleName::Kind::RebindNum));
    case Term::Kind::Sum:
      return Outcome::stepped(
          Term::sum(Term::rebind(target->a, r, t->span),
                    Term::rebind(target->b, r, t->span), t->span),
          rule(RuleName::Kind::RebindSum));
    case Term::Kind::Lam:
      return Outcome::stepped(
          Term::lam(target->name, target->annot,
                    Term::rebind(target->b, r, t->span), target->span),
          rule(RuleName::Kind::RebindAbs));
    case Term::Kind::App:
      return Outcome::stepped(
          Term::app(Term::rebind(target->a, r, t->span),
                    Term::rebind(target->b, r, t->span), t->span),
          rule(RuleName::Kind::RebindApp));
    case Term::Kind::Rebind: {
      // the inner rebind is applied first; its result rewraps under r even
      // when it is the error term (discharged next step by RebindError)
      Outcome inner = step_impl(target, cbv);
      if (inner.kind == Outcome::Kind::Stuck) return inner;
      if (inner.kind != Outcome::Kind::Stepped)
        return Outcome::stuck_on(StuckReason::RebindVariable); // unreachable
      return Outcome::stepped(Term::rebind(inner.next, r, t->span),
                              rule(RuleName::Kind::RebindRebind));
    }
    case Term::Kind::Error:
      return Outcome::stepped(error_term(t->span), rule(RuleName::Kind::RebindError));
    case Term::Kind::Var:
      return Outcome::stuck_on(StuckReason::RebindVariable);
  }
  return Outcome::stuck_on(StuckReason::FreeVariable);
}

inline Outcome step_impl(const TermPtr& t, bool cbv) {
  if (t->kind == Term::Kind::Error) return Outcome::is_error();
  if (is_value(t)) return Outcome::value();
  switch (t->kind) {
    case Term::Kind::Var:
      return Outcome::stuck_on(StuckReason::FreeVariable);
    case Term::Kind::Sum: {
      const TermPtr& l = t->a;
      const TermPtr& rgt = t->b;
      if (l->kind != Term::Kind::Num) {
        if (is_value(l)) return Outcome::stuck_on(StuckReason::IllFormedSum);
        return in_context(l, t->span, step_impl(l, cbv), [&](const TermPtr& n) {
          return Term::sum(n, rgt, t->span);
        });
      }
      if (rgt->kind != Term::Kind::Num) {
        if (is_value(rgt)) return Outcome::stuck_on(StuckReason::IllFormedSum);
        return in_context(rgt, t->span, step_impl(rgt, cbv), [&](const TermPtr& n) {
          return Term::sum(l, n, t->span);
        });
      }
      std::int64_t out = 0;
      if (__builtin_add_overflow(l->num, rgt->num, &out))
        return Outcome::stepped(error_term(t->span), rule(RuleName::Kind::Sum));
      return Outcome::stepped(Term::num_lit(out, t->span), rule(RuleName::Kind::Sum));
    }
    case Term::Kind::App: {
      const TermPtr& f = t->a;
      const TermPtr& a = t->b;
      if (!is_value(f)) {
        return in_context(f, t->span, step_impl(f, cbv), [&](const TermPtr& n) {
          return Term::app(n, a, t->span);
        });
      }
      if (cbv && !is_value(a)) {
        return in_context(a, t->span, step_impl(a, cbv), [&](const TermPtr& n) {
          return Term::app(f, n, t->span);
        });
      }
      if (f->kind != Term::Kind::Lam)
        return Outcome::stuck_on(StuckReason::AppNonFunction);
      UntypedSubst s{{f->name, a}};
      auto out = apply_subst(f->b, s);
      if (!out) return Outcome::stuck_on(StuckReason::SubstUndefined);
      return Outcome::stepped(*out, rule(RuleName::Kind::App));
    }
    case Term::Kind::Rebind: {
      if (cbv) {
        const auto& entries = t->subst.entries();
        for (std::size_t i = 0; i < entries.size(); ++i) {
          if (is_value(entries[i].term)) continue;
          return in_context(
              entries[i].term, t->span, step_impl(entries[i].term, cbv),
              [&](const TermPtr& n) {
                std::vector<TypedSubstEntry> es = entries;
                es[i].term = n;
                return Term::rebind(t->a, TypedSubst(std::move(es)), t->span);
              });
        }
      }
      return step_rebind_dispatch(t, cbv);
    }
    default:
      return Outcome::stuck_on(StuckReason::FreeVariable); // unreachable
  }
}

} // namespace detail

inline Outcome step_cbv(const TermPtr& t) { return detail::step_impl(t, true); }
inline Outcome step_cbn(const TermPtr& t) { return detail::step_impl(t, false); }

// ---------------------------------------------------------------------------
// Multi-step driver
// ---------------------------------------------------------------------------

enum class Strategy { CBV, CBN };

struct RunResult {
  enum class Status { Value, Error, Stuck, FuelExhausted };
  TermPtr final;
  Status status = Status::Value;
  StuckReason stuck = StuckReason::FreeVariable; // when status == Stuck
  std::uint64_t steps = 0;
  struct TraceEntry {
    RuleName rule;
    TermPtr term; // term after the step
  };
  std::vector<TraceEntry> trace;
};

inline RunResult run(const TermPtr& t, Strategy strategy, std::uint64_t fuel,
                     bool keep_trace = true) {
  RunResult res;
  res.final = t;
  for (;;) {
    Outcome o = strategy == Strategy::CBV ? step_cbv(res.final) : step_cbn(res.final);
    switch (o.kind) {
      case Outcome::Kind::IsValue:
        res.status = RunResult::Status::Value;
        return res;
      case Outcome::Kind::IsError:
        res.status = RunResult::Status::Error;
        return res;
      case Outcome::Kind::Stuck:
        res.status = RunResult::Status::Stuck;
        res.stuck = o.stuck;
        return res;
      case Outcome::Kind::Stepped:
        if (res.steps == fuel) {
          res.status = RunResult::Status::FuelExhausted;
          return res;
        }
        res.final = o.next;
        ++res.steps;
        if (keep_trace) res.trace.push_back({o.rule, o.next});
        break;
    }
  }
}

// ---------------------------------------------------------------------------
// Independent rule-applicability enumeration (CBV), for determinism audits.
// Each rule schema is tested in isolation against the ordered context
// grammar; the contract is that at most one rule ever applies and that the
// applicable rule (if any) agrees with step_cbv.
// ---------------------------------------------------------------------------

struct ApplicableRule {
  RuleName rule;
  TermPtr result;
};

namespace detail {

inline void applicable_at_top(const TermPtr& t, std::vector<ApplicableRule>& out);

// Context holes per the CBV grammar: E+t | n+E | E t | v E | t[r, x:T -> E].
// Adds Ctx/CtxError entries for the unique hole position, if any.
template <typename Rebuild>
inline void context_entries(const TermPtr& sub, const TermPtr& whole,
                            Rebuild&& rebuild, std::vector<ApplicableRule>& out) {
  if (sub->kind == Term::Kind::Error) {
    out.push_back({rule(RuleName::Kind::CtxError), error_term(whole->span)});
    return;
  }
  if (is_value(sub)) return; // not a redex position
  std::vector<ApplicableRule> inner;
  applicable_at_top(sub, inner);
  for (const auto& r : inner) {
    if (r.result->kind == Term::Kind::Error)
      out.push_back({rule(RuleName::Kind::CtxError), error_term(whole->span)});
    else
      out.push_back({rule_ctx(r.rule), rebuild(r.result)});
  }
}

inline void applicable_at_top(const TermPtr& t, std::vector<ApplicableRule>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Num:
    case Term::Kind::Lam:
    case Term::Kind::Unbind:
    case Term::Kind::Error:
      return; // values, variables and error admit no rule
    case Term::Kind::Sum: {
      // rule Sum requires both operands numeric
      if (t->a->kind == Term::Kind::Num && t->b->kind == Term::Kind::Num) {
        std::int64_t s = 0;
        TermPtr next = __builtin_add_overflow(t->a->num, t->b->num, &s)
                           ? error_term(t->span)
                           : Term::num_lit(s, t->span);
        out.push_back({rule(RuleName::Kind::Sum), next});
      }
      // context E + t
      context_entries(t->a, t, [&](const TermPtr& n) {
        return Term::sum(n, t->b, t->span);
      }, out);
      // context n + E, gated on the left being a numeral
      if (t->a->kind == Term::Kind::Num)
        context_entries(t->b, t, [&](const TermPtr& n) {
          return Term::sum(t->a, n, t->span);
        }, out);
      return;
    }
    case Term::Kind::App: {
      if (t->a->kind == Term::Kind::Lam && is_value(t->b)) {
        UntypedSubst s{{t->a->name, t->b}};
        if (auto r = apply_subst(t->a->b, s))
          out.push_back({rule(RuleName::Kind::App), *r});
      }
      // context E t
      context_entries(t->a, t, [&](const TermPtr& n) {
        return Term::app(n, t->b, t->span);
      }, out);
      // context v E
      if (is_value(t->a))
        context_entries(t->b, t, [&](const TermPtr& n) {
          return Term::app(t->a, n, t->span);
        }, out);
      return;
    }
    case Term::Kind::Rebind: {
      const auto& entries = t->subst.entries();
      // entry context: the leftmost non-value entry is the only hole
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (is_value(entries[i].term)) continue;
        context_entries(entries[i].term, t, [&](const TermPtr& n) {
          std::vector<TypedSubstEntry> es = entries;
          es[i].term = n;
          return Term::rebind(t->a, TypedSubst(std::move(es)), t->span);
        }, out);
        return; // no other rule may fire while an entry is unevaluated
      }
      const TermPtr& target = t->a;
      switch (target->kind) {
        case Term::Kind::Unbind:
          if (unbinders_covered(target->ctx, t->subst)) {
            auto [rctx, rsubst] = subst_parts(t->subst);
            if (auto r = apply_subst(target->b,
                                     restrict_subst(rsubst, target->ctx.names())))
              out.push_back({rule(RuleName::Kind::RebindUnbindYes), *r});
          } else {
            out.push_back({rule(RuleName::Kind::RebindUnbindNo), error_term(t->span)});
          }
          return;
        case Term::Kind::Num:
          out.push_back({rule(RuleName::Kind::RebindNum), target});
          return;
        case Term::Kind::Sum:
          out.push_back({rule(RuleName::Kind::RebindSum),
                         Term::sum(Term::rebind(target->a, t->subst, t->span),
                                   Term::rebind(target->b, t->subst, t->span),
                                   t->span)});
          return;
        case Term::Kind::Lam:
          out.push_back({rule(RuleName::Kind::RebindAbs),
                         Term::lam(target->name, target->annot,
                                   Term::rebind(target->b, t->subst, t->span),
                                   target->span)});
          return;
        case Term::Kind::App:
          out.push_back({rule(RuleName::Kind::RebindApp),
                         Term::app(Term::rebind(target->a, t->subst, t->span),
                                   Term::rebind(target->b, t->subst, t->span),
                                   t->span)});
          return;
        case Term::Kind::Rebind: {
          std::vector<ApplicableRule> inner;
          applicable_at_top(target, inner);
          for (const auto& r : inner)
            out.push_back({rule(RuleName::Kind::RebindRebind),
                           Term::rebind(r.result, t->subst, t->span)});
          return;
        }
        case Term::Kind::Error:
          out.push_back({rule(RuleName::Kind::RebindError), error_term(t->span)});
          return;
        case Term::Kind::Var:
          return; // no rule rebinds a variable
      }
      return;
    }
  }
}

} // namespace detail

inline std::vector<ApplicableRule> applicable_rules(const TermPtr& t) {
  std::vector<ApplicableRule> out;
  if (t->kind == Term::Kind::Error || is_value(t)) return out;
  detail::applicable_at_top(t, out);
  return out;
}

} // namespace ubr
