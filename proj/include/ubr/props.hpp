#pragma once

// Metatheory property harness.
//
// One corpus drives four linked audits. The corpus is a fixed prefix of
// hand-written programs (the worked examples, a known stuck application, a
// known preservation counterexample) followed by generated well-typed closed
// terms. Each member is run under CBV while we watch every step:
//
//   subject reduction   synth(successor) must be a subtype of synth(current)
//   progress            value-typed members never finish Stuck unless the
//                       stuck state itself carries a replayed, oracle-checked
//                       typing certificate
//   determinism         exactly one applicable rule at every non-terminal
//                       state, and it produces the successor the stepper took
//   canonical forms     a final value of int-at-0 type is a numeral, of
//                       code-at-0 type an unbound term
//
// Preservation failures are real: distributing a rebind across an application
// decrements the argument's type while an annotated domain stays fixed, and
// dropping a rebind into an unannotated lambda erases the synthesizer's only
// way to type the redex. Both shapes are triaged rather than hidden. A
// violation is reported with a greedily shrunk reproduction (smallest closed
// well-typed subterm that still violates), a classification, and a typing
// certificate for the violating state so the "it really was well typed"
// half of the claim is independently checkable. Every other rule preserves
// types because decrement is monotone on the subtype order, so any violation
// that does not trace back to an application under a rebind is left
// unclassified and fails the harness.
//
// Reports are plain data and serialize to JSON deterministically; two runs
// with the same configuration produce byte-identical reports.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <ubr/eval.hpp>
#include <ubr/gen.hpp>
#include <ubr/jsonio.hpp>
#include <ubr/oracle.hpp>
#include <ubr/parse.hpp>
#include <ubr/print.hpp>
#include <ubr/typecheck.hpp>
#include <ubr/typing_cert.hpp>

namespace ubr {

struct PropertyConfig {
  GenConfig gen;
  int count = 10000;          // generated corpus members after the fixed prefix
  std::uint64_t fuel = 2000;  // per-run step bound
  int oracle_depth = 8;       // bound for certificate re-verification
};

// The stuck-but-well-typed application every audit must rediscover: an
// unbound term in function position is a value, so CBV has nothing to step,
// yet the term synthesizes an arrow.
inline const char* known_stuck_candidate() {
  return "<x:int | \\y:int. \\z:int. z> 3";
}

// Minimal closed preservation counterexample: the rebind distributes over
// the application, the argument's type drops a code level, and the fixed
// annotated domain no longer accepts it.
inline const char* known_preservation_probe() {
  return "((\\w:(code & code^1). 1) <x:int | <y:int | y>>)[z:int := 0]";
}

// Hand-written corpus prefix: the worked reduction and typing examples plus
// the two known witnesses above. All entries are closed and synthesize.
inline const std::vector<std::string>& fixed_corpus_sources() {
  static const std::vector<std::string> k = {
      "<x:int | x + <x:int | x>>[x:int := 1][x:int := 2]",
      "<x:int | x + 1>[y:int := 5]",
      "<x:int | x + 1>[x:(int -> int) := \\y:int. y + 1]",
      "(\\x. x + <x:int | x>)[x:int := 1] 2",
      "((\\x:int. \\y:(code^0 & int^1). (y[x:int := x]) + x) 1) <x:int | x + 2>",
      "(\\y:(code^0 & int^1). y[x:int := 2]) <x:int | x + 1>",
      "<x:int | x + <x:int | x>>",
      "<x:int | <y:int | x + y>>",
      "\\x:int. x + <y:int | y + <z:int | z>>",
      "(\\x:int. x + <y:int | y + <z:int | z>>)[y:int := 5]",
      "(\\x. 2 + x[y:int := 3]) <y:int | y>",
      "(\\y. y[x:int := 2]) <x:int | 1 + x>",
      known_stuck_candidate(),
      known_preservation_probe(),
  };
  return k;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct SrViolation {
  std::string before;         // state whose step broke preservation
  std::string after;
  std::string rule;
  std::string detail;         // what went wrong with the successor
  std::string shrunk_before;  // smallest closed well-typed reproduction
  std::string shrunk_after;
  std::string shrunk_rule;
  std::string triage;         // rebind-app-level-drop | rebind-app-annotation-loss | unclassified
  bool known_family = false;
  bool cert_ok = false;  // shrunk before-state certificate replayed + oracle-checked
};

struct StuckWitness {
  std::string origin;  // corpus member whose run got stuck
  std::string stuck;   // the stuck state
  std::string reason;
  std::string type;    // synthesized type of the stuck state, empty if none
  bool certified = false;
};

struct PropertyReport {
  std::uint64_t corpus = 0;
  std::uint64_t fixed_prefix = 0;
  std::uint64_t runs = 0;
  std::uint64_t steps = 0;

  std::uint64_t sr_checked = 0;
  std::vector<SrViolation> sr_violations;

  std::uint64_t progress_checked = 0;  // value-typed corpus members
  std::uint64_t progress_value = 0;
  std::uint64_t progress_error = 0;
  std::uint64_t progress_fuel = 0;
  std::uint64_t stuck_nonvalue_typed = 0;  // outside the property's premise
  std::vector<StuckWitness> stuck_witnesses;
  bool candidate_seen = false;

  std::uint64_t determinism_states = 0;
  std::vector<std::string> determinism_violations;

  std::uint64_t canonical_values = 0;
  std::vector<std::string> canonical_violations;

  bool sr_ok() const {
    for (const auto& v : sr_violations)
      if (!v.known_family || !v.cert_ok) return false;
    return true;
  }
  bool progress_ok() const {
    if (!candidate_seen) return false;
    for (const auto& w : stuck_witnesses)
      if (!w.certified) return false;
    return true;
  }
  bool determinism_ok() const { return determinism_violations.empty(); }
  bool canonical_ok() const { return canonical_violations.empty(); }
};

// ---------------------------------------------------------------------------
// Subject-reduction machinery
// ---------------------------------------------------------------------------

namespace detail {

struct SrHit {
  TermPtr before;
  TermPtr after;
  RuleName rule;
  std::optional<TypeErrorCode> err;  // successor synth failure, if that is
                                     // how preservation broke
  std::string detail;
};

// Check one step. `before_ty` is synth(before); on success returns the
// successor's type so the walk can carry it forward.
inline std::optional<CanonType> sr_step(const TermPtr& before,
                                        const CanonType& before_ty,
                                        const Outcome& o,
                                        std::optional<SrHit>* hit) {
  SynthResult r = synth(TypeCtx{}, o.next);
  if (!synth_ok(r)) {
    const TypeError& e = synth_error(r);
    if (hit)
      *hit = SrHit{before, o.next, o.rule, e.code,
                   std::string("successor fails to synthesize: ") +
                       type_error_code_name(e.code) + ": " + e.message};
    return std::nullopt;
  }
  const CanonType& after_ty = synth_type(r);
  if (!subtype(after_ty, before_ty)) {
    if (hit)
      *hit = SrHit{before, o.next, o.rule, std::nullopt,
                   "successor type " + print_canon_type(after_ty) +
                       " is not a subtype of " + print_canon_type(before_ty)};
    return std::nullopt;
  }
  return after_ty;
}

// First preservation failure along the CBV run of a closed synthesizable
// term, or nullopt if the run stays preserved to a terminal state or the
// fuel bound.
inline std::optional<SrHit> sr_probe(const TermPtr& t, std::uint64_t fuel) {
  SynthResult r0 = synth(TypeCtx{}, t);
  if (!synth_ok(r0)) return std::nullopt;
  CanonType ty = synth_type(r0);
  TermPtr cur = t;
  for (std::uint64_t used = 0; used < fuel; ++used) {
    Outcome o = step_cbv(cur);
    if (o.kind != Outcome::Kind::Stepped) return std::nullopt;
    std::optional<SrHit> hit;
    auto next_ty = sr_step(cur, ty, o, &hit);
    if (!next_ty) return hit;
    ty = *next_ty;
    cur = o.next;
  }
  return std::nullopt;
}

inline std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  switch (t->kind) {
    case Term::Kind::Sum:
    case Term::Kind::App:
      n += term_size(t->a) + term_size(t->b);
      break;
    case Term::Kind::Lam:
    case Term::Kind::Unbind:
      n += term_size(t->b);
      break;
    case Term::Kind::Rebind:
      n += term_size(t->a);
      for (const auto& e : t->subst.entries()) n += term_size(e.term);
      break;
    default:
      break;
  }
  return n;
}

inline void subterms_into(const TermPtr& t, std::vector<TermPtr>& out) {
  switch (t->kind) {
    case Term::Kind::Sum:
    case Term::Kind::App:
      out.push_back(t->a);
      out.push_back(t->b);
      subterms_into(t->a, out);
      subterms_into(t->b, out);
      break;
    case Term::Kind::Lam:
    case Term::Kind::Unbind:
      out.push_back(t->b);
      subterms_into(t->b, out);
      break;
    case Term::Kind::Rebind:
      out.push_back(t->a);
      subterms_into(t->a, out);
      for (const auto& e : t->subst.entries()) {
        out.push_back(e.term);
        subterms_into(e.term, out);
      }
      break;
    default:
      break;
  }
}

// Greedy shrink: repeatedly move to the smallest strict subterm that is
// closed, synthesizes, and still produces a preservation failure.
inline TermPtr shrink_sr(TermPtr t, std::uint64_t fuel) {
  for (;;) {
    std::vector<TermPtr> subs;
    subterms_into(t, subs);
    std::sort(subs.begin(), subs.end(),
              [](const TermPtr& a, const TermPtr& b) {
                return term_size(a) < term_size(b);
              });
    TermPtr found;
    for (const auto& s : subs) {
      if (term_size(s) >= term_size(t)) break;
      if (!free_vars(s).empty()) continue;
      if (!synth_ok(synth(TypeCtx{}, s))) continue;
      if (sr_probe(s, fuel)) {
        found = s;
        break;
      }
    }
    if (!found) return t;
    t = std::move(found);
  }
}

inline const RuleName* strip_ctx(const RuleName* r) {
  while (r->kind == RuleName::Kind::Ctx && r->inner) r = r->inner.get();
  return r;
}

// A rebind tower reduces its target first, and every rule other than
// application distribution preserves types (decrement is monotone), so a
// failure labelled RebindRebind can only be an application distribution at
// the innermost target. Anything outside these two labels is unclassified.
inline std::string classify_sr(const SrHit& hit) {
  const RuleName* base = strip_ctx(&hit.rule);
  if (base->kind == RuleName::Kind::RebindApp ||
      base->kind == RuleName::Kind::RebindRebind) {
    if (hit.err && *hit.err == TypeErrorCode::AnnotationRequired)
      return "rebind-app-annotation-loss";
    return "rebind-app-level-drop";
  }
  return "unclassified";
}

// Certificate evidence that a closed term really has its synthesized type:
// build a derivation, replay it from the empty context, and re-prove every
// embedded subtyping premise with the bounded declarative oracle.
inline bool certified_well_typed(const TermPtr& t, SubtypeOracle& oracle,
                                 int depth, std::string* type_out = nullptr) {
  SynthResult r = synth(TypeCtx{}, t);
  if (!synth_ok(r)) return false;
  if (type_out) *type_out = print_canon_type(synth_type(r));
  auto cert = certify(TypeCtx{}, t);
  if (!cert) return false;
  std::vector<CertPtr> subs;
  if (!replay_typing(*cert, TypeCtx{}, &subs)) return false;
  for (const auto& s : subs)
    if (oracle.query(s->lhs, s->rhs, depth).status != OracleStatus::Proved)
      return false;
  return true;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Corpus walk
// ---------------------------------------------------------------------------

inline PropertyReport run_properties(const PropertyConfig& cfg) {
  PropertyReport rep;
  SubtypeOracle oracle;
  TermPtr candidate = parse_term(known_stuck_candidate());

  std::vector<TermPtr> corpus;
  for (const auto& src : fixed_corpus_sources()) corpus.push_back(parse_term(src));
  rep.fixed_prefix = corpus.size();
  {
    TermGen g(cfg.gen);
    for (int i = 0; i < cfg.count; ++i) corpus.push_back(g.next().first);
  }
  rep.corpus = corpus.size();

  for (const auto& t0 : corpus) {
    SynthResult r0 = synth(TypeCtx{}, t0);
    if (!synth_ok(r0)) continue;  // fixed prefix is vetted; generated never fails
    CanonType ty = synth_type(r0);
    bool value_typed = is_value_type(ty);
    if (value_typed) ++rep.progress_checked;
    ++rep.runs;

    TermPtr cur = t0;
    bool sr_live = true;
    for (std::uint64_t used = 0;; ++used) {
      Outcome o = step_cbv(cur);
      auto rules = applicable_rules(cur);
      ++rep.determinism_states;

      if (o.kind != Outcome::Kind::Stepped) {
        if (!rules.empty())
          rep.determinism_violations.push_back(
              "terminal state claims an applicable rule: " + print_term(cur));
        if (o.kind == Outcome::Kind::IsValue) {
          if (value_typed) ++rep.progress_value;
          // Shape check: the type read off the final state decides what the
          // value must look like.
          SynthResult rv = synth(TypeCtx{}, cur);
          if (synth_ok(rv)) {
            ++rep.canonical_values;
            for (const auto& a : synth_type(rv).atoms) {
              if (a.kind == CanonAtom::Kind::Int && a.level == 0 &&
                  cur->kind != Term::Kind::Num)
                rep.canonical_violations.push_back(
                    "int-at-0 value is not a numeral: " + print_term(cur));
              if (a.kind == CanonAtom::Kind::Code && a.level == 0 &&
                  cur->kind != Term::Kind::Unbind)
                rep.canonical_violations.push_back(
                    "code-at-0 value is not an unbound term: " + print_term(cur));
            }
          }
        } else if (o.kind == Outcome::Kind::IsError) {
          if (value_typed) ++rep.progress_error;
        } else {  // Stuck
          if (value_typed) {
            StuckWitness w;
            w.origin = print_term(t0);
            w.stuck = print_term(cur);
            w.reason = stuck_reason_name(o.stuck);
            w.certified = detail::certified_well_typed(cur, oracle,
                                                       cfg.oracle_depth, &w.type);
            if (w.certified && term_eq(t0, candidate) &&
                o.stuck == StuckReason::AppNonFunction)
              rep.candidate_seen = true;
            rep.stuck_witnesses.push_back(std::move(w));
          } else {
            ++rep.stuck_nonvalue_typed;
          }
        }
        break;
      }

      // Determinism: the one applicable rule is the one the stepper took,
      // with the same successor.
      if (rules.size() != 1 || !rule_eq(rules[0].rule, o.rule) ||
          !term_eq(rules[0].result, o.next))
        rep.determinism_violations.push_back(
            "rule applicability disagrees with the stepper at: " +
            print_term(cur));

      if (sr_live) {
        ++rep.sr_checked;
        std::optional<detail::SrHit> hit;
        auto next_ty = detail::sr_step(cur, ty, o, &hit);
        if (next_ty) {
          ty = *next_ty;
        } else {
          sr_live = false;  // successor is outside the typed fragment
          TermPtr shrunk = detail::shrink_sr(hit->before, cfg.fuel);
          auto small = detail::sr_probe(shrunk, cfg.fuel);
          SrViolation v;
          v.before = print_term(hit->before);
          v.after = print_term(hit->after);
          v.rule = rule_name(hit->rule);
          v.detail = hit->detail;
          const detail::SrHit& h = small ? *small : *hit;
          v.shrunk_before = print_term(h.before);
          v.shrunk_after = print_term(h.after);
          v.shrunk_rule = rule_name(h.rule);
          v.triage = detail::classify_sr(h);
          v.known_family = v.triage != "unclassified";
          v.cert_ok =
              detail::certified_well_typed(h.before, oracle, cfg.oracle_depth);
          rep.sr_violations.push_back(std::move(v));
        }
      }

      ++rep.steps;
      cur = o.next;
      if (used + 1 >= cfg.fuel) {
        if (value_typed) ++rep.progress_fuel;
        break;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Type-universe audits
// ---------------------------------------------------------------------------

// Deterministic enumeration under the caps: arrow nesting at most 2, all
// levels at most 2, at most 3 atoms per intersection. 113 types, so the
// ordered-pair space is 12769.
inline std::vector<RawTypePtr> enumerate_type_universe() {
  std::vector<RawTypePtr> prim;
  for (int l = 0; l <= 2; ++l) prim.push_back(RawType::int_at(l));
  for (int l = 0; l <= 2; ++l) prim.push_back(RawType::code_at(l));

  std::vector<RawTypePtr> out = prim;

  std::vector<RawTypePtr> doms = {
      RawType::int_at(0), RawType::code_at(0),
      RawType::inter(RawType::int_at(0), RawType::code_at(0))};
  std::vector<RawTypePtr> arrows1;
  for (const auto& d : doms)
    for (const auto& c : prim)
      for (int l = 0; l <= 2; ++l) arrows1.push_back(RawType::arrow(d, c, l));
  out.insert(out.end(), arrows1.begin(), arrows1.end());  // 54

  std::vector<RawTypePtr> inner = {
      RawType::arrow(RawType::int_at(0), RawType::int_at(0), 0),
      RawType::arrow(RawType::int_at(0), RawType::code_at(0), 0),
      RawType::arrow(RawType::code_at(0), RawType::int_at(1), 1)};
  for (const auto& c : inner) {
    out.push_back(RawType::arrow(RawType::int_at(0), c, 0));
    out.push_back(RawType::arrow(RawType::code_at(0), c, 1));
  }  // 6

  for (std::size_t i = 0; i < prim.size(); ++i)
    for (std::size_t j = i + 1; j < prim.size(); ++j)
      out.push_back(RawType::inter(prim[i], prim[j]));  // 15

  for (std::size_t i = 0; i < prim.size(); ++i)
    for (std::size_t j = i + 1; j < prim.size(); ++j)
      for (std::size_t k = j + 1; k < prim.size(); ++k)
        out.push_back(
            RawType::inter(prim[i], RawType::inter(prim[j], prim[k])));  // 20

  std::vector<RawTypePtr> arr_slice = {
      RawType::arrow(RawType::int_at(0), RawType::int_at(0), 0),
      RawType::arrow(RawType::code_at(0), RawType::int_at(0), 1),
      RawType::arrow(RawType::inter(RawType::int_at(0), RawType::code_at(0)),
                     RawType::code_at(1), 0)};
  std::vector<RawTypePtr> mixers = {RawType::int_at(0), RawType::code_at(0),
                                    RawType::int_at(2)};
  for (const auto& a : arr_slice)
    for (const auto& p : mixers) out.push_back(RawType::inter(a, p));  // 9
  for (std::size_t i = 0; i < arr_slice.size(); ++i)
    for (std::size_t j = i + 1; j < arr_slice.size(); ++j)
      out.push_back(RawType::inter(arr_slice[i], arr_slice[j]));  // 3

  return out;
}

struct UniverseReport {
  std::size_t types = 0;
  std::size_t pairs = 0;
  std::size_t subtype_true = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Every oracle proof must agree with the canonical-form algorithm, and every
// algorithmic "yes" must come with a certificate that replays; an
// out-of-bound oracle answer on an algorithmic "yes" also counts as a
// mismatch, so agreement is two-sided on the whole universe.
inline UniverseReport check_oracle_agreement(int depth = 8) {
  UniverseReport rep;
  auto universe = enumerate_type_universe();
  rep.types = universe.size();
  SubtypeOracle oracle;
  for (const auto& s : universe) {
    CanonType cs = normalize(s);
    for (const auto& t : universe) {
      ++rep.pairs;
      bool alg = subtype(cs, normalize(t));
      if (alg) ++rep.subtype_true;
      auto o = oracle.query(s, t, depth);
      std::string tag =
          print_type(s) + "  vs  " + print_type(t);
      if (o.status == OracleStatus::Proved) {
        if (!alg) {
          rep.mismatches.push_back("oracle proved a non-subtype: " + tag);
          continue;
        }
        if (!replay(o.cert) || !type_eq(o.cert->lhs, s) ||
            !type_eq(o.cert->rhs, t))
          rep.mismatches.push_back("oracle certificate does not replay: " + tag);
      }
      if (alg) {
        if (o.status != OracleStatus::Proved)
          rep.mismatches.push_back("oracle missed a subtype within bound: " + tag);
        auto c = subtype_cert_raw(s, t);
        if (!c || !replay(*c) || !type_eq((*c)->lhs, s) ||
            !type_eq((*c)->rhs, t))
          rep.mismatches.push_back("algorithmic certificate does not replay: " +
                                   tag);
      }
    }
  }
  return rep;
}

// normalize(T) and T must be mutually subtype-related, with certificates
// that replay in both directions, and the equivalence built during
// normalization must replay as well.
inline UniverseReport check_normalization_soundness() {
  UniverseReport rep;
  auto universe = enumerate_type_universe();
  rep.types = universe.size();
  for (const auto& t : universe) {
    ++rep.pairs;
    NormCert nc = norm_cert(t);
    RawTypePtr back = raw_of_canon(nc.canon);
    std::string tag = print_type(t) + "  ~  " + print_type(back);
    if (!canon_eq(nc.canon, normalize(t))) {
      rep.mismatches.push_back("certificate normal form drifts: " + tag);
      continue;
    }
    if (!replay(nc.cert) || !type_eq(nc.cert->lhs, t) ||
        !type_eq(nc.cert->rhs, back))
      rep.mismatches.push_back("normalization equivalence does not replay: " + tag);
    auto fwd = subtype_cert_raw(t, back);
    auto bwd = subtype_cert_raw(back, t);
    if (!fwd || !replay(*fwd) || !bwd || !replay(*bwd))
      rep.mismatches.push_back("mutual subtyping does not replay: " + tag);
    else
      ++rep.subtype_true;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// JSON rendering
// ---------------------------------------------------------------------------

inline Json property_report_json(const PropertyReport& r) {
  Json sr = Json::array();
  for (const auto& v : r.sr_violations)
    sr.push_back({{"before", v.before},
                  {"after", v.after},
                  {"rule", v.rule},
                  {"detail", v.detail},
                  {"shrunk_before", v.shrunk_before},
                  {"shrunk_after", v.shrunk_after},
                  {"shrunk_rule", v.shrunk_rule},
                  {"triage", v.triage},
                  {"known_family", v.known_family},
                  {"certificate_ok", v.cert_ok}});
  Json stuck = Json::array();
  for (const auto& w : r.stuck_witnesses)
    stuck.push_back({{"origin", w.origin},
                     {"stuck", w.stuck},
                     {"reason", w.reason},
                     {"type", w.type},
                     {"certified", w.certified}});
  return Json{
      {"corpus", r.corpus},
      {"fixed_prefix", r.fixed_prefix},
      {"runs", r.runs},
      {"steps", r.steps},
      {"subject_reduction",
       {{"checked_steps", r.sr_checked},
        {"violations", sr},
        {"ok", r.sr_ok()}}},
      {"progress",
       {{"checked", r.progress_checked},
        {"value", r.progress_value},
        {"error", r.progress_error},
        {"fuel", r.progress_fuel},
        {"stuck_outside_premise", r.stuck_nonvalue_typed},
        {"stuck", stuck},
        {"candidate_seen", r.candidate_seen},
        {"ok", r.progress_ok()}}},
      {"determinism",
       {{"states", r.determinism_states},
        {"violations", r.determinism_violations},
        {"ok", r.determinism_ok()}}},
      {"canonical_forms",
       {{"values", r.canonical_values},
        {"violations", r.canonical_violations},
        {"ok", r.canonical_ok()}}}};
}

inline Json universe_report_json(const UniverseReport& r) {
  return Json{{"types", r.types},
              {"pairs", r.pairs},
              {"subtype_true", r.subtype_true},
              {"mismatches", r.mismatches},
              {"ok", r.ok()}};
}

} // namespace ubr
