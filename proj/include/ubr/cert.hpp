// cert.hpp -- checkable certificates for type equivalence and subtyping.
//
// A certificate is a derivation tree over a small fixed rule set. Every
// judgment is either an equivalence (T1 == T2) or a subtyping (T1 <= T2)
// between raw types. replay() re-validates a tree against the rule schemas
// without consulting the algorithmic subtype checker, so a certificate is
// evidence that can be audited independently.
//
// The builders in this file construct certificates out of primitive rule
// applications only. In particular normalization certificates spell out
// every distributivity split, shift, swap and merge rather than appealing
// to any "by normalization" shortcut.

#pragma once

#include <algorithm>
#include <cassert>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ubr/types.hpp"

namespace ubr {

struct Cert;
using CertPtr = std::shared_ptr<const Cert>;

enum class CertRule {
  // equivalence rules
  EqRefl,       // T == T
  EqSym,        // T2 == T1            from T1 == T2
  EqTrans,      // T1 == T3            from T1 == T2, T2 == T3
  EqIdem,       // T == T & T
  EqComm,       // T1 & T2 == T2 & T1
  EqAssoc,      // T1 & (T2 & T3) == (T1 & T2) & T3
  EqDistrib,    // (T->T1)^l & (T->T2)^l == (T -> T1 & T2)^l
  EqShift,      // (T->U)^(l+1) == (T -> U lifted by 1)^l
  EqCongInter,  // A & B == A' & B'     from A == A', B == B'
  EqCongArrow,  // (A->B)^l == (A'->B')^l  from A == A', B == B'
  // subtyping rules
  SubIntLift,   // int^l <= int^(l+1)
  SubInterElim, // T1 & T2 <= T1
  SubArrow,     // (T1->T1')^l <= (T2->T2')^l  from T2 <= T1, T1' <= T2'
  SubInter,     // T1 & T2 <= T1' & T2'        from T1 <= T1', T2 <= T2'
  SubTrans,     // T1 <= T3                    from T1 <= T2, T2 <= T3
  SubFromEquiv, // T1 <= T2                    from T1 == T2
};

inline bool cert_rule_is_sub(CertRule r) {
  switch (r) {
    case CertRule::SubIntLift:
    case CertRule::SubInterElim:
    case CertRule::SubArrow:
    case CertRule::SubInter:
    case CertRule::SubTrans:
    case CertRule::SubFromEquiv:
      return true;
    default:
      return false;
  }
}

inline const char* cert_rule_name(CertRule r) {
  switch (r) {
    case CertRule::EqRefl: return "eq-refl";
    case CertRule::EqSym: return "eq-sym";
    case CertRule::EqTrans: return "eq-trans";
    case CertRule::EqIdem: return "eq-idem";
    case CertRule::EqComm: return "eq-comm";
    case CertRule::EqAssoc: return "eq-assoc";
    case CertRule::EqDistrib: return "eq-distrib";
    case CertRule::EqShift: return "eq-shift";
    case CertRule::EqCongInter: return "eq-cong-inter";
    case CertRule::EqCongArrow: return "eq-cong-arrow";
    case CertRule::SubIntLift: return "sub-int-lift";
    case CertRule::SubInterElim: return "sub-inter-elim";
    case CertRule::SubArrow: return "sub-arrow";
    case CertRule::SubInter: return "sub-inter";
    case CertRule::SubTrans: return "sub-trans";
    case CertRule::SubFromEquiv: return "sub-from-equiv";
  }
  return "?";
}

// One node of a derivation. lhs/rhs are the endpoints of the judgment the
// node concludes; equivalence nodes read "lhs == rhs", subtyping nodes read
// "lhs <= rhs".
struct Cert {
  CertRule rule;
  RawTypePtr lhs;
  RawTypePtr rhs;
  std::vector<CertPtr> premises;
};

inline CertPtr make_cert(CertRule rule, RawTypePtr lhs, RawTypePtr rhs,
                         std::vector<CertPtr> prem = {}) {
  auto c = std::make_shared<Cert>();
  c->rule = rule;
  c->lhs = std::move(lhs);
  c->rhs = std::move(rhs);
  c->premises = std::move(prem);
  return c;
}

inline std::size_t cert_size(const CertPtr& c) {
  std::size_t n = 1;
  for (const auto& p : c->premises) n += cert_size(p);
  return n;
}

// ---------------------------------------------------------------------------
// Replay: validate a certificate tree against the rule schemas.
// ---------------------------------------------------------------------------

inline bool replay(const CertPtr& c);

namespace detail {

inline bool is_inter_of(const RawTypePtr& t, const RawTypePtr& a, const RawTypePtr& b) {
  return t->kind == RawType::Kind::Inter && type_eq(t->lhs, a) && type_eq(t->rhs, b);
}

inline bool replay_node(const Cert& c) {
  const auto& ps = c.premises;
  auto ok_equiv_premise = [](const CertPtr& p) {
    return !cert_rule_is_sub(p->rule) && replay(p);
  };
  auto ok_sub_premise = [](const CertPtr& p) {
    return cert_rule_is_sub(p->rule) && replay(p);
  };
  switch (c.rule) {
    case CertRule::EqRefl:
      return ps.empty() && type_eq(c.lhs, c.rhs);
    case CertRule::EqSym:
      return ps.size() == 1 && ok_equiv_premise(ps[0]) &&
             type_eq(ps[0]->lhs, c.rhs) && type_eq(ps[0]->rhs, c.lhs);
    case CertRule::EqTrans:
      return ps.size() == 2 && ok_equiv_premise(ps[0]) && ok_equiv_premise(ps[1]) &&
             type_eq(ps[0]->lhs, c.lhs) && type_eq(ps[0]->rhs, ps[1]->lhs) &&
             type_eq(ps[1]->rhs, c.rhs);
    case CertRule::EqIdem:
      return ps.empty() && is_inter_of(c.rhs, c.lhs, c.lhs);
    case CertRule::EqComm:
      return ps.empty() && c.lhs->kind == RawType::Kind::Inter &&
             is_inter_of(c.rhs, c.lhs->rhs, c.lhs->lhs);
    case CertRule::EqAssoc: {
      // T1 & (T2 & T3) == (T1 & T2) & T3
      if (!ps.empty()) return false;
      const auto& l = c.lhs;
      const auto& r = c.rhs;
      if (l->kind != RawType::Kind::Inter || l->rhs->kind != RawType::Kind::Inter)
        return false;
      if (r->kind != RawType::Kind::Inter || r->lhs->kind != RawType::Kind::Inter)
        return false;
      return type_eq(l->lhs, r->lhs->lhs) && type_eq(l->rhs->lhs, r->lhs->rhs) &&
             type_eq(l->rhs->rhs, r->rhs);
    }
    case CertRule::EqDistrib: {
      // (T->T1)^l & (T->T2)^l == (T -> T1 & T2)^l
      if (!ps.empty()) return false;
      const auto& l = c.lhs;
      const auto& r = c.rhs;
      if (l->kind != RawType::Kind::Inter) return false;
      const auto& a1 = l->lhs;
      const auto& a2 = l->rhs;
      if (a1->kind != RawType::Kind::Arrow || a2->kind != RawType::Kind::Arrow ||
          r->kind != RawType::Kind::Arrow)
        return false;
      if (a1->level != a2->level || a1->level != r->level) return false;
      if (!type_eq(a1->dom, a2->dom) || !type_eq(a1->dom, r->dom)) return false;
      return is_inter_of(r->cod, a1->cod, a2->cod);
    }
    case CertRule::EqShift: {
      // (T->U)^(l+1) == (T -> U lifted outer by 1)^l
      if (!ps.empty()) return false;
      const auto& l = c.lhs;
      const auto& r = c.rhs;
      if (l->kind != RawType::Kind::Arrow || r->kind != RawType::Kind::Arrow)
        return false;
      if (l->level != r->level + 1) return false;
      if (!type_eq(l->dom, r->dom)) return false;
      return type_eq(r->cod, lift_raw_outer(l->cod, 1));
    }
    case CertRule::EqCongInter: {
      if (ps.size() != 2 || !ok_equiv_premise(ps[0]) || !ok_equiv_premise(ps[1]))
        return false;
      return is_inter_of(c.lhs, ps[0]->lhs, ps[1]->lhs) &&
             is_inter_of(c.rhs, ps[0]->rhs, ps[1]->rhs);
    }
    case CertRule::EqCongArrow: {
      if (ps.size() != 2 || !ok_equiv_premise(ps[0]) || !ok_equiv_premise(ps[1]))
        return false;
      const auto& l = c.lhs;
      const auto& r = c.rhs;
      if (l->kind != RawType::Kind::Arrow || r->kind != RawType::Kind::Arrow ||
          l->level != r->level)
        return false;
      return type_eq(l->dom, ps[0]->lhs) && type_eq(r->dom, ps[0]->rhs) &&
             type_eq(l->cod, ps[1]->lhs) && type_eq(r->cod, ps[1]->rhs);
    }
    case CertRule::SubIntLift:
      return ps.empty() && c.lhs->kind == RawType::Kind::Int &&
             c.rhs->kind == RawType::Kind::Int && c.rhs->level == c.lhs->level + 1;
    case CertRule::SubInterElim:
      return ps.empty() && c.lhs->kind == RawType::Kind::Inter &&
             type_eq(c.lhs->lhs, c.rhs);
    case CertRule::SubArrow: {
      if (ps.size() != 2 || !ok_sub_premise(ps[0]) || !ok_sub_premise(ps[1]))
        return false;
      const auto& l = c.lhs;
      const auto& r = c.rhs;
      if (l->kind != RawType::Kind::Arrow || r->kind != RawType::Kind::Arrow ||
          l->level != r->level)
        return false;
      // premises: r.dom <= l.dom  and  l.cod <= r.cod
      return type_eq(ps[0]->lhs, r->dom) && type_eq(ps[0]->rhs, l->dom) &&
             type_eq(ps[1]->lhs, l->cod) && type_eq(ps[1]->rhs, r->cod);
    }
    case CertRule::SubInter: {
      if (ps.size() != 2 || !ok_sub_premise(ps[0]) || !ok_sub_premise(ps[1]))
        return false;
      return is_inter_of(c.lhs, ps[0]->lhs, ps[1]->lhs) &&
             is_inter_of(c.rhs, ps[0]->rhs, ps[1]->rhs);
    }
    case CertRule::SubTrans:
      return ps.size() == 2 && ok_sub_premise(ps[0]) && ok_sub_premise(ps[1]) &&
             type_eq(ps[0]->lhs, c.lhs) && type_eq(ps[0]->rhs, ps[1]->lhs) &&
             type_eq(ps[1]->rhs, c.rhs);
    case CertRule::SubFromEquiv:
      return ps.size() == 1 && ok_equiv_premise(ps[0]) &&
             type_eq(ps[0]->lhs, c.lhs) && type_eq(ps[0]->rhs, c.rhs);
  }
  return false;
}

} // namespace detail

inline bool replay(const CertPtr& c) {
  if (!c || !c->lhs || !c->rhs) return false;
  return detail::replay_node(*c);
}

// ---------------------------------------------------------------------------
// Primitive builders. Each produces exactly one rule application; the eq_trans
// and sub_trans builders collapse reflexive steps so trees stay readable.
// ---------------------------------------------------------------------------

inline CertPtr eq_refl(const RawTypePtr& t) {
  return make_cert(CertRule::EqRefl, t, t);
}

inline CertPtr eq_sym(const CertPtr& c) {
  if (c->rule == CertRule::EqRefl) return c;
  return make_cert(CertRule::EqSym, c->rhs, c->lhs, {c});
}

inline CertPtr eq_trans(const CertPtr& a, const CertPtr& b) {
  if (a->rule == CertRule::EqRefl) return b;
  if (b->rule == CertRule::EqRefl) return a;
  return make_cert(CertRule::EqTrans, a->lhs, b->rhs, {a, b});
}

inline CertPtr eq_idem(const RawTypePtr& t) {
  return make_cert(CertRule::EqIdem, t, RawType::inter(t, t));
}

inline CertPtr eq_comm(const RawTypePtr& a, const RawTypePtr& b) {
  return make_cert(CertRule::EqComm, RawType::inter(a, b), RawType::inter(b, a));
}

inline CertPtr eq_assoc(const RawTypePtr& a, const RawTypePtr& b, const RawTypePtr& c) {
  return make_cert(CertRule::EqAssoc, RawType::inter(a, RawType::inter(b, c)),
                   RawType::inter(RawType::inter(a, b), c));
}

inline CertPtr eq_distrib(const RawTypePtr& dom, const RawTypePtr& c1,
                          const RawTypePtr& c2, int level) {
  return make_cert(CertRule::EqDistrib,
                   RawType::inter(RawType::arrow(dom, c1, level),
                                  RawType::arrow(dom, c2, level)),
                   RawType::arrow(dom, RawType::inter(c1, c2), level));
}

// (dom -> cod)^(to_level+1) == (dom -> cod lifted by 1)^to_level
inline CertPtr eq_shift(const RawTypePtr& dom, const RawTypePtr& cod, int to_level) {
  return make_cert(CertRule::EqShift, RawType::arrow(dom, cod, to_level + 1),
                   RawType::arrow(dom, lift_raw_outer(cod, 1), to_level));
}

inline CertPtr eq_cong_inter(const CertPtr& a, const CertPtr& b) {
  if (a->rule == CertRule::EqRefl && b->rule == CertRule::EqRefl)
    return eq_refl(RawType::inter(a->lhs, b->lhs));
  return make_cert(CertRule::EqCongInter, RawType::inter(a->lhs, b->lhs),
                   RawType::inter(a->rhs, b->rhs), {a, b});
}

inline CertPtr eq_cong_arrow(const CertPtr& dom, const CertPtr& cod, int level) {
  if (dom->rule == CertRule::EqRefl && cod->rule == CertRule::EqRefl)
    return eq_refl(RawType::arrow(dom->lhs, cod->lhs, level));
  return make_cert(CertRule::EqCongArrow, RawType::arrow(dom->lhs, cod->lhs, level),
                   RawType::arrow(dom->rhs, cod->rhs, level), {dom, cod});
}

inline CertPtr sub_int_lift(int level) {
  return make_cert(CertRule::SubIntLift, RawType::int_at(level),
                   RawType::int_at(level + 1));
}

inline CertPtr sub_inter_elim(const RawTypePtr& keep, const RawTypePtr& drop) {
  return make_cert(CertRule::SubInterElim, RawType::inter(keep, drop), keep);
}

inline CertPtr sub_from_equiv(const CertPtr& e) {
  return make_cert(CertRule::SubFromEquiv, e->lhs, e->rhs, {e});
}

inline CertPtr sub_refl(const RawTypePtr& t) { return sub_from_equiv(eq_refl(t)); }

inline bool cert_is_sub_refl(const CertPtr& c) {
  return c->rule == CertRule::SubFromEquiv && c->premises.size() == 1 &&
         c->premises[0]->rule == CertRule::EqRefl;
}

inline CertPtr sub_trans(const CertPtr& a, const CertPtr& b) {
  if (cert_is_sub_refl(a)) return b;
  if (cert_is_sub_refl(b)) return a;
  return make_cert(CertRule::SubTrans, a->lhs, b->rhs, {a, b});
}

// dom_cert : T2 <= T1, cod_cert : T1' <= T2'  gives  (T1->T1')^l <= (T2->T2')^l
inline CertPtr sub_arrow(const CertPtr& dom_cert, const CertPtr& cod_cert, int level) {
  return make_cert(CertRule::SubArrow,
                   RawType::arrow(dom_cert->rhs, cod_cert->lhs, level),
                   RawType::arrow(dom_cert->lhs, cod_cert->rhs, level),
                   {dom_cert, cod_cert});
}

inline CertPtr sub_inter(const CertPtr& a, const CertPtr& b) {
  return make_cert(CertRule::SubInter, RawType::inter(a->lhs, b->lhs),
                   RawType::inter(a->rhs, b->rhs), {a, b});
}

// ---------------------------------------------------------------------------
// Certified normalization. norm_cert(T) returns the canonical form of T
// together with a certificate T == raw_of_canon(canon).
// ---------------------------------------------------------------------------

struct NormCert {
  CanonType canon;
  CertPtr cert; // input == raw_of_canon(canon)
};

namespace detail {

// An intersection list entry: a canonical atom paired with its raw rendering.
struct AtomItem {
  CanonAtom atom;
  RawTypePtr raw;
};

inline RawTypePtr nest_items(const std::vector<AtomItem>& items, std::size_t from = 0) {
  assert(from < items.size());
  RawTypePtr out = items.back().raw;
  for (std::size_t i = items.size() - 1; i-- > from;)
    out = RawType::inter(items[i].raw, out);
  return out;
}

// nest(a ++ b) == a1 & (a2 & ... & nest(b)), proved from nest(a) & nest(b).
inline CertPtr flatten_cert(const std::vector<AtomItem>& a,
                            const std::vector<AtomItem>& b) {
  assert(!a.empty() && !b.empty());
  if (a.size() == 1)
    return eq_refl(RawType::inter(a[0].raw, nest_items(b)));
  std::vector<AtomItem> rest(a.begin() + 1, a.end());
  // (a1 & nest(rest)) & nest(b) == a1 & (nest(rest) & nest(b))
  CertPtr step = eq_sym(eq_assoc(a[0].raw, nest_items(rest), nest_items(b)));
  std::vector<AtomItem> merged = rest;
  merged.insert(merged.end(), b.begin(), b.end());
  CertPtr inner = eq_cong_inter(eq_refl(a[0].raw), flatten_cert(rest, b));
  return eq_trans(step, inner);
}

// Swap the first two entries of the list: nest([a,b|r]) == nest([b,a|r]).
inline CertPtr swap_front_cert(const std::vector<AtomItem>& items) {
  assert(items.size() >= 2);
  const auto& a = items[0].raw;
  const auto& b = items[1].raw;
  if (items.size() == 2) return eq_comm(a, b);
  RawTypePtr rest = nest_items(items, 2);
  // a & (b & r) == (a & b) & r == (b & a) & r == b & (a & r)
  CertPtr c = eq_assoc(a, b, rest);
  c = eq_trans(c, eq_cong_inter(eq_comm(a, b), eq_refl(rest)));
  c = eq_trans(c, eq_sym(eq_assoc(b, a, rest)));
  return c;
}

// Move items[idx] to the front; rewrites `items` in place to the new order
// and returns the certificate for the rearrangement.
inline CertPtr bubble_cert(std::vector<AtomItem>& items, std::size_t idx) {
  if (idx == 0) return eq_refl(nest_items(items));
  AtomItem head = items[0];
  std::vector<AtomItem> tail(items.begin() + 1, items.end());
  CertPtr inner = bubble_cert(tail, idx - 1); // tail now starts with the target
  std::vector<AtomItem> mid;
  mid.push_back(head);
  mid.insert(mid.end(), tail.begin(), tail.end());
  CertPtr c = eq_cong_inter(eq_refl(head.raw), inner);
  c = eq_trans(c, swap_front_cert(mid));
  items.clear();
  items.push_back(tail[0]);
  items.push_back(head);
  items.insert(items.end(), tail.begin() + 1, tail.end());
  return c;
}

// Selection sort by atom_cmp with certificate. Rewrites `items` to sorted
// order and returns nest(before) == nest(after).
inline CertPtr sort_cert(std::vector<AtomItem>& items) {
  if (items.size() <= 1) return eq_refl(nest_items(items));
  std::size_t min_idx = 0;
  for (std::size_t i = 1; i < items.size(); ++i)
    if (atom_cmp(items[i].atom, items[min_idx].atom) < 0) min_idx = i;
  CertPtr c = bubble_cert(items, min_idx);
  std::vector<AtomItem> rest(items.begin() + 1, items.end());
  CertPtr inner = sort_cert(rest);
  CertPtr step = eq_cong_inter(eq_refl(items[0].raw), inner);
  std::vector<AtomItem> out;
  out.push_back(items[0]);
  out.insert(out.end(), rest.begin(), rest.end());
  items = std::move(out);
  return eq_trans(c, step);
}

// Merge adjacent duplicates in a sorted list, with certificate.
inline CertPtr dedup_cert(std::vector<AtomItem>& items) {
  if (items.size() <= 1) return eq_refl(nest_items(items));
  if (atom_eq(items[0].atom, items[1].atom)) {
    const auto& a = items[0].raw;
    CertPtr c;
    std::vector<AtomItem> merged(items.begin() + 1, items.end());
    if (items.size() == 2) {
      c = eq_sym(eq_idem(a)); // a & a == a
    } else {
      RawTypePtr rest = nest_items(items, 2);
      // a & (a & r) == (a & a) & r == a & r
      c = eq_assoc(a, a, rest);
      c = eq_trans(c, eq_cong_inter(eq_sym(eq_idem(a)), eq_refl(rest)));
    }
    CertPtr inner = dedup_cert(merged);
    items = std::move(merged);
    return eq_trans(c, inner);
  }
  std::vector<AtomItem> tail(items.begin() + 1, items.end());
  CertPtr inner = dedup_cert(tail);
  if (inner->rule == CertRule::EqRefl) return eq_refl(nest_items(items));
  CertPtr c = eq_cong_inter(eq_refl(items[0].raw), inner);
  std::vector<AtomItem> out;
  out.push_back(items[0]);
  out.insert(out.end(), tail.begin(), tail.end());
  items = std::move(out);
  return c;
}

// Certificate that lifting the raw form of `a` by k at the outer level equals
// the raw form of the leaf-lifted atom: lift_raw_outer(raw(a), k) == raw(lift_atom(a, k)).
inline CertPtr atom_outer_to_leaf_cert(const CanonAtom& a, int k) {
  RawTypePtr lifted_outer = lift_raw_outer(raw_of_atom(a), k);
  if (a.kind != CanonAtom::Kind::Arrow)
    return eq_refl(lifted_outer); // int/code: outer lift and leaf lift coincide
  // lifted_outer = (dom -> raw(cod))^k. Shift k times, then fix the codomain.
  RawTypePtr dom_raw = raw_of_canon(*a.dom);
  RawTypePtr cod_raw = raw_of_atom(*a.cod);
  CertPtr c = eq_refl(lifted_outer);
  RawTypePtr cur_cod = cod_raw;
  for (int lvl = k; lvl > 0; --lvl) {
    c = eq_trans(c, eq_shift(dom_raw, cur_cod, lvl - 1));
    cur_cod = lift_raw_outer(cur_cod, 1);
  }
  // now at (dom -> lift_raw_outer(cod_raw, k))^0; fix the codomain leaf-wise
  CertPtr fix = atom_outer_to_leaf_cert(*a.cod, k);
  c = eq_trans(c, eq_cong_arrow(eq_refl(dom_raw), fix, 0));
  return c;
}

// (dom -> nest(cods))^0 == nest([(dom -> cod_i)^0 ...]) by repeated
// distributivity read right to left.
inline CertPtr split_arrow_cert(const RawTypePtr& dom,
                                const std::vector<RawTypePtr>& cods,
                                std::size_t from = 0) {
  assert(from < cods.size());
  if (from + 1 == cods.size())
    return eq_refl(RawType::arrow(dom, cods[from], 0));
  RawTypePtr rest = cods.back();
  for (std::size_t i = cods.size() - 1; i-- > from + 1;)
    rest = RawType::inter(cods[i], rest);
  CertPtr c = eq_sym(eq_distrib(dom, cods[from], rest, 0));
  CertPtr inner = split_arrow_cert(dom, cods, from + 1);
  return eq_trans(c, eq_cong_inter(eq_refl(RawType::arrow(dom, cods[from], 0)), inner));
}

inline std::vector<AtomItem> items_of(const CanonType& c) {
  std::vector<AtomItem> out;
  out.reserve(c.atoms.size());
  for (const auto& a : c.atoms) out.push_back({a, raw_of_atom(a)});
  return out;
}

} // namespace detail

inline NormCert norm_cert(const RawTypePtr& t) {
  using namespace detail;
  switch (t->kind) {
    case RawType::Kind::Int: {
      CanonType c = canon_of_atoms({int_atom(t->level)});
      return {c, eq_refl(t)};
    }
    case RawType::Kind::Code: {
      CanonType c = canon_of_atoms({code_atom(t->level)});
      return {c, eq_refl(t)};
    }
    case RawType::Kind::Arrow: {
      NormCert d = norm_cert(t->dom);
      NormCert b = norm_cert(t->cod);
      RawTypePtr dom_raw = raw_of_canon(d.canon);
      // (dom -> cod)^l == (dom_raw -> cod_raw)^l
      CertPtr c = eq_cong_arrow(d.cert, b.cert, t->level);
      // shift the level down to 0, outer-lifting the codomain each time
      RawTypePtr cur_cod = raw_of_canon(b.canon);
      for (int lvl = t->level; lvl > 0; --lvl) {
        c = eq_trans(c, eq_shift(dom_raw, cur_cod, lvl - 1));
        cur_cod = lift_raw_outer(cur_cod, 1);
      }
      // replace the outer-lifted codomain nest by the leaf-lifted atom nest
      std::vector<CanonAtom> lifted;
      std::vector<CertPtr> leaf_fixes;
      for (const auto& ca : b.canon.atoms) {
        lifted.push_back(lift_atom(ca, t->level));
        leaf_fixes.push_back(atom_outer_to_leaf_cert(ca, t->level));
      }
      CertPtr cod_fix;
      {
        // fold the per-atom fixes over the right-nested intersection
        std::size_t n = leaf_fixes.size();
        cod_fix = leaf_fixes[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
          cod_fix = eq_cong_inter(leaf_fixes[i], cod_fix);
      }
      c = eq_trans(c, eq_cong_arrow(eq_refl(dom_raw), cod_fix, 0));
      // split the arrow over its codomain conjuncts
      std::vector<RawTypePtr> cods;
      std::vector<AtomItem> items;
      for (const auto& la : lifted) {
        CanonAtom arr = arrow_atom(d.canon, la);
        cods.push_back(raw_of_atom(la));
        items.push_back({arr, raw_of_atom(arr)});
      }
      c = eq_trans(c, split_arrow_cert(dom_raw, cods));
      // canonical order and duplicate removal (usually a no-op here)
      CertPtr s = sort_cert(items);
      c = eq_trans(c, s);
      CertPtr dd = dedup_cert(items);
      c = eq_trans(c, dd);
      std::vector<CanonAtom> atoms;
      for (const auto& it : items) atoms.push_back(it.atom);
      CanonType canon;
      canon.atoms = std::move(atoms); // sorted and unique by construction
      assert(canon_eq(canon, normalize(t)));
      return {canon, c};
    }
    case RawType::Kind::Inter: {
      NormCert l = norm_cert(t->lhs);
      NormCert r = norm_cert(t->rhs);
      CertPtr c = eq_cong_inter(l.cert, r.cert);
      std::vector<AtomItem> li = items_of(l.canon);
      std::vector<AtomItem> ri = items_of(r.canon);
      c = eq_trans(c, flatten_cert(li, ri));
      std::vector<AtomItem> items = li;
      items.insert(items.end(), ri.begin(), ri.end());
      c = eq_trans(c, sort_cert(items));
      c = eq_trans(c, dedup_cert(items));
      std::vector<CanonAtom> atoms;
      for (const auto& it : items) atoms.push_back(it.atom);
      CanonType canon;
      canon.atoms = std::move(atoms);
      assert(canon_eq(canon, normalize(t)));
      return {canon, c};
    }
  }
  assert(false && "unreachable");
  return {CanonType{}, nullptr};
}

// ---------------------------------------------------------------------------
// Certified subtyping over canonical forms, then glued back to raw inputs.
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<CertPtr> atom_le_cert(const CanonAtom& a, const CanonAtom& b);

// raw(S) <= raw(S.atoms[idx]) by commuting the conjunct to the front and
// projecting.
inline CertPtr extract_atom_cert(const CanonType& s, std::size_t idx) {
  std::vector<AtomItem> items = items_of(s);
  if (items.size() == 1) return sub_refl(items[0].raw);
  CertPtr move = bubble_cert(items, idx);
  RawTypePtr rest = nest_items(items, 1);
  CertPtr proj = sub_inter_elim(items[0].raw, rest);
  return sub_trans(sub_from_equiv(move), proj);
}

inline std::optional<CertPtr> subtype_cert_canon(const CanonType& s, const CanonType& t);

inline std::optional<CertPtr> atom_le_cert(const CanonAtom& a, const CanonAtom& b) {
  if (a.kind == CanonAtom::Kind::Int && b.kind == CanonAtom::Kind::Int) {
    if (a.level > b.level) return std::nullopt;
    CertPtr c = sub_refl(RawType::int_at(a.level));
    for (int l = a.level; l < b.level; ++l) c = sub_trans(c, sub_int_lift(l));
    return c;
  }
  if (a.kind == CanonAtom::Kind::Code && b.kind == CanonAtom::Kind::Code) {
    if (a.level != b.level) return std::nullopt;
    return sub_refl(RawType::code_at(a.level));
  }
  if (a.kind == CanonAtom::Kind::Arrow && b.kind == CanonAtom::Kind::Arrow) {
    auto dom = subtype_cert_canon(*b.dom, *a.dom);
    if (!dom) return std::nullopt;
    auto cod = atom_le_cert(*a.cod, *b.cod);
    if (!cod) return std::nullopt;
    return sub_arrow(*dom, *cod, 0);
  }
  return std::nullopt;
}

inline std::optional<CertPtr> subtype_cert_canon(const CanonType& s, const CanonType& t) {
  if (s.is_bottom() || t.is_bottom()) return std::nullopt; // no raw rendering
  // one certificate raw(S) <= raw(atom) per target atom
  std::vector<CertPtr> per_atom;
  for (const auto& b : t.atoms) {
    std::optional<CertPtr> found;
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
      auto le = atom_le_cert(s.atoms[i], b);
      if (le) {
        found = sub_trans(extract_atom_cert(s, i), *le);
        break;
      }
    }
    if (!found) return std::nullopt;
    per_atom.push_back(*found);
  }
  // combine: raw(S) <= raw(S) & raw(S) <= b1 & (b2 & ...)
  RawTypePtr s_raw = raw_of_canon(s);
  std::size_t n = per_atom.size();
  CertPtr c = per_atom[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    CertPtr dup = sub_from_equiv(eq_idem(s_raw));
    c = sub_trans(dup, sub_inter(per_atom[i], c));
  }
  return c;
}

} // namespace detail

// Certificate raw_of_canon(s) <= raw_of_canon(t), when s <= t holds.
inline std::optional<CertPtr> subtype_cert(const CanonType& s, const CanonType& t) {
  return detail::subtype_cert_canon(s, t);
}

// Certificate s_raw <= t_raw for arbitrary raw inputs, built by normalizing
// both sides with certificates and bridging through the canonical forms.
inline std::optional<CertPtr> subtype_cert_raw(const RawTypePtr& s_raw,
                                               const RawTypePtr& t_raw) {
  NormCert sn = norm_cert(s_raw);
  NormCert tn = norm_cert(t_raw);
  auto core = detail::subtype_cert_canon(sn.canon, tn.canon);
  if (!core) {
    // degenerate but legal case: equal types whose canon form is bottom can
    // not occur (bottom has no raw form), so a missing core means not-subtype
    return std::nullopt;
  }
  CertPtr c = sub_from_equiv(sn.cert);        // s_raw <= raw(canon s)
  c = sub_trans(c, *core);                    // ... <= raw(canon t)
  c = sub_trans(c, sub_from_equiv(eq_sym(tn.cert))); // ... <= t_raw
  return c;
}

} // namespace ubr
