#pragma once

// Canonical types and the algorithmic subtype check.
//
// Raw types are quotiented by the congruence (idempotence, commutativity,
// associativity, arrow distributivity at equal level, and the level shift
// that trades one outer arrow level for one codomain level). The canonical
// form pushes every arrow to level 0, so a level sits only at the int/code
// leaf of a codomain spine, and an intersection becomes a sorted,
// duplicate-free set of atoms:
//
//   atom ::= IntAt l | CodeAt l | ArrowAt (canon -> atom)
//
// The empty atom set is reserved for the type of the error term (a bottom
// that subtypes everything). No source-level type normalizes to it.

#include <algorithm>
#include <optional>
#include <vector>

#include "ubr/syntax.hpp"

namespace ubr {

struct CanonType;

struct CanonAtom {
  enum class Kind { Int, Code, Arrow };
  Kind kind = Kind::Int;
  int level = 0;                          // Int, Code
  std::shared_ptr<const CanonType> dom;   // Arrow
  std::shared_ptr<const CanonAtom> cod;   // Arrow
};

struct CanonType {
  std::vector<CanonAtom> atoms;  // sorted by atom_cmp, duplicate-free
  bool is_bottom() const { return atoms.empty(); }
};

inline CanonAtom int_atom(int level) { return CanonAtom{CanonAtom::Kind::Int, level, nullptr, nullptr}; }
inline CanonAtom code_atom(int level) { return CanonAtom{CanonAtom::Kind::Code, level, nullptr, nullptr}; }
inline CanonAtom arrow_atom(CanonType dom, CanonAtom cod) {
  return CanonAtom{CanonAtom::Kind::Arrow, 0,
                   std::make_shared<const CanonType>(std::move(dom)),
                   std::make_shared<const CanonAtom>(std::move(cod))};
}

// Total order: kind (Int < Code < Arrow), then level, then structure.
inline int atom_cmp(const CanonAtom& a, const CanonAtom& b);

inline int canon_cmp(const CanonType& s, const CanonType& t) {
  size_t n = std::min(s.atoms.size(), t.atoms.size());
  for (size_t i = 0; i < n; ++i) {
    int c = atom_cmp(s.atoms[i], t.atoms[i]);
    if (c != 0) return c;
  }
  if (s.atoms.size() != t.atoms.size()) return s.atoms.size() < t.atoms.size() ? -1 : 1;
  return 0;
}

inline int atom_cmp(const CanonAtom& a, const CanonAtom& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
    case CanonAtom::Kind::Int:
    case CanonAtom::Kind::Code:
      if (a.level != b.level) return a.level < b.level ? -1 : 1;
      return 0;
    case CanonAtom::Kind::Arrow: {
      int c = canon_cmp(*a.dom, *b.dom);
      if (c != 0) return c;
      return atom_cmp(*a.cod, *b.cod);
    }
  }
  return 0;
}

inline bool atom_eq(const CanonAtom& a, const CanonAtom& b) { return atom_cmp(a, b) == 0; }
inline bool canon_eq(const CanonType& s, const CanonType& t) { return canon_cmp(s, t) == 0; }

inline CanonType canon_of_atoms(std::vector<CanonAtom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const CanonAtom& a, const CanonAtom& b) {
    return atom_cmp(a, b) < 0;
  });
  atoms.erase(std::unique(atoms.begin(), atoms.end(), atom_eq), atoms.end());
  return CanonType{std::move(atoms)};
}

// ---------------------------------------------------------------------------
// Normalization

// Adds k at the int/code leaf of the codomain spine; this is what one
// outer level on an arrow is worth after the shift rule.
inline CanonAtom lift_atom(const CanonAtom& a, int k) {
  if (k == 0) return a;
  switch (a.kind) {
    case CanonAtom::Kind::Int: return int_atom(a.level + k);
    case CanonAtom::Kind::Code: return code_atom(a.level + k);
    case CanonAtom::Kind::Arrow: {
      CanonAtom out = a;
      out.cod = std::make_shared<const CanonAtom>(lift_atom(*a.cod, k));
      return out;
    }
  }
  return a;
}

inline CanonType lift(const CanonType& s, int k) {
  if (s.is_bottom()) return s;
  std::vector<CanonAtom> atoms;
  atoms.reserve(s.atoms.size());
  for (const auto& a : s.atoms) atoms.push_back(lift_atom(a, k));
  return canon_of_atoms(std::move(atoms));
}

inline CanonType normalize(const RawTypePtr& t);

inline void normalize_into(const RawTypePtr& t, std::vector<CanonAtom>& out) {
  switch (t->kind) {
    case RawType::Kind::Int:
      out.push_back(int_atom(t->level));
      return;
    case RawType::Kind::Code:
      out.push_back(code_atom(t->level));
      return;
    case RawType::Kind::Arrow: {
      CanonType dom = normalize(t->dom);
      CanonType cod = normalize(t->cod);
      // (D -> c1 & ... & cn)^l  ==  (D -> c1^+l)^0 & ... & (D -> cn^+l)^0
      for (const auto& c : cod.atoms) out.push_back(arrow_atom(dom, lift_atom(c, t->level)));
      return;
    }
    case RawType::Kind::Inter:
      normalize_into(t->lhs, out);
      normalize_into(t->rhs, out);
      return;
  }
}

inline CanonType normalize(const RawTypePtr& t) {
  std::vector<CanonAtom> atoms;
  normalize_into(t, atoms);
  return canon_of_atoms(std::move(atoms));
}

// Right-nested raw rendition of a canonical type. Not defined for bottom.
inline RawTypePtr raw_of_atom(const CanonAtom& a);

inline RawTypePtr raw_of_canon(const CanonType& s) {
  assert(!s.is_bottom() && "bottom has no raw form");
  RawTypePtr out = raw_of_atom(s.atoms.back());
  for (size_t i = s.atoms.size() - 1; i-- > 0;)
    out = RawType::inter(raw_of_atom(s.atoms[i]), out);
  return out;
}

inline RawTypePtr raw_of_atom(const CanonAtom& a) {
  switch (a.kind) {
    case CanonAtom::Kind::Int: return RawType::int_at(a.level);
    case CanonAtom::Kind::Code: return RawType::code_at(a.level);
    case CanonAtom::Kind::Arrow:
      return RawType::arrow(raw_of_canon(*a.dom), raw_of_atom(*a.cod), 0);
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Subtyping

inline bool subtype(const CanonType& s, const CanonType& t);

// Whether the single atom a is a subtype of the single atom b.
// int lifts upward; code levels are exact (no code lifting); arrows are
// contravariant in the domain and covariant along the codomain spine.
inline bool atom_le(const CanonAtom& a, const CanonAtom& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case CanonAtom::Kind::Int: return a.level <= b.level;
    case CanonAtom::Kind::Code: return a.level == b.level;
    case CanonAtom::Kind::Arrow:
      return subtype(*b.dom, *a.dom) && atom_le(*a.cod, *b.cod);
  }
  return false;
}

inline bool subtype(const CanonType& s, const CanonType& t) {
  if (s.is_bottom()) return true;
  if (t.is_bottom()) return false;
  for (const auto& b : t.atoms) {
    bool covered = false;
    for (const auto& a : s.atoms)
      if (atom_le(a, b)) { covered = true; break; }
    if (!covered) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Level queries

// A value type has some atom at level 0; arrows are level 0 by canonical
// form. Bottom is a value type (the error term is fine wherever a value
// is needed).
inline bool is_value_type(const CanonType& s) {
  if (s.is_bottom()) return true;
  for (const auto& a : s.atoms) {
    if (a.kind == CanonAtom::Kind::Arrow) return true;
    if (a.level == 0) return true;
  }
  return false;
}

// Least level among int atoms; for bottom, 0 (error may be used at any
// int level, so the least is 0).
inline std::optional<int> min_int_level(const CanonType& s) {
  if (s.is_bottom()) return 0;
  std::optional<int> best;
  for (const auto& a : s.atoms)
    if (a.kind == CanonAtom::Kind::Int && (!best || a.level < *best)) best = a.level;
  return best;
}

// ---------------------------------------------------------------------------
// Decrement: the greatest T with S <= lift(T, 1), used to type a rebind.
//
// Per atom: int floors at 0 (int^0 <= int^1 covers the gap), code at level 0
// is dropped (nothing rebinds below level 0 code), arrows recurse on the
// codomain spine. An empty result is reported as nullopt; the caller turns
// it into a type error.

inline std::optional<CanonAtom> decrement_atom(const CanonAtom& a) {
  switch (a.kind) {
    case CanonAtom::Kind::Int: return int_atom(std::max(a.level - 1, 0));
    case CanonAtom::Kind::Code:
      if (a.level == 0) return std::nullopt;
      return code_atom(a.level - 1);
    case CanonAtom::Kind::Arrow: {
      auto c = decrement_atom(*a.cod);
      if (!c) return std::nullopt;
      CanonAtom out = a;
      out.cod = std::make_shared<const CanonAtom>(*c);
      return out;
    }
  }
  return std::nullopt;
}

inline std::optional<CanonType> decrement(const CanonType& s) {
  if (s.is_bottom()) return s;  // error types at anything, before and after
  std::vector<CanonAtom> atoms;
  for (const auto& a : s.atoms) {
    auto d = decrement_atom(a);
    if (d) atoms.push_back(*d);
  }
  if (atoms.empty()) return std::nullopt;
  return canon_of_atoms(std::move(atoms));
}

}  // namespace ubr
