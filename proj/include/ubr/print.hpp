#pragma once

// Printers for terms, raw types and canonical types. Terms and raw types
// print with minimal parentheses so that parse(print(x)) == x structurally.
//
// Canonical types print atoms in level-major order (level, then int before
// code before arrow): {CodeAt 0, IntAt 2} renders as "code^0 & int^2".
// Top-level int/code atoms keep an explicit ^level; inside an arrow, level
// 0 is omitted the way source types usually omit it.

#include <sstream>
#include <string>

#include "ubr/syntax.hpp"
#include "ubr/types.hpp"

namespace ubr {

// Precedence: 0 intersection, 1 arrow, 2 primitive.
inline void print_type_into(const RawTypePtr& t, int min_prec, std::ostringstream& out) {
  switch (t->kind) {
    case RawType::Kind::Int:
    case RawType::Kind::Code: {
      out << (t->kind == RawType::Kind::Int ? "int" : "code");
      if (t->level != 0) out << "^" << t->level;
      return;
    }
    case RawType::Kind::Arrow: {
      if (t->level != 0) {
        out << "(";
        print_type_into(t->dom, 2, out);
        out << " -> ";
        print_type_into(t->cod, 1, out);
        out << ")^" << t->level;
        return;
      }
      bool parens = min_prec > 1;
      if (parens) out << "(";
      print_type_into(t->dom, 2, out);
      out << " -> ";
      print_type_into(t->cod, 1, out);
      if (parens) out << ")";
      return;
    }
    case RawType::Kind::Inter: {
      bool parens = min_prec > 0;
      if (parens) out << "(";
      print_type_into(t->lhs, 0, out);
      out << " & ";
      print_type_into(t->rhs, 1, out);
      if (parens) out << ")";
      return;
    }
  }
}

inline std::string print_type(const RawTypePtr& t) {
  std::ostringstream out;
  print_type_into(t, 0, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Canonical types

inline void print_canon_atom_inner(const CanonAtom& a, bool parens_if_arrow, std::ostringstream& out);

inline void print_canon_dom(const CanonType& d, std::ostringstream& out) {
  bool parens = d.atoms.size() > 1 || d.atoms[0].kind == CanonAtom::Kind::Arrow;
  if (parens) out << "(";
  for (size_t i = 0; i < d.atoms.size(); ++i) {
    if (i) out << " & ";
    print_canon_atom_inner(d.atoms[i], false, out);
  }
  if (parens) out << ")";
}

inline void print_canon_atom_inner(const CanonAtom& a, bool parens_if_arrow, std::ostringstream& out) {
  switch (a.kind) {
    case CanonAtom::Kind::Int:
    case CanonAtom::Kind::Code:
      out << (a.kind == CanonAtom::Kind::Int ? "int" : "code");
      if (a.level != 0) out << "^" << a.level;
      return;
    case CanonAtom::Kind::Arrow:
      if (parens_if_arrow) out << "(";
      print_canon_dom(*a.dom, out);
      out << " -> ";
      print_canon_atom_inner(*a.cod, false, out);
      if (parens_if_arrow) out << ")";
      return;
  }
}

// Display order for canonical atoms: level first (arrows count as level 0),
// then int < code < arrow, then structure.
inline int atom_display_cmp(const CanonAtom& a, const CanonAtom& b) {
  int la = a.kind == CanonAtom::Kind::Arrow ? 0 : a.level;
  int lb = b.kind == CanonAtom::Kind::Arrow ? 0 : b.level;
  if (la != lb) return la < lb ? -1 : 1;
  return atom_cmp(a, b);
}

inline std::string print_canon_type(const CanonType& s) {
  if (s.is_bottom()) return "bottom";
  std::vector<CanonAtom> atoms = s.atoms;
  std::sort(atoms.begin(), atoms.end(),
            [](const CanonAtom& a, const CanonAtom& b) { return atom_display_cmp(a, b) < 0; });
  std::ostringstream out;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) out << " & ";
    const CanonAtom& a = atoms[i];
    if (a.kind == CanonAtom::Kind::Arrow) {
      print_canon_atom_inner(a, atoms.size() > 1, out);
    } else {
      out << (a.kind == CanonAtom::Kind::Int ? "int" : "code") << "^" << a.level;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Terms
//
// Precedence: 0 lambda, 1 sum, 2 application, 3 postfix (rebind), 4 atom.

inline void print_term_into(const TermPtr& t, int min_prec, std::ostringstream& out) {
  auto with_parens = [&](int prec, auto&& body) {
    bool parens = prec < min_prec;
    if (parens) out << "(";
    body();
    if (parens) out << ")";
  };
  switch (t->kind) {
    case Term::Kind::Var:
      out << t->name;
      return;
    case Term::Kind::Num:
      out << t->num;
      return;
    case Term::Kind::Error:
      out << "error";
      return;
    case Term::Kind::Sum:
      with_parens(1, [&] {
        print_term_into(t->a, 1, out);
        out << " + ";
        print_term_into(t->b, 2, out);
      });
      return;
    case Term::Kind::App:
      with_parens(2, [&] {
        print_term_into(t->a, 2, out);
        out << " ";
        print_term_into(t->b, 3, out);
      });
      return;
    case Term::Kind::Lam:
      with_parens(0, [&] {
        out << "\\" << t->name;
        if (t->annot) {
          out << ":";
          print_type_into(t->annot, 0, out);
        }
        out << ". ";
        print_term_into(t->b, 0, out);
      });
      return;
    case Term::Kind::Unbind: {
      out << "<";
      const auto& bs = t->ctx.bindings();
      for (size_t i = 0; i < bs.size(); ++i) {
        if (i) out << ", ";
        out << bs[i].name << ":";
        print_type_into(bs[i].type, 0, out);
      }
      out << " | ";
      print_term_into(t->b, 0, out);
      out << ">";
      return;
    }
    case Term::Kind::Rebind:
      with_parens(3, [&] {
        print_term_into(t->a, 3, out);
        out << "[";
        const auto& es = t->subst.entries();
        for (size_t i = 0; i < es.size(); ++i) {
          if (i) out << ", ";
          out << es[i].name << ":";
          print_type_into(es[i].type, 0, out);
          out << " := ";
          print_term_into(es[i].term, 0, out);
        }
        out << "]";
      });
      return;
  }
}

inline std::string print_term(const TermPtr& t) {
  std::ostringstream out;
  print_term_into(t, 0, out);
  return out.str();
}

}  // namespace ubr
