// jsonio.hpp -- JSON encodings for types, diagnostics and reduction traces.
//
// Canonical types encode as {"atoms": [...]} where each atom is
//   {"kind": "int"|"code", "level": n}  or
//   {"kind": "arrow", "dom": <canonical type>, "cod": <atom>}.
// Diagnostics encode as {"code", "span": {"start", "end"}, "message"}.
// Reduction traces are newline-delimited JSON: one object per step, then a
// closing summary object. nlohmann::json keeps object keys sorted, so equal
// inputs serialize byte-for-byte equal.

#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "ubr/eval.hpp"
#include "ubr/parse.hpp"
#include "ubr/print.hpp"
#include "ubr/typecheck.hpp"
#include "ubr/types.hpp"

namespace ubr {

using Json = nlohmann::json;

inline Json atom_json(const CanonAtom& a);

inline Json canon_type_json(const CanonType& t) {
  Json atoms = Json::array();
  for (const auto& a : t.atoms) atoms.push_back(atom_json(a));
  return Json{{"atoms", atoms}};
}

inline Json atom_json(const CanonAtom& a) {
  switch (a.kind) {
    case CanonAtom::Kind::Int: return Json{{"kind", "int"}, {"level", a.level}};
    case CanonAtom::Kind::Code: return Json{{"kind", "code"}, {"level", a.level}};
    case CanonAtom::Kind::Arrow:
      return Json{{"kind", "arrow"},
                  {"dom", canon_type_json(*a.dom)},
                  {"cod", atom_json(*a.cod)}};
  }
  return Json();
}

inline Json span_json(const SourceSpan& sp) {
  return Json{{"start", sp.start}, {"end", sp.end}};
}

inline Json diagnostic_json(const TypeError& e) {
  return Json{{"code", type_error_code_name(e.code)},
              {"span", span_json(e.span)},
              {"message", e.message}};
}

inline Json diagnostic_json(const ParseError& e) {
  return Json{{"code", "ParseError"},
              {"span", span_json(e.span)},
              {"message", e.what()}};
}

inline const char* run_status_name(RunResult::Status s) {
  switch (s) {
    case RunResult::Status::Value: return "Value";
    case RunResult::Status::Error: return "Error";
    case RunResult::Status::Stuck: return "Stuck";
    case RunResult::Status::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

// One object per step: {"rule": name, "step": k, "term": printed term},
// followed by a summary object. Steps count from 1.
inline void write_trace_json(std::ostream& os, const RunResult& r) {
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    Json line{{"step", i + 1},
              {"rule", rule_name(r.trace[i].rule)},
              {"term", print_term(r.trace[i].term)}};
    os << line.dump() << "\n";
  }
  Json fin{{"final", print_term(r.final)},
           {"status", run_status_name(r.status)},
           {"steps", r.steps}};
  if (r.status == RunResult::Status::Stuck)
    fin["reason"] = stuck_reason_name(r.stuck);
  os << fin.dump() << "\n";
}

} // namespace ubr
