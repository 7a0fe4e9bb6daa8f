#pragma once

// Textual syntax for operations, types and values.
//
//   script  := { line }            one operation per line, '#' starts a comment
//   line    := path opname args
//   path    := '.' | ('.' id)+     `*` selects list elements, `1!` is the wrap ID
//   type    := String | Number | Bottom | List type | '{' [field {',' field}] '}'
//            | '->' path | formula '(' [op {';' op}] '^' path ')'
//   field   := id [string] ':' type
//   atom    := number | string | NaN

#include "baseline/operation.hpp"

#include <string>
#include <string_view>

namespace baseline {

Timeline parseScript(std::string_view text);
Operation parseOperation(std::string_view line);
Type parseType(std::string_view text);
Path parsePath(std::string_view text);
Value parseAtom(std::string_view text);

std::string print(const Operation& o);
std::string print(const Type& t);
std::string print(const Path& p);
std::string printScript(const Timeline& ops);
std::string printAtom(const Value& v);
std::string quote(std::string_view s);

/// Human-readable value: `{orders: [e1: {item: "Anvil"}]}`. Formula cells
/// print as `<formula>`; tombstones appear only on request.
std::string printValue(const Value& v, bool showTombstones = false);

}  // namespace baseline
