#pragma once

// Row filters, formulas as future timelines, and query rewriting.

#include "baseline/operation.hpp"

#include <utility>
#include <vector>

namespace baseline {

struct Diff;

/// Tombstones every live row of each table matched by `column`
/// (`<table>.*.<col>`) whose cell is non-initial (`present`) or initial.
State executeDeleteWhere(const State& s, const Path& column, bool present);

/// The (list path, element ID) pairs executeDeleteWhere would tombstone.
std::vector<std::pair<Path, Id>> deleteWhereRows(const State& s, const Path& column, bool present);

/// Runs the formula's timeline on a scratch copy of `s` and reads the value
/// at its return path. Formula fields read along the way are evaluated in
/// turn; a formula reaching itself throws CycleDetected.
Value evaluateFormula(const State& s, const Formula& f);

/// Formula-typed locations (type paths) in a type.
std::vector<Path> formulaFields(const Type& root);

/// The state with every formula field replaced by its computed value.
/// Formula fields keep their type; only the returned value is materialized.
Value materialize(const State& s);

/// Turns one side's branch of `d` into a formula over the shared state:
/// `[<at> Append <field>, <at>.<field> Define formula(...)]`.
Timeline transferIntoFormula(const Diff& d, bool fromSideA, const Path& returnPath,
                             const Path& at, const Id& field);

/// Carries a formula defined after `schemaOps` back to the state before them.
/// Throws DependencyFailure when an internal operation relies on one of them.
Formula rewriteBackward(const Formula& f, const Timeline& schemaOps, const State& before);
Operation rewriteBackward(const Operation& defineFormula, const Timeline& schemaOps, const State& before);

/// Carries a formula written against `before` across `typeOp`.
Formula rewriteForward(const Formula& f, const Operation& typeOp, const State& before);

}  // namespace baseline
