#pragma once

// Link columns, table Split/Join and merge-move with link forwarding.

#include "baseline/model.hpp"

#include <vector>

namespace baseline {

/// A Link-typed location (type path, may contain `*`) and the list it
/// ranges over.
struct LinkColumn {
    Path column;
    Path range;
};

std::vector<LinkColumn> linkColumns(const Type& root);

/// Concrete link cells in `s` whose link ranges over `list`.
std::vector<Path> linkCellsInto(const State& s, const Path& list);

/// Every link range resolves to a list and every non-null link names a live
/// element of it. Throws DanglingLink / InvalidTarget.
void checkReferentialIntegrity(const State& s);

/// Moves `column` (`<table>.*.<col>`) and every column after it into a new
/// table at `dest`, leaving a link column in place of `column`. Rows keep
/// their IDs in the new table; rows whose moved cells are all initial get a
/// null link and no counterpart.
State executeSplit(const State& s, const Path& column, const Path& dest);

/// Replaces the link column with the columns of the linked table, copying
/// each row's linked cells, then removes the linked table.
State executeJoin(const State& s, const Path& linkColumn);

/// Merges list element `src` into sibling `dst`, tombstones `src` and
/// forwards every link from `src` to `dst`.
State executeMoveMerge(const State& s, const Path& src, const Path& dst);

State executeLinkType(const State& s, const Path& at, const Path& range);
State executeLinkSet(const State& s, const Path& cell, const Id& target);

/// Columns a Split at `column` would move (the column and all after it).
std::vector<Id> splitColumns(const State& s, const Path& column);

}  // namespace baseline
