#pragma once

#include "baseline/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace baseline {

enum class OpKind {
    // value operations
    Noop,
    Write,
    Insert,
    Append,
    Delete,
    Move,
    LinkSet,
    DeletePresent,
    DeleteAbsent,
    // type operations
    Define,
    Convert,
    Rename,
    InsertCol,
    AppendCol,
    DeleteCol,
    MoveCol,
    ListOf,
    IntoFirst,
    RecordOf,
    IntoField,
    LinkType,
    Split,
    Join,
};

/// Surface name of an operation kind (`write`, `Append`, ...).
std::string_view opName(OpKind kind) noexcept;
bool isTypeOp(OpKind kind) noexcept;

/// One operation. Which argument fields are meaningful depends on `kind`:
///
///   Write            value
///   Insert/InsertCol id before anchor
///   Append/AppendCol id
///   Delete/DeleteCol id
///   LinkSet          id (element ID or `*`)
///   RecordOf/IntoField id (field)
///   Move/MoveCol     dest
///   LinkType         dest (range list)
///   Split            dest (new table field)
///   Define/Convert   type
///   Rename           name
struct Operation {
    OpKind kind = OpKind::Noop;
    Path target;
    Value value;
    Id id;
    Id anchor;
    Path dest;
    Type type;
    std::string name;

    bool isTypeOp() const noexcept { return baseline::isTypeOp(kind); }
    bool isNoop() const noexcept { return kind == OpKind::Noop; }

    bool operator==(const Operation& rhs) const;
};

using Timeline = std::vector<Operation>;

/// A future timeline: operations run speculatively against the current
/// state, returning the value found at `returnPath` afterwards.
struct Formula {
    Timeline ops;
    Path returnPath;

    bool operator==(const Formula&) const = default;
};

namespace op {

Operation noop(Path p = {});
Operation write(Path p, Value v);
Operation write(Path p, std::string s);
Operation write(Path p, double n);
Operation insert(Path list, Id id, Id before);
Operation append(Path list, Id id);
Operation del(Path list, Id id);
Operation move(Path element, Path dest);
Operation linkSet(Path cell, Id target);
Operation deletePresent(Path column);
Operation deleteAbsent(Path column);

Operation define(Path p, Type t);
Operation convert(Path p, Type atomic);
Operation rename(Path column, std::string name);
Operation insertCol(Path record, Id id, Id before);
Operation appendCol(Path record, Id id);
Operation deleteCol(Path record, Id id);
Operation moveCol(Path column, Path destRecord);
Operation listOf(Path p);
Operation intoFirst(Path p);
Operation recordOf(Path p, Id field);
Operation intoField(Path p, Id field);
Operation linkType(Path p, Path range);
Operation split(Path column, Path dest);
Operation join(Path linkColumn);

}  // namespace op

/// Drops Noop operations.
Timeline withoutNoops(const Timeline& ops);

}  // namespace baseline
