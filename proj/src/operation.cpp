#include "baseline/operation.hpp"

namespace baseline {

std::string_view opName(OpKind kind) noexcept {
    switch (kind) {
        case OpKind::Noop: return "noop";
        case OpKind::Write: return "write";
        case OpKind::Insert: return "insert";
        case OpKind::Append: return "append";
        case OpKind::Delete: return "delete";
        case OpKind::Move: return "move";
        case OpKind::LinkSet: return "link";
        case OpKind::DeletePresent: return "deletePresent";
        case OpKind::DeleteAbsent: return "deleteAbsent";
        case OpKind::Define: return "Define";
        case OpKind::Convert: return "Convert";
        case OpKind::Rename: return "Rename";
        case OpKind::InsertCol: return "Insert";
        case OpKind::AppendCol: return "Append";
        case OpKind::DeleteCol: return "Delete";
        case OpKind::MoveCol: return "Move";
        case OpKind::ListOf: return "ListOf";
        case OpKind::IntoFirst: return "IntoFirst";
        case OpKind::RecordOf: return "RecordOf";
        case OpKind::IntoField: return "IntoField";
        case OpKind::LinkType: return "Link";
        case OpKind::Split: return "Split";
        case OpKind::Join: return "Join";
    }
    return "?";
}

bool isTypeOp(OpKind kind) noexcept { return kind >= OpKind::Define; }

bool Operation::operator==(const Operation& rhs) const {
    return kind == rhs.kind && target == rhs.target && value == rhs.value && id == rhs.id &&
           anchor == rhs.anchor && dest == rhs.dest && type == rhs.type && name == rhs.name;
}

Timeline withoutNoops(const Timeline& ops) {
    Timeline out;
    out.reserve(ops.size());
    for (const auto& o : ops)
        if (!o.isNoop()) out.push_back(o);
    return out;
}

namespace op {

namespace {

Operation make(OpKind kind, Path target) {
    Operation o;
    o.kind = kind;
    o.target = std::move(target);
    return o;
}

}  // namespace

Operation noop(Path p) { return make(OpKind::Noop, std::move(p)); }

Operation write(Path p, Value v) {
    auto o = make(OpKind::Write, std::move(p));
    o.value = std::move(v);
    return o;
}

Operation write(Path p, std::string s) { return write(std::move(p), Value::string(std::move(s))); }
Operation write(Path p, double n) { return write(std::move(p), Value::number(n)); }

Operation insert(Path list, Id id, Id before) {
    auto o = make(OpKind::Insert, std::move(list));
    o.id = std::move(id);
    o.anchor = std::move(before);
    return o;
}

Operation append(Path list, Id id) {
    auto o = make(OpKind::Append, std::move(list));
    o.id = std::move(id);
    return o;
}

Operation del(Path list, Id id) {
    auto o = make(OpKind::Delete, std::move(list));
    o.id = std::move(id);
    return o;
}

Operation move(Path element, Path dest) {
    auto o = make(OpKind::Move, std::move(element));
    o.dest = std::move(dest);
    return o;
}

Operation linkSet(Path cell, Id target) {
    auto o = make(OpKind::LinkSet, std::move(cell));
    o.id = std::move(target);
    return o;
}

Operation deletePresent(Path column) { return make(OpKind::DeletePresent, std::move(column)); }
Operation deleteAbsent(Path column) { return make(OpKind::DeleteAbsent, std::move(column)); }

Operation define(Path p, Type t) {
    auto o = make(OpKind::Define, std::move(p));
    o.type = std::move(t);
    return o;
}

Operation convert(Path p, Type atomic) {
    auto o = make(OpKind::Convert, std::move(p));
    o.type = std::move(atomic);
    return o;
}

Operation rename(Path column, std::string name) {
    auto o = make(OpKind::Rename, std::move(column));
    o.name = std::move(name);
    return o;
}

Operation insertCol(Path record, Id id, Id before) {
    auto o = make(OpKind::InsertCol, std::move(record));
    o.id = std::move(id);
    o.anchor = std::move(before);
    return o;
}

Operation appendCol(Path record, Id id) {
    auto o = make(OpKind::AppendCol, std::move(record));
    o.id = std::move(id);
    return o;
}

Operation deleteCol(Path record, Id id) {
    auto o = make(OpKind::DeleteCol, std::move(record));
    o.id = std::move(id);
    return o;
}

Operation moveCol(Path column, Path destRecord) {
    auto o = make(OpKind::MoveCol, std::move(column));
    o.dest = std::move(destRecord);
    return o;
}

Operation listOf(Path p) { return make(OpKind::ListOf, std::move(p)); }
Operation intoFirst(Path p) { return make(OpKind::IntoFirst, std::move(p)); }

Operation recordOf(Path p, Id field) {
    auto o = make(OpKind::RecordOf, std::move(p));
    o.id = std::move(field);
    return o;
}

Operation intoField(Path p, Id field) {
    auto o = make(OpKind::IntoField, std::move(p));
    o.id = std::move(field);
    return o;
}

Operation linkType(Path p, Path range) {
    auto o = make(OpKind::LinkType, std::move(p));
    o.dest = std::move(range);
    return o;
}

Operation split(Path column, Path dest) {
    auto o = make(OpKind::Split, std::move(column));
    o.dest = std::move(dest);
    return o;
}

Operation join(Path linkColumn) { return make(OpKind::Join, std::move(linkColumn)); }

}  // namespace op

}  // namespace baseline
