#include "baseline/relational.hpp"

#include "baseline/error.hpp"

#include <algorithm>
#include <functional>

namespace baseline {

namespace {

void collectLinks(const Type& t, const Path& at, std::vector<LinkColumn>& out) {
    switch (t.kind) {
        case TypeKind::Link: out.push_back({at, t.range}); break;
        case TypeKind::List: collectLinks(t.elem(), at.child(Id(kElementType)), out); break;
        case TypeKind::Record:
            for (const auto& c : t.columns) collectLinks(c.type, at.child(c.id), out);
            break;
        default: break;
    }
}

/// `<table>.*.<col>` split into table path and column ID.
std::pair<Path, Id> tableColumn(const Path& column) {
    if (column.size() < 2 || column[column.size() - 2] != kElementType || column.back() == kElementType)
        throw Error(ErrorKind::InvalidTarget, column.str() + " is not a table column");
    return {column.prefix(column.size() - 2), column.back()};
}

/// A path made only of record fields (so it names one location in every
/// state of the type).
bool fieldsOnly(const State& s, const Path& p) { return !p.hasWildcard() && typePathOf(s.type, p) == p; }

const Value& listAt(const State& s, const Path& p) {
    auto at = resolvePath(s, p);
    if (!at.type->isList() || !at.value) throw Error(ErrorKind::TypeMismatch, p.str() + " is not a list");
    return *at.value;
}

}  // namespace

std::vector<LinkColumn> linkColumns(const Type& root) {
    std::vector<LinkColumn> out;
    collectLinks(root, {}, out);
    return out;
}

std::vector<Path> linkCellsInto(const State& s, const Path& list) {
    std::vector<Path> out;
    for (const auto& lc : linkColumns(s.type)) {
        if (!(lc.range == list)) continue;
        auto cells = instances(s.value, lc.column);
        out.insert(out.end(), cells.begin(), cells.end());
    }
    return out;
}

void checkReferentialIntegrity(const State& s) {
    for (const auto& lc : linkColumns(s.type)) {
        const Value* list = nullptr;
        try {
            list = &listAt(s, lc.range);
        } catch (const Error&) {
            throw Error(ErrorKind::InvalidTarget, "links at " + lc.column.str() + " range over " + lc.range.str() +
                                                      ", which is not a list");
        }
        for (const auto& cell : instances(s.value, lc.column)) {
            const Value& v = *valueAt(s.value, cell);
            if (!v.isNullLink() && !list->live(v.text))
                throw Error(ErrorKind::DanglingLink, cell.str() + " links to missing element " + v.text);
        }
    }
}

std::vector<Id> splitColumns(const State& s, const Path& column) {
    auto [table, c] = tableColumn(column);
    const Type* t = typeAt(s.type, table);
    if (!t || !t->isList() || !t->elem().isRecord()) return {};
    const auto& cols = t->elem().columns;
    auto i = t->elem().columnIndex(c);
    if (!i) return {};
    std::vector<Id> out;
    for (auto k = *i; k < cols.size(); ++k) out.push_back(cols[k].id);
    return out;
}

State executeSplit(const State& s, const Path& column, const Path& dest) {
    auto [table, c] = tableColumn(column);
    if (table.hasWildcard()) throw Error(ErrorKind::InvalidTarget, "Split needs a single table, not " + table.str());
    const Value& rows = listAt(s, table);
    const Type& tableType = *typeAt(s.type, table);
    if (!tableType.elem().isRecord()) throw Error(ErrorKind::TypeMismatch, table.str() + " rows are not records");
    const auto ci = tableType.elem().columnIndex(c);
    if (!ci) throw Error(ErrorKind::PathNotFound, column.str());

    if (dest.empty() || !fieldsOnly(s, dest.parent()) || dest.startsWith(table) || table.startsWith(dest))
        throw Error(ErrorKind::InvalidTarget, "cannot create a table at " + dest.str());
    const Type* destParent = typeAt(s.type, dest.parent());
    if (!destParent || !destParent->isRecord()) throw Error(ErrorKind::PathNotFound, dest.parent().str());
    const Column* existing = destParent->column(dest.back());
    if (existing && !(existing->type == Type::unit()))
        throw Error(ErrorKind::InvalidTarget, dest.str() + " is not an empty field");
    if (!existing && (!isValidId(dest.back()) || isReservedId(dest.back())))
        throw Error(ErrorKind::InvalidTarget, "bad field ID " + dest.back());

    const auto& cols = tableType.elem().columns;
    std::vector<Column> kept(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(*ci));
    std::vector<Column> moved(cols.begin() + static_cast<std::ptrdiff_t>(*ci), cols.end());
    kept.push_back(Column{c, cols[*ci].name, Type::link(dest)});

    Value newRows = Value::list();
    Value destRows = Value::list();
    for (const auto& row : rows.slots) {
        if (row.value.isTombstone()) {
            newRows.slots.push_back(row);
            continue;
        }
        std::vector<Slot> front(row.value.slots.begin(), row.value.slots.begin() + static_cast<std::ptrdiff_t>(*ci));
        std::vector<Slot> back(row.value.slots.begin() + static_cast<std::ptrdiff_t>(*ci), row.value.slots.end());
        bool blank = true;
        for (std::size_t k = 0; k < back.size(); ++k)
            if (!isInitial(back[k].value, moved[k].type)) blank = false;
        front.push_back(Slot{c, blank ? Value::nullLink() : Value::link(row.id)});
        if (!blank) destRows.slots.push_back(Slot{row.id, Value::record(std::move(back))});
        newRows.slots.push_back(Slot{row.id, Value::record(std::move(front))});
    }

    State out = s;
    *valueAt(out.value, table) = std::move(newRows);
    typeAt(out.type, table)->elem().columns = std::move(kept);

    Type destType = Type::list(Type::record(std::move(moved)));
    Type& parentType = *typeAt(out.type, dest.parent());
    Value& parentValue = *valueAt(out.value, dest.parent());
    if (Column* col = parentType.column(dest.back())) {
        col->type = std::move(destType);
        parentValue.slot(dest.back())->value = std::move(destRows);
    } else {
        parentType.columns.push_back(Column{dest.back(), dest.back(), std::move(destType)});
        parentValue.slots.push_back(Slot{dest.back(), std::move(destRows)});
    }
    return out;
}

State executeJoin(const State& s, const Path& linkColumn) {
    auto [table, c] = tableColumn(linkColumn);
    const Type* lt = typeAt(s.type, linkColumn);
    if (!lt) throw Error(ErrorKind::PathNotFound, linkColumn.str());
    if (lt->kind != TypeKind::Link) throw Error(ErrorKind::TypeMismatch, linkColumn.str() + " is not a link column");
    const Path range = lt->range;
    if (!fieldsOnly(s, range) || range.empty() || range.startsWith(table) || table.startsWith(range))
        throw Error(ErrorKind::InvalidTarget, "cannot join " + range.str() + " into " + table.str());
    for (const auto& other : linkColumns(s.type))
        if (other.range == range && !(other.column == linkColumn))
            throw Error(ErrorKind::InvalidTarget, other.column.str() + " also links into " + range.str());

    const Value& linked = listAt(s, range);
    const Type& rangeRow = typeAt(s.type, range)->elem();
    if (!rangeRow.isRecord()) throw Error(ErrorKind::TypeMismatch, range.str() + " rows are not records");
    const Type& rowType = *typeAt(s.type, table.child(Id(kElementType)));
    for (const auto& col : rangeRow.columns)
        if (col.id != c && rowType.column(col.id))
            throw Error(ErrorKind::DuplicateId, table.str() + " already has a field " + col.id);

    const Value blank = initialValue(rangeRow);
    State out = s;
    for (const auto& rowPath : instances(s.value, table.child(Id(kElementType)))) {
        Value& row = *valueAt(out.value, rowPath);
        auto ci = *row.slotIndex(c);
        const Value& link = row.slots[ci].value;
        const Value* from = &blank;
        if (!link.isNullLink()) {
            from = linked.live(link.text);
            if (!from) throw Error(ErrorKind::DanglingLink, rowPath.child(c).str() + " links to " + link.text);
        }
        row.slots.erase(row.slots.begin() + static_cast<std::ptrdiff_t>(ci));
        row.slots.insert(row.slots.begin() + static_cast<std::ptrdiff_t>(ci), from->slots.begin(), from->slots.end());
    }
    Type& newRow = *typeAt(out.type, table.child(Id(kElementType)));
    auto ci = *newRow.columnIndex(c);
    newRow.columns.erase(newRow.columns.begin() + static_cast<std::ptrdiff_t>(ci));
    newRow.columns.insert(newRow.columns.begin() + static_cast<std::ptrdiff_t>(ci), rangeRow.columns.begin(),
                          rangeRow.columns.end());

    Type& parentType = *typeAt(out.type, range.parent());
    Value& parentValue = *valueAt(out.value, range.parent());
    auto ri = *parentType.columnIndex(range.back());
    parentType.columns.erase(parentType.columns.begin() + static_cast<std::ptrdiff_t>(ri));
    parentValue.slots.erase(parentValue.slots.begin() + static_cast<std::ptrdiff_t>(ri));
    return out;
}

State executeMoveMerge(const State& s, const Path& src, const Path& dst) {
    if (src.empty() || dst.empty() || !(src.parent() == dst.parent()))
        throw Error(ErrorKind::InvalidTarget, "move stays within one list");
    if (src == dst) throw Error(ErrorKind::InvalidTarget, "cannot move " + src.str() + " onto itself");
    const Path list = src.parent();
    listAt(s, list);
    resolvePath(s, src);
    resolvePath(s, dst);

    State out = s;
    Value& lv = *valueAt(out.value, list);
    Value& from = lv.slot(src.back())->value;
    lv.slot(dst.back())->value = std::move(from);
    lv.slot(src.back())->value = Value::tombstone();
    for (const auto& cell : linkCellsInto(out, list)) {
        Value& v = *valueAt(out.value, cell);
        if (v.text == src.back()) v = Value::link(dst.back());
    }
    return out;
}

State executeLinkType(const State& s, const Path& at, const Path& range) {
    const Type* t = typeAt(s.type, at);
    if (!t) throw Error(ErrorKind::PathNotFound, at.str());
    if (range.hasWildcard()) throw Error(ErrorKind::InvalidTarget, "link range must be a concrete path");
    listAt(s, range);
    State out = s;
    *typeAt(out.type, at) = Type::link(range);
    for (const auto& p : instances(out.value, at)) *valueAt(out.value, p) = Value::nullLink();
    return out;
}

State executeLinkSet(const State& s, const Path& cell, const Id& target) {
    auto at = resolvePath(s, cell);
    if (at.type->kind != TypeKind::Link || !at.value)
        throw Error(ErrorKind::TypeMismatch, cell.str() + " is not a link cell");
    if (target != kNullLink) {
        const Value& list = listAt(s, at.type->range);
        if (!list.live(target))
            throw Error(ErrorKind::DanglingLink, at.type->range.str() + " has no element " + target);
    }
    State out = s;
    *valueAt(out.value, cell) = Value::link(target);
    return out;
}

}  // namespace baseline
