#include "baseline/remap.hpp"

#include "baseline/query.hpp"
#include "baseline/relational.hpp"

#include <algorithm>

namespace baseline {

namespace {

const Id kStar{kElementType};
const Id kWrap{kWrapId};

Path splice(const Path& q, std::size_t at, std::size_t drop, const Path& insert) {
    return q.prefix(at) + insert + q.suffix(at + drop);
}

/// True when `q` addresses something strictly inside, or the content of,
/// the location covered by `p`.
bool reaches(const Path& p, const Address& a) {
    if (!covers(p, a.path)) return false;
    return a.path.size() > p.size() || !a.slot;
}

std::optional<Id> firstLive(const Value* list) {
    if (!list || list->kind != ValueKind::List) return std::nullopt;
    for (const auto& s : list->slots)
        if (!s.value.isTombstone()) return s.id;
    return std::nullopt;
}

/// Destination record of a MoveCol, instantiated for a concrete source
/// record path `rq`.
std::optional<Path> moveColDest(const Path& r, const Path& d, const Path& rq) {
    if (d == r) return rq;
    if (d.size() == r.size() + 1 && d.startsWith(r)) return rq.child(d.back());
    if (r.size() == d.size() + 1 && r.startsWith(d)) return rq.parent();
    return std::nullopt;
}

std::optional<Path> moveColSource(const Path& r, const Path& d, const Path& dq) {
    if (d == r) return dq;
    if (d.size() == r.size() + 1 && d.startsWith(r)) return dq.parent();
    if (r.size() == d.size() + 1 && r.startsWith(d)) return dq.child(r.back());
    return std::nullopt;
}

bool rowHasMovedCells(const State& before, const Path& table, const Id& row, const std::vector<Id>& moved) {
    const Value* list = valueAt(before.value, table);
    const Type* t = typeAt(before.type, table);
    if (!list || !t || !t->isList()) return false;
    const Value* r = list->live(row);
    if (!r) return false;
    for (const auto& k : moved) {
        const Slot* cell = r->slot(k);
        const Column* col = t->elem().column(k);
        if (cell && col && !isInitial(cell->value, col->type)) return true;
    }
    return false;
}

/// Live rows of `table` whose link cell `col` targets `target`.
std::vector<Id> rowsLinkingTo(const State& before, const Path& table, const Id& col, const Id& target) {
    std::vector<Id> out;
    const Value* list = valueAt(before.value, table);
    if (!list || list->kind != ValueKind::List) return out;
    for (const auto& s : list->slots) {
        if (s.value.isTombstone()) continue;
        const Slot* cell = s.value.slot(col);
        if (cell && cell->value.kind == ValueKind::Link && cell->value.text == target) out.push_back(s.id);
    }
    return out;
}

std::optional<Path> forward(const State& before, const Operation& op, const Address& a) {
    const Path& p = op.target;
    const Path& q = a.path;
    const std::size_t n = p.size();
    switch (op.kind) {
        case OpKind::Delete:
            if (covers(p.child(op.id), q)) return std::nullopt;
            return q;
        case OpKind::DeletePresent:
        case OpKind::DeleteAbsent:
            for (const auto& [list, id] : deleteWhereRows(before, p, op.kind == OpKind::DeletePresent))
                if (covers(list.child(id), q)) return std::nullopt;
            return q;
        case OpKind::Move:
            if (covers(p, q)) return splice(q, 0, p.size(), op.dest);
            return q;
        case OpKind::Define:
        case OpKind::LinkType:
            if (covers(p, q) && q.size() > n) return std::nullopt;
            return q;
        case OpKind::DeleteCol:
            if (covers(p.child(op.id), q)) return std::nullopt;
            return q;
        case OpKind::MoveCol: {
            const Path r = p.parent();
            if (!covers(p, q)) return q;
            auto d = moveColDest(r, op.dest, q.prefix(r.size()));
            if (!d) return std::nullopt;
            return *d + q.suffix(r.size());
        }
        case OpKind::ListOf:
            if (reaches(p, a)) return splice(q, n, 0, Path{a.typeLevel ? kStar : kWrap});
            return q;
        case OpKind::IntoFirst: {
            if (!covers(p, q) || q.size() <= n) return q;
            if (q[n] == kStar) return splice(q, n, 1, {});
            auto first = firstLive(valueAt(before.value, q.prefix(n)));
            if (first && *first == q[n]) return splice(q, n, 1, {});
            return std::nullopt;
        }
        case OpKind::RecordOf:
            if (reaches(p, a)) return splice(q, n, 0, Path{op.id});
            return q;
        case OpKind::IntoField:
            if (!covers(p, q) || q.size() <= n) return q;
            if (q[n] == op.id) return splice(q, n, 1, {});
            return std::nullopt;
        case OpKind::Split: {
            const Path table = p.prefix(n - 2);
            if (covers(op.dest, q)) return std::nullopt;
            if (!covers(table.child(kStar), q) || q.size() < n) return q;
            const auto moved = splitColumns(before, p);
            const Id& col = q[n - 1];
            if (std::find(moved.begin(), moved.end(), col) == moved.end()) return q;
            const Id& row = q[n - 2];
            if (row != kStar && !rowHasMovedCells(before, table, row, moved)) return std::nullopt;
            return splice(q, 0, n - 2, op.dest);
        }
        case OpKind::Join: {
            const Type* link = typeAt(before.type, p);
            if (!link || link->kind != TypeKind::Link) return q;
            const Path& range = link->range;
            const Path table = p.prefix(n - 2);
            if (covers(p, q)) return std::nullopt;
            if (!covers(range, q)) return q;
            if (q.size() < range.size() + 2) return std::nullopt;
            const Id& row = q[range.size()];
            if (row == kStar) return splice(q, 0, range.size(), table);
            if (table.hasWildcard()) return std::nullopt;
            auto rows = rowsLinkingTo(before, table, p.back(), row);
            if (rows.size() != 1) return std::nullopt;
            return table.child(rows.front()) + q.suffix(range.size() + 1);
        }
        default:
            return q;
    }
}

std::optional<Path> backward(const State& before, const Operation& op, const Address& a) {
    const Path& p = op.target;
    const Path& q = a.path;
    const std::size_t n = p.size();
    switch (op.kind) {
        case OpKind::Insert:
        case OpKind::Append:
            if (covers(p.child(op.id), q)) return std::nullopt;
            return q;
        case OpKind::Define:
        case OpKind::LinkType:
            if (reaches(p, a)) return std::nullopt;
            return q;
        case OpKind::InsertCol:
        case OpKind::AppendCol:
            if (covers(p.child(op.id), q)) return std::nullopt;
            return q;
        case OpKind::MoveCol: {
            const Path r = p.parent();
            const Path moved = op.dest.child(p.back());
            if (!covers(moved, q)) return q;
            auto src = moveColSource(r, op.dest, q.prefix(op.dest.size()));
            if (!src) return std::nullopt;
            return *src + q.suffix(op.dest.size());
        }
        case OpKind::ListOf:
            if (!covers(p, q)) return q;
            if (q.size() > n) {
                if (q[n] == kStar || q[n] == kWrap) return splice(q, n, 1, {});
                return std::nullopt;
            }
            if (!a.slot) return std::nullopt;
            return q;
        case OpKind::IntoFirst: {
            if (!reaches(p, a)) return q;
            if (a.typeLevel || q.prefix(n).hasWildcard()) return splice(q, n, 0, Path{kStar});
            auto first = firstLive(valueAt(before.value, q.prefix(n)));
            if (!first) return std::nullopt;
            return splice(q, n, 0, Path{*first});
        }
        case OpKind::RecordOf:
            if (!covers(p, q)) return q;
            if (q.size() > n) {
                if (q[n] == op.id) return splice(q, n, 1, {});
                return std::nullopt;
            }
            if (!a.slot) return std::nullopt;
            return q;
        case OpKind::IntoField:
            if (reaches(p, a)) return splice(q, n, 0, Path{op.id});
            return q;
        case OpKind::Split: {
            const Path table = p.prefix(n - 2);
            if (covers(p, q)) return std::nullopt;
            if (!covers(op.dest, q)) return q;
            const std::size_t d = op.dest.size();
            if (q.size() < d + 2) return std::nullopt;
            const auto moved = splitColumns(before, p);
            if (std::find(moved.begin(), moved.end(), q[d + 1]) == moved.end()) return std::nullopt;
            const Id& row = q[d];
            if (row != kStar && !rowHasMovedCells(before, table, row, moved)) return std::nullopt;
            return splice(q, 0, d, table);
        }
        case OpKind::Join: {
            const Type* link = typeAt(before.type, p);
            if (!link || link->kind != TypeKind::Link) return q;
            const Path& range = link->range;
            const Type* rt = typeAt(before.type, range);
            const Path table = p.prefix(n - 2);
            if (!covers(table.child(kStar), q) || q.size() < n) return q;
            const Id& col = q[n - 1];
            if (!rt || !rt->isList() || !rt->elem().column(col)) return q;
            const Id& row = q[n - 2];
            if (row == kStar) return splice(q, 0, n - 2, range);
            const Value* rows = valueAt(before.value, q.prefix(n - 2));
            const Value* r = rows ? rows->live(row) : nullptr;
            const Slot* cell = r ? r->slot(p.back()) : nullptr;
            if (!cell || cell->value.isNullLink()) return std::nullopt;
            if (rowsLinkingTo(before, q.prefix(n - 2), p.back(), cell->value.text).size() != 1)
                return std::nullopt;
            return range.child(cell->value.text) + q.suffix(n - 1);
        }
        default:
            return q;
    }
}

Operation withSlot(Operation o, const Path& slot) {
    o.target = slot.parent();
    o.id = slot.back();
    return o;
}

}  // namespace

bool covers(const Path& p, const Path& q) {
    if (p.size() > q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != q[i] && p[i] != kElementType) return false;
    return true;
}

std::optional<Path> mapForward(const State& before, const Operation& op, const Address& a) {
    return forward(before, op, a);
}

std::optional<Path> mapBackward(const State& before, const Operation& op, const Address& a) {
    return backward(before, op, a);
}

Address addressOf(const Operation& o) {
    const bool type = o.isTypeOp();
    switch (o.kind) {
        case OpKind::Delete: return {o.target.child(o.id), true, false};
        case OpKind::Move: return {o.target, true, false};
        case OpKind::DeletePresent:
        case OpKind::DeleteAbsent: return {o.target, true, false};
        case OpKind::Rename:
        case OpKind::MoveCol:
        case OpKind::Split:
        case OpKind::Join: return {o.target, true, true};
        case OpKind::DeleteCol: return {o.target.child(o.id), true, true};
        default: return {o.target, false, type};
    }
}

std::optional<Operation> mapOperation(const State& before, const Operation& through, const Operation& o,
                                      bool forward) {
    auto map = [&](const Address& a) {
        return forward ? mapForward(before, through, a) : mapBackward(before, through, a);
    };
    const Address a = addressOf(o);
    auto target = map(a);
    if (!target) return std::nullopt;
    Operation out = o;
    if (o.kind == OpKind::Delete || o.kind == OpKind::DeleteCol)
        out = withSlot(o, *target);
    else
        out.target = *target;

    switch (o.kind) {
        case OpKind::Move: {
            auto dest = map({o.dest, true, false});
            if (!dest) return std::nullopt;
            out.dest = *dest;
            break;
        }
        case OpKind::MoveCol:
        case OpKind::Split: {
            auto dest = map({o.dest, false, true});
            if (!dest) return std::nullopt;
            out.dest = *dest;
            break;
        }
        case OpKind::LinkType: {
            auto range = map({o.dest, false, false});
            if (!range) return std::nullopt;
            out.dest = *range;
            break;
        }
        case OpKind::LinkSet:
            // links follow a merge onto the surviving element
            if (forward && through.kind == OpKind::Move && o.id == through.target.back()) {
                const Type* cell = typeAt(before.type, typePathOf(before.type, o.target));
                if (cell && cell->kind == TypeKind::Link && cell->range == through.target.parent())
                    out.id = through.dest.back();
            }
            break;
        default:
            break;
    }
    return out;
}

}  // namespace baseline
