#include "baseline/execute.hpp"

#include "baseline/error.hpp"
#include "baseline/query.hpp"
#include "baseline/relational.hpp"
#include "baseline/remap.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <regex>
#include <set>

namespace baseline {

namespace {

[[noreturn]] void fail(ErrorKind kind, const Operation& o, const std::string& why) {
    throw Error(kind, std::string(opName(o.kind)) + " at " + o.target.str() + ": " + why);
}

void requireConcrete(const Operation& o) {
    if (o.target.hasWildcard()) fail(ErrorKind::InvalidTarget, o, "value operations need a concrete path");
}

/// Type operations address every instance at once, so their targets are
/// type paths.
Type& requireTypePath(State& s, const Operation& o) {
    Type* t = typeAt(s.type, o.target);
    if (!t) fail(ErrorKind::PathNotFound, o, "no such type path");
    if (!(typePathOf(s.type, o.target) == o.target))
        fail(ErrorKind::InvalidTarget, o, "type operations take `*` for list elements");
    return *t;
}

Value& mustValue(Value& root, const Path& p) {
    Value* v = valueAt(root, p);
    if (!v) throw Error(ErrorKind::PathNotFound, p.str());
    return *v;
}

void forEachInstance(Value& root, const Path& pattern, const std::function<void(Value&)>& f) {
    for (const auto& p : instances(root, pattern)) f(mustValue(root, p));
}

bool wellFormed(const Type& t) {
    switch (t.kind) {
        case TypeKind::List: return t.element && wellFormed(t.elem());
        case TypeKind::Record: {
            std::set<std::string_view> ids;
            for (const auto& c : t.columns) {
                if (!isValidId(c.id) || isReservedId(c.id) || !ids.insert(c.id).second) return false;
                if (c.type.kind == TypeKind::Bottom || !wellFormed(c.type)) return false;
            }
            return true;
        }
        case TypeKind::Link: return !t.range.hasWildcard();
        default: return true;
    }
}

void checkFreshColumnId(const Operation& o, const Type& record) {
    if (!isValidId(o.id) || isReservedId(o.id)) fail(ErrorKind::InvalidTarget, o, "bad field ID " + o.id);
    if (record.column(o.id)) fail(ErrorKind::DuplicateId, o, "field " + o.id + " exists");
}

void nullLinksTo(State& s, const Path& list, const Id& id) {
    for (const auto& cell : linkCellsInto(s, list)) {
        Value& v = mustValue(s.value, cell);
        if (v.text == id) v = Value::nullLink();
    }
}

// ------------------------------------------------------------ value ops

void doWrite(State& s, const Operation& o) {
    requireConcrete(o);
    auto at = resolvePath(s, o.target);
    const bool ok = (at.type->kind == TypeKind::String && o.value.kind == ValueKind::String) ||
                    (at.type->kind == TypeKind::Number && o.value.kind == ValueKind::Number);
    if (!ok) fail(ErrorKind::TypeMismatch, o, "write needs an atom of the field's type");
    mustValue(s.value, o.target) = o.value;
}

void doInsert(State& s, const Operation& o) {
    requireConcrete(o);
    auto at = resolvePath(s, o.target);
    if (!at.type->isList()) fail(ErrorKind::TypeMismatch, o, "not a list");
    if (!isValidId(o.id) || o.id == kElementType) fail(ErrorKind::InvalidTarget, o, "bad element ID " + o.id);
    Value& list = mustValue(s.value, o.target);
    Slot fresh{o.id, initialValue(at.type->elem())};
    if (auto i = list.slotIndex(o.id)) {
        if (!list.slots[*i].value.isTombstone()) fail(ErrorKind::DuplicateId, o, "element " + o.id + " exists");
        // reviving a tombstone in place keeps its position
        if (o.kind == OpKind::Insert && o.anchor == o.id) {
            list.slots[*i] = std::move(fresh);
            return;
        }
        list.slots.erase(list.slots.begin() + static_cast<std::ptrdiff_t>(*i));
    }
    if (o.kind == OpKind::Append) {
        list.slots.push_back(std::move(fresh));
        return;
    }
    auto anchor = list.slotIndex(o.anchor);
    if (!anchor) fail(ErrorKind::MissingAnchor, o, "no element " + o.anchor);
    list.slots.insert(list.slots.begin() + static_cast<std::ptrdiff_t>(*anchor), std::move(fresh));
}

void doDelete(State& s, const Operation& o) {
    requireConcrete(o);
    auto at = resolvePath(s, o.target);
    if (!at.type->isList()) fail(ErrorKind::TypeMismatch, o, "not a list");
    Value& list = mustValue(s.value, o.target);
    Slot* slot = list.slot(o.id);
    if (!slot) fail(ErrorKind::PathNotFound, o, "no element " + o.id);
    if (slot->value.isTombstone()) fail(ErrorKind::TombstoneAtPath, o, "element " + o.id + " already deleted");
    slot->value = Value::tombstone();
    nullLinksTo(s, o.target, o.id);
}

void doMove(State& s, const Operation& o) {
    requireConcrete(o);
    if (o.target.empty() || o.dest.empty() || !(o.target.parent() == o.dest.parent()))
        fail(ErrorKind::InvalidTarget, o, "move stays within one list");
    s = executeMoveMerge(s, o.target, o.dest);
}

// ------------------------------------------------------------ type ops

void doDefine(State& s, const Operation& o) {
    Type& t = requireTypePath(s, o);
    if (o.type.kind == TypeKind::Bottom || !wellFormed(o.type)) fail(ErrorKind::TypeMismatch, o, "ill-formed type");
    const Value init = initialValue(o.type);
    forEachInstance(s.value, o.target, [&](Value& v) { v = init; });
    t = o.type;
}

void doConvert(State& s, const Operation& o) {
    Type& t = requireTypePath(s, o);
    if (!t.isAtomic() || !o.type.isAtomic()) fail(ErrorKind::TypeMismatch, o, "Convert works on atoms");
    forEachInstance(s.value, o.target, [&](Value& v) { v = convertAtom(v, o.type.kind); });
    t = o.type;
}

void doRename(State& s, const Operation& o) {
    requireTypePath(s, o);
    if (o.target.empty()) fail(ErrorKind::InvalidTarget, o, "the root has no name");
    Type* parent = typeAt(s.type, o.target.parent());
    if (!parent->isRecord()) fail(ErrorKind::InvalidTarget, o, "only record fields have names");
    parent->column(o.target.back())->name = o.name;
}

void doInsertCol(State& s, const Operation& o) {
    Type& r = requireTypePath(s, o);
    if (!r.isRecord()) fail(ErrorKind::TypeMismatch, o, "not a record");
    checkFreshColumnId(o, r);
    std::size_t at = r.columns.size();
    if (o.kind == OpKind::InsertCol) {
        auto i = r.columnIndex(o.anchor);
        if (!i) fail(ErrorKind::MissingAnchor, o, "no field " + o.anchor);
        at = *i;
    }
    forEachInstance(s.value, o.target, [&](Value& v) {
        v.slots.insert(v.slots.begin() + static_cast<std::ptrdiff_t>(at), Slot{o.id, Value::record()});
    });
    r.columns.insert(r.columns.begin() + static_cast<std::ptrdiff_t>(at), Column{o.id, o.id, Type::unit()});
}

void doDeleteCol(State& s, const Operation& o) {
    Type& r = requireTypePath(s, o);
    if (!r.isRecord()) fail(ErrorKind::TypeMismatch, o, "not a record");
    auto i = r.columnIndex(o.id);
    if (!i) fail(ErrorKind::PathNotFound, o, "no field " + o.id);
    const auto at = static_cast<std::ptrdiff_t>(*i);
    forEachInstance(s.value, o.target, [&](Value& v) { v.slots.erase(v.slots.begin() + at); });
    r.columns.erase(r.columns.begin() + at);
}

Slot takeSlot(Value& record, const Id& id) {
    auto i = record.slotIndex(id);
    Slot out = std::move(record.slots[*i]);
    record.slots.erase(record.slots.begin() + static_cast<std::ptrdiff_t>(*i));
    return out;
}

Column takeColumn(Type& record, const Id& id) {
    auto i = record.columnIndex(id);
    Column out = std::move(record.columns[*i]);
    record.columns.erase(record.columns.begin() + static_cast<std::ptrdiff_t>(*i));
    return out;
}

void doMoveCol(State& s, const Operation& o) {
    requireTypePath(s, o);
    if (o.target.empty() || o.target.back() == kElementType) fail(ErrorKind::InvalidTarget, o, "not a field");
    const Path r = o.target.parent();
    const Id c = o.target.back();
    const Path& d = o.dest;
    Type* rt = typeAt(s.type, r);
    Type* dt = typeAt(s.type, d);
    if (!rt || !rt->isRecord()) fail(ErrorKind::InvalidTarget, o, "not a field");
    if (!dt || !dt->isRecord() || !(typePathOf(s.type, d) == d))
        fail(ErrorKind::InvalidTarget, o, "destination is not a record type path");

    if (d == r) {
        forEachInstance(s.value, r, [&](Value& v) { v.slots.push_back(takeSlot(v, c)); });
        rt->columns.push_back(takeColumn(*rt, c));
        return;
    }
    if (dt->column(c)) fail(ErrorKind::DuplicateId, o, "destination already has " + c);
    if (d.size() == r.size() + 1 && d.startsWith(r)) {
        if (d.back() == c) fail(ErrorKind::InvalidTarget, o, "cannot move a field into itself");
        forEachInstance(s.value, r, [&](Value& v) {
            Slot moved = takeSlot(v, c);
            v.slot(d.back())->value.slots.push_back(std::move(moved));
        });
        Column moved = takeColumn(*rt, c);
        typeAt(s.type, d)->columns.push_back(std::move(moved));
        return;
    }
    if (r.size() == d.size() + 1 && r.startsWith(d)) {
        const Id k = r.back();
        forEachInstance(s.value, d, [&](Value& v) {
            Slot moved = takeSlot(v.slot(k)->value, c);
            v.slots.push_back(std::move(moved));
        });
        Column moved = takeColumn(*rt, c);
        typeAt(s.type, d)->columns.push_back(std::move(moved));
        return;
    }
    fail(ErrorKind::InvalidTarget, o, "fields move to the same, containing or a contained record");
}

void doListOf(State& s, const Operation& o) {
    Type& t = requireTypePath(s, o);
    forEachInstance(s.value, o.target, [&](Value& v) {
        v = Value::list({Slot{Id(kWrapId), std::move(v)}});
    });
    t = Type::list(std::move(t));
}

void doIntoFirst(State& s, const Operation& o) {
    Type& t = requireTypePath(s, o);
    if (!t.isList()) fail(ErrorKind::TypeMismatch, o, "not a list");
    const Value init = initialValue(t.elem());
    forEachInstance(s.value, o.target, [&](Value& v) {
        for (auto& e : v.slots) {
            if (!e.value.isTombstone()) {
                Value first = std::move(e.value);
                v = std::move(first);
                return;
            }
        }
        v = init;
    });
    Type elem = std::move(t.elem());
    t = std::move(elem);
}

void doRecordOf(State& s, const Operation& o) {
    Type& t = requireTypePath(s, o);
    if (!isValidId(o.id) || isReservedId(o.id)) fail(ErrorKind::InvalidTarget, o, "bad field ID " + o.id);
    forEachInstance(s.value, o.target, [&](Value& v) { v = Value::record({Slot{o.id, std::move(v)}}); });
    t = Type::record({Column{o.id, o.id, std::move(t)}});
}

void doIntoField(State& s, const Operation& o) {
    Type& t = requireTypePath(s, o);
    if (!t.isRecord()) fail(ErrorKind::TypeMismatch, o, "not a record");
    if (!t.column(o.id)) fail(ErrorKind::PathNotFound, o, "no field " + o.id);
    forEachInstance(s.value, o.target, [&](Value& v) {
        Value inner = std::move(v.slot(o.id)->value);
        v = std::move(inner);
    });
    Type inner = std::move(t.column(o.id)->type);
    t = std::move(inner);
}

// ------------------------------------------------------------ after type ops

/// Type paths of the subtree the operation itself (re)defined; links and
/// formulas there are already expressed in terms of the new state.
std::optional<Path> freshSubtree(const Operation& o) {
    switch (o.kind) {
        case OpKind::Define:
        case OpKind::LinkType:
        case OpKind::Split: return o.target;
        default: return std::nullopt;
    }
}

void visitTypes(Type& t, Path& at, const std::function<void(Type&, const Path&)>& f) {
    f(t, at);
    if (t.isList()) {
        at = at.child(Id(kElementType));
        visitTypes(t.elem(), at, f);
        at = at.parent();
    } else if (t.isRecord()) {
        for (auto& c : t.columns) {
            at = at.child(c.id);
            visitTypes(c.type, at, f);
            at = at.parent();
        }
    }
}

void remapLinkRanges(const State& before, State& after, const Operation& o) {
    const auto fresh = freshSubtree(o);
    Path at;
    visitTypes(after.type, at, [&](Type& t, const Path& p) {
        if (t.kind != TypeKind::Link || (fresh && p.startsWith(*fresh))) return;
        auto range = mapForward(before, o, Address{t.range, false, false});
        if (!range) fail(ErrorKind::InvalidTarget, o, "would orphan the links at " + p.str());
        t.range = *range;
    });
}

void rewriteFormulas(const State& before, State& after, const Operation& o) {
    const auto fresh = freshSubtree(o);
    Path at;
    visitTypes(after.type, at, [&](Type& t, const Path& p) {
        if (t.kind != TypeKind::Formula || !t.formula || (fresh && p.startsWith(*fresh))) return;
        t.formula = std::make_shared<const Formula>(rewriteForward(*t.formula, o, before));
    });
}

void dispatch(State& s, const Operation& o) {
    switch (o.kind) {
        case OpKind::Noop: return;
        case OpKind::Write: return doWrite(s, o);
        case OpKind::Insert:
        case OpKind::Append: return doInsert(s, o);
        case OpKind::Delete: return doDelete(s, o);
        case OpKind::Move: return doMove(s, o);
        case OpKind::LinkSet: requireConcrete(o); s = executeLinkSet(s, o.target, o.id); return;
        case OpKind::DeletePresent: s = executeDeleteWhere(s, o.target, true); return;
        case OpKind::DeleteAbsent: s = executeDeleteWhere(s, o.target, false); return;
        case OpKind::Define: return doDefine(s, o);
        case OpKind::Convert: return doConvert(s, o);
        case OpKind::Rename: return doRename(s, o);
        case OpKind::InsertCol:
        case OpKind::AppendCol: return doInsertCol(s, o);
        case OpKind::DeleteCol: return doDeleteCol(s, o);
        case OpKind::MoveCol: return doMoveCol(s, o);
        case OpKind::ListOf: return doListOf(s, o);
        case OpKind::IntoFirst: return doIntoFirst(s, o);
        case OpKind::RecordOf: return doRecordOf(s, o);
        case OpKind::IntoField: return doIntoField(s, o);
        case OpKind::LinkType:
            requireTypePath(s, o);
            s = executeLinkType(s, o.target, o.dest);
            return;
        case OpKind::Split: s = executeSplit(s, o.target, o.dest); return;
        case OpKind::Join: s = executeJoin(s, o.target); return;
    }
}

// ------------------------------------------------------------ inversion

Timeline reinsertElement(const State& s, const Path& list, const Id& id) {
    const Value& lv = *valueAt(s.value, list);
    const Type& elem = typeAt(s.type, list)->elem();
    const auto i = *lv.slotIndex(id);
    // the tombstone left behind keeps the position
    Timeline out{op::insert(list, id, id)};
    auto restore = restoreOps(initialValue(elem), lv.slots[i].value, elem, list.child(id));
    out.insert(out.end(), restore.begin(), restore.end());
    for (const auto& cell : linkCellsInto(s, list))
        if (valueAt(s.value, cell)->text == id) out.push_back(op::linkSet(cell, id));
    return out;
}

void append(Timeline& out, const Timeline& more) { out.insert(out.end(), more.begin(), more.end()); }

/// Re-create a column `id` of record type path `r`, as it was in `s`,
/// positioned before its old successor.
Timeline recreateColumn(const State& s, const Path& r, const Id& id, bool restoreCells) {
    const Type& rt = *typeAt(s.type, r);
    const auto i = *rt.columnIndex(id);
    const Column& col = rt.columns[i];
    Timeline out;
    if (i + 1 < rt.columns.size())
        out.push_back(op::insertCol(r, id, rt.columns[i + 1].id));
    else
        out.push_back(op::appendCol(r, id));
    if (col.name != id) out.push_back(op::rename(r.child(id), col.name));
    if (!(col.type == Type::unit())) out.push_back(op::define(r.child(id), col.type));
    if (restoreCells) {
        for (const auto& inst : instances(s.value, r)) {
            const Value& cell = valueAt(s.value, inst)->slot(id)->value;
            append(out, restoreOps(initialValue(col.type), cell, col.type, inst.child(id)));
        }
    }
    return out;
}

Timeline restoreInstances(const State& s, const Path& p, const Type& t,
                          const std::function<Value(const Path&)>& current) {
    Timeline out;
    for (const auto& inst : instances(s.value, p))
        append(out, restoreOps(current(inst), *valueAt(s.value, inst), t, inst));
    return out;
}

Timeline invertJoin(const State& s, const Operation& o) {
    const Path& lc = o.target;
    const Path table = lc.parent();
    const Id c = lc.back();
    const Type& rowType = *typeAt(s.type, table);
    const Column& link = *rowType.column(c);
    const Path range = link.type.range;
    const Type& rangeType = *typeAt(s.type, range);
    const auto& rangeCols = rangeType.elem().columns;
    const State after = execute(s, o, ExecuteOptions{false});

    // the short route: Split recreates it when the layout lines up
    if (!rangeCols.empty()) {
        Timeline viaSplit{op::split(table.child(rangeCols.front().id), range)};
        if (link.name != rangeCols.front().name) viaSplit.push_back(op::rename(lc, link.name));
        try {
            State back = executeTimeline(after, viaSplit, ExecuteOptions{false});
            if (equivalent(back, s)) return viaSplit;
        } catch (const Error&) {
        }
    }

    Timeline out = recreateColumn(s, range.parent(), range.back(), false);
    append(out, restoreOps(Value::list(), *valueAt(s.value, range), rangeType, range));
    const auto ci = *rowType.columnIndex(c);
    Id anchor;
    if (!rangeCols.empty())
        anchor = rangeCols.front().id;
    else if (ci + 1 < rowType.columns.size())
        anchor = rowType.columns[ci + 1].id;
    out.push_back(anchor.empty() ? op::appendCol(table, c) : op::insertCol(table, c, anchor));
    if (link.name != c) out.push_back(op::rename(lc, link.name));
    out.push_back(op::linkType(lc, range));
    for (const auto& cell : instances(s.value, lc)) {
        const Value& v = *valueAt(s.value, cell);
        if (!v.isNullLink()) out.push_back(op::linkSet(cell, v.text));
    }
    for (const auto& col : rangeCols) out.push_back(op::deleteCol(table, col.id));
    return out;
}

}  // namespace

std::string numberToString(double n) {
    if (std::isnan(n)) return "";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n);
    return std::string(buf, end);
}

double stringToNumber(std::string_view s) {
    static const std::regex decimal(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
    if (!std::regex_match(s.begin(), s.end(), decimal)) return std::nan("");
    if (s.front() == '+') s.remove_prefix(1);
    double out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc::result_out_of_range) return s.front() == '-' ? -HUGE_VAL : HUGE_VAL;
    if (ec != std::errc{}) return std::nan("");
    return out;
}

Value convertAtom(const Value& v, TypeKind to) {
    if (to == TypeKind::String) return v.kind == ValueKind::String ? v : Value::string(numberToString(v.num));
    return v.kind == ValueKind::Number ? v : Value::number(stringToNumber(v.text));
}

State execute(const State& s, const Operation& o, const ExecuteOptions& options) {
    if (o.isNoop()) return s;
    State out = s;
    dispatch(out, o);
    if (o.isTypeOp()) {
        remapLinkRanges(s, out, o);
        if (options.rewriteFormulas) rewriteFormulas(s, out, o);
    }
    checkReferentialIntegrity(out);
    return out;
}

State executeTimeline(const State& s, const Timeline& ops, const ExecuteOptions& options) {
    State cur = s;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        try {
            cur = execute(cur, ops[i], options);
        } catch (const Error& e) {
            throw TimelineError(e, i);
        }
    }
    return cur;
}

bool isValidOn(const State& s, const Operation& o) {
    try {
        execute(s, o, ExecuteOptions{false});
        return true;
    } catch (const Error&) {
        return false;
    }
}

Timeline restoreOps(const Value& current, const Value& target, const Type& type, const Path& at) {
    Timeline out;
    switch (type.kind) {
        case TypeKind::String:
        case TypeKind::Number:
            if (!(current == target)) out.push_back(op::write(at, target));
            break;
        case TypeKind::Link:
            if (current.text != target.text) out.push_back(op::linkSet(at, target.text));
            break;
        case TypeKind::Record:
            for (const auto& col : type.columns) {
                const Slot* c = current.slot(col.id);
                const Slot* t = target.slot(col.id);
                if (c && t) append(out, restoreOps(c->value, t->value, col.type, at.child(col.id)));
            }
            break;
        case TypeKind::List: {
            const Type& elem = type.elem();
            std::vector<Id> wanted;
            for (const auto& sl : target.slots)
                if (!sl.value.isTombstone()) wanted.push_back(sl.id);
            std::vector<Id> kept;
            for (const auto& sl : current.slots)
                if (!sl.value.isTombstone() && target.live(sl.id)) kept.push_back(sl.id);
            std::vector<Id> keptInTargetOrder;
            for (const auto& id : wanted)
                if (current.live(id)) keptInTargetOrder.push_back(id);
            // surviving elements out of order are deleted and re-created
            const bool ordered = kept == keptInTargetOrder;
            Value cur = current;
            for (auto& sl : cur.slots) {
                if (sl.value.isTombstone()) continue;
                if (!target.live(sl.id) || !ordered) {
                    out.push_back(op::del(at, sl.id));
                    sl.value = Value::tombstone();
                }
            }
            // tombstones the current list never had are recreated too
            std::vector<Id> placed, ghosts;
            for (const auto& sl : target.slots) {
                if (!sl.value.isTombstone()) placed.push_back(sl.id);
                else if (!cur.slotIndex(sl.id)) {
                    placed.push_back(sl.id);
                    ghosts.push_back(sl.id);
                }
            }
            // insertions run back to front so each anchor already exists
            std::optional<Id> next;
            for (auto it = placed.rbegin(); it != placed.rend(); ++it) {
                if (!cur.live(*it)) out.push_back(next ? op::insert(at, *it, *next) : op::append(at, *it));
                next = *it;
            }
            for (const auto& id : wanted) {
                const Value* have = cur.live(id);
                append(out, restoreOps(have ? *have : initialValue(elem), *target.live(id), elem, at.child(id)));
            }
            for (const auto& id : ghosts) out.push_back(op::del(at, id));
            break;
        }
        default:
            break;
    }
    return out;
}

Timeline invert(const State& s, const Operation& o) {
    switch (o.kind) {
        case OpKind::Noop: return {};
        case OpKind::Write: return {op::write(o.target, *valueAt(s.value, o.target))};
        case OpKind::Insert:
        case OpKind::Append: return {op::del(o.target, o.id)};
        case OpKind::Delete: return reinsertElement(s, o.target, o.id);
        case OpKind::Move: {
            const Path list = o.target.parent();
            const Type& elem = typeAt(s.type, list)->elem();
            Timeline out = reinsertElement(s, list, o.target.back());
            append(out, restoreOps(*valueAt(s.value, o.target), *valueAt(s.value, o.dest), elem, o.dest));
            return out;
        }
        case OpKind::LinkSet: return {op::linkSet(o.target, valueAt(s.value, o.target)->text)};
        case OpKind::DeletePresent:
        case OpKind::DeleteAbsent: {
            Timeline out;
            for (const auto& [list, id] : deleteWhereRows(s, o.target, o.kind == OpKind::DeletePresent))
                append(out, reinsertElement(s, list, id));
            return out;
        }
        case OpKind::Define:
        case OpKind::LinkType: {
            const Type& old = *typeAt(s.type, o.target);
            Timeline out{op::define(o.target, old)};
            const Value init = initialValue(old);
            append(out, restoreInstances(s, o.target, old, [&](const Path&) { return init; }));
            return out;
        }
        case OpKind::Convert: {
            const Type& old = *typeAt(s.type, o.target);
            Timeline out{op::convert(o.target, old)};
            append(out, restoreInstances(s, o.target, old, [&](const Path& p) {
                return convertAtom(convertAtom(*valueAt(s.value, p), o.type.kind), old.kind);
            }));
            return out;
        }
        case OpKind::Rename: {
            const Type& parent = *typeAt(s.type, o.target.parent());
            return {op::rename(o.target, parent.column(o.target.back())->name)};
        }
        case OpKind::InsertCol:
        case OpKind::AppendCol: return {op::deleteCol(o.target, o.id)};
        case OpKind::DeleteCol: return recreateColumn(s, o.target, o.id, true);
        case OpKind::MoveCol: {
            const Path r = o.target.parent();
            const Id c = o.target.back();
            const Type& rt = *typeAt(s.type, r);
            Timeline out;
            if (!(o.dest == r)) out.push_back(op::moveCol(o.dest.child(c), r));
            for (auto i = *rt.columnIndex(c) + 1; i < rt.columns.size(); ++i)
                out.push_back(op::moveCol(r.child(rt.columns[i].id), r));
            return out;
        }
        case OpKind::ListOf: return {op::intoFirst(o.target)};
        case OpKind::IntoFirst: {
            const Type& old = *typeAt(s.type, o.target);
            Timeline out{op::listOf(o.target)};
            const Value init = initialValue(old.elem());
            append(out, restoreInstances(s, o.target, old, [&](const Path& p) {
                const Value& list = *valueAt(s.value, p);
                for (const auto& e : list.slots)
                    if (!e.value.isTombstone()) return Value::list({Slot{Id(kWrapId), e.value}});
                return Value::list({Slot{Id(kWrapId), init}});
            }));
            // links ranging into the list followed it into the wrapper
            Timeline relinks;
            for (const auto& lc : linkColumns(s.type)) {
                if (!covers(o.target, lc.range) || covers(o.target, lc.column)) continue;
                out.insert(out.begin() + 1, op::linkType(lc.column, lc.range));
                for (const auto& cell : instances(s.value, lc.column))
                    if (const Value* v = valueAt(s.value, cell); v && !v->isNullLink())
                        relinks.push_back(op::linkSet(cell, v->text));
            }
            append(out, relinks);
            return out;
        }
        case OpKind::RecordOf: return {op::intoField(o.target, o.id)};
        case OpKind::IntoField: {
            const Type& old = *typeAt(s.type, o.target);
            const auto fi = *old.columnIndex(o.id);
            Timeline out{op::recordOf(o.target, o.id)};
            for (std::size_t i = 0; i < old.columns.size(); ++i) {
                const Column& col = old.columns[i];
                if (i < fi) out.push_back(op::insertCol(o.target, col.id, o.id));
                if (i > fi) out.push_back(op::appendCol(o.target, col.id));
            }
            for (const auto& col : old.columns) {
                if (col.name != col.id) out.push_back(op::rename(o.target.child(col.id), col.name));
                if (col.id != o.id && !(col.type == Type::unit()))
                    out.push_back(op::define(o.target.child(col.id), col.type));
            }
            append(out, restoreInstances(s, o.target, old, [&](const Path& p) {
                Value v = initialValue(old);
                v.slot(o.id)->value = valueAt(s.value, p)->slot(o.id)->value;
                return v;
            }));
            return out;
        }
        case OpKind::Split: {
            Timeline out{op::join(o.target)};
            const Type* parent = typeAt(s.type, o.dest.parent());
            if (parent && parent->isRecord() && parent->column(o.dest.back()))
                append(out, recreateColumn(s, o.dest.parent(), o.dest.back(), true));
            return out;
        }
        case OpKind::Join: return invertJoin(s, o);
    }
    return {};
}

}  // namespace baseline
