#include "baseline/query.hpp"

#include "baseline/differencing.hpp"
#include "baseline/error.hpp"
#include "baseline/execute.hpp"
#include "baseline/relational.hpp"
#include "baseline/remap.hpp"

#include <algorithm>
#include <vector>

namespace baseline {

namespace {

constexpr std::size_t kMaxFormulaDepth = 64;

using Stack = std::vector<const Formula*>;

Value evaluate(const State& s, const Formula& f, Stack& stack);

Value materializeValue(const State& s, const Value& v, const Type& t, Stack& stack) {
    if (v.isTombstone()) return v;
    switch (t.kind) {
        case TypeKind::Formula: {
            if (!t.formula) return v;
            if (std::find(stack.begin(), stack.end(), t.formula.get()) != stack.end() ||
                stack.size() >= kMaxFormulaDepth)
                throw Error(ErrorKind::CycleDetected, "formula reads its own result");
            return evaluate(s, *t.formula, stack);
        }
        case TypeKind::List: {
            Value out = v;
            for (auto& e : out.slots) e.value = materializeValue(s, e.value, t.elem(), stack);
            return out;
        }
        case TypeKind::Record: {
            Value out = v;
            for (std::size_t i = 0; i < out.slots.size() && i < t.columns.size(); ++i)
                out.slots[i].value = materializeValue(s, out.slots[i].value, t.columns[i].type, stack);
            return out;
        }
        default: return v;
    }
}

Value evaluate(const State& s, const Formula& f, Stack& stack) {
    stack.push_back(&f);
    const State scratch = executeTimeline(s, f.ops, ExecuteOptions{false});
    auto at = resolvePath(scratch, f.returnPath);
    if (!at.value) throw Error(ErrorKind::PathNotFound, "formula returns a type path " + f.returnPath.str());
    Value out = materializeValue(scratch, *at.value, *at.type, stack);
    stack.pop_back();
    return out;
}

void collectFormulas(const Type& t, const Path& at, std::vector<Path>& out) {
    switch (t.kind) {
        case TypeKind::Formula: out.push_back(at); break;
        case TypeKind::List: collectFormulas(t.elem(), at.child(Id(kElementType)), out); break;
        case TypeKind::Record:
            for (const auto& c : t.columns) collectFormulas(c.type, at.child(c.id), out);
            break;
        default: break;
    }
}

/// Paths an operation reads or writes.
std::vector<Path> footprint(const Operation& o) {
    switch (o.kind) {
        case OpKind::Noop:
        case OpKind::Rename: return {};
        case OpKind::Insert:
        case OpKind::Append:
        case OpKind::Delete:
        case OpKind::InsertCol:
        case OpKind::AppendCol:
        case OpKind::DeleteCol: return {o.target.child(o.id)};
        case OpKind::Move:
        case OpKind::LinkType: return {o.target, o.dest};
        case OpKind::MoveCol: return {o.target, o.dest.child(o.target.back())};
        case OpKind::Split: return {o.target.parent(), o.dest};
        case OpKind::Join: return {o.target.parent()};
        default: return {o.target};
    }
}

bool overlaps(const Path& a, const Path& b) {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i] && a[i] != kElementType && b[i] != kElementType) return false;
    return true;
}

}  // namespace

std::vector<std::pair<Path, Id>> deleteWhereRows(const State& s, const Path& column, bool present) {
    if (column.size() < 2 || column[column.size() - 2] != kElementType)
        throw Error(ErrorKind::InvalidTarget, column.str() + " is not a table column");
    const Type* colType = typeAt(s.type, column);
    if (!colType) throw Error(ErrorKind::PathNotFound, column.str());
    const Path table = column.prefix(column.size() - 2);
    const Type* tableType = typeAt(s.type, table);
    if (!tableType || !tableType->isList() || !tableType->elem().isRecord())
        throw Error(ErrorKind::TypeMismatch, table.str() + " is not a table");
    const Id& col = column.back();
    std::vector<std::pair<Path, Id>> out;
    for (const auto& list : instances(s.value, table)) {
        const Value& rows = *valueAt(s.value, list);
        for (const auto& row : rows.slots) {
            if (row.value.isTombstone()) continue;
            const bool initial = isInitial(row.value.slot(col)->value, *colType);
            if (initial != present) out.emplace_back(list, row.id);
        }
    }
    return out;
}

State executeDeleteWhere(const State& s, const Path& column, bool present) {
    State out = s;
    for (const auto& [list, id] : deleteWhereRows(s, column, present)) {
        valueAt(out.value, list)->slot(id)->value = Value::tombstone();
        for (const auto& cell : linkCellsInto(out, list)) {
            Value& v = *valueAt(out.value, cell);
            if (v.text == id) v = Value::nullLink();
        }
    }
    return out;
}

Value evaluateFormula(const State& s, const Formula& f) {
    Stack stack;
    return evaluate(s, f, stack);
}

std::vector<Path> formulaFields(const Type& root) {
    std::vector<Path> out;
    collectFormulas(root, {}, out);
    return out;
}

Value materialize(const State& s) {
    Stack stack;
    return materializeValue(s, s.value, s.type, stack);
}

Timeline transferIntoFormula(const Diff& d, bool fromSideA, const Path& returnPath, const Path& at,
                             const Id& field) {
    const State sculpted = d.end(fromSideA ? Side::A : Side::B);
    if (!resolvePath(sculpted, returnPath).value)
        throw Error(ErrorKind::PathNotFound, "return path " + returnPath.str() + " is a type path");
    Formula f{withoutNoops(d.branch(fromSideA ? Side::A : Side::B)), returnPath};
    return {op::appendCol(at, field), op::define(at.child(field), Type::formulaOf(std::move(f)))};
}

Formula rewriteBackward(const Formula& f, const Timeline& schemaOps, const State& before) {
    std::vector<State> states{before};
    for (const auto& o : schemaOps) states.push_back(execute(states.back(), o, ExecuteOptions{false}));

    Timeline ops = f.ops;
    Path ret = f.returnPath;
    for (std::size_t k = schemaOps.size(); k-- > 0;) {
        const Operation& schema = schemaOps[k];
        if (!schema.isTypeOp()) continue;
        try {
            ops = withoutNoops(retract(states[k], Timeline{schema}, ops).pre);
        } catch (const DependencyFailure&) {
            throw DependencyFailure(k, "formula depends on " + std::string(opName(schema.kind)) + " at " +
                                           schema.target.str());
        }
        auto back = mapBackward(states[k], schema, Address{ret, false, false});
        if (!back) throw DependencyFailure(k, "formula returns data created by " + std::string(opName(schema.kind)));
        ret = *back;
    }
    return Formula{std::move(ops), std::move(ret)};
}

Operation rewriteBackward(const Operation& defineFormula, const Timeline& schemaOps, const State& before) {
    if (defineFormula.kind != OpKind::Define || defineFormula.type.kind != TypeKind::Formula ||
        !defineFormula.type.formula)
        throw Error(ErrorKind::TypeMismatch, "not a formula definition");
    Operation out = defineFormula;
    out.type = Type::formulaOf(rewriteBackward(*defineFormula.type.formula, schemaOps, before));
    return out;
}

Formula rewriteForward(const Formula& f, const Operation& typeOp, const State& before) {
    if (!typeOp.isTypeOp() || typeOp.kind == OpKind::Rename) return f;
    std::vector<Path> reads{f.returnPath};
    for (const auto& o : f.ops)
        for (auto& p : footprint(o)) reads.push_back(std::move(p));

    Timeline prefix;
    for (const auto& inv : invert(before, typeOp)) {
        const auto touched = footprint(inv);
        const bool relevant = std::any_of(touched.begin(), touched.end(), [&](const Path& t) {
            return std::any_of(reads.begin(), reads.end(), [&](const Path& r) { return overlaps(t, r); });
        });
        if (relevant) prefix.push_back(inv);
    }
    if (prefix.empty()) return f;
    Formula out{std::move(prefix), f.returnPath};
    out.ops.insert(out.ops.end(), f.ops.begin(), f.ops.end());
    return out;
}

}  // namespace baseline
