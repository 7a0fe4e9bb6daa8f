#include "baseline/model.hpp"

#include "baseline/error.hpp"
#include "baseline/operation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace baseline {

bool isReservedId(std::string_view id) noexcept {
    return id == kElementType || id == kWrapId;
}

bool isValidId(std::string_view id) noexcept {
    if (isReservedId(id)) return true;
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    });
}

namespace {

struct SplitId {
    std::string_view tag;
    std::uint64_t counter = 0;
    bool ok = false;
};

SplitId splitId(std::string_view id) {
    auto dash = id.rfind('-');
    if (dash == std::string_view::npos || dash + 1 >= id.size()) return {};
    SplitId out;
    auto digits = id.substr(dash + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out.counter);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return {};
    out.tag = id.substr(0, dash);
    out.ok = true;
    return out;
}

}  // namespace

bool idLess(std::string_view a, std::string_view b) {
    auto sa = splitId(a);
    auto sb = splitId(b);
    if (sa.ok && sb.ok) {
        if (sa.tag != sb.tag) return sa.tag < sb.tag;
        return sa.counter < sb.counter;
    }
    return a < b;
}

// ---------------------------------------------------------------- Path

Path Path::prefix(std::size_t n) const {
    n = std::min(n, segments_.size());
    return Path(std::vector<Id>(segments_.begin(), segments_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Path Path::suffix(std::size_t from) const {
    from = std::min(from, segments_.size());
    return Path(std::vector<Id>(segments_.begin() + static_cast<std::ptrdiff_t>(from), segments_.end()));
}

Path Path::child(Id id) const {
    auto out = segments_;
    out.push_back(std::move(id));
    return Path(std::move(out));
}

Path Path::operator+(const Path& rhs) const {
    auto out = segments_;
    out.insert(out.end(), rhs.segments_.begin(), rhs.segments_.end());
    return Path(std::move(out));
}

bool Path::startsWith(const Path& prefix) const {
    if (prefix.size() > size()) return false;
    return std::equal(prefix.begin(), prefix.end(), segments_.begin());
}

bool Path::hasWildcard() const {
    return std::any_of(segments_.begin(), segments_.end(), [](const Id& s) { return s == kElementType; });
}

std::string Path::str() const {
    if (segments_.empty()) return ".";
    std::string out;
    for (const auto& s : segments_) {
        out += '.';
        out += s;
    }
    return out;
}

// ---------------------------------------------------------------- Type

Type Type::list(Type element) {
    Type t = of(TypeKind::List);
    t.element = Box<Type>(std::move(element));
    return t;
}

Type Type::record(std::vector<Column> columns) {
    Type t = of(TypeKind::Record);
    t.columns = std::move(columns);
    return t;
}

Type Type::link(Path range) {
    Type t = of(TypeKind::Link);
    t.range = std::move(range);
    return t;
}

Type Type::formulaOf(Formula f) {
    Type t = of(TypeKind::Formula);
    t.formula = std::make_shared<const Formula>(std::move(f));
    return t;
}

const Column* Type::column(std::string_view id) const {
    for (const auto& c : columns)
        if (c.id == id) return &c;
    return nullptr;
}

Column* Type::column(std::string_view id) {
    for (auto& c : columns)
        if (c.id == id) return &c;
    return nullptr;
}

std::optional<std::size_t> Type::columnIndex(std::string_view id) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].id == id) return i;
    return std::nullopt;
}

bool Type::operator==(const Type& rhs) const {
    if (kind != rhs.kind) return false;
    switch (kind) {
        case TypeKind::List: return elem() == rhs.elem();
        case TypeKind::Record: return columns == rhs.columns;
        case TypeKind::Link: return range == rhs.range;
        case TypeKind::Formula:
            if (formula == rhs.formula) return true;
            if (!formula || !rhs.formula) return false;
            return *formula == *rhs.formula;
        default: return true;
    }
}

// ---------------------------------------------------------------- Value

Value Value::string(std::string s) {
    Value v;
    v.kind = ValueKind::String;
    v.text = std::move(s);
    return v;
}

Value Value::number(double n) {
    Value v;
    v.kind = ValueKind::Number;
    v.num = n;
    return v;
}

Value Value::list(std::vector<Slot> elements) {
    Value v;
    v.kind = ValueKind::List;
    v.slots = std::move(elements);
    return v;
}

Value Value::record(std::vector<Slot> fields) {
    Value v;
    v.kind = ValueKind::Record;
    v.slots = std::move(fields);
    return v;
}

Value Value::link(Id target) {
    Value v;
    v.kind = ValueKind::Link;
    v.text = std::move(target);
    return v;
}

Value Value::tombstone() {
    Value v;
    v.kind = ValueKind::Tombstone;
    return v;
}

const Slot* Value::slot(std::string_view id) const {
    for (const auto& s : slots)
        if (s.id == id) return &s;
    return nullptr;
}

Slot* Value::slot(std::string_view id) {
    for (auto& s : slots)
        if (s.id == id) return &s;
    return nullptr;
}

std::optional<std::size_t> Value::slotIndex(std::string_view id) const {
    for (std::size_t i = 0; i < slots.size(); ++i)
        if (slots[i].id == id) return i;
    return std::nullopt;
}

const Value* Value::live(std::string_view id) const {
    const Slot* s = slot(id);
    return s && !s->value.isTombstone() ? &s->value : nullptr;
}

Value* Value::live(std::string_view id) {
    Slot* s = slot(id);
    return s && !s->value.isTombstone() ? &s->value : nullptr;
}

namespace {

bool sameNumber(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return a == b;
}

}  // namespace

bool Value::operator==(const Value& rhs) const {
    if (kind != rhs.kind) return false;
    switch (kind) {
        case ValueKind::String:
        case ValueKind::Link: return text == rhs.text;
        case ValueKind::Number: return sameNumber(num, rhs.num);
        case ValueKind::List:
        case ValueKind::Record: return slots == rhs.slots;
        case ValueKind::Tombstone: return true;
    }
    return false;
}

bool equivalent(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ValueKind::List) {
        auto ia = a.slots.begin();
        auto ib = b.slots.begin();
        auto skip = [](auto& it, auto end) {
            while (it != end && it->value.isTombstone()) ++it;
        };
        for (;;) {
            skip(ia, a.slots.end());
            skip(ib, b.slots.end());
            if (ia == a.slots.end() || ib == b.slots.end()) return ia == a.slots.end() && ib == b.slots.end();
            if (ia->id != ib->id || !equivalent(ia->value, ib->value)) return false;
            ++ia;
            ++ib;
        }
    }
    if (a.kind == ValueKind::Record) {
        if (a.slots.size() != b.slots.size()) return false;
        for (std::size_t i = 0; i < a.slots.size(); ++i) {
            if (a.slots[i].id != b.slots[i].id) return false;
            if (!equivalent(a.slots[i].value, b.slots[i].value)) return false;
        }
        return true;
    }
    return a == b;
}

bool equivalent(const State& a, const State& b) {
    return a.type == b.type && equivalent(a.value, b.value);
}

std::pair<Id, IdGenerator> freshId(IdGenerator g) {
    Id id = g.next();
    return {std::move(id), std::move(g)};
}

// ---------------------------------------------------------------- typing

Value initialValue(const Type& t) {
    switch (t.kind) {
        case TypeKind::String: return Value::string("");
        case TypeKind::Number: return Value::number(std::nan(""));
        case TypeKind::List: return Value::list();
        case TypeKind::Record: {
            std::vector<Slot> fields;
            fields.reserve(t.columns.size());
            for (const auto& c : t.columns) fields.push_back(Slot{c.id, initialValue(c.type)});
            return Value::record(std::move(fields));
        }
        case TypeKind::Link: return Value::nullLink();
        // formula cells are computed on read; the stored placeholder is unit
        case TypeKind::Formula: return Value::record();
        case TypeKind::Bottom: return Value::tombstone();
    }
    return Value::record();
}

bool isInitial(const Value& v, const Type& t) { return equivalent(v, initialValue(t)); }

bool typecheck(const Value& v, const Type& t) {
    if (v.isTombstone()) return true;
    switch (t.kind) {
        case TypeKind::String: return v.kind == ValueKind::String;
        case TypeKind::Number: return v.kind == ValueKind::Number;
        case TypeKind::Link: return v.kind == ValueKind::Link;
        case TypeKind::Bottom: return false;
        case TypeKind::Formula: return v.kind == ValueKind::Record && v.slots.empty();
        case TypeKind::List: {
            if (v.kind != ValueKind::List) return false;
            std::set<std::string_view> seen;
            for (const auto& s : v.slots) {
                if (!seen.insert(s.id).second) return false;
                if (!typecheck(s.value, t.elem())) return false;
            }
            return true;
        }
        case TypeKind::Record: {
            if (v.kind != ValueKind::Record || v.slots.size() != t.columns.size()) return false;
            for (std::size_t i = 0; i < v.slots.size(); ++i) {
                if (v.slots[i].id != t.columns[i].id) return false;
                if (v.slots[i].value.isTombstone()) return false;
                if (!typecheck(v.slots[i].value, t.columns[i].type)) return false;
            }
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------- navigation

Located resolvePath(const State& s, const Path& p) {
    Located at{&s.value, &s.type};
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Id& seg = p[i];
        const Type& t = *at.type;
        if (t.isList()) {
            if (seg == kElementType) {
                at.value = nullptr;
            } else if (at.value) {
                const Slot* slot = at.value->slot(seg);
                if (!slot) throw Error(ErrorKind::PathNotFound, p.str() + ": no element " + seg);
                if (slot->value.isTombstone())
                    throw Error(ErrorKind::TombstoneAtPath, p.str() + ": element " + seg + " is deleted");
                at.value = &slot->value;
            }
            at.type = &t.elem();
        } else if (t.isRecord()) {
            const Column* col = t.column(seg);
            if (!col) throw Error(ErrorKind::PathNotFound, p.str() + ": no field " + seg);
            at.type = &col->type;
            if (at.value) at.value = &at.value->slot(seg)->value;
        } else {
            throw Error(ErrorKind::PathNotFound, p.str() + ": cannot step into an atom at " + seg);
        }
    }
    return at;
}

const Type* typeAt(const Type& root, const Path& p) {
    const Type* t = &root;
    for (const auto& seg : p) {
        if (t->isList()) {
            t = &t->elem();
        } else if (t->isRecord()) {
            const Column* c = t->column(seg);
            if (!c) return nullptr;
            t = &c->type;
        } else {
            return nullptr;
        }
    }
    return t;
}

Type* typeAt(Type& root, const Path& p) {
    return const_cast<Type*>(typeAt(static_cast<const Type&>(root), p));
}

const Value* valueAt(const Value& root, const Path& p) {
    const Value* v = &root;
    for (const auto& seg : p) {
        if (v->kind != ValueKind::List && v->kind != ValueKind::Record) return nullptr;
        const Slot* s = v->slot(seg);
        if (!s) return nullptr;
        v = &s->value;
    }
    return v;
}

Value* valueAt(Value& root, const Path& p) {
    return const_cast<Value*>(valueAt(static_cast<const Value&>(root), p));
}

namespace {

void expand(const Value& v, const Path& pattern, std::size_t i, std::vector<Id>& acc, std::vector<Path>& out) {
    if (i == pattern.size()) {
        out.emplace_back(acc);
        return;
    }
    if (v.isTombstone()) return;
    const Id& seg = pattern[i];
    if (seg == kElementType) {
        if (v.kind != ValueKind::List) return;
        for (const auto& s : v.slots) {
            if (s.value.isTombstone()) continue;
            acc.push_back(s.id);
            expand(s.value, pattern, i + 1, acc, out);
            acc.pop_back();
        }
        return;
    }
    if (v.kind != ValueKind::List && v.kind != ValueKind::Record) return;
    const Slot* s = v.slot(seg);
    if (!s) return;
    acc.push_back(seg);
    expand(s->value, pattern, i + 1, acc, out);
    acc.pop_back();
}

}  // namespace

std::vector<Path> instances(const Value& root, const Path& pattern) {
    std::vector<Path> out;
    std::vector<Id> acc;
    expand(root, pattern, 0, acc, out);
    return out;
}

Path typePathOf(const Type& root, const Path& valuePath) {
    std::vector<Id> out;
    const Type* t = &root;
    for (const auto& seg : valuePath) {
        if (!t) {
            out.push_back(seg);
            continue;
        }
        if (t->isList()) {
            out.emplace_back(kElementType);
            t = &t->elem();
        } else if (t->isRecord()) {
            out.push_back(seg);
            const Column* c = t->column(seg);
            t = c ? &c->type : nullptr;
        } else {
            out.push_back(seg);
            t = nullptr;
        }
    }
    return Path(std::move(out));
}

}  // namespace baseline
