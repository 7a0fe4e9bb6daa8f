#pragma once

// Random small states and valid operations for the property suites.

#include "baseline/execute.hpp"
#include "baseline/operation.hpp"
#include "baseline/script.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gen {

using namespace baseline;
using Rng = std::mt19937;

inline std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
    return xs[below(rng, xs.size())];
}

struct Site {
    Path path;
    const Type* type = nullptr;
    const Value* value = nullptr;
};

inline void valueSites(const Value& v, const Type& t, const Path& at, std::vector<Site>& out) {
    out.push_back(Site{at, &t, &v});
    if (t.isList()) {
        for (const auto& e : v.slots)
            if (!e.value.isTombstone()) valueSites(e.value, t.elem(), at.child(e.id), out);
    } else if (t.isRecord()) {
        for (std::size_t i = 0; i < t.columns.size() && i < v.slots.size(); ++i)
            valueSites(v.slots[i].value, t.columns[i].type, at.child(t.columns[i].id), out);
    }
}

inline void typeSites(const Type& t, const Path& at, std::vector<Site>& out) {
    out.push_back(Site{at, &t, nullptr});
    if (t.isList()) typeSites(t.elem(), at.child(Id(kElementType)), out);
    else if (t.isRecord())
        for (const auto& c : t.columns) typeSites(c.type, at.child(c.id), out);
}

template <class Pred>
std::vector<Site> where(const std::vector<Site>& sites, Pred keep) {
    std::vector<Site> out;
    for (const auto& s : sites)
        if (keep(s)) out.push_back(s);
    return out;
}

inline Value randomAtom(Rng& rng, TypeKind kind) {
    static const std::vector<std::string> texts{"x", "y", "", "two words", "7"};
    static const std::vector<double> numbers{0, 1, 2, -1.5, 42};
    if (kind == TypeKind::String) return Value::string(pick(rng, texts));
    if (chance(rng, 0.1)) return Value::number(std::nan(""));
    return Value::number(pick(rng, numbers));
}

inline Type randomType(Rng& rng) {
    switch (below(rng, 5)) {
        case 0: return Type::string();
        case 1: return Type::number();
        case 2: return Type::list(Type::number());
        case 3: return Type::list(Type::record({Column{"v", "v", Type::string()}}));
        default: return Type::unit();
    }
}

/// Produces operations valid on a given state. Fresh IDs carry `prefix` so
/// that generators for different branches never collide.
class OpGenerator {
public:
    OpGenerator(Rng& rng, std::string prefix, double typeOpRate = 0.25)
        : rng_(rng), prefix_(std::move(prefix)), typeOpRate_(typeOpRate) {}

    std::optional<Operation> next(const State& s) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            Operation o = chance(rng_, typeOpRate_) ? typeOp(s) : valueOp(s);
            if (!o.isNoop() && isValidOn(s, o)) return o;
        }
        return std::nullopt;
    }

    /// Up to `n` operations executed one after another from `s`.
    Timeline timeline(const State& s, std::size_t n) {
        Timeline out;
        State at = s;
        for (std::size_t i = 0; i < n; ++i) {
            auto o = next(at);
            if (!o) break;
            at = execute(at, *o);
            out.push_back(std::move(*o));
        }
        return out;
    }

private:
    Id fresh() { return prefix_ + "-" + std::to_string(counter_++); }

    Operation valueOp(const State& s) {
        std::vector<Site> vs;
        valueSites(s.value, s.type, {}, vs);
        const auto lists = where(vs, [](const Site& x) { return x.type->isList(); });
        switch (below(rng_, 9)) {
            case 0:
            case 1:
            case 2: {
                const auto atoms = where(vs, [](const Site& x) { return x.type->isAtomic(); });
                if (atoms.empty()) break;
                const Site& at = pick(rng_, atoms);
                return op::write(at.path, randomAtom(rng_, at.type->kind));
            }
            case 3:
                if (lists.empty()) break;
                return op::append(pick(rng_, lists).path, fresh());
            case 4: {
                const auto nonEmpty = where(lists, [](const Site& x) { return !x.value->slots.empty(); });
                if (nonEmpty.empty()) break;
                const Site& at = pick(rng_, nonEmpty);
                return op::insert(at.path, fresh(), pick(rng_, at.value->slots).id);
            }
            case 5: {
                const auto live = liveIds(lists);
                if (live.empty()) break;
                const auto& [list, id] = pick(rng_, live);
                return op::del(list, id);
            }
            case 6: {
                const auto live = liveIds(lists);
                if (live.size() < 2) break;
                const auto& [list, id] = pick(rng_, live);
                const auto& [otherList, otherId] = pick(rng_, live);
                if (!(list == otherList) || id == otherId) break;
                return op::move(list.child(id), list.child(otherId));
            }
            case 7: {
                const auto links = where(vs, [](const Site& x) { return x.type->kind == TypeKind::Link; });
                if (links.empty()) break;
                const Site& at = pick(rng_, links);
                std::vector<Id> targets{Id(kNullLink)};
                if (const Value* range = valueAt(s.value, at.type->range))
                    for (const auto& e : range->slots)
                        if (!e.value.isTombstone()) targets.push_back(e.id);
                return op::linkSet(at.path, pick(rng_, targets));
            }
            default: {
                std::vector<Site> ts;
                typeSites(s.type, {}, ts);
                const auto cols = tableColumns(ts);
                if (cols.empty()) break;
                const Path& c = pick(rng_, cols).path;
                return chance(rng_, 0.5) ? op::deletePresent(c) : op::deleteAbsent(c);
            }
        }
        return op::noop();
    }

    Operation typeOp(const State& s) {
        std::vector<Site> ts;
        typeSites(s.type, {}, ts);
        const auto nonRoot = where(ts, [](const Site& x) { return !x.path.empty(); });
        const auto records = where(ts, [](const Site& x) { return x.type->isRecord(); });
        const auto withCols = where(records, [](const Site& x) { return !x.type->columns.empty(); });
        const auto columns = where(nonRoot, [](const Site& x) { return x.path.back() != kElementType; });
        if (records.empty()) return op::noop();
        if (nonRoot.empty()) return op::appendCol(Path{}, fresh());
        switch (below(rng_, 16)) {
            case 0: return op::define(pick(rng_, nonRoot).path, randomType(rng_));
            case 1: {
                const auto atoms = where(ts, [](const Site& x) { return x.type->isAtomic(); });
                if (atoms.empty()) break;
                const Site& at = pick(rng_, atoms);
                return op::convert(at.path, at.type->kind == TypeKind::String ? Type::number() : Type::string());
            }
            case 2:
                if (columns.empty()) break;
                return op::rename(pick(rng_, columns).path, pick(rng_, std::vector<std::string>{"alpha", "Beta", "c d"}));
            case 3: {
                if (withCols.empty()) break;
                const Site& at = pick(rng_, withCols);
                return op::insertCol(at.path, fresh(), pick(rng_, at.type->columns).id);
            }
            case 4:
            case 5: return op::appendCol(pick(rng_, records).path, fresh());
            case 6: {
                if (withCols.empty()) break;
                const Site& at = pick(rng_, withCols);
                return op::deleteCol(at.path, pick(rng_, at.type->columns).id);
            }
            case 7:
                if (columns.empty()) break;
                return op::moveCol(pick(rng_, columns).path, pick(rng_, records).path);
            case 8: return op::listOf(pick(rng_, nonRoot).path);
            case 9: {
                const auto lists = where(nonRoot, [](const Site& x) { return x.type->isList(); });
                if (lists.empty()) break;
                return op::intoFirst(pick(rng_, lists).path);
            }
            case 10:
                if (chance(rng_, 0.5)) return op::recordOf(pick(rng_, nonRoot).path, fresh());
                {
                    const auto inner = where(withCols, [](const Site& x) { return !x.path.empty(); });
                    if (inner.empty()) break;
                    const Site& at = pick(rng_, inner);
                    return op::intoField(at.path, pick(rng_, at.type->columns).id);
                }
            case 11: {
                const auto ranges = where(nonRoot, [](const Site& x) {
                    return x.type->isList() && !x.path.hasWildcard();
                });
                const auto cols = tableColumns(ts);
                if (ranges.empty() || cols.empty()) break;
                return op::linkType(pick(rng_, cols).path, pick(rng_, ranges).path);
            }
            case 12:
            case 13:
            case 14: {
                const auto cols = tableColumns(ts);
                const auto dests = where(columns, [](const Site& x) { return x.path.size() == 1; });
                if (cols.empty() || dests.empty()) break;
                return op::split(pick(rng_, cols).path, pick(rng_, dests).path);
            }
            default: {
                const auto links = where(tableColumns(ts), [](const Site& x) { return x.type->kind == TypeKind::Link; });
                if (links.empty()) break;
                return op::join(pick(rng_, links).path);
            }
        }
        return op::noop();
    }

    static std::vector<Site> tableColumns(const std::vector<Site>& ts) {
        return where(ts, [](const Site& x) {
            return x.path.size() >= 2 && x.path[x.path.size() - 2] == kElementType && x.path.back() != kElementType;
        });
    }

    static std::vector<std::pair<Path, Id>> liveIds(const std::vector<Site>& lists) {
        std::vector<std::pair<Path, Id>> out;
        for (const auto& l : lists)
            for (const auto& e : l.value->slots)
                if (!e.value.isTombstone()) out.emplace_back(l.path, e.id);
        return out;
    }

    Rng& rng_;
    std::string prefix_;
    double typeOpRate_;
    std::uint64_t counter_ = 0;
};

inline constexpr const char* kBaseSchema =
    ". Append t\n"
    ".t Define List {a \"a\": String, b \"b\": Number, c \"c\": String}\n"
    ". Append n\n"
    ".n Define Number\n"
    ". Append l\n"
    ".l Define List Number\n"
    ". Append u\n"
    ".u Define List {x \"x\": String}\n";

/// A history from the unit state: a fixed schema with optional link column
/// and split destination, filled by random value edits, then a few random
/// edits of any kind.
inline Timeline randomHistory(Rng& rng, const std::string& prefix = "s") {
    std::string script = kBaseSchema;
    if (chance(rng, 0.5)) script += ".t.* Append k\n.t.*.k Link .u\n";
    if (chance(rng, 0.4)) script += ". Append d\n";
    Timeline h = parseScript(script);
    State s = executeTimeline(State::unit(), h);

    OpGenerator values(rng, prefix, 0.0);
    for (const auto& o : values.timeline(s, 3 + below(rng, 8))) {
        s = execute(s, o);
        h.push_back(o);
    }
    OpGenerator mixed(rng, prefix + "m", 0.4);
    for (const auto& o : mixed.timeline(s, below(rng, 3))) h.push_back(o);
    return h;
}

}  // namespace gen
