#include "baseline/differencing.hpp"

#include "baseline/error.hpp"
#include "baseline/execute.hpp"
#include "baseline/query.hpp"
#include "baseline/remap.hpp"

#include <algorithm>
#include <optional>

namespace baseline {

namespace {

constexpr std::size_t kMaxSteps = 4096;

Timeline operator+(Timeline a, const Timeline& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Timeline only(const std::optional<Operation>& o) {
    if (!o || o->isNoop()) return {};
    return {*o};
}

std::optional<State> tryRun(const State& s, const Timeline& ops) {
    try {
        return executeTimeline(s, ops);
    } catch (const Error&) {
        return std::nullopt;
    }
}

State mustRun(const State& s, const Operation& o, const char* role) {
    try {
        return execute(s, o);
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(role) + " is not valid here: " + e.message());
    }
}

/// mapOperation, with unmappable operations treated as dropped. Every
/// candidate built from the result is checked by execution anyway.
std::optional<Operation> mapOrDrop(const State& o, const Operation& over, const Operation& x, bool forward) {
    try {
        return mapOperation(o, over, x, forward);
    } catch (const Error&) {
        return std::nullopt;
    }
}

bool sameTarget(const Operation& a, const Operation& b) { return a.kind == b.kind && a.target == b.target; }

bool overwrites(const Operation& a, const Operation& b) {
    if (!sameTarget(a, b)) return false;
    switch (a.kind) {
        case OpKind::Write:
        case OpKind::LinkSet:
        case OpKind::Rename:
        case OpKind::Define:
        case OpKind::Convert:
        case OpKind::LinkType:
        case OpKind::Move: return true;
        default: return false;
    }
}

/// `a` resets everything under its path, so it overrides `b` there.
bool replaces(const Operation& a, const Operation& b) {
    if (a.kind != OpKind::Define && a.kind != OpKind::LinkType) return false;
    if (sameTarget(a, b)) return false;
    return covers(a.target, addressOf(b).path);
}

/// `a` replaces the list or record `b` acts on with one of its parts.
bool dissolves(const Operation& a, const Operation& b) {
    return (a.kind == OpKind::IntoFirst || a.kind == OpKind::IntoField) && addressOf(b).path == a.target;
}

bool definesFormula(const Operation& o) {
    return o.kind == OpKind::Define && o.type.kind == TypeKind::Formula && o.type.formula;
}

bool isDeleteWhere(const Operation& o) {
    return o.kind == OpKind::DeletePresent || o.kind == OpKind::DeleteAbsent;
}

Timeline concretize(const State& s, const Operation& o) {
    Timeline out;
    for (const auto& [list, id] : deleteWhereRows(s, o.target, o.kind == OpKind::DeletePresent))
        out.push_back(op::del(list, id));
    return out;
}

bool insideMoveDest(const Operation& move, const Operation& o) {
    if (move.kind != OpKind::Move || o.isTypeOp() || isDeleteWhere(o)) return false;
    const Path at = addressOf(o).path;
    return at.startsWith(move.dest) && !(o.kind == OpKind::Delete && at == move.dest);
}

/// Orders two concurrent insertions that would land in the same spot.
std::vector<Projection> orderInsertions(const Operation& b, const Operation& p) {
    const bool elements = b.kind == OpKind::Insert || b.kind == OpKind::Append;
    auto before = [&](const Operation& o, const Id& anchor) {
        return elements ? op::insert(o.target, o.id, anchor) : op::insertCol(o.target, o.id, anchor);
    };
    if (idLess(b.id, p.id)) return {{{p}, {before(b, p.id)}}};
    return {{{before(p, b.id)}, {b}}};
}

bool sameSpot(const Operation& b, const Operation& p) {
    if (!(b.target == p.target) || b.id == p.id) return false;
    if ((b.kind == OpKind::Append && p.kind == OpKind::Append) ||
        (b.kind == OpKind::AppendCol && p.kind == OpKind::AppendCol))
        return true;
    return ((b.kind == OpKind::Insert && p.kind == OpKind::Insert) ||
            (b.kind == OpKind::InsertCol && p.kind == OpKind::InsertCol)) &&
           b.anchor == p.anchor;
}

/// Alternatives for an InsertCol whose anchor another operation removed or
/// moved: later columns of the original record, then the end.
std::vector<Operation> reanchored(const State& o, const Operation& ins, const Path& record) {
    std::vector<Operation> out;
    const Type* r = typeAt(o.type, ins.target);
    if (r && r->isRecord()) {
        if (auto i = r->columnIndex(ins.anchor))
            for (auto k = *i + 1; k < r->columns.size(); ++k)
                out.push_back(op::insertCol(record, ins.id, r->columns[k].id));
    }
    out.push_back(op::appendCol(record, ins.id));
    return out;
}

/// When a tail of `post` alone reaches the same state as `base` then `post`,
/// the head of `post` undid `base`.
std::optional<Retraction> absorbed(const State& o, const Timeline& base, const Timeline& post) {
    const auto target = tryRun(o, base + post);
    if (!target) return std::nullopt;
    for (std::size_t k = 1; k < post.size(); ++k) {
        const Timeline rest(post.begin() + static_cast<std::ptrdiff_t>(k), post.end());
        auto direct = tryRun(o, rest);
        if (direct && equivalent(*direct, *target)) return Retraction{rest, {}};
    }
    return std::nullopt;
}

}  // namespace

// ------------------------------------------------------------ projection

Projection project(const State& o, const Operation& base, const Operation& pre) {
    if (base.isNoop()) return {only(pre), {}, false};
    if (pre.isNoop()) return {{}, {base}, false};
    if (base == pre) return {{}, {}, false};

    const State afterBase = mustRun(o, base, "base");
    const State afterPre = mustRun(o, pre, "pre");
    auto commutes = [&](const Projection& c) {
        auto l = tryRun(afterBase, c.post);
        if (!l) return false;
        auto r = tryRun(afterPre, c.adjust);
        return r && equivalent(*l, *r);
    };

    const auto mappedPre = mapOrDrop(o, base, pre, true);
    const auto mappedBase = mapOrDrop(o, pre, base, true);

    // a formula is a timeline of its own and follows schema changes
    if (definesFormula(pre) && base.isTypeOp() && mappedPre && !replaces(base, pre) && !replaces(pre, base)) {
        Operation post = *mappedPre;
        post.type = Type::formulaOf(rewriteForward(*pre.type.formula, base, o));
        return {{post}, only(mappedBase), false};
    }

    std::vector<Projection> candidates;
    if (overwrites(base, pre)) candidates.push_back({{pre}, {}});
    if (replaces(base, pre)) candidates.push_back({{}, {base}, true});
    if (replaces(pre, base)) candidates.push_back({{pre}, {}});
    if (sameSpot(base, pre))
        for (auto& c : orderInsertions(base, pre)) candidates.push_back(std::move(c));
    if (insideMoveDest(base, pre)) candidates.push_back({{}, {base}});
    if (insideMoveDest(pre, base)) candidates.push_back({{pre}, {}});
    if (base.kind == OpKind::Move && pre.kind == OpKind::Delete && base.target == pre.target.child(pre.id)) {
        const Operation gone = op::del(base.dest.parent(), base.dest.back());
        candidates.push_back({{gone}, {gone}});
    }
    if (pre.kind == OpKind::Move && base.kind == OpKind::Delete && pre.target == base.target.child(base.id))
        candidates.push_back({{}, restoreOps(afterPre.value, afterBase.value, afterBase.type, {}), true});
    // a conversion that cannot represent the written value loses part of it
    auto lossy = [](const Value& v, TypeKind to) {
        const TypeKind from = v.kind == ValueKind::String ? TypeKind::String : TypeKind::Number;
        return !(convertAtom(convertAtom(v, to), from) == v);
    };
    if (base.kind == OpKind::Convert && pre.kind == OpKind::Write && covers(base.target, pre.target) &&
        base.target.size() == pre.target.size())
        candidates.push_back({{op::write(pre.target, convertAtom(pre.value, base.type.kind))},
                              {base},
                              lossy(pre.value, base.type.kind)});
    if (pre.kind == OpKind::Convert && base.kind == OpKind::Write && covers(pre.target, base.target) &&
        pre.target.size() == base.target.size())
        candidates.push_back({{pre},
                              {op::write(base.target, convertAtom(base.value, pre.type.kind))},
                              lossy(base.value, pre.type.kind)});
    if (pre.kind == OpKind::LinkSet && base.kind == OpKind::Delete && pre.id == base.id)
        candidates.push_back({{op::linkSet(pre.target, Id(kNullLink))}, {base}});
    if (base.kind == OpKind::LinkSet && pre.kind == OpKind::Delete && base.id == pre.id)
        candidates.push_back({{pre}, {op::linkSet(base.target, Id(kNullLink))}});

    candidates.push_back({only(mappedPre), only(mappedBase)});

    if (pre.kind == OpKind::InsertCol)
        for (const auto& alt : reanchored(o, pre, mappedPre ? mappedPre->target : pre.target))
            candidates.push_back({{alt}, only(mappedBase), true});
    if (base.kind == OpKind::InsertCol)
        for (const auto& alt : reanchored(o, base, mappedBase ? mappedBase->target : base.target))
            candidates.push_back({only(mappedPre), {alt}, true});
    if (isDeleteWhere(pre) || isDeleteWhere(base)) {
        const Timeline b = isDeleteWhere(base) ? concretize(o, base) : Timeline{base};
        const Timeline p = isDeleteWhere(pre) ? concretize(o, pre) : Timeline{pre};
        try {
            // the query's reach changed under the other side's edits
            auto c = project(o, b, p);
            candidates.push_back({c.post, c.adjust, true});
        } catch (const Error&) {
        }
    }
    if (!mappedPre) candidates.push_back({{}, {base}});
    candidates.push_back({{pre}, {}});
    candidates.push_back({invert(o, base) + Timeline{pre}, {}});
    candidates.push_back({{}, invert(o, pre) + Timeline{base}});

    for (auto& c : candidates) {
        c.post = withoutNoops(c.post);
        c.adjust = withoutNoops(c.adjust);
        if (!commutes(c)) continue;
        c.conflict = c.conflict || c.adjust.empty() || dissolves(base, pre) || dissolves(pre, base);
        return c;
    }
    throw Error(ErrorKind::InvalidTarget, "cannot reconcile " + std::string(opName(base.kind)) + " at " +
                                              base.target.str() + " with " + std::string(opName(pre.kind)) +
                                              " at " + pre.target.str());
}

Projection project(const State& o, const Timeline& base, const Timeline& pre) {
    if (base.empty()) return {pre, {}, false};
    if (pre.empty()) return {{}, base, false};
    if (base.size() == 1 && pre.size() == 1) return project(o, base.front(), pre.front());
    if (pre.size() > 1) {
        const Timeline head{pre.front()};
        const Timeline rest(pre.begin() + 1, pre.end());
        auto first = project(o, base, head);
        auto second = project(execute(o, pre.front()), first.adjust, rest);
        return {first.post + second.post, second.adjust, first.conflict || second.conflict};
    }
    const Timeline rest(base.begin() + 1, base.end());
    auto first = project(o, base.front(), pre.front());
    auto second = project(execute(o, base.front()), rest, first.post);
    return {second.post, first.adjust + second.adjust, first.conflict || second.conflict};
}

// ------------------------------------------------------------ retraction

Retraction retract(const State& o, const Operation& base, const Operation& post) {
    if (base.isNoop()) return {only(post), {}};
    if (post.isNoop()) return {{}, {base}};

    const State afterBase = mustRun(o, base, "base");
    const State target = mustRun(afterBase, post, "post");
    if (definesFormula(post) && base.isTypeOp()) {
        if (auto back = mapOrDrop(o, base, post, false); back && isValidOn(o, *back)) {
            back->type = Type::formulaOf(rewriteBackward(*post.type.formula, Timeline{base}, o));
            return {{*back}, {base}};
        }
    }
    auto reaches = [&](const Retraction& r) {
        auto s = tryRun(o, r.pre + r.adjust);
        return s && equivalent(*s, target);
    };
    auto dependency = [&]() {
        return DependencyFailure(0, std::string(opName(post.kind)) + " at " + post.target.str() + " depends on " +
                                        std::string(opName(base.kind)) + " at " + base.target.str());
    };

    std::vector<Retraction> candidates;
    candidates.push_back({{}, {}});
    if (base.kind == OpKind::Split && post.kind == OpKind::Join && post.target == base.target)
        candidates.push_back({{op::deleteCol(base.dest.parent(), base.dest.back())}, {}});
    if (base.kind == OpKind::Delete && post.kind == OpKind::LinkSet && post.id == kNullLink) {
        const Value* cell = valueAt(o.value, post.target);
        if (cell && cell->kind == ValueKind::Link && cell->text == base.id)
            candidates.push_back({{op::linkSet(post.target, base.id)}, {base}});
    }
    if (base.kind == OpKind::Convert && post.kind == OpKind::Write && covers(base.target, post.target) &&
        base.target.size() == post.target.size()) {
        if (const Type* was = typeAt(o.type, typePathOf(o.type, post.target)); was && was->isAtomic())
            candidates.push_back({{op::write(post.target, convertAtom(post.value, was->kind))}, {base}});
    }
    if (base.kind == OpKind::Write && post.kind == OpKind::Convert && covers(post.target, base.target) &&
        base.target.size() == post.target.size())
        candidates.push_back({{post}, {op::write(base.target, convertAtom(base.value, post.type.kind))}});
    if (base.kind == OpKind::Move && !post.isTypeOp() && addressOf(post).path.startsWith(base.dest)) {
        Operation moved = post;
        moved.target = base.target + post.target.suffix(base.dest.size());
        if (post.kind != OpKind::Delete) candidates.push_back({{moved}, {base}});
        else if (addressOf(post).path == base.dest)
            candidates.push_back({{op::del(base.target.parent(), base.target.back())}, {post}});
    }
    const bool insertAfterInsert = (base.kind == OpKind::Insert || base.kind == OpKind::Append) &&
                                   post.kind == OpKind::Insert && post.target == base.target &&
                                   post.anchor == base.id;
    if (insertAfterInsert) {
        Operation pre = base.kind == OpKind::Append ? op::append(post.target, post.id)
                                                    : op::insert(post.target, post.id, base.anchor);
        candidates.push_back({{pre}, {base}});
    }
    if (((base.kind == OpKind::Append && post.kind == OpKind::Append) ||
         (base.kind == OpKind::AppendCol && post.kind == OpKind::AppendCol)) &&
        post.target == base.target) {
        const Operation earlier = base.kind == OpKind::Append ? op::insert(base.target, base.id, post.id)
                                                              : op::insertCol(base.target, base.id, post.id);
        candidates.push_back({{post}, {earlier}});
    }
    const bool colAfterCol =(base.kind == OpKind::InsertCol || base.kind == OpKind::AppendCol) &&
                             post.kind == OpKind::InsertCol && post.target == base.target &&
                             post.anchor == base.id;
    if (colAfterCol) {
        Operation pre = base.kind == OpKind::AppendCol ? op::appendCol(post.target, post.id)
                                                       : op::insertCol(post.target, post.id, base.anchor);
        candidates.push_back({{pre}, {base}});
    }

    if (const auto back = mapOrDrop(o, base, post, false))
        candidates.push_back({only(back), only(mapOrDrop(o, *back, base, true))});
    if (isValidOn(o, post)) candidates.push_back({{post}, only(mapOrDrop(o, post, base, true))});
    if (base.kind == OpKind::Move && post.kind == OpKind::Move && post.dest.startsWith(base.dest) &&
        !post.target.startsWith(base.dest)) {
        Operation moved = post;
        moved.dest = base.target + post.dest.suffix(base.dest.size());
        candidates.push_back({{moved}, {base}});
    }
    candidates.push_back({{post}, {}});
    if (base.kind == OpKind::InsertCol && post.isTypeOp())
        for (const auto& alt : reanchored(o, base, base.target)) candidates.push_back({{post}, {alt}});
    if (isDeleteWhere(base)) {
        try {
            candidates.push_back(retract(o, concretize(o, base), Timeline{post}));
        } catch (const Error&) {
        }
    }
    if (isDeleteWhere(post)) {
        try {
            candidates.push_back(retract(o, Timeline{base}, concretize(afterBase, post)));
        } catch (const Error&) {
        }
    }
    const bool insertion = base.kind == OpKind::Insert || base.kind == OpKind::Append;
    const bool postInsertion = post.kind == OpKind::Insert || post.kind == OpKind::Append;
    if ((insertion && post.isTypeOp()) || (postInsertion && base.isTypeOp())) {
        // the new element starts from the initial value of a different type
        if (auto s = tryRun(o, Timeline{post, base}); s && s->type == target.type)
            candidates.push_back({{post}, Timeline{base} + restoreOps(s->value, target.value, target.type, {})});
    }

    std::optional<Retraction> fallback;
    for (auto& c : candidates) {
        c.pre = withoutNoops(c.pre);
        c.adjust = withoutNoops(c.adjust);
        if (!reaches(c)) continue;
        // prefer the retraction that projection would carry back to `post`
        if (c.pre.size() != 1) {
            if (!fallback) fallback = c;
            continue;
        }
        try {
            if (project(o, base, c.pre.front()).post == Timeline{post}) return c;
        } catch (const Error&) {
        }
        if (!fallback) fallback = c;
    }
    if (fallback) return *fallback;
    throw dependency();
}

Retraction retract(const State& o, const Timeline& base, const Timeline& post) {
    if (base.empty()) return {post, {}};
    if (post.empty()) return {{}, base};
    if (base.size() == 1 && post.size() == 1) return retract(o, base.front(), post.front());
    if (auto r = absorbed(o, base, post)) return *r;
    if (base.size() > 1) {
        const Timeline init(base.begin(), base.end() - 1);
        const State beforeLast = executeTimeline(o, init);
        Retraction last;
        try {
            last = retract(beforeLast, Timeline{base.back()}, post);
        } catch (const DependencyFailure& e) {
            throw DependencyFailure(base.size() - 1, e.message());
        }
        auto earlier = retract(o, init, last.pre);
        Retraction out{earlier.pre, earlier.adjust + last.adjust};
        if (!tryRun(o, out.pre + out.adjust))
            throw DependencyFailure(base.size() - 1, std::string(opName(post.front().kind)) + " at " +
                                                         post.front().target.str() +
                                                         " erases what later operations rely on");
        return out;
    }
    const Timeline head{post.front()};
    const Timeline rest(post.begin() + 1, post.end());
    auto first = retract(o, base, head);
    auto second = retract(executeTimeline(o, first.pre), first.adjust, rest);
    return {first.pre + second.pre, second.adjust};
}

// ------------------------------------------------------------ diffs

State Diff::sharedState() const { return executeTimeline(State::unit(), shared); }

State Diff::end(Side s) const { return executeTimeline(sharedState(), branch(s)); }

TransferResult transfer(const Diff& d, Side from, std::size_t index) {
    const Timeline& src = d.branch(from);
    if (index >= src.size())
        throw Error(ErrorKind::IndexOutOfRange, "no operation " + std::to_string(index) + " to transfer");
    const State o = d.sharedState();
    std::vector<State> states{o};
    for (std::size_t k = 0; k < index; ++k) states.push_back(execute(states.back(), src[k]));

    Timeline cur{src[index]};
    std::vector<Timeline> adjusts(index);
    for (std::size_t k = index; k-- > 0;) {
        Retraction r;
        try {
            r = retract(states[k], Timeline{src[k]}, cur);
        } catch (const DependencyFailure& e) {
            throw DependencyFailure(k, e.message());
        }
        cur = withoutNoops(r.pre);
        adjusts[k] = r.adjust;
    }

    Timeline rest;
    for (const auto& a : adjusts) rest = rest + a;
    rest.insert(rest.end(), src.begin() + static_cast<std::ptrdiff_t>(index) + 1, src.end());

    if (!tryRun(executeTimeline(o, cur), rest))
        throw Error(ErrorKind::InvalidTarget, "later operations rely on traces of operation " +
                                                  std::to_string(index) + " that transferring it would erase");

    const Timeline& receiving = d.branch(other(from));
    Projection pr = project(o, receiving, cur);

    TransferResult out;
    out.transferred = pr.post;
    out.conflict = pr.conflict && !receiving.empty() && !cur.empty();
    out.diff.shared = d.shared + cur;
    out.diff.branch(from) = withoutNoops(rest);
    out.diff.branch(other(from)) = withoutNoops(pr.adjust);
    if (!tryRun(executeTimeline(o, cur), out.diff.branch(other(from))))
        throw Error(ErrorKind::InvalidTarget, "the receiving branch cannot be carried across operation " +
                                                  std::to_string(index));
    const State receivingEnd = executeTimeline(o, receiving);
    out.fixpoint = equivalent(receivingEnd, executeTimeline(receivingEnd, pr.post));
    return out;
}

TransferResult dependencyTransfer(const Diff& d, Side from, std::size_t index) {
    if (index >= d.branch(from).size())
        throw Error(ErrorKind::IndexOutOfRange, "no operation " + std::to_string(index) + " to transfer");
    TransferResult acc{{}, d, false, true};
    const std::size_t fromEnd = d.branch(from).size() - index;
    for (std::size_t step = 0; step < kMaxSteps; ++step) {
        const std::size_t at = acc.diff.branch(from).size() - fromEnd;
        TransferResult r;
        bool done = false;
        try {
            r = transfer(acc.diff, from, at);
            done = true;
        } catch (const DependencyFailure& e) {
            r = dependencyTransfer(acc.diff, from, e.blocker());
        }
        acc.transferred = acc.transferred + r.transferred;
        acc.conflict = acc.conflict || r.conflict;
        acc.fixpoint = acc.fixpoint && r.fixpoint;
        acc.diff = std::move(r.diff);
        if (done) return acc;
    }
    throw Error(ErrorKind::DependencyFailure, "dependency chain did not settle");
}

Diff syncInto(const Diff& d, Side winner) {
    Diff out = d;
    for (Side s : {winner, other(winner)}) {
        for (std::size_t step = 0; !out.branch(s).empty(); ++step) {
            if (step >= kMaxSteps) throw Error(ErrorKind::DependencyFailure, "sync did not settle");
            out = transfer(out, s, 0).diff;
        }
    }
    return out;
}

Diff optimizeDiff(const Diff& d) {
    Diff out{d.shared, withoutNoops(d.a), withoutNoops(d.b)};
    for (std::size_t step = 0; step < kMaxSteps; ++step) {
        bool changed = false;
        for (Side s : {Side::A, Side::B}) {
            for (std::size_t i = 0; i < out.branch(s).size() && !changed; ++i) {
                try {
                    auto r = transfer(out, s, i);
                    if (!r.fixpoint) continue;
                    const bool progress = r.diff.shared.size() > out.shared.size() ||
                                          r.diff.branch(s).size() < out.branch(s).size();
                    if (!progress) continue;
                    out = std::move(r.diff);
                    changed = true;
                } catch (const Error&) {
                }
            }
            if (changed) break;
        }
        if (!changed) return out;
    }
    return out;
}

Diff synthesizeDiff(const Timeline& historyA, const Timeline& historyB) {
    return optimizeDiff(Diff{{}, historyA, historyB});
}

Timeline selectiveUndo(const Timeline& history, std::size_t index) {
    if (index < 1 || index > history.size())
        throw Error(ErrorKind::IndexOutOfRange, "history has no operation " + std::to_string(index));
    const Timeline upto(history.begin(), history.begin() + static_cast<std::ptrdiff_t>(index) - 1);
    const State before = executeTimeline(State::unit(), upto);
    const State after = execute(before, history[index - 1]);
    const Timeline inverse = invert(before, history[index - 1]);
    const Timeline later(history.begin() + static_cast<std::ptrdiff_t>(index), history.end());
    return project(after, inverse, later).adjust;
}

}  // namespace baseline
