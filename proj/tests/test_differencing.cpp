#include "fixtures.hpp"

#include "baseline/differencing.hpp"
#include "baseline/error.hpp"

#include <gtest/gtest.h>

using namespace baseline;
using namespace fixtures;

namespace {

State zero() { return run(". Define Number\n. write 0\n"); }

Operation line(const char* text) { return parseOperation(text); }

Timeline ops(const char* script) { return parseScript(script); }

bool commutes(const State& o, const Operation& base, const Operation& pre, const Projection& p) {
    return equivalent(executeTimeline(execute(o, base), p.post), executeTimeline(execute(o, pre), p.adjust));
}

Timeline concat(Timeline a, const Timeline& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

TEST(Project, WriteThroughListOf) {
    const Projection p = project(zero(), line(". ListOf"), line(". write 2"));
    EXPECT_EQ(p.post, ops(".1! write 2\n"));
    EXPECT_EQ(p.adjust, ops(". ListOf\n"));
    EXPECT_FALSE(p.conflict);
}

TEST(Project, WriteWriteConflictFavoursPre) {
    const Projection p = project(zero(), line(". write 1"), line(". write 2"));
    EXPECT_EQ(p.post, ops(". write 2\n"));
    EXPECT_TRUE(p.adjust.empty());
    EXPECT_TRUE(p.conflict);
}

TEST(Project, NoopBase) {
    const State s = acmeSingle();
    const Operation pre = line(".orders.e1.item write \"Hammer\"");
    const Projection p = project(s, line(". noop"), pre);
    EXPECT_EQ(p.post, Timeline{pre});
    EXPECT_TRUE(p.adjust.empty());
}

TEST(Project, ConcurrentInsertsAtSameAnchorOrderById) {
    const State s = run(". append e\n", State{Value::list(), listT(Type::number())});
    const Operation base = line(". insert b before e");
    const Operation pre = line(". insert a before e");
    const Projection p = project(s, base, pre);
    ASSERT_TRUE(commutes(s, base, pre, p));
    const State end = executeTimeline(execute(s, base), p.post);
    ASSERT_EQ(end.value.slots.size(), 3u);
    EXPECT_EQ(end.value.slots[0].id, "a");
    EXPECT_EQ(end.value.slots[1].id, "b");
}

TEST(Project, EditUnderDeleteIsSwallowed) {
    const State s = acmeSingle();
    const Operation base = line(".orders delete e2");
    const Operation pre = line(".orders.e2.item write \"TNT\"");
    const Projection p = project(s, base, pre);
    EXPECT_TRUE(commutes(s, base, pre, p));
    EXPECT_TRUE(equivalent(executeTimeline(execute(s, base), p.post), execute(s, base)));
}

TEST(Project, EditFollowsMove) {
    const State s = acmeSplit();
    const Operation base = line(".customers.e3 move .customers.e1");
    const Operation pre = line(".customers.e3.address write \"Mesa\"");
    const Projection p = project(s, base, pre);
    EXPECT_TRUE(commutes(s, base, pre, p));
    EXPECT_EQ(p.post, ops(".customers.e1.address write \"Mesa\"\n"));
}

TEST(Retract, WriteThroughListOf) {
    const Retraction r = retract(zero(), line(". ListOf"), line(".1! write 2"));
    EXPECT_EQ(r.pre, ops(". write 2\n"));
    EXPECT_EQ(r.adjust, ops(". ListOf\n"));
}

TEST(Retract, AppendIntoCreatedListFails) {
    try {
        retract(zero(), line(". ListOf"), line(". append e"));
        FAIL();
    } catch (const DependencyFailure& e) {
        EXPECT_EQ(e.blocker(), 0u);
    }
}

TEST(Retract, NoopBase) {
    const Operation post = line(".orders.e1.item write \"Hammer\"");
    const Retraction r = retract(acmeSingle(), line(". noop"), post);
    EXPECT_EQ(r.pre, Timeline{post});
    EXPECT_TRUE(r.adjust.empty());
}

TEST(Retract, WriteIntoAppendedColumnFails) {
    const State s = acmeSingle();
    EXPECT_THROW(retract(s, ops(".orders.* Append z\n.orders.*.z Define Number\n"), ops(".orders.e1.z write 1\n")),
                 DependencyFailure);
}

TEST(Retract, UnrelatedDeleteIsIdentity) {
    const State s = acmeSingle();
    const Timeline post = ops(".orders.e1.item write \"Hammer\"\n");
    const Retraction r = retract(s, line(".orders delete e2"), post.front());
    EXPECT_EQ(r.pre, post);
}

namespace {

State linked() {
    return run(". Append t\n.t Define List {a \"a\": String}\n. Append u\n.u Define List {x \"x\": String}\n"
               ".t.* Append k\n.t.*.k Link .u\n.u append r\n.t append w\n.t.w.k link r\n");
}

}  // namespace

TEST(Retract, WriteIntoJoinedRowGoesToLinkedRow) {
    const Retraction r = retract(linked(), line(".t.*.k Join"), line(".t.w.x write \"y\""));
    EXPECT_EQ(r.pre, ops(".u.r.x write \"y\"\n"));
    EXPECT_EQ(r.adjust, ops(".t.*.k Join\n"));
}

TEST(Retract, ClearedLinkToDeletedRowIsOriginalLink) {
    const Retraction r = retract(linked(), line(".u delete r"), line(".t.w.k link *"));
    EXPECT_EQ(r.pre, ops(".t.w.k link r\n"));
}

TEST(Retract, MoveOntoMergedElement) {
    const State s = run(". Define List Number\n. append p\n. append q\n. append r\n.q write 1\n");
    const Operation base = line(".q move .r");
    const Operation post = line(".p move .r");
    const Retraction r = retract(s, base, post);
    EXPECT_TRUE(equivalent(executeTimeline(s, concat(r.pre, r.adjust)), execute(execute(s, base), post)));
}

TEST(Transfer, DuplicatedOpIsFixpoint) {
    Diff d;
    d.shared = parseScript(kTodoScript);
    d.a = ops(".e.what write \"mop\"\n");
    d.b = ops(".e.what write \"mop\"\n");
    const State before = d.end(Side::B);
    const TransferResult r = transfer(d, Side::A, 0);
    EXPECT_TRUE(r.fixpoint);
    EXPECT_TRUE(equivalent(r.diff.end(Side::B), before));
    EXPECT_TRUE(r.diff.a.empty());
    EXPECT_TRUE(r.diff.b.empty());
}

TEST(DependencyTransfer, ChainPullsAllThree) {
    Diff d;
    d.shared = ops(". Append x\n");
    d.a = ops(".x Define List Number\n.x append e\n.x.e write 7\n");
    const TransferResult r = dependencyTransfer(d, Side::A, 2);
    EXPECT_TRUE(equivalent(r.diff.end(Side::B), d.end(Side::A)));
    EXPECT_EQ(r.diff.end(Side::B), executeTimeline(d.sharedState(), d.a));
}

TEST(DependencyTransfer, NoDependenciesMatchesTransfer) {
    Diff d;
    d.shared = parseScript(kTodoScript);
    d.a = ops(".e.what write \"mop\"\n");
    EXPECT_EQ(dependencyTransfer(d, Side::A, 0).diff, transfer(d, Side::A, 0).diff);
}

TEST(DependencyTransfer, NewCustomerPullsSplit) {
    Diff d;
    d.shared = parseScript(kAcmeScript);
    d.b = parseScript(std::string(kNormalizeScript) + ".customers append e4\n.customers.e4.name write \"Road Runner\"\n");
    const TransferResult r = dependencyTransfer(d, Side::B, 4);
    const State a = r.diff.end(Side::A);
    EXPECT_EQ(valueAt(a.value, parsePath(".customers.e4.name"))->text, "Road Runner");
}

TEST(Sync, WriteConflictGoesToWinner) {
    Diff d;
    d.shared = parseScript(kTodoScript);
    d.a = ops(".e.who write \"Ann\"\n");
    d.b = ops(".e.who write \"Bob\"\n");
    const Diff s = syncInto(d, Side::A);
    EXPECT_TRUE(s.a.empty());
    EXPECT_TRUE(s.b.empty());
    EXPECT_EQ(s.end(Side::A), todo(str("Ann")));
    EXPECT_EQ(s.end(Side::B), todo(str("Ann")));
}

TEST(Sync, IdenticalBranchesUnchanged) {
    Diff d;
    d.shared = parseScript(kTodoScript);
    d.a = ops(".e.who write \"Ann\"\n");
    d.b = d.a;
    const Diff s = syncInto(d, Side::B);
    EXPECT_EQ(s.end(Side::A), d.end(Side::A));
    EXPECT_EQ(s.end(Side::B), d.end(Side::B));
}

TEST(Sync, OldSchemaEditsIntoNormalized) {
    Diff d;
    d.shared = parseScript(kAcmeScript);
    d.a = ops(".orders.e2.address write \"Lake Tahoe\"\n.orders.e1.quantity write 5\n");
    d.b = parseScript(std::string(kNormalizeScript) + kDedupScript);
    const Diff s = syncInto(d, Side::A);
    EXPECT_EQ(s.end(Side::A), s.end(Side::B));
    const State end = s.end(Side::B);
    EXPECT_EQ(valueAt(end.value, parsePath(".customers.e2.address"))->text, "Lake Tahoe");
    EXPECT_EQ(valueAt(end.value, parsePath(".orders.e1.quantity"))->num, 5);
}

TEST(OptimizeDiff, SameWriteAbsorbed) {
    Diff d;
    d.shared = parseScript(kTodoScript);
    d.a = ops(".e.what write \"mop\"\n.e.who write \"Ann\"\n");
    d.b = ops(".e.what write \"mop\"\n");
    const Diff o = optimizeDiff(d);
    EXPECT_EQ(o.a, ops(".e.who write \"Ann\"\n"));
    EXPECT_TRUE(o.b.empty());
    EXPECT_TRUE(equivalent(o.end(Side::A), d.end(Side::A)));
    EXPECT_TRUE(equivalent(o.end(Side::B), d.end(Side::B)));
}

TEST(OptimizeDiff, DisjointBranchesUnchanged) {
    Diff d;
    d.shared = parseScript(kTodoScript);
    d.a = ops(".e.what write \"mop\"\n");
    d.b = ops(".e.who write \"Ann\"\n");
    const Diff o = optimizeDiff(d);
    EXPECT_EQ(o.a, d.a);
    EXPECT_EQ(o.b, d.b);
}

TEST(OptimizeDiff, InsertThenDeleteCancels) {
    Diff d;
    d.shared = parseScript(kTodoScript);
    d.a = ops(". append f\n. delete f\n");
    const Diff o = optimizeDiff(d);
    EXPECT_TRUE(o.a.empty());
    EXPECT_TRUE(equivalent(o.end(Side::A), d.end(Side::A)));
}

TEST(SynthesizeDiff, CopyPlusOneEditEach) {
    const Timeline base = parseScript(kTodoScript);
    const Diff d = synthesizeDiff(concat(base, ops(".e.what write \"mop\"\n")), concat(base, ops(".e.who write \"Ann\"\n")));
    EXPECT_EQ(d.a.size(), 1u);
    EXPECT_EQ(d.b.size(), 1u);
}

TEST(SynthesizeDiff, SharedPrefixAbsorbed) {
    const Timeline base = parseScript(kAcmeScript);
    const Diff d = synthesizeDiff(base, base);
    EXPECT_TRUE(d.a.empty());
    EXPECT_TRUE(d.b.empty());
    EXPECT_TRUE(equivalent(d.sharedState(), acmeSingle()));
}

TEST(SelectiveUndo, OverriddenWriteHasNoEffect) {
    const Timeline h = parseScript(std::string(kTodoScript) + ".e.who write \"Ann\"\n.e.who write \"Bob\"\n");
    const Timeline delta = selectiveUndo(h, 5);
    const State end = executeTimeline(State::unit(), h);
    EXPECT_TRUE(equivalent(executeTimeline(end, delta), end));
}

TEST(SelectiveUndo, LastOpIsInverse) {
    const Timeline h = parseScript(std::string(kTodoScript) + ".e.who write \"Ann\"\n");
    const State before = executeTimeline(State::unit(), Timeline(h.begin(), h.end() - 1));
    EXPECT_EQ(selectiveUndo(h, h.size()), invert(before, h.back()));
}

TEST(SelectiveUndo, DeleteMatchesScrubbedReplay) {
    const Timeline h = parseScript(
        ". Define List Number\n. append a\n.a write 1\n. append b\n.b write 2\n"
        ". delete a\n. insert c before b\n.c write 3\n.b write 4\n");
    const Timeline delta = selectiveUndo(h, 6);
    const State undone = executeTimeline(executeTimeline(State::unit(), h), delta);
    Timeline scrubbed = h;
    scrubbed.erase(scrubbed.begin() + 5);
    EXPECT_EQ(undone, executeTimeline(State::unit(), scrubbed));
    EXPECT_THROW(selectiveUndo(h, 0), Error);
    EXPECT_THROW(selectiveUndo(h, h.size() + 1), Error);
}
