#include "fixtures.hpp"

#include "baseline/error.hpp"
#include "baseline/versioning.hpp"

#include <gtest/gtest.h>

using namespace baseline;
using namespace fixtures;

namespace {

Document todoDoc() { return applyOps(newDocument("r1", "todo"), parseScript(kTodoScript)); }

Document acmeDoc() { return applyOps(newDocument("r1", "acme"), parseScript(kAcmeScript)); }

}  // namespace

TEST(Document, NewIsUnit) {
    const Document d = newDocument("r1");
    EXPECT_TRUE(d.history.empty());
    EXPECT_EQ(d.state, State::unit());
    EXPECT_EQ(replay(d.history), State::unit());
    EXPECT_NE(newDocument("r1").docId, d.docId);
}

TEST(Document, ApplyIsAtomic) {
    const Document d = todoDoc();
    EXPECT_THROW(applyOps(d, parseScript(".e.what write \"x\"\n.q write 1\n")), Error);
    EXPECT_EQ(d.state, todo(str("Jack")));
    EXPECT_EQ(replay(d.history), d.state);
}

TEST(Document, CopyKeepsStateAndMarksOrigin) {
    const Document a = todoDoc();
    const Document b = copyDocument(a, "r2");
    EXPECT_EQ(b.state, a.state);
    EXPECT_EQ(b.history.size(), a.history.size() + 1);
    EXPECT_FALSE(b.history.back().op.has_value());
    EXPECT_EQ(b.history.back().meta.event, Event::CopyOrigin);
    EXPECT_EQ(b.history.back().meta.sourceDoc, "todo");
    const Diff d = diffDocuments(a, b);
    EXPECT_TRUE(d.a.empty());
    EXPECT_TRUE(d.b.empty());
}

TEST(Document, CopiesDiverge) {
    const Document a = applyOps(todoDoc(), parseScript(".e.what write \"mop\"\n"));
    const Document b = applyOps(copyDocument(todoDoc(), "r2"), parseScript(".e.who write \"Ann\"\n"));
    const Diff d = diffDocuments(a, b);
    EXPECT_EQ(d.a, parseScript(".e.what write \"mop\"\n"));
    EXPECT_EQ(d.b, parseScript(".e.who write \"Ann\"\n"));
}

TEST(Document, TodoDiff) {
    const Document a = applyOps(todoDoc(), parseScript(".e.who write \"Jill\"\n"));
    const Document b = applyOps(copyDocument(todoDoc(), "r2"),
                             parseScript(".*.who ListOf\n.e.who.1! write \"Jacque\"\n"
                                         ".e.who insert g before 1!\n.e.who.g write \"Tom\"\n"));
    const Diff d = diffDocuments(a, b);
    EXPECT_EQ(d.a.size(), 1u);
    EXPECT_EQ(d.b.size(), 4u);
}

TEST(Document, TransferredOpSitsInSharedHistory) {
    const Document a = applyOps(todoDoc(), parseScript(".e.what write \"mop\"\n"));
    const Document b = copyDocument(todoDoc(), "r2");
    const DocumentTransfer t = transferBetween(a, b, Selector{Selection::Index, 0});
    EXPECT_EQ(t.receiver.history.back().meta.event, Event::TransferFrom);
    EXPECT_EQ(t.receiver.history.back().meta.sourceDoc, "todo");
    EXPECT_EQ(t.receiver.history.back().meta.sourceIndex, std::optional<std::size_t>(4));
    const Diff d = diffDocuments(a, t.receiver);
    EXPECT_TRUE(d.a.empty());
    EXPECT_TRUE(d.b.empty());
}

TEST(Document, TypeOpsOnlyMigratesSchema) {
    const Document dev = applyOps(acmeDoc(), parseScript(std::string(kNormalizeScript) + kDedupScript +
                                                      ".orders.e1.quantity write 9\n"));
    const Document replica = copyDocument(acmeDoc(), "r2");
    const DocumentTransfer t = transferBetween(dev, replica, Selector{Selection::TypeOps});
    EXPECT_EQ(t.receiver.state.type, acmeSplit().type);
    EXPECT_EQ(valueAt(t.receiver.state.value, parsePath(".orders.e1.quantity"))->num, 1);
    EXPECT_FALSE(valueAt(t.receiver.state.value, parsePath(".customers.e3"))->isTombstone());
}

TEST(Document, TransferAllBothWaysConverges) {
    const Document a = applyOps(todoDoc(), parseScript(".e.who write \"Jill\"\n. append f\n.f.what write \"dust\"\n"));
    const Document b = applyOps(copyDocument(todoDoc(), "r2"),
                             parseScript(".*.who ListOf\n.e.who.1! write \"Jacque\"\n"));
    const Document b2 = transferBetween(a, b, Selector{Selection::All}).receiver;
    const Document a2 = transferBetween(b2, a, Selector{Selection::All}).receiver;
    EXPECT_TRUE(equivalent(a2.state, b2.state));
    EXPECT_EQ(replay(a2.history), a2.state);
    EXPECT_EQ(replay(b2.history), b2.state);
}

TEST(Document, TransferOfNothing) {
    const Document a = todoDoc();
    const Document b = copyDocument(a, "r2");
    const DocumentTransfer t = transferBetween(a, b, Selector{Selection::All});
    EXPECT_EQ(t.receiver, b);
    EXPECT_TRUE(t.transferred.empty());
}

TEST(Document, IndexTransferReportsDependency) {
    const Document a = applyOps(todoDoc(), parseScript(".*.who ListOf\n.e.who append h\n"));
    const Document b = copyDocument(todoDoc(), "r2");
    EXPECT_THROW(transferBetween(a, b, Selector{Selection::Index, 1}), DependencyFailure);
    const DocumentTransfer t = transferBetween(a, b, Selector{Selection::WithDeps, 1});
    EXPECT_TRUE(equivalent(t.receiver.state, a.state));
}

TEST(Document, UndoLastWrite) {
    const Document d = applyOps(todoDoc(), parseScript(".e.who write \"Ann\"\n"));
    const Document u = undoInDocument(d, d.history.size() - 1);
    EXPECT_EQ(u.state, todo(str("Jack")));
    EXPECT_EQ(u.history.size(), d.history.size() + 1);
    EXPECT_EQ(u.history.back().meta.event, Event::Undo);
}

TEST(Document, UndoOverriddenWriteAppendsNoop) {
    const Document d = applyOps(todoDoc(), parseScript(".e.who write \"Ann\"\n.e.who write \"Bob\"\n"));
    const Document u = undoInDocument(d, 4);
    EXPECT_EQ(u.state, d.state);
    EXPECT_EQ(u.history.back().op, std::optional<Operation>(op::noop()));
}

TEST(Document, UndoDeleteRestoresPosition) {
    const Document d = applyOps(newDocument("r1", "n"),
                             parseScript(". Define List Number\n. append a\n.a write 1\n. append b\n"
                                         ". delete a\n. insert c before b\n. insert z before a\n"));
    const Document u = undoInDocument(d, 4);
    Timeline scrubbed = d.operations();
    scrubbed.erase(scrubbed.begin() + 4);
    EXPECT_EQ(u.state, executeTimeline(State::unit(), scrubbed));
    EXPECT_THROW(undoInDocument(d, 99), Error);
}
