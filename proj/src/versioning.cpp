#include "baseline/versioning.hpp"

#include "baseline/error.hpp"
#include "baseline/execute.hpp"

#include <array>
#include <cstdio>
#include <random>

namespace baseline {

namespace {

constexpr std::size_t kMaxTransfers = 4096;

std::vector<std::size_t> operationEntries(const Document& d) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < d.history.size(); ++i)
        if (d.history[i].op) out.push_back(i);
    return out;
}

/// History index in `d` of the `k`-th operation of a branch, when the branch
/// is literally the tail of the document's operations.
std::optional<std::size_t> entryOfBranchOp(const Document& d, const Timeline& branch, std::size_t k) {
    const auto entries = operationEntries(d);
    if (branch.size() > entries.size() || k >= branch.size()) return std::nullopt;
    const std::size_t offset = entries.size() - branch.size();
    for (std::size_t i = 0; i < branch.size(); ++i)
        if (*d.history[entries[offset + i]].op != branch[i]) return std::nullopt;
    return entries[offset + k];
}

std::optional<std::size_t> firstOfKind(const Timeline& ops, bool typeOps) {
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (ops[i].isTypeOp() == typeOps) return i;
    return std::nullopt;
}

}  // namespace

std::string_view eventName(Event e) noexcept {
    switch (e) {
        case Event::Edit: return "edit";
        case Event::TransferFrom: return "transfer-from";
        case Event::CopyOrigin: return "copy-origin";
        case Event::Undo: return "undo";
    }
    return "edit";
}

std::optional<Event> eventFromName(std::string_view name) noexcept {
    for (Event e : {Event::Edit, Event::TransferFrom, Event::CopyOrigin, Event::Undo})
        if (eventName(e) == name) return e;
    return std::nullopt;
}

Timeline Document::operations() const {
    Timeline out;
    for (const auto& e : history)
        if (e.op) out.push_back(*e.op);
    return out;
}

std::string randomDocId() {
    std::random_device rd;
    std::mt19937_64 gen((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(gen()));
    return buf.data();
}

Document newDocument(std::string replica, std::string docId) {
    Document d;
    d.docId = std::move(docId);
    d.ids = IdGenerator(std::move(replica));
    return d;
}

Document applyOps(const Document& d, const Timeline& ops, const Meta& meta) {
    Document out = d;
    out.state = executeTimeline(d.state, ops);
    for (const auto& o : ops) out.history.push_back(HistoryEntry{o, meta});
    return out;
}

State replay(const std::vector<HistoryEntry>& history) {
    State s = State::unit();
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (!history[i].op) continue;
        try {
            s = execute(s, *history[i].op);
        } catch (const Error& e) {
            throw TimelineError(e, i);
        }
    }
    return s;
}

Document copyDocument(const Document& d, std::string replica, std::string docId, const Meta& meta) {
    Document out = d;
    out.docId = std::move(docId);
    out.ids = IdGenerator(std::move(replica));
    Meta origin = meta;
    origin.event = Event::CopyOrigin;
    origin.sourceDoc = d.docId;
    origin.sourceIndex = d.history.empty() ? std::nullopt : std::optional<std::size_t>(d.history.size() - 1);
    out.history.push_back(HistoryEntry{std::nullopt, origin});
    return out;
}

Diff diffDocuments(const Document& a, const Document& b) { return synthesizeDiff(a.operations(), b.operations()); }

DocumentTransfer transferBetween(const Document& from, const Document& to, const Selector& selector,
                                 const Meta& meta) {
    const Diff d = diffDocuments(from, to);
    TransferResult r{{}, d, false, true};

    switch (selector.kind) {
        case Selection::Index: r = transfer(d, Side::A, selector.index); break;
        case Selection::WithDeps: r = dependencyTransfer(d, Side::A, selector.index); break;
        case Selection::All:
        case Selection::TypeOps:
        case Selection::ValueOps:
            for (std::size_t step = 0; step < kMaxTransfers; ++step) {
                std::optional<std::size_t> next;
                if (selector.kind == Selection::All) {
                    if (!r.diff.a.empty()) next = 0;
                } else {
                    next = firstOfKind(r.diff.a, selector.kind == Selection::TypeOps);
                }
                if (!next) break;
                TransferResult moved = dependencyTransfer(r.diff, Side::A, *next);
                r.transferred.insert(r.transferred.end(), moved.transferred.begin(), moved.transferred.end());
                r.conflict = r.conflict || moved.conflict;
                r.diff = std::move(moved.diff);
            }
            break;
    }

    Meta provenance = meta;
    provenance.event = Event::TransferFrom;
    provenance.sourceDoc = from.docId;
    const bool single = selector.kind == Selection::Index || selector.kind == Selection::WithDeps;
    provenance.sourceIndex = single ? entryOfBranchOp(from, d.a, selector.index) : std::nullopt;
    if (!provenance.sourceIndex && !from.history.empty()) provenance.sourceIndex = from.history.size() - 1;

    const Timeline ops = withoutNoops(r.transferred);
    return DocumentTransfer{applyOps(to, ops, provenance), ops, r.conflict};
}

Document undoInDocument(const Document& d, std::size_t entry, const Meta& meta) {
    if (entry >= d.history.size() || !d.history[entry].op)
        throw Error(ErrorKind::IndexOutOfRange, "history entry " + std::to_string(entry) + " is not an operation");
    std::size_t k = 0;
    for (std::size_t i = 0; i <= entry; ++i)
        if (d.history[i].op) ++k;
    Timeline delta = withoutNoops(selectiveUndo(d.operations(), k));
    if (delta.empty()) delta.push_back(op::noop());
    Meta undo = meta;
    undo.event = Event::Undo;
    undo.sourceDoc = d.docId;
    undo.sourceIndex = entry;
    return applyOps(d, delta, undo);
}

}  // namespace baseline
