#pragma once

// Documents with append-only histories. Branching is copying; differences
// are synthesized from the two histories whenever they are needed.

#include "baseline/differencing.hpp"
#include "baseline/operation.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace baseline {

enum class Event { Edit, TransferFrom, CopyOrigin, Undo };

std::string_view eventName(Event e) noexcept;
std::optional<Event> eventFromName(std::string_view name) noexcept;

/// Provenance attached to a history entry. Never affects replay.
struct Meta {
    Event event = Event::Edit;
    std::string author;
    std::string timestamp;
    /// Document the entry came from (transfer or copy).
    std::string sourceDoc;
    /// History index of the originating entry in `sourceDoc`.
    std::optional<std::size_t> sourceIndex;

    bool operator==(const Meta&) const = default;
};

/// An operation, or a metadata-only marker when `op` is empty.
struct HistoryEntry {
    std::optional<Operation> op;
    Meta meta;

    bool operator==(const HistoryEntry&) const = default;
};

struct Document {
    std::string docId;
    IdGenerator ids;
    std::vector<HistoryEntry> history;
    /// Always equal to replaying `history` from the unit state.
    State state = State::unit();

    /// The operations of the history, skipping metadata entries.
    Timeline operations() const;

    bool operator==(const Document&) const = default;
};

std::string randomDocId();

Document newDocument(std::string replica, std::string docId = randomDocId());

/// Appends and executes operations. Throws on the first invalid one and
/// leaves the document untouched.
Document applyOps(const Document& d, const Timeline& ops, const Meta& meta = {});

State replay(const std::vector<HistoryEntry>& history);

Document copyDocument(const Document& d, std::string replica, std::string docId = randomDocId(),
                      const Meta& meta = {});

Diff diffDocuments(const Document& a, const Document& b);

enum class Selection { Index, WithDeps, All, TypeOps, ValueOps };

struct Selector {
    Selection kind = Selection::All;
    /// Position in the sending branch of the diff, for Index and WithDeps.
    std::size_t index = 0;
};

struct DocumentTransfer {
    Document receiver;
    Timeline transferred;
    bool conflict = false;
};

/// Transfers the selected differences of `from` into `to`. Only the
/// receiving document changes. Index selections may throw DependencyFailure.
DocumentTransfer transferBetween(const Document& from, const Document& to, const Selector& selector,
                                 const Meta& meta = {});

/// Appends the selective undo of history entry `entry` (0-based, must hold
/// an operation). An undo with no effect appends a noop.
Document undoInDocument(const Document& d, std::size_t entry, const Meta& meta = {});

}  // namespace baseline
