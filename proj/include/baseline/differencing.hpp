#pragma once

// Projection, retraction, transfer, sync, diff optimization and selective
// undo.

#include "baseline/operation.hpp"

#include <cstddef>
#include <optional>

namespace baseline {

/// `post` carries `pre` across `base`; `adjust` is what remains of `base`
/// after `pre`. O;base;post and O;pre;adjust reach equivalent states.
struct Projection {
    Timeline post;
    Timeline adjust;
    /// Part of `base` was overridden by `pre`.
    bool conflict = false;
};

/// `pre` does before `base` what `post` did after it; `adjust` is `base`
/// carried across `pre`. O;pre;adjust and O;base;post reach equivalent states.
struct Retraction {
    Timeline pre;
    Timeline adjust;
};

Projection project(const State& o, const Operation& base, const Operation& pre);
Projection project(const State& o, const Timeline& base, const Timeline& pre);

/// Throws DependencyFailure whose blocker is the index within `base` of the
/// operation `post` relies on.
Retraction retract(const State& o, const Operation& base, const Operation& post);
Retraction retract(const State& o, const Timeline& base, const Timeline& post);

enum class Side { A, B };

constexpr Side other(Side s) noexcept { return s == Side::A ? Side::B : Side::A; }

/// Two branches off a shared history that starts from the unit state.
struct Diff {
    Timeline shared;
    Timeline a;
    Timeline b;

    Timeline& branch(Side s) { return s == Side::A ? a : b; }
    const Timeline& branch(Side s) const { return s == Side::A ? a : b; }

    State sharedState() const;
    State end(Side s) const;

    bool operator==(const Diff&) const = default;
};

struct TransferResult {
    /// What was executed on the receiving branch's end state.
    Timeline transferred;
    Diff diff;
    bool conflict = false;
    /// The receiving end state did not change.
    bool fixpoint = false;
};

TransferResult transfer(const Diff& d, Side from, std::size_t index);

/// Transfers the operation together with everything it transitively
/// depends on, earliest first.
TransferResult dependencyTransfer(const Diff& d, Side from, std::size_t index);

/// Transfers every operation of `winner` into the other branch, then the
/// rest back. Both branches end empty.
Diff syncInto(const Diff& d, Side winner);

/// Absorbs fixpoint transfers into the shared history and cancels
/// operations that retract to nothing.
Diff optimizeDiff(const Diff& d);

Diff synthesizeDiff(const Timeline& historyA, const Timeline& historyB);

/// Operations that, executed at the end of `history`, undo its `index`-th
/// operation (1-based) while keeping later ones.
Timeline selectiveUndo(const Timeline& history, std::size_t index);

}  // namespace baseline
