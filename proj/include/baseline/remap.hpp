#pragma once

// Address remapping across a single operation.

#include "baseline/operation.hpp"

#include <optional>

namespace baseline {

/// What an operation addresses. A slot address names the location itself
/// (renaming a column, deleting an element); a content address names what is
/// stored there. `typeLevel` addresses come from type operations and use `*`
/// where value addresses use element IDs.
struct Address {
    Path path;
    bool slot = false;
    bool typeLevel = false;
};

/// Does the pattern `p` (which may contain `*`) cover `q`, i.e. is some
/// instance of `p` a prefix of `q`?
bool covers(const Path& p, const Path& q);

/// Where `a`, valid before `op` runs on `before`, points afterwards; nullopt
/// when the op destroys what it addressed.
std::optional<Path> mapForward(const State& before, const Operation& op, const Address& a);

/// Where `a`, valid after `op` ran on `before`, pointed beforehand; nullopt
/// when the op created what it addresses.
std::optional<Path> mapBackward(const State& before, const Operation& op, const Address& a);

/// The address an operation acts on.
Address addressOf(const Operation& o);

/// `o` with its own addresses (target, dest, anchors) remapped; nullopt when
/// any of them vanish.
std::optional<Operation> mapOperation(const State& before, const Operation& through, const Operation& o,
                                      bool forward);

}  // namespace baseline
