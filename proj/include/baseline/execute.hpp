#pragma once

#include "baseline/operation.hpp"

#include <string>

namespace baseline {

struct ExecuteOptions {
    /// Forward-rewrite stored formulas across every executed type operation.
    /// Speculative runs (formula evaluation, differencing scratch work) turn
    /// this off.
    bool rewriteFormulas = true;
};

/// Runs one operation. Throws baseline::Error on a failed precondition; the
/// input is never modified.
State execute(const State& s, const Operation& op, const ExecuteOptions& options = {});

/// Left fold of execute. Throws TimelineError carrying the failing index.
State executeTimeline(const State& s, const Timeline& ops, const ExecuteOptions& options = {});

bool isValidOn(const State& s, const Operation& op);

/// Operations that, executed after `op` on `s`, restore `s` (up to
/// tombstones).
Timeline invert(const State& s, const Operation& op);

/// Value operations turning `current` (located at `at`, typed `type`) into
/// something equivalent to `target`.
Timeline restoreOps(const Value& current, const Value& target, const Type& type, const Path& at);

/// Number/string conversion used by Convert.
std::string numberToString(double n);
double stringToNumber(std::string_view s);
Value convertAtom(const Value& v, TypeKind to);

}  // namespace baseline
