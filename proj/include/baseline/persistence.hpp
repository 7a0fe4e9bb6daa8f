#pragma once

// Document files: UTF-8 JSON holding the history in script syntax plus a
// cached end state guarded by a content hash.
//
//   {"format": "baseline-doc/1", "docId": ..., "replica": ..., "counter": n,
//    "history": [{"op": "<op line>" | null, "meta": {...}}, ...],
//    "state": {"type": "<type>", "value": ...}, "hash": "<16 hex digits>"}

#include "baseline/versioning.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace baseline {

inline constexpr std::string_view kFormatTag = "baseline-doc/1";

struct LoadResult {
    Document document;
    /// Non-fatal findings such as a stale state cache.
    std::vector<std::string> warnings;
};

std::string serialize(const Document& d);
LoadResult deserialize(std::string_view text);

/// FNV-1a over the canonical encoding of a state.
std::uint64_t stateHash(const State& s);

/// Writes through a temporary file and rename while holding `<file>.lock`.
void saveDocument(const Document& d, const std::filesystem::path& file);
LoadResult loadDocument(const std::filesystem::path& file);

/// Advisory exclusive lock on `<file>.lock`, released on destruction.
class FileLock {
public:
    explicit FileLock(const std::filesystem::path& file);
    ~FileLock();
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

}  // namespace baseline
