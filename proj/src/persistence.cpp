#include "baseline/persistence.hpp"

#include "baseline/error.hpp"
#include "baseline/script.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace baseline {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void corrupt(const std::string& msg) { throw Error(ErrorKind::CorruptFile, msg); }

Json tomb(const Id& id) { return Json{{"tomb", id}}; }

bool isTomb(const Json& j, const Type& t) {
    if (!j.is_object() || j.size() != 1 || !j.contains("tomb") || !j["tomb"].is_string()) return false;
    return !(t.isRecord() && t.columns.size() == 1 && t.columns[0].id == "tomb");
}

Json encodeNumber(double n) {
    if (std::isnan(n)) return "NaN";
    if (std::isinf(n)) return n > 0 ? "Infinity" : "-Infinity";
    return n;
}

Json encodeValue(const Value& v, const Type& t, const Id& id) {
    if (v.isTombstone()) return tomb(id);
    switch (t.kind) {
        case TypeKind::String:
        case TypeKind::Link: return v.text;
        case TypeKind::Number: return encodeNumber(v.num);
        case TypeKind::List: {
            Json out = Json::array();
            for (const auto& e : v.slots) {
                if (e.value.isTombstone())
                    out.push_back(tomb(e.id));
                else
                    out.push_back(Json{{"id", e.id}, {"value", encodeValue(e.value, t.elem(), e.id)}});
            }
            return out;
        }
        case TypeKind::Record: {
            Json out = Json::object();
            for (std::size_t i = 0; i < t.columns.size() && i < v.slots.size(); ++i)
                out[v.slots[i].id] = encodeValue(v.slots[i].value, t.columns[i].type, v.slots[i].id);
            return out;
        }
        case TypeKind::Formula:
        case TypeKind::Bottom: return Json::object();
    }
    return nullptr;
}

double decodeNumber(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j == "NaN") return std::nan("");
    if (j == "Infinity") return HUGE_VAL;
    if (j == "-Infinity") return -HUGE_VAL;
    corrupt("expected a number, found " + j.dump());
}

Value decodeValue(const Json& j, const Type& t) {
    if (isTomb(j, t)) return Value::tombstone();
    switch (t.kind) {
        case TypeKind::String:
            if (!j.is_string()) corrupt("expected a string, found " + j.dump());
            return Value::string(j.get<std::string>());
        case TypeKind::Link:
            if (!j.is_string()) corrupt("expected a link, found " + j.dump());
            return Value::link(j.get<std::string>());
        case TypeKind::Number: return Value::number(decodeNumber(j));
        case TypeKind::List: {
            if (!j.is_array()) corrupt("expected a list, found " + j.dump());
            std::vector<Slot> elems;
            for (const auto& e : j) {
                if (isTomb(e, t.elem())) {
                    elems.push_back(Slot{e["tomb"].get<std::string>(), Value::tombstone()});
                    continue;
                }
                if (!e.is_object() || !e.contains("id") || !e.contains("value") || !e["id"].is_string())
                    corrupt("malformed list element " + e.dump());
                elems.push_back(Slot{e["id"].get<std::string>(), decodeValue(e["value"], t.elem())});
            }
            return Value::list(std::move(elems));
        }
        case TypeKind::Record: {
            if (!j.is_object() || j.size() != t.columns.size()) corrupt("record does not match its type: " + j.dump());
            std::vector<Slot> fields;
            for (const auto& c : t.columns) {
                if (!j.contains(c.id)) corrupt("record is missing field " + c.id);
                fields.push_back(Slot{c.id, decodeValue(j[c.id], c.type)});
            }
            return Value::record(std::move(fields));
        }
        case TypeKind::Formula: return Value::record();
        case TypeKind::Bottom: return Value::tombstone();
    }
    corrupt("unknown type");
}

Json encodeMeta(const Meta& m) {
    Json out{{"event", std::string(eventName(m.event))}};
    if (!m.author.empty()) out["author"] = m.author;
    if (!m.timestamp.empty()) out["timestamp"] = m.timestamp;
    if (!m.sourceDoc.empty()) out["source"] = m.sourceDoc;
    if (m.sourceIndex) out["sourceIndex"] = *m.sourceIndex;
    return out;
}

Meta decodeMeta(const Json& j) {
    Meta m;
    if (!j.is_object()) return m;
    if (j.contains("event")) {
        auto e = eventFromName(j["event"].get<std::string>());
        if (!e) corrupt("unknown event " + j["event"].dump());
        m.event = *e;
    }
    m.author = j.value("author", "");
    m.timestamp = j.value("timestamp", "");
    m.sourceDoc = j.value("source", "");
    if (j.contains("sourceIndex")) m.sourceIndex = j["sourceIndex"].get<std::size_t>();
    return m;
}

std::string hex(std::uint64_t h) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
    return buf.data();
}

Json encodeState(const State& s) { return Json{{"type", print(s.type)}, {"value", encodeValue(s.value, s.type, "")}}; }

}  // namespace

std::uint64_t stateHash(const State& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : encodeState(s).dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize(const Document& d) {
    Json history = Json::array();
    for (const auto& e : d.history)
        history.push_back(Json{{"op", e.op ? Json(print(*e.op)) : Json(nullptr)}, {"meta", encodeMeta(e.meta)}});
    Json out{{"format", std::string(kFormatTag)},
             {"docId", d.docId},
             {"replica", d.ids.replica()},
             {"counter", d.ids.counter()},
             {"history", std::move(history)},
             {"state", encodeState(d.state)},
             {"hash", hex(stateHash(d.state))}};
    return out.dump(2) + "\n";
}

LoadResult deserialize(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        corrupt(std::string("not a document file: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format")) corrupt("missing format tag");
    if (j["format"] != kFormatTag)
        throw Error(ErrorKind::FormatVersionUnsupported, "unsupported format " + j["format"].dump());

    LoadResult out;
    Document& d = out.document;
    try {
        d.docId = j.at("docId").get<std::string>();
        d.ids = IdGenerator(j.at("replica").get<std::string>(), j.at("counter").get<std::uint64_t>());
        const Json& history = j.at("history");
        for (std::size_t i = 0; i < history.size(); ++i) {
            HistoryEntry e;
            const Json& op = history[i].at("op");
            if (!op.is_null()) {
                try {
                    e.op = parseOperation(op.get<std::string>());
                } catch (const Error& err) {
                    corrupt("history entry " + std::to_string(i) + ": " + err.what());
                }
            }
            e.meta = decodeMeta(history[i].value("meta", Json::object()));
            d.history.push_back(std::move(e));
        }
    } catch (const Json::exception& e) {
        corrupt(std::string("malformed document: ") + e.what());
    }

    try {
        d.state = replay(d.history);
    } catch (const TimelineError& e) {
        corrupt("history entry " + std::to_string(e.index()) + " is invalid: " + e.what());
    }

    if (!j.contains("state") || !j.contains("hash")) {
        out.warnings.push_back("StaleCache: no cached state, replayed history");
        return out;
    }
    std::optional<State> cached;
    try {
        State s;
        s.type = parseType(j["state"].at("type").get<std::string>());
        s.value = decodeValue(j["state"].at("value"), s.type);
        cached = std::move(s);
    } catch (const std::exception&) {
    }
    if (!cached || j["hash"] != hex(stateHash(*cached))) {
        out.warnings.push_back("StaleCache: cached state does not match its hash, replayed history");
        return out;
    }
    if (!(*cached == d.state)) corrupt("replaying the history diverges from the recorded state");
    return out;
}

void saveDocument(const Document& d, const std::filesystem::path& file) {
    FileLock lock(file);
    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        out << serialize(d);
        out.flush();
        if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, file, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot replace " + file.string() + ": " + ec.message());
}

LoadResult loadDocument(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

FileLock::FileLock(const std::filesystem::path& file) {
    std::filesystem::path lock = file;
    lock += ".lock";
    fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorKind::Io, "cannot open " + lock.string());
    if (::flock(fd_, LOCK_EX) != 0) {
        ::close(fd_);
        throw Error(ErrorKind::Io, "cannot lock " + lock.string());
    }
}

FileLock::~FileLock() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

}  // namespace baseline
