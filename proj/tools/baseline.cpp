// Command-line driver over document files.
//
// Exit codes: 0 success, 1 user error, 2 conflict or dependency failure.

#include "baseline/differencing.hpp"
#include "baseline/error.hpp"
#include "baseline/persistence.hpp"
#include "baseline/query.hpp"
#include "baseline/script.hpp"
#include "baseline/versioning.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace baseline;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kUserError = 1;
constexpr int kConflict = 2;

struct Conflict {
    std::string message;
};

std::string envOr(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : std::move(fallback);
}

std::string defaultReplica() { return envOr("BASELINE_REPLICA", randomDocId().substr(0, 8)); }

Meta editMeta() {
    Meta m;
    m.author = envOr("USER", "");
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    m.timestamp = buf;
    return m;
}

Document load(const fs::path& file) {
    LoadResult r = loadDocument(file);
    for (const auto& w : r.warnings) std::cerr << file.string() << ": " << w << "\n";
    return std::move(r.document);
}

std::string readFile(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string provenance(const Meta& m) {
    std::string out(eventName(m.event));
    if (!m.sourceDoc.empty()) out += " " + m.sourceDoc;
    if (m.sourceIndex) out += "#" + std::to_string(*m.sourceIndex);
    return out;
}

struct BranchReport {
    std::string op;
    bool conflict = false;
    std::optional<std::size_t> dependsOn;
};

std::vector<BranchReport> reportBranch(const Diff& d, Side side) {
    std::vector<BranchReport> out;
    for (std::size_t i = 0; i < d.branch(side).size(); ++i) {
        BranchReport r;
        r.op = print(d.branch(side)[i]);
        try {
            r.conflict = transfer(d, side, i).conflict;
        } catch (const DependencyFailure& e) {
            r.dependsOn = e.blocker();
        }
        out.push_back(std::move(r));
    }
    return out;
}

void printDiff(const Diff& d, const std::string& a, const std::string& b, bool json) {
    const auto ra = reportBranch(d, Side::A);
    const auto rb = reportBranch(d, Side::B);
    if (json) {
        auto branch = [](const std::vector<BranchReport>& rs) {
            Json out = Json::array();
            for (const auto& r : rs)
                out.push_back(Json{{"op", r.op},
                                   {"conflict", r.conflict},
                                   {"dependsOn", r.dependsOn ? Json(*r.dependsOn) : Json(nullptr)}});
            return out;
        };
        std::cout << Json{{"shared", d.shared.size()}, {"a", branch(ra)}, {"b", branch(rb)}}.dump(2) << "\n";
        return;
    }
    std::cout << "shared: " << d.shared.size() << " operations\n";
    for (const auto& [name, rs] : {std::pair{a, &ra}, std::pair{b, &rb}}) {
        std::cout << name << ": " << rs->size() << " operations\n";
        for (std::size_t i = 0; i < rs->size(); ++i) {
            const auto& r = (*rs)[i];
            std::cout << "  " << i << "  " << r.op;
            if (r.conflict) std::cout << "  [conflict]";
            if (r.dependsOn) std::cout << "  [depends on " << *r.dependsOn << "]";
            std::cout << "\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Version control for structured documents by operation transfer"};
    app.require_subcommand(1);

    std::string file, other, replica, script, pathText, returnText, atText = ".", field;
    std::vector<std::string> lines;
    std::size_t index = 0;
    bool json = false, types = false, tombstones = false, deps = false, all = false, typeOps = false,
         valueOps = false;

    auto* init = app.add_subcommand("init", "Create an empty document");
    init->add_option("file", file)->required();
    init->add_option("--replica", replica, "Replica tag for generated IDs");

    auto* apply = app.add_subcommand("apply", "Execute operations and append them to the history");
    apply->add_option("file", file)->required();
    auto* lineOpt = apply->add_option("-e", lines, "Operation line (repeatable)");
    auto* scriptOpt = apply->add_option("--script", script, "File with one operation per line");
    lineOpt->excludes(scriptOpt);

    auto* show = app.add_subcommand("show", "Print the current state");
    show->add_option("file", file)->required();
    show->add_option("--path", pathText, "Only the value or type at this path");
    show->add_flag("--types", types, "Print the type instead of the value");
    show->add_flag("--tombstones", tombstones, "Include deleted elements");

    auto* log = app.add_subcommand("log", "List the history");
    log->add_option("file", file)->required();

    auto* copy = app.add_subcommand("copy", "Branch a document by copying it");
    copy->add_option("src", file)->required();
    copy->add_option("dst", other)->required();
    copy->add_option("--replica", replica, "Replica tag for the copy");

    auto* diff = app.add_subcommand("diff", "Show the differences between two documents");
    diff->add_option("a", file)->required();
    diff->add_option("b", other)->required();
    diff->add_flag("--json", json, "Machine-readable output");

    auto* xfer = app.add_subcommand("transfer", "Transfer differences from one document into another");
    xfer->add_option("from", file)->required();
    xfer->add_option("to", other)->required();
    auto* opOpt = xfer->add_option("--op", index, "Position in the sending branch, as listed by diff");
    xfer->add_flag("--deps", deps, "Also transfer what the operation depends on")->needs(opOpt);
    auto* allOpt = xfer->add_flag("--all", all);
    auto* typeOpt = xfer->add_flag("--type-ops", typeOps);
    auto* valueOpt = xfer->add_flag("--value-ops", valueOps);
    opOpt->excludes(allOpt)->excludes(typeOpt)->excludes(valueOpt);
    allOpt->excludes(typeOpt)->excludes(valueOpt);
    typeOpt->excludes(valueOpt);

    auto* sync = app.add_subcommand("sync", "Transfer every difference both ways; <from> wins conflicts");
    sync->add_option("from", file)->required();
    sync->add_option("to", other)->required();

    auto* undo = app.add_subcommand("undo", "Selectively undo one history entry");
    undo->add_option("file", file)->required();
    undo->add_option("--op", index, "History entry, as listed by log")->required();

    auto* eval = app.add_subcommand("eval", "Evaluate the formula field at a path");
    eval->add_option("file", file)->required();
    eval->add_option("--path", pathText)->required();

    auto* capture = app.add_subcommand("capture", "Turn the edits of a sculpted copy into a formula in <base>");
    capture->add_option("base", file)->required();
    capture->add_option("sculpted", other)->required();
    capture->add_option("--return", returnText, "Path the formula returns")->required();
    capture->add_option("--at", atText, "Record that receives the formula field");
    capture->add_option("--field", field, "ID of the new field (default: fresh)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUserError;
    }

    try {
        if (*init) {
            if (fs::exists(file)) throw Error(ErrorKind::Io, file + " already exists");
            saveDocument(newDocument(replica.empty() ? defaultReplica() : replica), file);
        } else if (*apply) {
            if (!lineOpt->count() && !scriptOpt->count()) throw Error(ErrorKind::InvalidTarget, "give -e or --script");
            const Timeline ops = scriptOpt->count() ? parseScript(readFile(script)) : [&] {
                Timeline out;
                for (const auto& l : lines) out.push_back(parseOperation(l));
                return out;
            }();
            saveDocument(applyOps(load(file), ops, editMeta()), file);
        } else if (*show) {
            const Document d = load(file);
            const Path p = pathText.empty() ? Path{} : parsePath(pathText);
            const Located at = resolvePath(d.state, p);
            if (types || !at.value) {
                std::cout << print(*at.type) << "\n";
            } else {
                const Value full = materialize(d.state);
                std::cout << printValue(*valueAt(full, p), tombstones) << "\n";
            }
        } else if (*log) {
            const Document d = load(file);
            for (std::size_t i = 0; i < d.history.size(); ++i) {
                const auto& e = d.history[i];
                std::cout << i << "\t" << (e.op ? print(*e.op) : "#") << "\t" << provenance(e.meta);
                if (!e.meta.timestamp.empty()) std::cout << "\t" << e.meta.timestamp;
                if (!e.meta.author.empty()) std::cout << "\t" << e.meta.author;
                std::cout << "\n";
            }
        } else if (*copy) {
            if (fs::exists(other)) throw Error(ErrorKind::Io, other + " already exists");
            const Document d = load(file);
            saveDocument(copyDocument(d, replica.empty() ? defaultReplica() : replica, randomDocId(), editMeta()),
                         other);
        } else if (*diff) {
            printDiff(diffDocuments(load(file), load(other)), file, other, json);
        } else if (*xfer) {
            Selector sel{Selection::All, index};
            if (opOpt->count()) sel.kind = deps ? Selection::WithDeps : Selection::Index;
            else if (typeOps) sel.kind = Selection::TypeOps;
            else if (valueOps) sel.kind = Selection::ValueOps;
            else if (!all) throw Error(ErrorKind::InvalidTarget, "choose --op N, --all, --type-ops or --value-ops");
            const DocumentTransfer t = transferBetween(load(file), load(other), sel, editMeta());
            saveDocument(t.receiver, other);
            std::cout << printScript(t.transferred);
            if (t.conflict) throw Conflict{"conflict: part of " + other + " was overridden"};
        } else if (*sync) {
            const Document to = transferBetween(load(file), load(other), Selector{}, editMeta()).receiver;
            const Document from = transferBetween(to, load(file), Selector{}, editMeta()).receiver;
            saveDocument(to, other);
            saveDocument(from, file);
        } else if (*undo) {
            saveDocument(undoInDocument(load(file), index, editMeta()), file);
        } else if (*eval) {
            const Document d = load(file);
            const Path p = parsePath(pathText);
            const Type* t = typeAt(d.state.type, typePathOf(d.state.type, p));
            if (!t || t->kind != TypeKind::Formula || !t->formula)
                throw Error(ErrorKind::TypeMismatch, pathText + " is not a formula field");
            std::cout << printValue(evaluateFormula(d.state, *t->formula)) << "\n";
        } else if (*capture) {
            Document base = load(file);
            const Document sculpted = load(other);
            if (field.empty()) field = base.ids.next();
            const Diff d = diffDocuments(base, sculpted);
            const Timeline ops = transferIntoFormula(d, false, parsePath(returnText), parsePath(atText), field);
            saveDocument(applyOps(base, ops, editMeta()), file);
            std::cout << printScript(ops);
        }
    } catch (const Conflict& c) {
        std::cerr << c.message << "\n";
        return kConflict;
    } catch (const DependencyFailure& e) {
        std::cerr << e.what() << " (blocked by operation " << e.blocker() << ")\n";
        return kConflict;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kUserError;
    }
    return 0;
}
