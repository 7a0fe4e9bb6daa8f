#include "baseline/script.hpp"

#include "baseline/error.hpp"
#include "baseline/execute.hpp"

#include <cctype>
#include <cmath>
#include <initializer_list>
#include <sstream>

namespace baseline {

namespace {

bool idChar(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '*' || c == '!';
}

class Parser {
public:
    Parser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    Operation operation() {
        Operation o;
        skipSpace();
        Path target = path(true);
        skipSpace();
        const std::string name = word();
        o.target = std::move(target);
        if (name == "noop") {
            o.kind = OpKind::Noop;
        } else if (name == "write") {
            o.kind = OpKind::Write;
            o.value = atom();
        } else if (name == "insert" || name == "Insert") {
            o.kind = name == "insert" ? OpKind::Insert : OpKind::InsertCol;
            o.id = id();
            keyword("before");
            o.anchor = id();
        } else if (name == "append" || name == "Append") {
            o.kind = name == "append" ? OpKind::Append : OpKind::AppendCol;
            o.id = id();
        } else if (name == "delete" || name == "Delete") {
            o.kind = name == "delete" ? OpKind::Delete : OpKind::DeleteCol;
            o.id = id();
        } else if (name == "move" || name == "Move") {
            o.kind = name == "move" ? OpKind::Move : OpKind::MoveCol;
            o.dest = path(false);
        } else if (name == "link") {
            o.kind = OpKind::LinkSet;
            o.id = id();
        } else if (name == "deletePresent") {
            o.kind = OpKind::DeletePresent;
        } else if (name == "deleteAbsent") {
            o.kind = OpKind::DeleteAbsent;
        } else if (name == "Define") {
            o.kind = OpKind::Define;
            o.type = type();
        } else if (name == "Convert") {
            o.kind = OpKind::Convert;
            o.type = type();
            if (!o.type.isAtomic()) fail("an atomic type");
        } else if (name == "Rename") {
            o.kind = OpKind::Rename;
            o.name = string();
        } else if (name == "ListOf") {
            o.kind = OpKind::ListOf;
        } else if (name == "IntoFirst") {
            o.kind = OpKind::IntoFirst;
        } else if (name == "RecordOf") {
            o.kind = OpKind::RecordOf;
            o.id = id();
        } else if (name == "IntoField") {
            o.kind = OpKind::IntoField;
            o.id = id();
        } else if (name == "Link") {
            o.kind = OpKind::LinkType;
            o.dest = path(false);
        } else if (name == "Split") {
            o.kind = OpKind::Split;
            o.dest = path(false);
        } else if (name == "Join") {
            o.kind = OpKind::Join;
        } else {
            pos_ -= name.size();
            fail("an operation name");
        }
        return o;
    }

    Type type() {
        skipSpace();
        if (peek('{')) return record();
        if (peek('-') && text_.substr(pos_, 2) == "->") {
            pos_ += 2;
            skipSpace();
            return Type::link(path(false));
        }
        const std::string w = word();
        if (w == "String") return Type::string();
        if (w == "Number") return Type::number();
        if (w == "Bottom") return Type::bottom();
        if (w == "List") return Type::list(type());
        if (w == "formula") return formula();
        pos_ -= w.size();
        fail("a type");
    }

    Path path(bool requireDot) {
        skipSpace();
        std::vector<Id> segs;
        if (peek('.')) {
            ++pos_;
            if (atEnd() || !idChar(text_[pos_])) return Path{};
        } else if (requireDot) {
            fail("a path");
        }
        while (true) {
            segs.push_back(rawId("a path segment"));
            if (!peek('.')) break;
            ++pos_;
        }
        return Path(std::move(segs));
    }

    Value atom() {
        skipSpace();
        if (peek('"')) return Value::string(string());
        const std::size_t start = pos_;
        while (!atEnd() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != ';' &&
               text_[pos_] != '^' && text_[pos_] != ')')
            ++pos_;
        const std::string_view tok = text_.substr(start, pos_ - start);
        if (tok == "NaN") return Value::number(std::nan(""));
        if (tok == "inf") return Value::number(HUGE_VAL);
        if (tok == "-inf") return Value::number(-HUGE_VAL);
        const double n = stringToNumber(tok);
        if (tok.empty() || std::isnan(n)) {
            pos_ = start;
            fail("a number, string or NaN");
        }
        return Value::number(n);
    }

    std::string string() {
        skipSpace();
        if (!peek('"')) fail("a quoted string");
        ++pos_;
        std::string out;
        while (true) {
            if (atEnd()) fail("a closing quote");
            char c = text_[pos_++];
            if (c == '"') break;
            if (c != '\\') {
                out.push_back(c);
                continue;
            }
            if (atEnd()) fail("an escape character");
            switch (char e = text_[pos_++]) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                case '"':
                case '\\': out.push_back(e); break;
                default: --pos_; fail("one of \\n \\t \\r \\\" \\\\");
            }
        }
        return out;
    }

    void finish() {
        skipSpace();
        if (!atEnd() && text_[pos_] != '#') fail("end of line");
    }

    bool atEnd() const { return pos_ >= text_.size(); }

private:
    Type record() {
        expect('{');
        std::vector<Column> cols;
        skipSpace();
        if (peek('}')) {
            ++pos_;
            return Type::record(std::move(cols));
        }
        while (true) {
            Column c;
            c.id = id();
            skipSpace();
            c.name = peek('"') ? string() : c.id;
            expect(':');
            c.type = type();
            cols.push_back(std::move(c));
            skipSpace();
            if (peek('}')) {
                ++pos_;
                break;
            }
            expect(',');
        }
        return Type::record(std::move(cols));
    }

    Type formula() {
        expect('(');
        Formula f;
        skipSpace();
        if (!peek('^')) {
            while (true) {
                f.ops.push_back(operation());
                skipSpace();
                if (peek('^')) break;
                expect(';');
            }
        }
        expect('^');
        f.returnPath = path(false);
        expect(')');
        return Type::formulaOf(std::move(f));
    }

    Id id() {
        skipSpace();
        return rawId("an ID");
    }

    Id rawId(const char* what) {
        const std::size_t start = pos_;
        while (!atEnd() && idChar(text_[pos_])) ++pos_;
        Id out(text_.substr(start, pos_ - start));
        if (!isValidId(out)) {
            pos_ = start;
            fail(what);
        }
        return out;
    }

    std::string word() {
        skipSpace();
        const std::size_t start = pos_;
        while (!atEnd() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("a keyword");
        return std::string(text_.substr(start, pos_ - start));
    }

    void keyword(std::string_view k) {
        const std::size_t start = pos_;
        if (word() != k) {
            pos_ = start;
            skipSpace();
            fail(std::string("'") + std::string(k) + "'");
        }
    }

    void expect(char c) {
        skipSpace();
        if (!peek(c)) fail(std::string("'") + c + "'");
        ++pos_;
    }

    bool peek(char c) const { return !atEnd() && text_[pos_] == c; }

    void skipSpace() {
        while (!atEnd() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = atEnd() ? "end of input" : "'" + std::string(1, text_[pos_]) + "'";
        throw ParseError(line_, pos_ + 1, "expected " + expected + ", found " + found);
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

void printFields(std::ostringstream& out, const Value& v, bool showTombstones, bool list);

void printInto(std::ostringstream& out, const Value& v, bool showTombstones) {
    switch (v.kind) {
        case ValueKind::String:
        case ValueKind::Number: out << printAtom(v); break;
        case ValueKind::Link: out << "->" << v.text; break;
        case ValueKind::Tombstone: out << "<deleted>"; break;
        case ValueKind::List: printFields(out, v, showTombstones, true); break;
        case ValueKind::Record: printFields(out, v, showTombstones, false); break;
    }
}

void printFields(std::ostringstream& out, const Value& v, bool showTombstones, bool list) {
    out << (list ? '[' : '{');
    bool first = true;
    for (const auto& s : v.slots) {
        if (s.value.isTombstone() && !showTombstones) continue;
        if (!first) out << ", ";
        first = false;
        out << s.id << ": ";
        printInto(out, s.value, showTombstones);
    }
    out << (list ? ']' : '}');
}

}  // namespace

Timeline parseScript(std::string_view text) {
    Timeline out;
    std::size_t line = 0;
    while (!text.empty()) {
        ++line;
        const auto nl = text.find('\n');
        std::string_view l = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        std::size_t i = 0;
        while (i < l.size() && std::isspace(static_cast<unsigned char>(l[i]))) ++i;
        if (i == l.size() || l[i] == '#') continue;
        Parser p(l, line);
        out.push_back(p.operation());
        p.finish();
    }
    return out;
}

Operation parseOperation(std::string_view line) {
    Parser p(line, 1);
    Operation o = p.operation();
    p.finish();
    return o;
}

Type parseType(std::string_view text) {
    Parser p(text, 1);
    Type t = p.type();
    p.finish();
    return t;
}

Path parsePath(std::string_view text) {
    Parser p(text, 1);
    Path out = p.path(false);
    p.finish();
    return out;
}

Value parseAtom(std::string_view text) {
    Parser p(text, 1);
    Value v = p.atom();
    p.finish();
    return v;
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out + "\"";
}

std::string printAtom(const Value& v) {
    if (v.kind == ValueKind::String) return quote(v.text);
    if (std::isnan(v.num)) return "NaN";
    return numberToString(v.num);
}

std::string print(const Path& p) { return p.str(); }

std::string print(const Type& t) {
    switch (t.kind) {
        case TypeKind::String: return "String";
        case TypeKind::Number: return "Number";
        case TypeKind::Bottom: return "Bottom";
        case TypeKind::List: return "List " + print(t.elem());
        case TypeKind::Link: return "-> " + t.range.str();
        case TypeKind::Record: {
            std::string out = "{";
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                if (i) out += ", ";
                out += t.columns[i].id + " " + quote(t.columns[i].name) + ": " + print(t.columns[i].type);
            }
            return out + "}";
        }
        case TypeKind::Formula: {
            std::string out = "formula(";
            if (t.formula) {
                for (std::size_t i = 0; i < t.formula->ops.size(); ++i) {
                    if (i) out += "; ";
                    out += print(t.formula->ops[i]);
                }
                out += (t.formula->ops.empty() ? "^ " : " ^ ") + t.formula->returnPath.str();
            } else {
                out += "^ .";
            }
            return out + ")";
        }
    }
    return "?";
}

std::string print(const Operation& o) {
    std::string out = o.target.str() + " " + std::string(opName(o.kind));
    switch (o.kind) {
        case OpKind::Write: out += " " + printAtom(o.value); break;
        case OpKind::Insert:
        case OpKind::InsertCol: out += " " + o.id + " before " + o.anchor; break;
        case OpKind::Append:
        case OpKind::AppendCol:
        case OpKind::Delete:
        case OpKind::DeleteCol:
        case OpKind::LinkSet:
        case OpKind::RecordOf:
        case OpKind::IntoField: out += " " + o.id; break;
        case OpKind::Move:
        case OpKind::MoveCol:
        case OpKind::LinkType:
        case OpKind::Split: out += " " + o.dest.str(); break;
        case OpKind::Define:
        case OpKind::Convert: out += " " + print(o.type); break;
        case OpKind::Rename: out += " " + quote(o.name); break;
        default: break;
    }
    return out;
}

std::string printScript(const Timeline& ops) {
    std::string out;
    for (const auto& o : ops) out += print(o) + "\n";
    return out;
}

std::string printValue(const Value& v, bool showTombstones) {
    std::ostringstream out;
    printInto(out, v, showTombstones);
    return out.str();
}

}  // namespace baseline
