#pragma once

// Typed rich-data model: IDs, paths, types, values and states.

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace baseline {

using Id = std::string;

/// Path segment selecting the element type of a list.
inline constexpr std::string_view kElementType = "*";
/// Element ID given to the single element created by ListOf.
inline constexpr std::string_view kWrapId = "1!";
/// Link target meaning "no element".
inline constexpr std::string_view kNullLink = "*";

/// Lowercase alphanumerics plus '-' and '_', or one of the reserved tokens.
bool isValidId(std::string_view id) noexcept;
bool isReservedId(std::string_view id) noexcept;

/// Orders element IDs: `<tag>-<counter>` IDs compare by tag then numeric
/// counter, anything else falls back to plain string order.
bool idLess(std::string_view a, std::string_view b);

class Path {
public:
    Path() = default;
    Path(std::initializer_list<Id> segments) : segments_(segments) {}
    explicit Path(std::vector<Id> segments) : segments_(std::move(segments)) {}

    std::size_t size() const noexcept { return segments_.size(); }
    bool empty() const noexcept { return segments_.empty(); }
    const Id& operator[](std::size_t i) const { return segments_[i]; }
    auto begin() const noexcept { return segments_.begin(); }
    auto end() const noexcept { return segments_.end(); }
    const Id& back() const { return segments_.back(); }
    const std::vector<Id>& segments() const noexcept { return segments_; }

    Path parent() const { return prefix(size() == 0 ? 0 : size() - 1); }
    Path prefix(std::size_t n) const;
    Path suffix(std::size_t from) const;
    Path child(Id id) const;
    Path operator+(const Path& rhs) const;

    /// True when `prefix` equals the first segments of this path.
    bool startsWith(const Path& prefix) const;
    bool hasWildcard() const;

    std::string str() const;

    bool operator==(const Path&) const = default;
    bool operator<(const Path& rhs) const { return segments_ < rhs.segments_; }

private:
    std::vector<Id> segments_;
};

/// Deep-copying owner for recursive members.
template <class T>
class Box {
public:
    Box() : ptr_(std::make_unique<T>()) {}
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

private:
    std::unique_ptr<T> ptr_;
};

struct Formula;
struct Column;

enum class TypeKind { String, Number, List, Record, Link, Formula, Bottom };

struct Type {
    TypeKind kind = TypeKind::Record;
    std::vector<Column> columns;               // Record
    std::optional<Box<Type>> element;          // List
    Path range;                                // Link
    std::shared_ptr<const Formula> formula;    // Formula

    static Type string() { return of(TypeKind::String); }
    static Type number() { return of(TypeKind::Number); }
    static Type bottom() { return of(TypeKind::Bottom); }
    static Type unit() { return of(TypeKind::Record); }
    static Type list(Type element);
    static Type record(std::vector<Column> columns);
    static Type link(Path range);
    static Type formulaOf(Formula f);

    bool isAtomic() const noexcept { return kind == TypeKind::String || kind == TypeKind::Number; }
    bool isList() const noexcept { return kind == TypeKind::List; }
    bool isRecord() const noexcept { return kind == TypeKind::Record; }

    const Type& elem() const { return **element; }
    Type& elem() { return **element; }

    const Column* column(std::string_view id) const;
    Column* column(std::string_view id);
    std::optional<std::size_t> columnIndex(std::string_view id) const;

    bool operator==(const Type& rhs) const;

private:
    static Type of(TypeKind k) {
        Type t;
        t.kind = k;
        return t;
    }
};

struct Column {
    Id id;
    std::string name;
    Type type;

    bool operator==(const Column&) const = default;
};

struct Slot;

enum class ValueKind { String, Number, List, Record, Link, Tombstone };

struct Value {
    ValueKind kind = ValueKind::Record;
    std::string text;          // String atom, link target
    double num = 0.0;          // Number atom
    std::vector<Slot> slots;   // list elements or record fields, in order

    static Value string(std::string s);
    static Value number(double n);
    static Value list(std::vector<Slot> elements = {});
    static Value record(std::vector<Slot> fields = {});
    static Value link(Id target);
    static Value nullLink() { return link(Id(kNullLink)); }
    static Value tombstone();

    bool isAtomic() const noexcept { return kind == ValueKind::String || kind == ValueKind::Number; }
    bool isTombstone() const noexcept { return kind == ValueKind::Tombstone; }
    bool isNullLink() const noexcept { return kind == ValueKind::Link && text == kNullLink; }

    const Slot* slot(std::string_view id) const;
    Slot* slot(std::string_view id);
    std::optional<std::size_t> slotIndex(std::string_view id) const;
    /// Element that is not a tombstone, or nullptr.
    const Value* live(std::string_view id) const;
    Value* live(std::string_view id);

    /// Strict structural equality; NaN equals NaN and tombstones count.
    bool operator==(const Value& rhs) const;
};

struct Slot {
    Id id;
    Value value;

    bool operator==(const Slot&) const = default;
};

/// A value paired with its type; `typecheck(value, type)` always holds.
struct State {
    Value value;
    Type type;

    static State unit() { return State{Value::record(), Type::unit()}; }

    bool operator==(const State&) const = default;
};

/// Equality ignoring list tombstones: two states are equivalent when every
/// user-visible element and cell agrees.
bool equivalent(const Value& a, const Value& b);
bool equivalent(const State& a, const State& b);

class IdGenerator {
public:
    IdGenerator() = default;
    explicit IdGenerator(std::string replica, std::uint64_t counter = 0)
        : replica_(std::move(replica)), counter_(counter) {}

    const std::string& replica() const noexcept { return replica_; }
    std::uint64_t counter() const noexcept { return counter_; }

    Id next() { return replica_ + "-" + std::to_string(counter_++); }

    bool operator==(const IdGenerator&) const = default;

private:
    std::string replica_ = "r";
    std::uint64_t counter_ = 0;
};

/// Pure form of IdGenerator::next.
std::pair<Id, IdGenerator> freshId(IdGenerator g);

Value initialValue(const Type& t);
bool isInitial(const Value& v, const Type& t);
bool typecheck(const Value& v, const Type& t);

/// Result of resolving a path; `value` is null once a `*` segment has been
/// crossed (the path then only denotes a type).
struct Located {
    const Value* value = nullptr;
    const Type* type = nullptr;
};

/// Throws PathNotFound or TombstoneAtPath.
Located resolvePath(const State& s, const Path& p);

// Low-level navigation used by the engine. Element IDs and `*` both step into
// a list's element type. Return nullptr when the path does not exist.
const Type* typeAt(const Type& root, const Path& p);
Type* typeAt(Type& root, const Path& p);
const Value* valueAt(const Value& root, const Path& p);
Value* valueAt(Value& root, const Path& p);

/// Expands every `*` in `pattern` over the live elements of the
/// corresponding lists, returning concrete paths in document order.
std::vector<Path> instances(const Value& root, const Path& pattern);

/// Replaces element IDs with `*`, giving the type path of a value path.
Path typePathOf(const Type& root, const Path& valuePath);

}  // namespace baseline
