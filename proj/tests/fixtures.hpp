#pragma once

// Hand-built states used as oracles. Expected states are assembled directly
// from values and types so they do not depend on the engine under test.

#include "baseline/execute.hpp"
#include "baseline/model.hpp"
#include "baseline/script.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using namespace baseline;

inline Value str(std::string s) { return Value::string(std::move(s)); }
inline Value num(double n) { return Value::number(n); }
inline Value nan() { return Value::number(std::nan("")); }
inline Value link(Id id) { return Value::link(std::move(id)); }

inline Value rec(std::vector<std::pair<Id, Value>> fields) {
    std::vector<Slot> slots;
    for (auto& [id, v] : fields) slots.push_back(Slot{id, std::move(v)});
    return Value::record(std::move(slots));
}

inline Value lst(std::vector<std::pair<Id, Value>> elems) {
    std::vector<Slot> slots;
    for (auto& [id, v] : elems) slots.push_back(Slot{id, std::move(v)});
    return Value::list(std::move(slots));
}

inline Type recT(std::vector<std::pair<Id, Type>> cols) {
    std::vector<Column> out;
    for (auto& [id, t] : cols) out.push_back(Column{id, id, std::move(t)});
    return Type::record(std::move(out));
}

inline Type listT(Type t) { return Type::list(std::move(t)); }

inline State run(const std::string& script, State s = State::unit()) {
    return executeTimeline(s, parseScript(script));
}

// Single orders table with duplicated customer data.
inline const char* kAcmeScript = R"(
. Append orders
.orders Define List {item "item": String, quantity "quantity": Number, ship_date "ship_date": String, name "name": String, address "address": String}
.orders append e1
.orders.e1.item write "Anvil"
.orders.e1.quantity write 1
.orders.e1.ship_date write "2/3/23"
.orders.e1.name write "Wile E Coyote"
.orders.e1.address write "123 Desert Station"
.orders append e2
.orders.e2.item write "Dynamite"
.orders.e2.quantity write 2
.orders.e2.name write "Daffy Duck"
.orders.e2.address write "White Rock Lake"
.orders append e3
.orders.e3.item write "Bird Seed"
.orders.e3.quantity write 1
.orders.e3.name write "Wile E Coyote"
.orders.e3.address write "123 Desert Station"
)";

inline const char* kNormalizeScript = R"(
. Append customers
.orders.*.name Split customers
.orders.*.name Rename "customer"
)";

inline const char* kDedupScript = ".customers.e3 move .customers.e1\n";

inline Value orderRow(const char* item, double qty, const char* ship, Value customer) {
    return rec({{"item", str(item)}, {"quantity", num(qty)}, {"ship_date", str(ship)}, {"name", std::move(customer)}});
}

inline Value customer(const char* name, const char* address) {
    return rec({{"name", str(name)}, {"address", str(address)}});
}

inline State acmeSingle() {
    auto row = [](const char* item, double qty, const char* ship, const char* name, const char* address) {
        return rec({{"item", str(item)},
                    {"quantity", num(qty)},
                    {"ship_date", str(ship)},
                    {"name", str(name)},
                    {"address", str(address)}});
    };
    State s;
    s.value = rec({{"orders", lst({{"e1", row("Anvil", 1, "2/3/23", "Wile E Coyote", "123 Desert Station")},
                                  {"e2", row("Dynamite", 2, "", "Daffy Duck", "White Rock Lake")},
                                  {"e3", row("Bird Seed", 1, "", "Wile E Coyote", "123 Desert Station")}})}});
    s.type = recT({{"orders", listT(recT({{"item", Type::string()},
                                          {"quantity", Type::number()},
                                          {"ship_date", Type::string()},
                                          {"name", Type::string()},
                                          {"address", Type::string()}}))}});
    return s;
}

inline Type normalizedType() {
    Type orders = recT({{"item", Type::string()},
                        {"quantity", Type::number()},
                        {"ship_date", Type::string()},
                        {"name", Type::link(Path{"customers"})}});
    orders.columns[3].name = "customer";
    return recT({{"orders", listT(std::move(orders))},
                 {"customers", listT(recT({{"name", Type::string()}, {"address", Type::string()}}))}});
}

inline State acmeSplit() {
    State s;
    s.value = rec({{"orders", lst({{"e1", orderRow("Anvil", 1, "2/3/23", link("e1"))},
                                  {"e2", orderRow("Dynamite", 2, "", link("e2"))},
                                  {"e3", orderRow("Bird Seed", 1, "", link("e3"))}})},
                   {"customers", lst({{"e1", customer("Wile E Coyote", "123 Desert Station")},
                                      {"e2", customer("Daffy Duck", "White Rock Lake")},
                                      {"e3", customer("Wile E Coyote", "123 Desert Station")}})}});
    s.type = normalizedType();
    return s;
}

inline State acmeDeduped() {
    State s;
    s.value = rec({{"orders", lst({{"e1", orderRow("Anvil", 1, "2/3/23", link("e1"))},
                                  {"e2", orderRow("Dynamite", 2, "", link("e2"))},
                                  {"e3", orderRow("Bird Seed", 1, "", link("e1"))}})},
                   {"customers", lst({{"e1", customer("Wile E Coyote", "123 Desert Station")},
                                      {"e2", customer("Daffy Duck", "White Rock Lake")},
                                      {"e3", Value::tombstone()}})}});
    s.type = normalizedType();
    return s;
}

inline const char* kTodoScript = R"(
. Define List {what "what": String, who "who": String}
. append e
.e.what write "clean"
.e.who write "Jack"
)";

inline Type todoType(bool whoIsList) {
    return listT(recT({{"what", Type::string()}, {"who", whoIsList ? listT(Type::string()) : Type::string()}}));
}

inline State todo(Value who) {
    const bool isList = who.kind == ValueKind::List;
    return State{lst({{"e", rec({{"what", str("clean")}, {"who", std::move(who)}})}}), todoType(isList)};
}

}  // namespace fixtures
