#pragma once
// Machine-readable artifacts: solve-report and calibration-table JSON, CSV
// number formatting, and a small validator for the schema files shipped under
// schemas/. The validator covers exactly the keywords those schemas use.

#include "qcoin/amplify.hpp"
#include "qcoin/simulate.hpp"
#include "qcoin/solver.hpp"

#include <json.hpp>

#include <cstdio>
#include <optional>
#include <regex>
#include <string>

namespace qcoin {

using ordered_json = nlohmann::ordered_json;

// CSV contract: '.' decimal, no locale, 12 significant digits
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline ordered_json report_json(const solve_report& rep, const coin_config& x_true,
                                uint64_t seed) {
    ordered_json j;
    j["n"] = x_true.n;
    j["k"] = x_true.weight();
    j["x_true"] = x_true.to_string();
    j["x_found"] = rep.x_found.to_string();
    j["success"] = rep.success;
    j["success_probability"] = rep.success_probability;
    j["queries"] = ordered_json{{"balance", rep.ledger.balance}, {"quasi", rep.ledger.quasi}};
    j["mode"] = to_string(rep.mode);
    j["seed"] = seed;
    j["schedule_id"] = cal::schedule_id;
    return j;
}

// Worst ladder residual over the good fractions achievable with at most k
// false coins: every even mask size up to 64 exactly, then power-of-two sizes
// to 4096; fake overlaps m even in [2, min(w, k, 256)]. The supremum fraction
// 2/3 sits at (w, m) = (4, 2); k < 2 admits no class and reports 0.
inline double worst_class_residual(int k, const search_schedule& sched) {
    double worst = 0;
    auto visit = [&](long w) {
        for (long m = 2; m <= std::min({w, (long)k, 256L}); m += 2)
            worst = std::max(worst, ladder_residual(partition_fraction(w, m), sched));
    };
    for (long w = 2; w <= 64; w += 2) visit(w);
    for (long w = 128; w <= 4096; w *= 2) visit(w);
    return worst;
}

inline ordered_json calibration_entry(int k) {
    const search_schedule sched = plan_schedule(k);
    ordered_json j;
    j["k"] = k;
    j["stages"] = sched.pass;
    j["c0"] = cal::c0;
    j["worst_residual"] = worst_class_residual(k, sched);
    return j;
}

namespace detail {

inline bool json_type_is(const ordered_json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

} // namespace detail

// first violation of the supported draft-07 subset, or nullopt when valid
inline std::optional<std::string> schema_violation(const ordered_json& v,
                                                   const ordered_json& schema,
                                                   const std::string& at = "$") {
    if (schema.contains("type") && !detail::json_type_is(v, schema["type"]))
        return at + ": expected type " + schema["type"].get<std::string>();
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& e : schema["enum"]) hit = hit || e == v;
        if (!hit) return at + ": value not in enum";
    }
    if (schema.contains("minimum") && v.is_number() &&
        v.get<double>() < schema["minimum"].get<double>())
        return at + ": below minimum";
    if (schema.contains("maximum") && v.is_number() &&
        v.get<double>() > schema["maximum"].get<double>())
        return at + ": above maximum";
    if (schema.contains("pattern") && v.is_string() &&
        !std::regex_search(v.get<std::string>(), std::regex(schema["pattern"].get<std::string>())))
        return at + ": pattern mismatch";
    if (v.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!v.contains(key.get<std::string>()))
                    return at + ": missing required key " + key.get<std::string>();
        const bool closed = schema.contains("additionalProperties") &&
                            schema["additionalProperties"].is_boolean() &&
                            !schema["additionalProperties"].get<bool>();
        for (const auto& [key, val] : v.items()) {
            if (schema.contains("properties") && schema["properties"].contains(key)) {
                if (auto err = schema_violation(val, schema["properties"][key], at + "." + key))
                    return err;
            } else if (closed) {
                return at + ": unexpected key " + key;
            }
        }
    }
    if (v.is_array() && schema.contains("items"))
        for (size_t i = 0; i < v.size(); ++i)
            if (auto err = schema_violation(v[i], schema["items"], at + "[" + std::to_string(i) + "]"))
                return err;
    return std::nullopt;
}

} // namespace qcoin
