#pragma once

// Strict helpers for config parsing: unknown keys are errors, missing keys
// are errors, and type mismatches name the offending field.

#include <initializer_list>
#include <string>

#include "json.hpp"
#include "monofit/errors.hpp"

namespace monofit::jsonutil {

using nlohmann::json;

inline void expect_object(const json& j, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + ": expected a JSON object");
}

inline void expect_keys(const json& j, const std::string& what,
                        std::initializer_list<const char*> required,
                        std::initializer_list<const char*> optional = {}) {
    expect_object(j, what);
    for (const char* k : required)
        if (!j.contains(k)) throw ConfigError(what + ": missing field \"" + k + "\"");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : required)
            if (key == k) known = true;
        for (const char* k : optional)
            if (key == k) known = true;
        if (!known) throw ConfigError(what + ": unknown field \"" + key + "\"");
    }
}

inline std::string get_string(const json& j, const std::string& what, const char* key) {
    if (!j.at(key).is_string())
        throw ConfigError(what + ": field \"" + key + "\" must be a string");
    return j.at(key).get<std::string>();
}

inline long long get_int(const json& j, const std::string& what, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError(what + ": field \"" + key + "\" must be an integer");
    return v.get<long long>();
}

inline std::uint64_t get_uint64(const json& j, const std::string& what, const char* key) {
    const json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
        return static_cast<std::uint64_t>(v.get<long long>());
    throw ConfigError(what + ": field \"" + key + "\" must be a nonnegative integer");
}

inline double get_double(const json& j, const std::string& what, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(what + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace monofit::jsonutil
