#pragma once

#include "mlgen/errors.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

namespace mlgen::jsonutil {

using Json = nlohmann::ordered_json;

// Parses a JSON document, rejecting duplicate object keys anywhere.
inline Json parse_checked(const std::string& text, const std::string& what) {
    std::vector<std::set<std::string>> objects;
    auto callback = [&objects, &what](int /*depth*/, Json::parse_event_t event, Json& parsed) {
        switch (event) {
        case Json::parse_event_t::object_start:
            objects.emplace_back();
            break;
        case Json::parse_event_t::object_end:
            objects.pop_back();
            break;
        case Json::parse_event_t::key:
            if (!objects.back().insert(parsed.get<std::string>()).second) {
                throw ParseError(what + ": duplicate key '" + parsed.get<std::string>() + "'");
            }
            break;
        default:
            break;
        }
        return true;
    };
    try {
        return Json::parse(text, callback);
    } catch (const Json::parse_error& error) {
        throw ParseError(what + ": " + error.what());
    }
}

// Schema checks below report violations with a JSON-pointer-ish path.

inline void require_object(const Json& node, const std::string& path) {
    if (!node.is_object()) throw ParseError("schema violation at " + path + ": expected object");
}

inline void require_array(const Json& node, const std::string& path) {
    if (!node.is_array()) throw ParseError("schema violation at " + path + ": expected array");
}

inline void require_keys(const Json& node, const std::vector<std::string>& allowed,
                         const std::string& path) {
    require_object(node, path);
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (const auto& candidate : allowed) {
            if (key == candidate) {
                known = true;
                break;
            }
        }
        if (!known) throw ParseError("schema violation at " + path + ": unknown key '" + key + "'");
    }
}

inline std::string get_string(const Json& node, const std::string& key, const std::string& path) {
    if (!node.contains(key) || !node[key].is_string()) {
        throw ParseError("schema violation at " + path + ": '" + key + "' must be a string");
    }
    return node[key].get<std::string>();
}

inline std::string get_string_or(const Json& node, const std::string& key,
                                 const std::string& fallback, const std::string& path) {
    if (!node.contains(key)) return fallback;
    if (!node[key].is_string()) {
        throw ParseError("schema violation at " + path + ": '" + key + "' must be a string");
    }
    return node[key].get<std::string>();
}

inline bool get_bool_or(const Json& node, const std::string& key, bool fallback,
                        const std::string& path) {
    if (!node.contains(key)) return fallback;
    if (!node[key].is_boolean()) {
        throw ParseError("schema violation at " + path + ": '" + key + "' must be a boolean");
    }
    return node[key].get<bool>();
}

} // namespace mlgen::jsonutil
