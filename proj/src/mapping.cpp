#include "mlgen/mapping.hpp"

#include "json_util.hpp"

#include <deque>
#include <set>

namespace mlgen {

using jsonutil::Json;

namespace {

std::vector<std::pair<std::string, std::string>> parse_string_map(const Json& node,
                                                                  const std::string& path) {
    jsonutil::require_object(node, path);
    std::vector<std::pair<std::string, std::string>> result;
    for (const auto& [key, value] : node.items()) {
        if (!value.is_string()) {
            throw ParseError("schema violation at " + path + "/" + key + ": expected a string");
        }
        result.emplace_back(key, value.get<std::string>());
    }
    return result;
}

MappingEntry parse_entry(const Json& node, const std::string& path) {
    jsonutil::require_keys(node, {"template", "properties", "modelCommands"}, path);
    MappingEntry entry;
    entry.templateName = jsonutil::get_string(node, "template", path);
    if (entry.templateName.empty()) {
        throw ParseError("schema violation at " + path + ": 'template' must be non-empty");
    }
    if (node.contains("properties")) {
        entry.properties = parse_string_map(node["properties"], path + "/properties");
    }
    if (node.contains("modelCommands")) {
        entry.modelCommands = parse_string_map(node["modelCommands"], path + "/modelCommands");
    }

    std::set<std::string> targets;
    for (const auto& [source, target] : entry.properties) {
        if (!targets.insert(target).second) {
            throw MappingError("duplicate target variable '" + target + "' at " + path);
        }
    }
    for (const auto& [command, target] : entry.modelCommands) {
        if (!targets.insert(target).second) {
            throw MappingError("duplicate target variable '" + target + "' at " + path);
        }
    }
    return entry;
}

std::vector<std::pair<std::string, MappingEntry>> parse_entry_map(const Json& node,
                                                                  const std::string& path) {
    jsonutil::require_object(node, path);
    std::vector<std::pair<std::string, MappingEntry>> result;
    for (const auto& [key, value] : node.items()) {
        result.emplace_back(key, parse_entry(value, path + "/" + key));
    }
    return result;
}

} // namespace

const MappingEntry* MappingConfig::find_stereotype_mapping(const std::string& stereotype) const {
    for (const auto& [name, entry] : stereotypeMappings_) {
        if (name == stereotype) return &entry;
    }
    return nullptr;
}

const MappingEntry* MappingConfig::find_name_mapping(const std::string& blockName) const {
    for (const auto& [name, entry] : nameMappings_) {
        if (name == blockName) return &entry;
    }
    return nullptr;
}

MappingConfig parse_mapping(const std::string& text) {
    Json document = jsonutil::parse_checked(text, "mapping file");
    jsonutil::require_keys(document,
                           {"trimEmptyLines", "constants", "stereotypeMappings", "nameMappings"},
                           "/");

    bool trimEmptyLines = jsonutil::get_bool_or(document, "trimEmptyLines", false, "/");

    std::vector<std::pair<std::string, std::string>> constants;
    if (document.contains("constants")) {
        constants = parse_string_map(document["constants"], "/constants");
    }

    std::vector<std::pair<std::string, MappingEntry>> stereotypeMappings;
    if (document.contains("stereotypeMappings")) {
        stereotypeMappings = parse_entry_map(document["stereotypeMappings"], "/stereotypeMappings");
    }

    std::vector<std::pair<std::string, MappingEntry>> nameMappings;
    if (document.contains("nameMappings")) {
        nameMappings = parse_entry_map(document["nameMappings"], "/nameMappings");
    }

    return MappingConfig(trimEmptyLines, std::move(constants), std::move(stereotypeMappings),
                         std::move(nameMappings));
}

SelectedMapping select_mapping(const MappingConfig& config, const Model& model, const Block& block) {
    if (const MappingEntry* entry = config.find_name_mapping(block.name)) {
        return {entry, MappingProvenance::ByName, block.name};
    }

    // Breadth-first walk upward from each applied stereotype so the nearest
    // mapped ancestor wins; ancestors shared between applications still count
    // once per application, which keeps the ambiguity check honest.
    struct Hit {
        std::string applied;
        std::string mapped;
        const MappingEntry* entry;
    };
    std::vector<Hit> hits;
    std::set<std::string> appliedSeen;
    for (const auto& application : block.appliedStereotypes) {
        if (!appliedSeen.insert(application.stereotype).second) continue;

        std::deque<std::string> frontier{application.stereotype};
        std::set<std::string> visited{application.stereotype};
        while (!frontier.empty()) {
            std::string current = frontier.front();
            frontier.pop_front();
            if (const MappingEntry* entry = config.find_stereotype_mapping(current)) {
                hits.push_back({application.stereotype, current, entry});
                break;
            }
            for (const auto& parent : model.stereotype(current).parents) {
                if (visited.insert(parent).second) frontier.push_back(parent);
            }
        }
    }

    if (hits.empty()) {
        throw MappingError("no mapping found for block '" + block.qualifiedName.str() + "'");
    }
    if (hits.size() > 1) {
        std::string names;
        for (std::size_t i = 0; i < hits.size(); ++i) {
            if (i) names += i + 1 == hits.size() ? " and " : ", ";
            names += "'" + hits[i].applied + "'";
        }
        throw MappingError("ambiguous mapping for block '" + block.qualifiedName.str() +
                           "': applied stereotypes " + names +
                           " both resolve to mapping entries; add a name mapping to disambiguate");
    }
    return {hits[0].entry, MappingProvenance::ByStereotype, hits[0].mapped};
}

} // namespace mlgen
