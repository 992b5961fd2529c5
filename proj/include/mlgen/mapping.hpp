#pragma once

#include "mlgen/errors.hpp"
#include "mlgen/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace mlgen {

// One mapping entry: the template to instantiate plus how its variables are
// fed — from stereotype/block attributes (`properties`) and from navigation
// commands evaluated against the block context (`modelCommands`).
struct MappingEntry {
    std::string templateName;
    std::vector<std::pair<std::string, std::string>> properties;    // attribute -> variable
    std::vector<std::pair<std::string, std::string>> modelCommands; // command -> variable
};

enum class MappingProvenance { ByName, ByStereotype };

struct SelectedMapping {
    const MappingEntry* entry;
    MappingProvenance provenance;
    std::string key; // the block name or stereotype name that supplied the entry
};

class MappingConfig {
public:
    MappingConfig() = default;
    MappingConfig(bool trimEmptyLines,
                  std::vector<std::pair<std::string, std::string>> constants,
                  std::vector<std::pair<std::string, MappingEntry>> stereotypeMappings,
                  std::vector<std::pair<std::string, MappingEntry>> nameMappings)
        : trimEmptyLines_(trimEmptyLines),
          constants_(std::move(constants)),
          stereotypeMappings_(std::move(stereotypeMappings)),
          nameMappings_(std::move(nameMappings)) {}

    bool trim_empty_lines() const { return trimEmptyLines_; }
    const std::vector<std::pair<std::string, std::string>>& constants() const { return constants_; }
    const std::vector<std::pair<std::string, MappingEntry>>& stereotype_mappings() const {
        return stereotypeMappings_;
    }
    const std::vector<std::pair<std::string, MappingEntry>>& name_mappings() const {
        return nameMappings_;
    }

    const MappingEntry* find_stereotype_mapping(const std::string& stereotype) const;
    const MappingEntry* find_name_mapping(const std::string& blockName) const;

private:
    bool trimEmptyLines_ = false;
    std::vector<std::pair<std::string, std::string>> constants_;
    std::vector<std::pair<std::string, MappingEntry>> stereotypeMappings_;
    std::vector<std::pair<std::string, MappingEntry>> nameMappings_;
};

// Parses a mapping file. Unknown keys, duplicate keys, and a template
// variable targeted twice within one entry are all rejected.
MappingConfig parse_mapping(const std::string& text);

// Picks the entry for a block. Name mappings win outright; otherwise each
// applied stereotype walks its inheritance chain upward and the nearest
// mapped ancestor supplies the entry. Two applied stereotypes that both
// resolve somewhere is ambiguous and refused.
SelectedMapping select_mapping(const MappingConfig& config, const Model& model, const Block& block);

} // namespace mlgen
