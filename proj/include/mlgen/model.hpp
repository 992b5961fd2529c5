#pragma once

#include "mlgen/qualified_name.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mlgen {

enum class StereotypeKind { MlTask, Data };

enum class ValueType { String, Number, Boolean, Reference };

// A primitive attribute/property value as stored in the model document.
struct Primitive {
    std::variant<std::string, double, std::int64_t, bool> value;

    // Target-snippet text: shortest round-trip decimals, True/False booleans,
    // strings verbatim (templates decide quoting).
    std::string render() const;

    friend bool operator==(const Primitive&, const Primitive&) = default;
};

// Primitive now, or a qualified-name reference resolved only when demanded.
struct AttributeValue {
    std::variant<Primitive, QualifiedName> value;

    bool is_reference() const { return std::holds_alternative<QualifiedName>(value); }
    const Primitive& primitive() const { return std::get<Primitive>(value); }
    const QualifiedName& reference() const { return std::get<QualifiedName>(value); }

    friend bool operator==(const AttributeValue&, const AttributeValue&) = default;
};

struct PropertyDef {
    std::string name;
    ValueType type = ValueType::String;
    bool mandatory = false;
    std::optional<Primitive> defaultValue; // absent when mandatory

    friend bool operator==(const PropertyDef&, const PropertyDef&) = default;
};

struct StereotypeDef {
    std::string name;
    StereotypeKind kind = StereotypeKind::MlTask;
    std::vector<std::string> parents;
    std::vector<PropertyDef> properties;

    friend bool operator==(const StereotypeDef&, const StereotypeDef&) = default;
};

// One stereotype applied to a block, with the property values assigned there.
struct StereotypeApplication {
    std::string stereotype;
    std::vector<std::pair<std::string, AttributeValue>> values; // declaration order

    const AttributeValue* find(const std::string& property) const {
        for (const auto& [name, value] : values) {
            if (name == property) return &value;
        }
        return nullptr;
    }

    friend bool operator==(const StereotypeApplication&, const StereotypeApplication&) = default;
};

struct Attribute {
    std::string name; // a leading "**" marks a kwargs extra
    AttributeValue value;
    std::vector<std::string> dataStereotypes;

    bool is_kwargs() const { return name.rfind("**", 0) == 0; }

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Block {
    QualifiedName qualifiedName;
    std::string name; // defaults to the last qualified-name segment
    std::vector<StereotypeApplication> appliedStereotypes;
    std::vector<Attribute> ownAttributes;
    std::vector<QualifiedName> parts; // composed input blocks, declaration order
    std::vector<std::string> comments;

    friend bool operator==(const Block&, const Block&) = default;
};

struct State {
    std::string name;
    int order = 0;
    QualifiedName block;

    friend bool operator==(const State&, const State&) = default;
};

struct StateMachine {
    std::string name;
    std::vector<State> states; // kept sorted ascending by order after load

    friend bool operator==(const StateMachine&, const StateMachine&) = default;
};

// An effective property of an applied stereotype: the resolved definition,
// the stereotype that contributed it, and the value assigned on the block.
struct EffectiveProperty {
    PropertyDef def;
    std::string owner;
    std::optional<AttributeValue> assigned;
};

// The loaded SysML-lite world. Immutable after load.
class Model {
public:
    Model(std::vector<StereotypeDef> stereotypes, std::vector<Block> blocks,
          std::vector<StateMachine> machines);

    const std::vector<StereotypeDef>& stereotypes() const { return stereotypes_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<StateMachine>& state_machines() const { return machines_; }

    const StereotypeDef* find_stereotype(const std::string& name) const;
    const Block* find_block(const QualifiedName& qn) const;
    const StateMachine* find_machine(const std::string& name) const;

    // Like the find_* variants but throwing ModelError on a miss.
    const StereotypeDef& stereotype(const std::string& name) const;
    const Block& block(const QualifiedName& qn) const;

    // Ancestors-before-descendants order over the inheritance graph reachable
    // from `name`, each stereotype exactly once; `name` itself comes last.
    std::vector<const StereotypeDef*> linearize(const std::string& name) const;

    // True when `name` equals `ancestor` or transitively inherits from it.
    bool inherits_from(const std::string& name, const std::string& ancestor) const;

private:
    std::vector<StereotypeDef> stereotypes_;
    std::vector<Block> blocks_;
    std::vector<StateMachine> machines_;
    std::map<std::string, std::size_t> stereotypeIndex_;
    std::map<std::string, std::size_t> blockIndex_; // keyed by qualified-name text
};

// Union of inherited and own property definitions for one applied stereotype,
// derived definitions shadowing base ones by name, paired with the values the
// block assigns. Order: first definition position in linearization order.
std::vector<EffectiveProperty> effective_properties(const Model& model, const Block& block,
                                                    const std::string& stereotypeName);

// Resolves `parts` in declaration order.
std::vector<const Block*> connected_inputs(const Model& model, const Block& block);

} // namespace mlgen
