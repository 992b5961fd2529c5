#include "mlgen/model_io.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mlgen {

using jsonutil::Json;

namespace {

Primitive parse_primitive(const Json& node, const std::string& path) {
    if (node.is_string()) return {node.get<std::string>()};
    if (node.is_boolean()) return {node.get<bool>()};
    if (node.is_number_integer()) return {node.get<std::int64_t>()};
    if (node.is_number_unsigned()) return {static_cast<std::int64_t>(node.get<std::uint64_t>())};
    if (node.is_number_float()) return {node.get<double>()};
    throw ParseError("schema violation at " + path + ": expected a primitive value");
}

StereotypeKind parse_kind(const std::string& text, const std::string& path) {
    if (text == "ml-task") return StereotypeKind::MlTask;
    if (text == "data") return StereotypeKind::Data;
    throw ParseError("schema violation at " + path + ": unknown kind '" + text + "'");
}

ValueType parse_value_type(const std::string& text, const std::string& path) {
    if (text == "string") return ValueType::String;
    if (text == "number") return ValueType::Number;
    if (text == "boolean") return ValueType::Boolean;
    if (text == "reference") return ValueType::Reference;
    throw ParseError("schema violation at " + path + ": unknown type '" + text + "'");
}

StereotypeDef parse_stereotype(const Json& node, const std::string& path) {
    jsonutil::require_keys(node, {"name", "kind", "parents", "properties"}, path);
    StereotypeDef def;
    def.name = jsonutil::get_string(node, "name", path);
    def.kind = parse_kind(jsonutil::get_string(node, "kind", path), path);
    if (node.contains("parents")) {
        jsonutil::require_array(node["parents"], path + "/parents");
        for (const auto& parent : node["parents"]) {
            if (!parent.is_string()) {
                throw ParseError("schema violation at " + path + "/parents: expected strings");
            }
            def.parents.push_back(parent.get<std::string>());
        }
    }
    if (node.contains("properties")) {
        jsonutil::require_array(node["properties"], path + "/properties");
        std::set<std::string> names;
        for (std::size_t i = 0; i < node["properties"].size(); ++i) {
            const auto& propNode = node["properties"][i];
            std::string propPath = path + "/properties[" + std::to_string(i) + "]";
            jsonutil::require_keys(propNode, {"name", "type", "mandatory", "default"}, propPath);
            PropertyDef property;
            property.name = jsonutil::get_string(propNode, "name", propPath);
            if (property.name.rfind("**", 0) == 0) {
                throw ParseError("schema violation at " + propPath +
                                 ": property name must not begin with '**' "
                                 "(kwargs extras live on blocks, not stereotypes)");
            }
            if (!names.insert(property.name).second) {
                throw ModelError("duplicate property '" + property.name + "' on stereotype '" +
                                 def.name + "'");
            }
            property.type = parse_value_type(jsonutil::get_string(propNode, "type", propPath), propPath);
            property.mandatory = jsonutil::get_bool_or(propNode, "mandatory", false, propPath);
            if (propNode.contains("default")) {
                if (property.mandatory) {
                    throw ParseError("schema violation at " + propPath +
                                     ": a mandatory property cannot carry a default");
                }
                property.defaultValue = parse_primitive(propNode["default"], propPath + "/default");
            }
            def.properties.push_back(std::move(property));
        }
    }
    return def;
}

AttributeValue parse_attribute_value(const Json& node, const std::string& path) {
    bool hasValue = node.contains("value");
    bool hasRef = node.contains("ref");
    if (hasValue == hasRef) {
        throw ParseError("schema violation at " + path + ": exactly one of 'value' or 'ref' required");
    }
    if (hasValue) return {parse_primitive(node["value"], path + "/value")};
    if (!node["ref"].is_string()) {
        throw ParseError("schema violation at " + path + ": 'ref' must be a qualified-name string");
    }
    return {QualifiedName::parse(node["ref"].get<std::string>())};
}

Block parse_block(const Json& node, const std::string& path) {
    jsonutil::require_keys(
        node, {"qualifiedName", "name", "appliedStereotypes", "attributes", "parts", "comments"},
        path);
    Block block;
    block.qualifiedName = QualifiedName::parse(jsonutil::get_string(node, "qualifiedName", path));
    block.name = jsonutil::get_string_or(node, "name", block.qualifiedName.leaf(), path);

    if (node.contains("appliedStereotypes")) {
        jsonutil::require_array(node["appliedStereotypes"], path + "/appliedStereotypes");
        for (std::size_t i = 0; i < node["appliedStereotypes"].size(); ++i) {
            const auto& appNode = node["appliedStereotypes"][i];
            std::string appPath = path + "/appliedStereotypes[" + std::to_string(i) + "]";
            jsonutil::require_keys(appNode, {"stereotype", "values"}, appPath);
            StereotypeApplication application;
            application.stereotype = jsonutil::get_string(appNode, "stereotype", appPath);
            if (appNode.contains("values")) {
                jsonutil::require_object(appNode["values"], appPath + "/values");
                for (const auto& [key, value] : appNode["values"].items()) {
                    std::string valuePath = appPath + "/values/" + key;
                    if (value.is_object()) {
                        jsonutil::require_keys(value, {"ref"}, valuePath);
                        application.values.emplace_back(
                            key, AttributeValue{QualifiedName::parse(
                                     jsonutil::get_string(value, "ref", valuePath))});
                    } else {
                        application.values.emplace_back(
                            key, AttributeValue{parse_primitive(value, valuePath)});
                    }
                }
            }
            block.appliedStereotypes.push_back(std::move(application));
        }
    }

    if (node.contains("attributes")) {
        jsonutil::require_array(node["attributes"], path + "/attributes");
        std::set<std::string> names;
        for (std::size_t i = 0; i < node["attributes"].size(); ++i) {
            const auto& attrNode = node["attributes"][i];
            std::string attrPath = path + "/attributes[" + std::to_string(i) + "]";
            jsonutil::require_keys(attrNode, {"name", "value", "ref", "stereotypes"}, attrPath);
            Attribute attribute;
            attribute.name = jsonutil::get_string(attrNode, "name", attrPath);
            if (!names.insert(attribute.name).second) {
                throw ModelError("duplicate attribute '" + attribute.name + "' on block '" +
                                 block.qualifiedName.str() + "'");
            }
            attribute.value = parse_attribute_value(attrNode, attrPath);
            if (attrNode.contains("stereotypes")) {
                jsonutil::require_array(attrNode["stereotypes"], attrPath + "/stereotypes");
                for (const auto& name : attrNode["stereotypes"]) {
                    if (!name.is_string()) {
                        throw ParseError("schema violation at " + attrPath +
                                         "/stereotypes: expected strings");
                    }
                    attribute.dataStereotypes.push_back(name.get<std::string>());
                }
            }
            block.ownAttributes.push_back(std::move(attribute));
        }
    }

    if (node.contains("parts")) {
        jsonutil::require_array(node["parts"], path + "/parts");
        std::set<std::string> partNames;
        for (const auto& part : node["parts"]) {
            if (!part.is_string()) {
                throw ParseError("schema violation at " + path + "/parts: expected strings");
            }
            if (!partNames.insert(part.get<std::string>()).second) {
                throw ModelError("duplicate part '" + part.get<std::string>() + "' on block '" +
                                 block.qualifiedName.str() + "'");
            }
            block.parts.push_back(QualifiedName::parse(part.get<std::string>()));
        }
    }

    if (node.contains("comments")) {
        jsonutil::require_array(node["comments"], path + "/comments");
        for (const auto& comment : node["comments"]) {
            if (!comment.is_string()) {
                throw ParseError("schema violation at " + path + "/comments: expected strings");
            }
            block.comments.push_back(comment.get<std::string>());
        }
    }
    return block;
}

StateMachine parse_machine(const Json& node, const std::string& path) {
    jsonutil::require_keys(node, {"name", "states"}, path);
    StateMachine machine;
    machine.name = jsonutil::get_string(node, "name", path);
    if (node.contains("states")) {
        jsonutil::require_array(node["states"], path + "/states");
        std::set<int> orders;
        for (std::size_t i = 0; i < node["states"].size(); ++i) {
            const auto& stateNode = node["states"][i];
            std::string statePath = path + "/states[" + std::to_string(i) + "]";
            jsonutil::require_keys(stateNode, {"name", "order", "block"}, statePath);
            State state;
            state.name = jsonutil::get_string(stateNode, "name", statePath);
            if (!stateNode.contains("order") || !stateNode["order"].is_number_integer()) {
                throw ParseError("schema violation at " + statePath + ": 'order' must be an integer");
            }
            state.order = stateNode["order"].get<int>();
            if (state.order < 0) {
                throw ParseError("schema violation at " + statePath + ": 'order' must be >= 0");
            }
            if (!orders.insert(state.order).second) {
                throw ModelError("duplicate state order " + std::to_string(state.order) +
                                 " in state machine '" + machine.name + "'");
            }
            state.block = QualifiedName::parse(jsonutil::get_string(stateNode, "block", statePath));
            machine.states.push_back(std::move(state));
        }
    }
    std::sort(machine.states.begin(), machine.states.end(),
              [](const State& a, const State& b) { return a.order < b.order; });
    return machine;
}

// Depth-first cycle check; returns the cycle as "A -> B -> A" when found.
void check_inheritance_cycles(const std::map<std::string, const StereotypeDef*>& defs) {
    enum class Mark { None, Visiting, Done };
    std::map<std::string, Mark> marks;
    std::vector<std::string> stack;

    auto dfs = [&](auto&& self, const std::string& name) -> void {
        Mark& mark = marks[name];
        if (mark == Mark::Done) return;
        if (mark == Mark::Visiting) {
            std::string cycle;
            auto start = std::find(stack.begin(), stack.end(), name);
            for (auto it = start; it != stack.end(); ++it) cycle += *it + " -> ";
            cycle += name;
            throw ModelError("stereotype inheritance cycle: " + cycle);
        }
        mark = Mark::Visiting;
        stack.push_back(name);
        for (const auto& parent : defs.at(name)->parents) {
            auto it = defs.find(parent);
            if (it == defs.end()) {
                throw ModelError("unresolved reference: stereotype '" + parent +
                                 "' (parent of '" + name + "')");
            }
            self(self, parent);
        }
        stack.pop_back();
        marks[name] = Mark::Done;
    };
    for (const auto& [name, def] : defs) dfs(dfs, name);
}

void check_parts_cycles(const Model& model) {
    enum class Mark { None, Visiting, Done };
    std::map<std::string, Mark> marks;
    std::vector<std::string> stack;

    auto dfs = [&](auto&& self, const Block& block) -> void {
        std::string key = block.qualifiedName.str();
        Mark& mark = marks[key];
        if (mark == Mark::Done) return;
        if (mark == Mark::Visiting) {
            std::string cycle;
            auto start = std::find(stack.begin(), stack.end(), key);
            for (auto it = start; it != stack.end(); ++it) cycle += *it + " -> ";
            cycle += key;
            throw ModelError("part-of cycle: " + cycle);
        }
        mark = Mark::Visiting;
        stack.push_back(key);
        for (const auto& part : block.parts) self(self, model.block(part));
        stack.pop_back();
        marks[key] = Mark::Done;
    };
    for (const auto& block : model.blocks()) dfs(dfs, block);
}

} // namespace

Model load_model(const std::string& text) {
    Json document = jsonutil::parse_checked(text, "model file");
    jsonutil::require_keys(document, {"stereotypes", "blocks", "stateMachines"}, "/");

    std::vector<StereotypeDef> stereotypes;
    if (document.contains("stereotypes")) {
        jsonutil::require_array(document["stereotypes"], "/stereotypes");
        for (std::size_t i = 0; i < document["stereotypes"].size(); ++i) {
            stereotypes.push_back(parse_stereotype(document["stereotypes"][i],
                                                   "/stereotypes[" + std::to_string(i) + "]"));
        }
    }

    std::map<std::string, const StereotypeDef*> defsByName;
    for (const auto& def : stereotypes) {
        if (!defsByName.emplace(def.name, &def).second) {
            throw ModelError("duplicate stereotype name '" + def.name + "'");
        }
    }
    check_inheritance_cycles(defsByName);

    std::vector<Block> blocks;
    if (document.contains("blocks")) {
        jsonutil::require_array(document["blocks"], "/blocks");
        for (std::size_t i = 0; i < document["blocks"].size(); ++i) {
            blocks.push_back(parse_block(document["blocks"][i], "/blocks[" + std::to_string(i) + "]"));
        }
    }

    std::vector<StateMachine> machines;
    if (document.contains("stateMachines")) {
        jsonutil::require_array(document["stateMachines"], "/stateMachines");
        std::set<std::string> names;
        for (std::size_t i = 0; i < document["stateMachines"].size(); ++i) {
            machines.push_back(parse_machine(document["stateMachines"][i],
                                             "/stateMachines[" + std::to_string(i) + "]"));
            if (!names.insert(machines.back().name).second) {
                throw ModelError("duplicate state machine name '" + machines.back().name + "'");
            }
        }
    }

    {
        std::set<std::string> qualifiedNames;
        for (const auto& block : blocks) {
            if (!qualifiedNames.insert(block.qualifiedName.str()).second) {
                throw ModelError("duplicate qualified name '" + block.qualifiedName.str() + "'");
            }
        }
    }

    Model model(std::move(stereotypes), std::move(blocks), std::move(machines));

    // Link everything: applied stereotypes, assigned property names, data
    // stereotypes on attributes, parts, and state targets must all resolve.
    for (const auto& block : model.blocks()) {
        for (const auto& application : block.appliedStereotypes) {
            model.stereotype(application.stereotype); // throws when missing
            std::set<std::string> known;
            for (const auto* def : model.linearize(application.stereotype)) {
                for (const auto& property : def->properties) known.insert(property.name);
            }
            for (const auto& [name, value] : application.values) {
                if (!known.count(name)) {
                    throw ModelError("property '" + name + "' is not defined on stereotype '" +
                                     application.stereotype + "' or its ancestors (block '" +
                                     block.qualifiedName.str() + "')");
                }
            }
        }
        for (const auto& attribute : block.ownAttributes) {
            for (const auto& name : attribute.dataStereotypes) {
                const auto& def = model.stereotype(name);
                if (def.kind != StereotypeKind::Data) {
                    throw ModelError("stereotype '" + name + "' applied to attribute '" +
                                     attribute.name + "' of block '" + block.qualifiedName.str() +
                                     "' is not a data stereotype");
                }
            }
        }
        for (const auto& part : block.parts) {
            if (!model.find_block(part)) {
                throw ModelError("unresolved part '" + part.str() + "' on block '" +
                                 block.qualifiedName.str() + "'");
            }
        }
    }
    check_parts_cycles(model);

    for (const auto& machine : model.state_machines()) {
        for (const auto& state : machine.states) model.block(state.block);
    }

    // Every ml-task stereotype hangs off the core ML root.
    for (const auto& def : model.stereotypes()) {
        if (def.kind == StereotypeKind::MlTask && !model.inherits_from(def.name, "ML")) {
            throw ModelError("ml-task stereotype '" + def.name +
                             "' does not inherit from the root stereotype 'ML'");
        }
    }

    return model;
}

namespace {

Json primitive_to_json(const Primitive& primitive) {
    if (const auto* text = std::get_if<std::string>(&primitive.value)) return *text;
    if (const auto* boolean = std::get_if<bool>(&primitive.value)) return *boolean;
    if (const auto* integer = std::get_if<std::int64_t>(&primitive.value)) return *integer;
    return std::get<double>(primitive.value);
}

Json value_to_json(const AttributeValue& value) {
    if (value.is_reference()) return Json{{"ref", value.reference().str()}};
    return primitive_to_json(value.primitive());
}

} // namespace

std::string save_model(const Model& model) {
    Json document = Json::object();

    auto& stereotypes = document["stereotypes"] = Json::array();
    for (const auto& def : model.stereotypes()) {
        Json node{{"name", def.name},
                  {"kind", def.kind == StereotypeKind::MlTask ? "ml-task" : "data"}};
        if (!def.parents.empty()) node["parents"] = def.parents;
        if (!def.properties.empty()) {
            auto& properties = node["properties"] = Json::array();
            for (const auto& property : def.properties) {
                Json propNode{{"name", property.name}};
                switch (property.type) {
                case ValueType::String: propNode["type"] = "string"; break;
                case ValueType::Number: propNode["type"] = "number"; break;
                case ValueType::Boolean: propNode["type"] = "boolean"; break;
                case ValueType::Reference: propNode["type"] = "reference"; break;
                }
                propNode["mandatory"] = property.mandatory;
                if (property.defaultValue) propNode["default"] = primitive_to_json(*property.defaultValue);
                properties.push_back(std::move(propNode));
            }
        }
        stereotypes.push_back(std::move(node));
    }

    auto& blocks = document["blocks"] = Json::array();
    for (const auto& block : model.blocks()) {
        Json node{{"qualifiedName", block.qualifiedName.str()}, {"name", block.name}};
        if (!block.appliedStereotypes.empty()) {
            auto& applications = node["appliedStereotypes"] = Json::array();
            for (const auto& application : block.appliedStereotypes) {
                Json appNode{{"stereotype", application.stereotype}};
                if (!application.values.empty()) {
                    auto& values = appNode["values"] = Json::object();
                    for (const auto& [name, value] : application.values) {
                        values[name] = value_to_json(value);
                    }
                }
                applications.push_back(std::move(appNode));
            }
        }
        if (!block.ownAttributes.empty()) {
            auto& attributes = node["attributes"] = Json::array();
            for (const auto& attribute : block.ownAttributes) {
                Json attrNode{{"name", attribute.name}};
                if (attribute.value.is_reference()) {
                    attrNode["ref"] = attribute.value.reference().str();
                } else {
                    attrNode["value"] = primitive_to_json(attribute.value.primitive());
                }
                if (!attribute.dataStereotypes.empty()) {
                    attrNode["stereotypes"] = attribute.dataStereotypes;
                }
                attributes.push_back(std::move(attrNode));
            }
        }
        if (!block.parts.empty()) {
            auto& parts = node["parts"] = Json::array();
            for (const auto& part : block.parts) parts.push_back(part.str());
        }
        if (!block.comments.empty()) node["comments"] = block.comments;
        blocks.push_back(std::move(node));
    }

    auto& machines = document["stateMachines"] = Json::array();
    for (const auto& machine : model.state_machines()) {
        Json node{{"name", machine.name}, {"states", Json::array()}};
        for (const auto& state : machine.states) {
            node["states"].push_back(
                Json{{"name", state.name}, {"order", state.order}, {"block", state.block.str()}});
        }
        machines.push_back(std::move(node));
    }

    return document.dump(2) + "\n";
}

} // namespace mlgen
