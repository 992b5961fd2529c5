#include "mlgen/model.hpp"

#include <charconv>

namespace mlgen {

std::string Primitive::render() const {
    if (const auto* text = std::get_if<std::string>(&value)) return *text;
    if (const auto* boolean = std::get_if<bool>(&value)) return *boolean ? "True" : "False";
    if (const auto* integer = std::get_if<std::int64_t>(&value)) return std::to_string(*integer);
    char buffer[32];
    auto result = std::to_chars(buffer, buffer + sizeof buffer, std::get<double>(value));
    return std::string(buffer, result.ptr);
}

Model::Model(std::vector<StereotypeDef> stereotypes, std::vector<Block> blocks,
             std::vector<StateMachine> machines)
    : stereotypes_(std::move(stereotypes)),
      blocks_(std::move(blocks)),
      machines_(std::move(machines)) {
    for (std::size_t i = 0; i < stereotypes_.size(); ++i) {
        stereotypeIndex_.emplace(stereotypes_[i].name, i);
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        blockIndex_.emplace(blocks_[i].qualifiedName.str(), i);
    }
}

const StereotypeDef* Model::find_stereotype(const std::string& name) const {
    auto it = stereotypeIndex_.find(name);
    return it == stereotypeIndex_.end() ? nullptr : &stereotypes_[it->second];
}

const Block* Model::find_block(const QualifiedName& qn) const {
    auto it = blockIndex_.find(qn.str());
    return it == blockIndex_.end() ? nullptr : &blocks_[it->second];
}

const StateMachine* Model::find_machine(const std::string& name) const {
    for (const auto& machine : machines_) {
        if (machine.name == name) return &machine;
    }
    return nullptr;
}

const StereotypeDef& Model::stereotype(const std::string& name) const {
    if (const auto* def = find_stereotype(name)) return *def;
    throw ModelError("unresolved reference: stereotype '" + name + "'");
}

const Block& Model::block(const QualifiedName& qn) const {
    if (const auto* found = find_block(qn)) return *found;
    throw ModelError("unresolved reference: block '" + qn.str() + "'");
}

namespace {

void visit_linearization(const Model& model, const StereotypeDef& def,
                         std::vector<std::string>& seen,
                         std::vector<const StereotypeDef*>& out) {
    for (const auto& name : seen) {
        if (name == def.name) return; // a later visit never re-registers
    }
    seen.push_back(def.name);
    for (const auto& parent : def.parents) {
        visit_linearization(model, model.stereotype(parent), seen, out);
    }
    out.push_back(&def);
}

} // namespace

std::vector<const StereotypeDef*> Model::linearize(const std::string& name) const {
    std::vector<std::string> seen;
    std::vector<const StereotypeDef*> out;
    visit_linearization(*this, stereotype(name), seen, out);
    return out;
}

bool Model::inherits_from(const std::string& name, const std::string& ancestor) const {
    for (const auto* def : linearize(name)) {
        if (def->name == ancestor) return true;
    }
    return false;
}

std::vector<EffectiveProperty> effective_properties(const Model& model, const Block& block,
                                                    const std::string& stereotypeName) {
    const StereotypeApplication* application = nullptr;
    for (const auto& applied : block.appliedStereotypes) {
        if (applied.stereotype == stereotypeName) {
            application = &applied;
            break;
        }
    }
    if (!application) {
        throw ModelError("stereotype '" + stereotypeName + "' is not applied to block '" +
                         block.qualifiedName.str() + "'");
    }

    std::vector<EffectiveProperty> effective;
    for (const auto* def : model.linearize(stereotypeName)) {
        for (const auto& property : def->properties) {
            bool replaced = false;
            for (auto& existing : effective) {
                if (existing.def.name == property.name) {
                    existing.def = property; // derived definition shadows the base one
                    existing.owner = def->name;
                    replaced = true;
                    break;
                }
            }
            if (!replaced) effective.push_back({property, def->name, std::nullopt});
        }
    }
    for (auto& property : effective) {
        if (const auto* value = application->find(property.def.name)) {
            property.assigned = *value;
        }
    }
    return effective;
}

std::vector<const Block*> connected_inputs(const Model& model, const Block& block) {
    std::vector<const Block*> inputs;
    inputs.reserve(block.parts.size());
    for (const auto& part : block.parts) {
        inputs.push_back(&model.block(part));
    }
    return inputs;
}

} // namespace mlgen
