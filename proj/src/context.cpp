#include "mlgen/context.hpp"

#include <algorithm>
#include <set>

namespace mlgen {

const ContextAttribute* find_attribute(const BlockContext& context, const std::string& name) {
    for (const auto& attribute : context.attributes) {
        if (attribute.name == name) return &attribute;
    }
    return nullptr;
}

BlockContext& ContextRegistry::add(BlockContext context) {
    std::string key = context.blockRef.str();
    if (index_.count(key)) {
        throw ModelError("context for block '" + key + "' registered twice");
    }
    index_.emplace(std::move(key), contexts_.size());
    contexts_.push_back(std::move(context));
    return contexts_.back();
}

BlockContext* ContextRegistry::find(const QualifiedName& name) {
    auto it = index_.find(name.str());
    return it == index_.end() ? nullptr : &contexts_[it->second];
}

const BlockContext* ContextRegistry::find(const QualifiedName& name) const {
    auto it = index_.find(name.str());
    return it == index_.end() ? nullptr : &contexts_[it->second];
}

const BlockContext& ContextRegistry::at(const QualifiedName& name) const {
    if (const BlockContext* context = find(name)) return *context;
    throw ModelError("no context registered for block '" + name.str() + "'");
}

namespace {

// Appends or overrides in place: an existing name keeps its position but
// takes the newer value, mirroring property overriding.
void merge_attribute(std::vector<ContextAttribute>& attributes, ContextAttribute attribute) {
    for (auto& existing : attributes) {
        if (existing.name == attribute.name) {
            existing = std::move(attribute);
            return;
        }
    }
    attributes.push_back(std::move(attribute));
}

BlockContext make_context(const Model& model, const Block& block, int executionOrder) {
    BlockContext context;
    context.blockRef = block.qualifiedName;
    context.comments = block.comments;
    context.connected = block.parts;
    context.executionOrder = executionOrder;

    for (const auto& application : block.appliedStereotypes) {
        for (const auto& property : effective_properties(model, block, application.stereotype)) {
            if (property.assigned) {
                merge_attribute(context.attributes, {property.def.name, *property.assigned, {}});
            } else if (property.def.defaultValue) {
                merge_attribute(context.attributes,
                                {property.def.name, AttributeValue{*property.def.defaultValue}, {}});
            }
            // A property with neither an assignment nor a default stays
            // invisible; demanding it later is an error by design.
        }
    }
    for (const auto& attribute : block.ownAttributes) {
        if (attribute.is_kwargs()) {
            context.kwargs.push_back(
                {attribute.name.substr(2), attribute.value, attribute.dataStereotypes});
        } else {
            merge_attribute(context.attributes,
                            {attribute.name, attribute.value, attribute.dataStereotypes});
        }
    }
    return context;
}

void visit(const Model& model, const QualifiedName& name, ContextRegistry& registry,
           std::set<std::string>& visiting) {
    if (registry.find(name)) return;
    if (!visiting.insert(name.str()).second) {
        throw ModelError("part-of cycle through block '" + name.str() + "'");
    }
    const Block& block = model.block(name);
    for (const auto& part : block.parts) visit(model, part, registry, visiting);
    visiting.erase(name.str());
    registry.add(make_context(model, block, static_cast<int>(registry.size())));
}

} // namespace

ContextRegistry build_contexts(const Model& model, const StateMachine& machine) {
    ContextRegistry registry(model);
    std::set<std::string> visiting;
    for (const auto& state : machine.states) {
        visit(model, state.block, registry, visiting);
    }
    return registry;
}

CommandValue resolve_attribute(const BlockContext& context, const std::string& name,
                               const ContextRegistry& registry) {
    const ContextAttribute* attribute = find_attribute(context, name);
    if (!attribute) {
        throw ModelError("block '" + context.blockRef.str() + "' has no attribute '" + name + "'");
    }
    if (attribute->value.is_reference()) {
        const QualifiedName& target = attribute->value.reference();
        const Block* block = registry.model().find_block(target);
        if (!block) {
            throw ModelError("dangling reference: attribute '" + name + "' of block '" +
                             context.blockRef.str() + "' points to missing block '" + target.str() +
                             "'");
        }
        return CommandValue{block->name};
    }
    return CommandValue{attribute->value.primitive().render()};
}

} // namespace mlgen
