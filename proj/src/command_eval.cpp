#include "mlgen/command.hpp"

#include "mlgen/context.hpp"

namespace mlgen {

namespace {

// Navigation cursor. Blocks and stereotypes stay navigable until the end of
// the chain; only then does everything collapse to text.
struct EvalValue;
using EvalList = std::vector<EvalValue>;

struct EvalValue {
    std::variant<const Block*, std::string, EvalList> value;
    bool isStereotype = false; // marks the string alternative as a stereotype name

    static EvalValue block(const Block* block) { return {block, false}; }
    static EvalValue text(std::string text) { return {std::move(text), false}; }
    static EvalValue stereotype(std::string name) { return {std::move(name), true}; }
    static EvalValue list(EvalList items) { return {std::move(items), false}; }
};

std::string describe(const EvalValue& value) {
    if (std::holds_alternative<const Block*>(value.value)) return "a block";
    if (std::holds_alternative<EvalList>(value.value)) return "a list";
    return value.isStereotype ? "a stereotype" : "a text value";
}

// Turns a stored attribute value into a cursor: primitives become text,
// references become the referenced block (navigable further).
EvalValue attribute_cursor(const Model& model, const QualifiedName& owner,
                           const std::string& attributeName, const AttributeValue& value) {
    if (value.is_reference()) {
        const Block* target = model.find_block(value.reference());
        if (!target) {
            throw CommandEvalError("dangling reference: attribute '" + attributeName +
                                   "' of block '" + owner.str() + "' points to missing block '" +
                                   value.reference().str() + "'");
        }
        return EvalValue::block(target);
    }
    return EvalValue::text(value.primitive().render());
}

EvalValue block_attributes(const Model& model, const Block& block) {
    EvalList items;
    for (const auto& attribute : block.ownAttributes) {
        if (attribute.is_kwargs()) continue; // extras feed the kwargs anchor, not navigation
        items.push_back(attribute_cursor(model, block.qualifiedName, attribute.name, attribute.value));
    }
    return EvalValue::list(std::move(items));
}

EvalValue stereotype_attributes(const Model& model, const Block& block,
                                const std::string& stereotypeName) {
    EvalList items;
    for (const auto& property : effective_properties(model, block, stereotypeName)) {
        if (property.assigned) {
            items.push_back(
                attribute_cursor(model, block.qualifiedName, property.def.name, *property.assigned));
        } else if (property.def.defaultValue) {
            items.push_back(EvalValue::text(property.def.defaultValue->render()));
        }
    }
    return EvalValue::list(std::move(items));
}

EvalValue stereotype_of_attribute(const Block& block, const std::string& attributeName) {
    const Attribute* found = nullptr;
    for (const auto& attribute : block.ownAttributes) {
        if (attribute.name == attributeName) {
            found = &attribute;
            break;
        }
    }
    if (!found) {
        throw CommandEvalError("block '" + block.qualifiedName.str() + "' has no attribute '" +
                               attributeName + "'");
    }
    if (found->dataStereotypes.empty()) {
        throw CommandEvalError("attribute '" + attributeName + "' of block '" +
                               block.qualifiedName.str() + "' carries no data stereotype");
    }
    if (found->dataStereotypes.size() == 1) {
        return EvalValue::stereotype(found->dataStereotypes.front());
    }
    EvalList items;
    for (const auto& name : found->dataStereotypes) items.push_back(EvalValue::stereotype(name));
    return EvalValue::list(std::move(items));
}

EvalValue apply_index(EvalValue value, int index) {
    if (!std::holds_alternative<EvalList>(value.value)) {
        throw CommandEvalError("index [" + std::to_string(index) + "] applied to " +
                               describe(value) + "; only lists are index-selectable");
    }
    auto& items = std::get<EvalList>(value.value);
    if (index < 0 || static_cast<std::size_t>(index) >= items.size()) {
        throw CommandEvalError("index [" + std::to_string(index) + "] out of range: list has " +
                               std::to_string(items.size()) + " elements");
    }
    return std::move(items[static_cast<std::size_t>(index)]);
}

CommandValue finalize(const EvalValue& value) {
    if (const auto* block = std::get_if<const Block*>(&value.value)) {
        return CommandValue{(*block)->name};
    }
    if (const auto* text = std::get_if<std::string>(&value.value)) {
        return CommandValue{*text};
    }
    const auto& items = std::get<EvalList>(value.value);
    std::vector<CommandValue> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(finalize(item));
    return CommandValue{std::move(out)};
}

std::string selector_description(const ConnectedSelector& selector) {
    CommandAst probe;
    probe.source = {SourceKind::Connected, selector};
    std::string text = canonical_text(probe);
    return text.substr(0, text.find('.'));
}

} // namespace

std::vector<const BlockContext*> connected_candidates(const ConnectedSelector& selector,
                                                      const BlockContext& current,
                                                      const ContextRegistry& registry) {
    const Model& model = registry.model();
    std::vector<const BlockContext*> candidates;
    for (const auto& name : current.connected) {
        const BlockContext& context = registry.at(name);
        const Block& block = model.block(name);
        if (selector.name && block.name != *selector.name) continue;
        if (selector.stereotypeName) {
            bool applied = false;
            for (const auto& application : block.appliedStereotypes) {
                if (application.stereotype == *selector.stereotypeName) {
                    applied = true;
                    break;
                }
            }
            if (!applied) continue;
        }
        bool attributesMatch = true;
        for (const auto& [attributeName, expected] : selector.attributeValue) {
            if (!find_attribute(context, attributeName)) {
                attributesMatch = false;
                break;
            }
            if (resolve_attribute(context, attributeName, registry).text() != expected) {
                attributesMatch = false;
                break;
            }
        }
        if (!attributesMatch) continue;
        if (selector.outputName &&
            (!context.snippet || context.snippet->outputVar != *selector.outputName)) {
            continue;
        }
        candidates.push_back(&context);
    }
    return candidates;
}

CommandValue eval_command(const CommandAst& ast, const BlockContext& current,
                          const ContextRegistry& registry) {
    const Model& model = registry.model();

    const BlockContext* target = &current;
    if (ast.source.kind == SourceKind::Connected) {
        auto candidates = connected_candidates(ast.source.selector, current, registry);
        if (candidates.empty()) {
            throw CommandEvalError(selector_description(ast.source.selector) +
                                   " matches no connected block of '" + current.blockRef.str() +
                                   "'");
        }
        int nr = ast.source.selector.nr;
        if (static_cast<std::size_t>(nr) >= candidates.size()) {
            throw CommandEvalError("Nr=" + std::to_string(nr) + " out of range: only " +
                                   std::to_string(candidates.size()) +
                                   " connected blocks of '" + current.blockRef.str() +
                                   "' match the selector");
        }
        target = candidates[static_cast<std::size_t>(nr)];
    }

    const Block& block = model.block(target->blockRef);

    if (ast.scope.kind == ScopeKind::Stereotype) {
        bool applied = false;
        for (const auto& application : block.appliedStereotypes) {
            if (application.stereotype == ast.scope.stereotypeName) {
                applied = true;
                break;
            }
        }
        if (!applied) {
            throw CommandEvalError("stereotype '" + ast.scope.stereotypeName +
                                   "' is not applied to block '" + block.qualifiedName.str() + "'");
        }
    }

    EvalValue value = EvalValue::text("");
    switch (ast.accessor.kind) {
    case AccessorKind::Name:
        value = ast.scope.kind == ScopeKind::Block ? EvalValue::text(block.name)
                                                   : EvalValue::text(ast.scope.stereotypeName);
        break;
    case AccessorKind::Attributes:
        value = ast.scope.kind == ScopeKind::Block
                    ? block_attributes(model, block)
                    : stereotype_attributes(model, block, ast.scope.stereotypeName);
        break;
    case AccessorKind::StereotypeOfAttribute:
        if (ast.scope.kind == ScopeKind::Stereotype) {
            throw CommandEvalError(
                "STEREOTYPEofATTRIBUTE requires BLOCK scope; data stereotypes are applied to "
                "block attributes");
        }
        value = stereotype_of_attribute(block, ast.accessor.attribute);
        break;
    case AccessorKind::Output:
        if (!target->snippet) {
            throw CommandEvalError("OUTPUT of block '" + block.qualifiedName.str() +
                                   "' requested before its snippet was rendered (forward "
                                   "reference)");
        }
        if (!target->snippet->outputVar) {
            throw CommandEvalError("the rendered snippet of block '" + block.qualifiedName.str() +
                                   "' declares no output variable");
        }
        value = EvalValue::text(*target->snippet->outputVar);
        break;
    }
    if (ast.accessor.index) value = apply_index(std::move(value), *ast.accessor.index);

    for (const ChainStep& step : ast.chain) {
        switch (step.kind) {
        case ChainKind::Attributes:
            if (const auto* cursor = std::get_if<const Block*>(&value.value)) {
                value = block_attributes(model, **cursor);
            } else if (std::holds_alternative<EvalList>(value.value)) {
                throw CommandEvalError("a list must be index-selected before navigating further");
            } else {
                throw CommandEvalError("ATTRIBUTES cannot navigate into " + describe(value));
            }
            break;
        case ChainKind::StereotypeOfAttribute:
            if (const auto* cursor = std::get_if<const Block*>(&value.value)) {
                value = stereotype_of_attribute(**cursor, step.attribute);
            } else if (std::holds_alternative<EvalList>(value.value)) {
                throw CommandEvalError("a list must be index-selected before navigating further");
            } else {
                throw CommandEvalError("STEREOTYPEofATTRIBUTE cannot navigate into " +
                                       describe(value));
            }
            break;
        case ChainKind::Name:
            if (const auto* cursor = std::get_if<const Block*>(&value.value)) {
                value = EvalValue::text((*cursor)->name);
            } else if (std::holds_alternative<std::string>(value.value) && value.isStereotype) {
                value = EvalValue::text(std::get<std::string>(value.value));
            } else if (std::holds_alternative<EvalList>(value.value)) {
                throw CommandEvalError("a list must be index-selected before navigating further");
            } else {
                throw CommandEvalError("NAME cannot follow " + describe(value));
            }
            break;
        }
        if (step.index) value = apply_index(std::move(value), *step.index);
    }

    return finalize(value);
}

} // namespace mlgen
