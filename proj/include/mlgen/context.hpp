#pragma once

#include "mlgen/command.hpp"
#include "mlgen/model.hpp"
#include "mlgen/snippet.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlgen {

// One named value visible on a block context: a stereotype property (assigned
// or defaulted) or an own attribute. Own attributes override stereotype
// properties of the same name; declaration order is preserved.
struct ContextAttribute {
    std::string name;
    AttributeValue value;
    std::vector<std::string> dataStereotypes;
};

// The intermediate representation one block is transformed through: the
// block reference, its comments, its inputs, the visible attributes, its
// position in the global execution order, and (once rendered) its snippet.
struct BlockContext {
    QualifiedName blockRef;
    std::vector<std::string> comments;
    std::vector<QualifiedName> connected;
    std::vector<ContextAttribute> attributes;
    std::vector<ContextAttribute> kwargs; // `**`-prefixed extras, prefix stripped
    int executionOrder = 0;
    std::optional<Snippet> snippet;
};

const ContextAttribute* find_attribute(const BlockContext& context, const std::string& name);

// Insertion-ordered collection of contexts; order equals execution order.
class ContextRegistry {
public:
    explicit ContextRegistry(const Model& model) : model_(&model) {}

    const Model& model() const { return *model_; }

    BlockContext& add(BlockContext context);

    const std::vector<BlockContext>& contexts() const { return contexts_; }
    std::vector<BlockContext>& contexts() { return contexts_; }
    std::size_t size() const { return contexts_.size(); }

    BlockContext* find(const QualifiedName& name);
    const BlockContext* find(const QualifiedName& name) const;

    // Throwing lookup; messages name the missing block.
    const BlockContext& at(const QualifiedName& name) const;

private:
    const Model* model_;
    std::vector<BlockContext> contexts_;
    std::map<std::string, std::size_t> index_;
};

// Walks the machine's states in ascending order and each state's block
// depth-first over its parts (inputs before owners), creating one context per
// distinct block. Execution order is the global visit sequence.
ContextRegistry build_contexts(const Model& model, const StateMachine& machine);

// Materializes an attribute value: primitives render to text, references
// resolve to the referenced block's name only now.
CommandValue resolve_attribute(const BlockContext& context, const std::string& name,
                               const ContextRegistry& registry);

} // namespace mlgen
