#pragma once

#include "mlgen/errors.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mlgen {

// --- Abstract syntax -------------------------------------------------------
//
// command := source "." scope "." accessor (index)? ("." chainStep (index)?)*
//
// Keywords are case-sensitive; string arguments are double-quoted; whitespace
// around tokens is tolerated. A command has at least three keywords.

struct ConnectedSelector {
    std::optional<std::string> name;
    int nr = 0;
    std::optional<std::string> stereotypeName;
    std::map<std::string, std::string> attributeValue;
    std::optional<std::string> outputName;

    bool empty() const {
        return !name && nr == 0 && !stereotypeName && attributeValue.empty() && !outputName;
    }
    friend bool operator==(const ConnectedSelector&, const ConnectedSelector&) = default;
};

enum class SourceKind { This, Connected };

struct Source {
    SourceKind kind = SourceKind::This;
    ConnectedSelector selector; // meaningful only for Connected
    friend bool operator==(const Source&, const Source&) = default;
};

enum class ScopeKind { Block, Stereotype };

struct Scope {
    ScopeKind kind = ScopeKind::Block;
    std::string stereotypeName; // meaningful only for Stereotype
    friend bool operator==(const Scope&, const Scope&) = default;
};

enum class AccessorKind { Name, Attributes, StereotypeOfAttribute, Output };

struct Accessor {
    AccessorKind kind = AccessorKind::Name;
    std::string attribute; // meaningful only for StereotypeOfAttribute
    std::optional<int> index;
    friend bool operator==(const Accessor&, const Accessor&) = default;
};

enum class ChainKind { Attributes, StereotypeOfAttribute, Name };

struct ChainStep {
    ChainKind kind = ChainKind::Attributes;
    std::string attribute; // meaningful only for StereotypeOfAttribute
    std::optional<int> index;
    friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct CommandAst {
    Source source;
    Scope scope;
    Accessor accessor;
    std::vector<ChainStep> chain;
    friend bool operator==(const CommandAst&, const CommandAst&) = default;
};

// The result of evaluating a command: a text, or a list that must be
// index-selected before it can feed a template variable.
struct CommandValue {
    std::variant<std::string, std::vector<CommandValue>> value;

    bool is_text() const { return std::holds_alternative<std::string>(value); }
    const std::string& text() const { return std::get<std::string>(value); }
    const std::vector<CommandValue>& list() const {
        return std::get<std::vector<CommandValue>>(value);
    }
    friend bool operator==(const CommandValue&, const CommandValue&) = default;
};

// Throws CommandParseError (with character offset) on any grammar violation.
CommandAst parse_command(const std::string& text);

// Renders an AST back to its canonical spelling; parse(canonical_text(ast))
// yields an AST equal to `ast`.
std::string canonical_text(const CommandAst& ast);

struct BlockContext;
class ContextRegistry;

// Evaluates a command against the context `current` belongs to. Throws
// CommandEvalError when navigation cannot proceed.
CommandValue eval_command(const CommandAst& ast, const BlockContext& current,
                          const ContextRegistry& registry);

// The filtered (not yet Nr-selected) connected contexts for a selector, in
// connection order. Exposed so the conjunctive-narrowing property is testable.
std::vector<const BlockContext*> connected_candidates(const ConnectedSelector& selector,
                                                      const BlockContext& current,
                                                      const ContextRegistry& registry);

} // namespace mlgen
