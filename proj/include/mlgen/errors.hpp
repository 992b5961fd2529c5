#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlgen {

// Base class for everything this library throws on bad input or bad state.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input documents (JSON syntax, schema shape, duplicate keys).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structural model violations: unresolved references, cycles, duplicates.
class ModelError : public Error {
public:
    using Error::Error;
};

// Mapping configuration problems, including mapping selection failures.
class MappingError : public Error {
public:
    using Error::Error;
};

// Model-command text that does not match the grammar. Carries the character
// offset of the first offending position.
class CommandParseError : public Error {
public:
    CommandParseError(const std::string& message, std::size_t offset)
        : Error(message + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// A syntactically valid command that cannot be evaluated against the registry.
class CommandEvalError : public Error {
public:
    using Error::Error;
};

// Template loading or rendering failures.
class TemplateError : public Error {
public:
    using Error::Error;
};

// Notebook composition failures.
class ComposeError : public Error {
public:
    using Error::Error;
};

// Pipeline-level failures; messages name the offending block.
class PipelineError : public Error {
public:
    using Error::Error;
};

} // namespace mlgen
