#pragma once

#include "mlgen/context.hpp"
#include "mlgen/mapping.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mlgen {

enum class CellKind { Markdown, Code };

struct Cell {
    CellKind kind = CellKind::Code;
    std::string source;
};

struct Notebook {
    std::vector<Cell> cells;
    std::optional<std::string> kernelName;
};

// Assembles cells in execution order: per context one markdown cell per
// comment, then the code cell; a single leading code cell carries all
// deduplicated import lines. Every context must have a rendered snippet.
Notebook compose(const ContextRegistry& registry, const MappingConfig& config,
                 const std::optional<std::string>& kernelName);

// Jupyter Notebook JSON, format 4. Byte-deterministic.
std::string serialize(const Notebook& notebook);

// Best-effort syntax check of a written notebook file: balanced brackets and
// quotes per code cell, plus an optional external validator command invoked
// with `{file}` substituted. Returns warnings; never throws for code issues.
std::vector<std::string> validate_syntax(const std::string& notebookFile,
                                         const std::optional<std::string>& validatorCommand);

} // namespace mlgen
