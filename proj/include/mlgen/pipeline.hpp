#pragma once

#include "mlgen/context.hpp"
#include "mlgen/mapping.hpp"
#include "mlgen/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mlgen {

struct GenerateOptions {
    std::optional<std::string> machineName;
    std::optional<std::string> kernelName;
    std::optional<std::string> validateCommand;
    bool strict = false;
};

struct BlockReport {
    std::string qualifiedName;
    std::string templateName;
    std::string provenance; // "byName" or "byStereotype"
};

struct GenerationReport {
    std::size_t contextsProcessed = 0;
    std::size_t cellsEmitted = 0;
    std::vector<std::string> warnings;
    std::vector<BlockReport> perBlock;
};

std::string report_text(const GenerationReport& report);
std::string report_json(const GenerationReport& report);

// The machine to run: by name when given, otherwise the model's single
// machine. Anything else is an error.
const StateMachine& select_machine(const Model& model, const std::optional<std::string>& name);

// Renders snippets context by context in execution order: mapping selection,
// template load, binding evaluation (properties, then model commands, then
// constants), rendering, import/output extraction, snippet attachment.
// With `orderLimit` set, only contexts with a smaller execution order render.
// With `diagnostics` set, per-block failures are collected instead of thrown.
std::vector<BlockReport> render_snippets(ContextRegistry& registry, const MappingConfig& mapping,
                                         const std::string& templateRoot,
                                         std::optional<int> orderLimit = std::nullopt,
                                         std::vector<std::string>* diagnostics = nullptr);

// End-to-end generation into `outPath`. Warnings are reported, never thrown;
// the strict policy (fail on warnings) is applied by the caller.
GenerationReport generate(const Model& model, const MappingConfig& mapping,
                          const std::string& templateRoot, const std::string& outPath,
                          const GenerateOptions& options);

// Static and dry-run diagnostics without writing anything: mapping entries
// are vetted individually, and every state machine is rendered in memory so
// each error generate would raise surfaces here.
std::vector<std::string> check(const Model& model, const MappingConfig& mapping,
                               const std::string& templateRoot);

} // namespace mlgen
