#include "mlgen/pipeline.hpp"

#include "mlgen/command.hpp"
#include "mlgen/notebook.hpp"
#include "mlgen/template_engine.hpp"

#include "json_util.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mlgen {

namespace {

// Check-style messages for unassigned mandatory properties; also thrown at
// render time so `check` and `generate` agree word for word.
std::vector<std::string> mandatory_gaps(const Model& model, const Block& block) {
    std::vector<std::string> gaps;
    std::set<std::string> seenApplications;
    for (const auto& application : block.appliedStereotypes) {
        if (!seenApplications.insert(application.stereotype).second) continue;
        if (model.stereotype(application.stereotype).kind != StereotypeKind::MlTask) continue;
        for (const auto& property : effective_properties(model, block, application.stereotype)) {
            if (property.def.mandatory && !property.assigned) {
                gaps.push_back("block '" + block.qualifiedName.str() + "': mandatory property '" +
                               property.def.name + "' of stereotype '" + application.stereotype +
                               "' is unassigned");
            }
        }
    }
    return gaps;
}

BlockReport render_one(BlockContext& context, ContextRegistry& registry,
                       const MappingConfig& mapping, const std::string& templateRoot) {
    const Model& model = registry.model();
    const Block& block = model.block(context.blockRef);
    std::string label = "block '" + block.qualifiedName.str() + "': ";

    auto gaps = mandatory_gaps(model, block);
    if (!gaps.empty()) throw PipelineError(gaps.front());

    SelectedMapping selected = select_mapping(mapping, model, block);

    Template tmpl;
    try {
        tmpl = load_template(templateRoot, selected.entry->templateName);
    } catch (const Error& error) {
        throw PipelineError(label + error.what());
    }

    std::map<std::string, std::string> bindings;
    for (const auto& [attributeName, variable] : selected.entry->properties) {
        try {
            bindings[variable] = resolve_attribute(context, attributeName, registry).text();
        } catch (const Error& error) {
            throw PipelineError(label + error.what());
        }
    }
    for (const auto& [commandText, variable] : selected.entry->modelCommands) {
        try {
            CommandValue value = eval_command(parse_command(commandText), context, registry);
            if (!value.is_text()) {
                throw CommandEvalError("the result is a list; select one element with an index");
            }
            bindings[variable] = value.text();
        } catch (const Error& error) {
            throw PipelineError(label + "command '" + commandText + "': " + error.what());
        }
    }
    for (const auto& [variable, value] : mapping.constants()) {
        bindings.emplace(variable, value); // constants fill only still-unbound variables
    }

    std::vector<std::pair<std::string, std::string>> kwargs;
    for (const auto& extra : context.kwargs) {
        if (extra.value.is_reference()) {
            const Block* target = model.find_block(extra.value.reference());
            if (!target) {
                throw PipelineError(label + "dangling reference: attribute '**" + extra.name +
                                    "' points to missing block '" + extra.value.reference().str() +
                                    "'");
            }
            kwargs.emplace_back(extra.name, target->name);
        } else {
            kwargs.emplace_back(extra.name, extra.value.primitive().render());
        }
    }

    std::string rendered;
    try {
        rendered = render(tmpl, bindings, kwargs);
    } catch (const Error& error) {
        throw PipelineError(label + error.what());
    }

    ImportExtraction imports = extract_imports(rendered);
    OutputExtraction output = extract_output(imports.body);
    context.snippet = Snippet{output.body, imports.imports, output.output, context.blockRef};

    return {block.qualifiedName.str(), selected.entry->templateName,
            selected.provenance == MappingProvenance::ByName ? "byName" : "byStereotype"};
}

} // namespace

const StateMachine& select_machine(const Model& model, const std::optional<std::string>& name) {
    if (name) {
        if (const StateMachine* machine = model.find_machine(*name)) return *machine;
        throw PipelineError("no state machine named '" + *name + "'");
    }
    const auto& machines = model.state_machines();
    if (machines.size() == 1) return machines.front();
    if (machines.empty()) throw PipelineError("the model defines no state machine");
    throw PipelineError("the model defines " + std::to_string(machines.size()) +
                        " state machines; select one by name");
}

std::vector<BlockReport> render_snippets(ContextRegistry& registry, const MappingConfig& mapping,
                                         const std::string& templateRoot,
                                         std::optional<int> orderLimit,
                                         std::vector<std::string>* diagnostics) {
    std::vector<BlockReport> reports;
    for (auto& context : registry.contexts()) {
        if (orderLimit && context.executionOrder >= *orderLimit) break;
        if (diagnostics) {
            try {
                reports.push_back(render_one(context, registry, mapping, templateRoot));
            } catch (const Error& error) {
                diagnostics->push_back(error.what());
            }
        } else {
            reports.push_back(render_one(context, registry, mapping, templateRoot));
        }
    }
    return reports;
}

GenerationReport generate(const Model& model, const MappingConfig& mapping,
                          const std::string& templateRoot, const std::string& outPath,
                          const GenerateOptions& options) {
    const StateMachine& machine = select_machine(model, options.machineName);
    ContextRegistry registry = build_contexts(model, machine);

    GenerationReport report;
    report.perBlock = render_snippets(registry, mapping, templateRoot);

    Notebook notebook = compose(registry, mapping, options.kernelName);
    std::string bytes = serialize(notebook);

    std::ofstream out(outPath, std::ios::binary);
    if (!out) throw PipelineError("cannot open output file '" + outPath + "' for writing");
    out << bytes;
    out.close();
    if (!out) throw PipelineError("failed while writing '" + outPath + "'");

    report.contextsProcessed = registry.size();
    report.cellsEmitted = notebook.cells.size();
    report.warnings = validate_syntax(outPath, options.validateCommand);
    return report;
}

std::vector<std::string> check(const Model& model, const MappingConfig& mapping,
                               const std::string& templateRoot) {
    std::vector<std::string> diagnostics;
    std::set<std::string> seen;
    auto push = [&](std::string message) {
        if (seen.insert(message).second) diagnostics.push_back(std::move(message));
    };

    if (model.state_machines().empty()) {
        push("the model defines no state machine; nothing can be generated");
    }

    for (const auto& block : model.blocks()) {
        for (auto& gap : mandatory_gaps(model, block)) push(std::move(gap));
    }

    auto vet_entry = [&](const std::string& kind, const std::string& key,
                         const MappingEntry& entry) {
        std::string label = kind + " mapping '" + key + "'";
        std::optional<Template> tmpl;
        try {
            tmpl = load_template(templateRoot, entry.templateName);
        } catch (const Error& error) {
            push(label + ": " + error.what());
        }

        std::set<std::string> targets;
        for (const auto& [attributeName, variable] : entry.properties) targets.insert(variable);
        for (const auto& [commandText, variable] : entry.modelCommands) targets.insert(variable);

        if (tmpl) {
            auto variables = all_variables(*tmpl);
            std::set<std::string> known(variables.begin(), variables.end());
            for (const auto& target : targets) {
                if (!known.count(target)) {
                    push(label + ": template '" + entry.templateName + "' has no placeholder '${" +
                         target + "}'");
                }
            }
        }
        for (const auto& [commandText, variable] : entry.modelCommands) {
            try {
                parse_command(commandText);
            } catch (const Error& error) {
                push(label + ": invalid command '" + commandText + "': " + error.what());
            }
        }
        for (const auto& [constant, value] : mapping.constants()) {
            if (targets.count(constant)) {
                push(label + ": constant '" + constant +
                     "' collides with a variable bound by this entry");
            }
        }
    };
    for (const auto& [key, entry] : mapping.stereotype_mappings()) vet_entry("stereotype", key, entry);
    for (const auto& [key, entry] : mapping.name_mappings()) vet_entry("name", key, entry);

    // Dry-run every machine so each hard error generate would raise shows up.
    for (const auto& machine : model.state_machines()) {
        try {
            ContextRegistry registry = build_contexts(model, machine);
            std::vector<std::string> dryRun;
            render_snippets(registry, mapping, templateRoot, std::nullopt, &dryRun);
            for (auto& message : dryRun) push(std::move(message));
        } catch (const Error& error) {
            push(error.what());
        }
    }
    return diagnostics;
}

std::string report_text(const GenerationReport& report) {
    std::ostringstream out;
    out << "contexts processed: " << report.contextsProcessed << "\n";
    out << "cells emitted: " << report.cellsEmitted << "\n";
    if (!report.perBlock.empty()) {
        out << "blocks:\n";
        for (const auto& block : report.perBlock) {
            out << "  " << block.qualifiedName << " -> " << block.templateName << " ("
                << block.provenance << ")\n";
        }
    }
    if (!report.warnings.empty()) {
        out << "warnings:\n";
        for (const auto& warning : report.warnings) out << "  " << warning << "\n";
    }
    return out.str();
}

std::string report_json(const GenerationReport& report) {
    jsonutil::Json document = jsonutil::Json::object();
    document["contextsProcessed"] = report.contextsProcessed;
    document["cellsEmitted"] = report.cellsEmitted;
    auto& blocks = document["perBlock"] = jsonutil::Json::array();
    for (const auto& block : report.perBlock) {
        blocks.push_back(jsonutil::Json{{"qualifiedName", block.qualifiedName},
                                        {"templateName", block.templateName},
                                        {"provenance", block.provenance}});
    }
    document["warnings"] = report.warnings;
    return document.dump(1) + "\n";
}

} // namespace mlgen
