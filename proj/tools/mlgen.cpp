#include "mlgen/command.hpp"
#include "mlgen/context.hpp"
#include "mlgen/mapping.hpp"
#include "mlgen/model.hpp"
#include "mlgen/model_io.hpp"
#include "mlgen/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw mlgen::Error("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw mlgen::Error("cannot open '" + path + "' for writing");
    file << content;
    if (!file) throw mlgen::Error("failed while writing '" + path + "'");
}

std::optional<std::string> non_empty(const std::string& value) {
    if (value.empty()) return std::nullopt;
    return value;
}

Json value_json(const mlgen::AttributeValue& value) {
    if (value.is_reference()) return Json{{"ref", value.reference().str()}};
    return value.primitive().render();
}

Json command_value_json(const mlgen::CommandValue& value) {
    if (value.is_text()) return value.text();
    Json items = Json::array();
    for (const auto& item : value.list()) items.push_back(command_value_json(item));
    return items;
}

int run_generate(const std::string& modelPath, const std::string& mappingPath,
                 const std::string& templates, const std::string& outPath,
                 const std::string& machine, const std::string& kernel,
                 const std::string& validateCmd, bool strict, const std::string& reportPath) {
    mlgen::Model model = mlgen::load_model(read_file(modelPath));
    mlgen::MappingConfig mapping = mlgen::parse_mapping(read_file(mappingPath));

    mlgen::GenerateOptions options;
    options.machineName = non_empty(machine);
    options.kernelName = non_empty(kernel);
    options.validateCommand = non_empty(validateCmd);
    options.strict = strict;

    mlgen::GenerationReport report =
        mlgen::generate(model, mapping, templates, outPath, options);
    std::cerr << mlgen::report_text(report);
    if (!reportPath.empty()) write_file(reportPath, mlgen::report_json(report));

    return strict && !report.warnings.empty() ? 1 : 0;
}

int run_check(const std::string& modelPath, const std::string& mappingPath,
              const std::string& templates) {
    mlgen::Model model = mlgen::load_model(read_file(modelPath));
    mlgen::MappingConfig mapping = mlgen::parse_mapping(read_file(mappingPath));
    std::vector<std::string> diagnostics = mlgen::check(model, mapping, templates);
    for (const auto& diagnostic : diagnostics) std::cerr << diagnostic << "\n";
    return diagnostics.empty() ? 0 : 1;
}

int run_inspect(const std::string& what, const std::string& modelPath,
                const std::string& machine) {
    mlgen::Model model = mlgen::load_model(read_file(modelPath));

    if (what == "blocks") {
        Json out = Json::array();
        for (const auto& block : model.blocks()) {
            Json node{{"qualifiedName", block.qualifiedName.str()}, {"name", block.name}};
            Json stereotypes = Json::array();
            for (const auto& application : block.appliedStereotypes) {
                stereotypes.push_back(application.stereotype);
            }
            node["stereotypes"] = std::move(stereotypes);
            Json parts = Json::array();
            for (const auto& part : block.parts) parts.push_back(part.str());
            node["parts"] = std::move(parts);
            out.push_back(std::move(node));
        }
        std::cout << out.dump(1) << "\n";
        return 0;
    }

    const mlgen::StateMachine& stateMachine = mlgen::select_machine(model, non_empty(machine));
    mlgen::ContextRegistry registry = mlgen::build_contexts(model, stateMachine);

    if (what == "order") {
        Json out = Json::array();
        for (const auto& context : registry.contexts()) out.push_back(context.blockRef.str());
        std::cout << out.dump(1) << "\n";
        return 0;
    }

    Json out = Json::array();
    for (const auto& context : registry.contexts()) {
        Json node{{"block", context.blockRef.str()}, {"executionOrder", context.executionOrder}};
        Json connected = Json::array();
        for (const auto& name : context.connected) connected.push_back(name.str());
        node["connected"] = std::move(connected);
        Json attributes = Json::array();
        for (const auto& attribute : context.attributes) {
            attributes.push_back(Json{{"name", attribute.name}, {"value", value_json(attribute.value)}});
        }
        node["attributes"] = std::move(attributes);
        if (!context.kwargs.empty()) {
            Json kwargs = Json::array();
            for (const auto& extra : context.kwargs) {
                kwargs.push_back(Json{{"name", extra.name}, {"value", value_json(extra.value)}});
            }
            node["kwargs"] = std::move(kwargs);
        }
        node["comments"] = context.comments;
        out.push_back(std::move(node));
    }
    std::cout << out.dump(1) << "\n";
    return 0;
}

int run_eval(const std::string& modelPath, const std::string& blockName,
             const std::string& commandText, const std::string& machine,
             const std::string& mappingPath, const std::string& templates) {
    mlgen::Model model = mlgen::load_model(read_file(modelPath));
    const mlgen::StateMachine& stateMachine = mlgen::select_machine(model, non_empty(machine));
    mlgen::ContextRegistry registry = mlgen::build_contexts(model, stateMachine);

    mlgen::QualifiedName target = mlgen::QualifiedName::parse(blockName);
    mlgen::BlockContext* context = registry.find(target);
    if (!context) {
        throw mlgen::Error("block '" + blockName + "' is not reachable from state machine '" +
                           stateMachine.name + "'");
    }

    // Render everything scheduled before the target so OUTPUT is debuggable
    // under the same conditions the generator evaluates commands in.
    if (!mappingPath.empty()) {
        if (templates.empty()) {
            throw mlgen::Error("--mapping needs a template root (--templates or MLGEN_TEMPLATES)");
        }
        mlgen::MappingConfig mapping = mlgen::parse_mapping(read_file(mappingPath));
        mlgen::render_snippets(registry, mapping, templates, context->executionOrder);
    }

    mlgen::CommandValue value =
        mlgen::eval_command(mlgen::parse_command(commandText), *context, registry);
    if (value.is_text()) {
        std::cout << value.text() << "\n";
    } else {
        std::cout << command_value_json(value).dump(1) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-to-notebook generator: turns a block/stereotype model plus a mapping "
                 "configuration and code templates into an executable Jupyter notebook."};
    app.require_subcommand(1);

    std::string modelPath, mappingPath, templates, outPath, machine, kernel, validateCmd,
        reportPath, what, blockName, commandText;
    bool strict = false;

    CLI::App* generate = app.add_subcommand("generate", "Generate a notebook from a model");
    generate->add_option("--model", modelPath, "Model file (*.model.json)")->required();
    generate->add_option("--mapping", mappingPath, "Mapping configuration (JSON)")->required();
    generate->add_option("--templates", templates, "Template root directory")
        ->envname("MLGEN_TEMPLATES")
        ->required();
    generate->add_option("--out", outPath, "Output notebook file (*.ipynb)")->required();
    generate->add_option("--machine", machine, "State machine to run (default: the only one)");
    generate->add_option("--kernel", kernel, "Kernel name recorded in notebook metadata");
    generate->add_option("--validate-cmd", validateCmd,
                         "External syntax validator; {file} is replaced by the notebook path");
    generate->add_flag("--strict", strict, "Treat validation warnings as failures (exit 1)");
    generate->add_option("--report", reportPath, "Also write the generation report as JSON");

    CLI::App* checkCmd = app.add_subcommand("check", "Validate model + mapping + templates");
    checkCmd->add_option("--model", modelPath, "Model file (*.model.json)")->required();
    checkCmd->add_option("--mapping", mappingPath, "Mapping configuration (JSON)")->required();
    checkCmd->add_option("--templates", templates, "Template root directory")
        ->envname("MLGEN_TEMPLATES")
        ->required();

    CLI::App* inspect = app.add_subcommand("inspect", "Print blocks, contexts, or execution order");
    inspect->add_option("what", what, "One of: blocks, contexts, order")
        ->required()
        ->check(CLI::IsMember({"blocks", "contexts", "order"}));
    inspect->add_option("--model", modelPath, "Model file (*.model.json)")->required();
    inspect->add_option("--machine", machine, "State machine (default: the only one)");

    CLI::App* eval = app.add_subcommand("eval", "Evaluate one model command against a block");
    eval->add_option("--model", modelPath, "Model file (*.model.json)")->required();
    eval->add_option("--block", blockName, "Qualified name of the block to evaluate against")
        ->required();
    eval->add_option("--command", commandText, "Model command text")->required();
    eval->add_option("--machine", machine, "State machine (default: the only one)");
    eval->add_option("--mapping", mappingPath,
                     "Mapping configuration; renders predecessor snippets so OUTPUT works");
    eval->add_option("--templates", templates, "Template root directory, used with --mapping")
        ->envname("MLGEN_TEMPLATES");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& parseResult) {
        return app.exit(parseResult); // --help and friends: exit 0
    } catch (const CLI::ParseError& parseError) {
        app.exit(parseError);
        return 2; // usage errors
    }

    try {
        if (*generate) {
            return run_generate(modelPath, mappingPath, templates, outPath, machine, kernel,
                                validateCmd, strict, reportPath);
        }
        if (*checkCmd) return run_check(modelPath, mappingPath, templates);
        if (*inspect) return run_inspect(what, modelPath, machine);
        if (*eval) return run_eval(modelPath, blockName, commandText, machine, mappingPath, templates);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
