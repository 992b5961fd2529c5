// Acceptance harness: exercises the generator end to end (through the CLI
// binary) and in process (through the library), printing one PASS/FAIL line
// per criterion. Exits nonzero when any criterion fails.

#include "mlgen/command.hpp"
#include "mlgen/context.hpp"
#include "mlgen/mapping.hpp"
#include "mlgen/model_io.hpp"
#include "mlgen/pipeline.hpp"
#include "mlgen/template_engine.hpp"

#include "support/command_gen.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kFixtures = FIXTURE_DIR;
const std::string kBinary = MLGEN_BINARY;

std::string g_tempDir;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path);
}

struct RunResult {
    int exitCode = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& command) {
    const std::string outFile = g_tempDir + "/cmd.out";
    const std::string errFile = g_tempDir + "/cmd.err";
    int status = std::system((command + " >" + outFile + " 2>" + errFile).c_str());
    RunResult result;
    result.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(outFile);
    result.err = read_file(errFile);
    return result;
}

std::string quoted(const std::string& path) { return "'" + path + "'"; }

std::string generate_command(const std::string& mappingFile, const std::string& outPath,
                             const std::string& extra = "") {
    std::string command = quoted(kBinary) + " generate" +
                          " --model " + quoted(kFixtures + "/weather/weather.model.json") +
                          " --mapping " + quoted(kFixtures + "/weather/" + mappingFile) +
                          " --templates " + quoted(kFixtures + "/weather/templates") +
                          " --out " + quoted(outPath);
    if (!extra.empty()) command += " " + extra;
    return command;
}

// Collects requirement failures for one criterion.
struct Probe {
    std::vector<std::string> problems;

    void expect(bool condition, const std::string& requirement) {
        if (!condition) problems.push_back(requirement);
    }
    bool ok() const { return problems.empty(); }
    std::string detail() const {
        std::string out;
        for (std::size_t i = 0; i < problems.size(); ++i) {
            if (i) out += "; ";
            out += problems[i];
        }
        return out;
    }
};

int g_failures = 0;

void report(int number, const std::string& title, const Probe& probe) {
    if (probe.ok()) {
        std::cout << "PASS criterion " << number << ": " << title << "\n";
    } else {
        std::cout << "FAIL criterion " << number << ": " << title << " — " << probe.detail()
                  << "\n";
        ++g_failures;
    }
}

template <typename Fn>
void criterion(int number, const std::string& title, Fn body) {
    Probe probe;
    try {
        body(probe);
    } catch (const std::exception& error) {
        probe.expect(false, std::string("unexpected exception: ") + error.what());
    }
    report(number, title, probe);
}

struct WeatherSetup {
    mlgen::Model model;
    mlgen::MappingConfig mapping;
    std::string templates;

    WeatherSetup()
        : model(mlgen::load_model(read_file(kFixtures + "/weather/weather.model.json"))),
          mapping(mlgen::parse_mapping(read_file(kFixtures + "/weather/mapping.json"))),
          templates(kFixtures + "/weather/templates") {}
};

// --- criterion bodies -------------------------------------------------------

void golden_end_to_end(Probe& probe) {
    const std::string out = g_tempDir + "/weather.ipynb";

    auto started = std::chrono::steady_clock::now();
    RunResult result = run(generate_command("mapping.json", out));
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    probe.expect(result.exitCode == 0, "generate exits 0 (got " +
                                           std::to_string(result.exitCode) + ": " + result.err +
                                           ")");
    probe.expect(fs::exists(out), "output file written");
    if (fs::exists(out)) {
        const std::string golden = kFixtures + "/weather/golden/weather.ipynb";
        probe.expect(fs::exists(golden), "golden file present");
        if (fs::exists(golden)) {
            probe.expect(read_file(out) == read_file(golden),
                         "output byte-identical to the golden file");
        }
    }
    probe.expect(elapsed < 1000, "generation under one second (took " +
                                     std::to_string(elapsed) + " ms)");
}

void independent_reader(Probe& probe) {
    const std::string out = g_tempDir + "/reader.ipynb";
    RunResult generated = run(generate_command("mapping.json", out));
    probe.expect(generated.exitCode == 0, "generate exits 0");

    const char* script = R"PY(
import json
import re
import sys

with open(sys.argv[1], "r", encoding="utf-8") as handle:
    doc = json.load(handle)

assert doc["nbformat"] == 4, "nbformat must be 4"
assert isinstance(doc["nbformat_minor"], int), "nbformat_minor must be an integer"
cells = doc["cells"]
assert isinstance(cells, list) and cells, "cells must be a non-empty list"

import_line = re.compile(r"^(import\s+\S|from\s+\S+\s+import\s+\S)")
code_cells = []
for cell in cells:
    kind = cell["cell_type"]
    assert kind in ("code", "markdown"), "unexpected cell type: %s" % kind
    assert isinstance(cell["metadata"], dict), "metadata must be an object"
    source = cell["source"]
    assert isinstance(source, list), "source must be a list"
    assert all(isinstance(line, str) for line in source), "source lines must be strings"
    if kind == "code":
        assert cell["execution_count"] is None, "execution_count must be null"
        assert cell["outputs"] == [], "outputs must be empty"
        code_cells.append("".join(source))

for text in code_cells:
    compile(text, "<cell>", "exec")

first = code_cells[0].split("\n")
assert first, "first code cell must not be empty"
assert all(import_line.match(line) for line in first), "cell 0 must hold only import lines"
assert len({line.strip() for line in first}) == len(first), "cell 0 imports must be unique"
for text in code_cells[1:]:
    for line in text.split("\n"):
        assert not import_line.match(line), "import line outside cell 0: %r" % line

print("ok")
)PY";
    const std::string scriptPath = g_tempDir + "/read_notebook.py";
    write_file(scriptPath, script);

    RunResult reader = run("python3 " + quoted(scriptPath) + " " + quoted(out));
    probe.expect(reader.exitCode == 0,
                 "independent notebook reader accepts the file (" + reader.err + ")");
    probe.expect(reader.out.find("ok") != std::string::npos, "reader reports ok");
}

void name_mapping_precedence(Probe& probe) {
    const std::string base = g_tempDir + "/precedence_base.ipynb";
    const std::string named = g_tempDir + "/precedence_named.ipynb";
    const std::string marker = "# named-mapping override for TrainSplit";

    RunResult baseline = run(generate_command("mapping.json", base));
    probe.expect(baseline.exitCode == 0, "baseline generate exits 0");
    probe.expect(read_file(base).find(marker) == std::string::npos,
                 "marker absent without the name mapping");

    RunResult overridden = run(generate_command("mapping_byname.json", named));
    probe.expect(overridden.exitCode == 0, "name-mapped generate exits 0");
    probe.expect(read_file(named).find(marker) != std::string::npos,
                 "name-mapped template renders its marker");
    probe.expect(overridden.err.find(
                     "Weather::TrainSplit -> model/train_test_split_named (byName)") !=
                     std::string::npos,
                 "report attributes the block to the name mapping");
}

void command_dsl_suite(Probe& probe) {
    WeatherSetup world;
    mlgen::ContextRegistry registry =
        mlgen::build_contexts(world.model, world.model.state_machines().front());
    mlgen::render_snippets(registry, world.mapping, world.templates);

    auto eval = [&](const char* command, const char* blockQn) {
        const mlgen::BlockContext& context =
            registry.at(mlgen::QualifiedName::parse(blockQn));
        return mlgen::eval_command(mlgen::parse_command(command), context, registry);
    };
    auto expect_eval = [&](const char* command, const char* blockQn, const char* expected) {
        mlgen::CommandValue value = eval(command, blockQn);
        probe.expect(value.is_text() && value.text() == expected,
                     std::string(command) + " on " + blockQn + " evaluates to '" + expected +
                         "'");
    };

    expect_eval("THIS.BLOCK.NAME", "Weather::TrainSplit", "TrainSplit");
    expect_eval("THIS.BLOCK.ATTRIBUTES[0]", "Weather::Sensor_Log", "date");
    expect_eval(R"(THIS.STEREOTYPE["CSV"].NAME)", "Weather::Sensor_Log", "CSV");
    expect_eval(R"(THIS.STEREOTYPE["CSV"].ATTRIBUTES[1])", "Weather::Sensor_Log", ",");
    expect_eval(R"(THIS.BLOCK.STEREOTYPEofATTRIBUTE["date"])", "Weather::Sensor_Log",
                "Datetime");
    expect_eval(R"(THIS.BLOCK.STEREOTYPEofATTRIBUTE["date"].NAME)", "Weather::Sensor_Log",
                "Datetime");
    expect_eval("THIS.BLOCK.OUTPUT", "Weather::Merge_DF", "merged_df");
    expect_eval("CONNECTED.BLOCK.NAME", "Weather::Merge_DF", "Format_Date");
    expect_eval(R"(CONNECTED[Name="Station_Info"].BLOCK.NAME)", "Weather::Merge_DF",
                "Station_Info");
    expect_eval("CONNECTED[Nr=1].BLOCK.NAME", "Weather::Merge_DF", "Station_Info");
    expect_eval(R"(CONNECTED[StereotypeName="CSV"].BLOCK.NAME)", "Weather::Merge_DF",
                "Station_Info");
    expect_eval(R"(CONNECTED[AttributeValue={"Output_Format": "%Y-%m-%d"}].BLOCK.NAME)",
                "Weather::Merge_DF", "Format_Date");
    expect_eval(R"(CONNECTED[OUTPUT_Name="Sensor_Log_df"].BLOCK.NAME)", "Weather::Merge_DF",
                "Format_Date");
    expect_eval("CONNECTED[Nr=0].BLOCK.OUTPUT", "Weather::TrainSplit", "merged_df");

    for (const char* tooShort : {"THIS.NAME", "CONNECTED.OUTPUT", "THIS.BLOCK"}) {
        bool rejected = false;
        try {
            mlgen::parse_command(tooShort);
        } catch (const mlgen::CommandParseError& error) {
            rejected = std::string(error.what()).find("at least three") != std::string::npos;
        }
        probe.expect(rejected, std::string("'") + tooShort +
                                   "' rejected for having fewer than three keywords");
    }

    testsupport::CommandGenerator generator(42);
    int failures = 0;
    const int rounds = 1500;
    for (int i = 0; i < rounds; ++i) {
        mlgen::CommandAst ast = generator.next();
        try {
            if (mlgen::parse_command(mlgen::canonical_text(ast)) != ast) ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    }
    probe.expect(failures == 0, std::to_string(rounds) +
                                    " random AST -> text -> AST round trips (" +
                                    std::to_string(failures) + " failed)");
}

void diamond_dedup(Probe& probe) {
    const char* diamond = R"({
      "stereotypes": [{"name": "ML", "kind": "ml-task"}],
      "blocks": [
        {"qualifiedName": "P::Shared", "appliedStereotypes": [{"stereotype": "ML"}]},
        {"qualifiedName": "P::Left", "appliedStereotypes": [{"stereotype": "ML"}],
         "parts": ["P::Shared"]},
        {"qualifiedName": "P::Right", "appliedStereotypes": [{"stereotype": "ML"}],
         "parts": ["P::Shared"]},
        {"qualifiedName": "P::Sink", "appliedStereotypes": [{"stereotype": "ML"}],
         "parts": ["P::Left", "P::Right"]}
      ],
      "stateMachines": [
        {"name": "M", "states": [{"name": "s", "order": 0, "block": "P::Sink"}]}
      ]
    })";
    mlgen::Model model = mlgen::load_model(diamond);
    mlgen::ContextRegistry registry =
        mlgen::build_contexts(model, model.state_machines().front());

    probe.expect(registry.size() == 4, "shared input block renders exactly once");
    int sharedCount = 0;
    for (const auto& context : registry.contexts()) {
        if (context.blockRef.str() == "P::Shared") ++sharedCount;
    }
    probe.expect(sharedCount == 1, "exactly one context for the shared block");

    auto monotonic = [&probe](const mlgen::ContextRegistry& target, const char* what) {
        bool increasing = true;
        for (const auto& context : target.contexts()) {
            for (const auto& input : context.connected) {
                if (target.at(input).executionOrder >= context.executionOrder) {
                    increasing = false;
                }
            }
        }
        probe.expect(increasing,
                     std::string("executionOrder strictly increases along connections (") +
                         what + ")");
    };
    monotonic(registry, "diamond");

    WeatherSetup world;
    mlgen::ContextRegistry weather =
        mlgen::build_contexts(world.model, world.model.state_machines().front());
    monotonic(weather, "weather");
}

void template_semantics(Probe& probe) {
    WeatherSetup world;

    // Missing mandatory variable: the error names block, template, and variable.
    mlgen::MappingConfig incomplete = mlgen::parse_mapping(R"({
      "stereotypeMappings": {
        "CSV": {
          "template": "data/load_csv",
          "properties": {"Path": "path", "Separator": "sep"}
        }
      }
    })");
    mlgen::ContextRegistry registry =
        mlgen::build_contexts(world.model, world.model.state_machines().front());
    std::string message;
    try {
        mlgen::render_snippets(registry, incomplete, world.templates);
    } catch (const mlgen::Error& error) {
        message = error.what();
    }
    probe.expect(message.find("Weather::Sensor_Log") != std::string::npos,
                 "missing-variable error names the block (got: " + message + ")");
    probe.expect(message.find("data/load_csv") != std::string::npos,
                 "missing-variable error names the template");
    probe.expect(message.find("block_name") != std::string::npos,
                 "missing-variable error names the variable");

    // Unbound optional variable: the default text substitutes.
    mlgen::Template optional = mlgen::parse_template("opt", "how=\"${(how, inner)}\"");
    probe.expect(mlgen::render(optional, {}, {}) == "how=\"inner\"",
                 "optional placeholder falls back to its default");
    probe.expect(mlgen::render(optional, {{"how", "outer"}}, {}) == "how=\"outer\"",
                 "optional placeholder prefers a binding");

    // Extras render at the anchor as name=value pairs, stars gone.
    mlgen::Template anchored = mlgen::load_template(world.templates, "model/train_rf");
    std::string rendered =
        mlgen::render(anchored, {{"n_estimators", "200"}},
                      {{"max_depth", "5"}, {"random_state", "0"}});
    probe.expect(rendered.find("RandomForestClassifier(n_estimators=200, max_depth=5, "
                               "random_state=0)") != std::string::npos,
                 "kwargs expand as name=value pairs in declaration order");
    probe.expect(rendered.find("**") == std::string::npos,
                 "no stars survive the kwargs expansion");

    // A template with two anchors does not load.
    const std::string doubled = g_tempDir + "/two_anchors.tmpl";
    write_file(doubled, "f(**kwargs)\ng(**kwargs)\n");
    bool refused = false;
    try {
        mlgen::load_template(g_tempDir, "two_anchors");
    } catch (const mlgen::TemplateError& error) {
        refused = std::string(error.what()).find("second **kwargs anchor") != std::string::npos;
    }
    probe.expect(refused, "second kwargs anchor refused at load");
}

void nonfatal_validation(Probe& probe) {
    const std::string out = g_tempDir + "/broken.ipynb";

    RunResult lenient = run(generate_command("mapping_broken.json", out));
    probe.expect(lenient.exitCode == 0, "broken snippet still exits 0 (got " +
                                            std::to_string(lenient.exitCode) + ")");
    probe.expect(fs::exists(out), "notebook written despite the warning");
    probe.expect(lenient.err.find("unbalanced '('") != std::string::npos,
                 "warning about the unbalanced bracket reported");

    fs::remove(out);
    RunResult strict = run(generate_command("mapping_broken.json", out, "--strict"));
    probe.expect(strict.exitCode == 1, "--strict turns the warning into exit 1 (got " +
                                           std::to_string(strict.exitCode) + ")");
    probe.expect(fs::exists(out), "--strict still writes the notebook");
}

void determinism(Probe& probe) {
    const std::string outA = g_tempDir + "/det_a.ipynb";
    const std::string outB = g_tempDir + "/det_b.ipynb";
    const std::string reportA = g_tempDir + "/det_a.report.json";
    const std::string reportB = g_tempDir + "/det_b.report.json";

    RunResult first = run(generate_command("mapping.json", outA, "--report " + quoted(reportA)));
    RunResult second = run(generate_command("mapping.json", outB, "--report " + quoted(reportB)));

    probe.expect(first.exitCode == 0 && second.exitCode == 0, "both runs exit 0");
    probe.expect(read_file(outA) == read_file(outB), "notebooks byte-identical");
    probe.expect(read_file(reportA) == read_file(reportB), "reports byte-identical");
    probe.expect(first.err == second.err, "diagnostic output identical");
}

}  // namespace

int main() {
    fs::path tempRoot = fs::temp_directory_path() / "mlgen_acceptance";
    std::error_code ignored;
    fs::remove_all(tempRoot, ignored);
    fs::create_directories(tempRoot);
    g_tempDir = tempRoot.string();

    criterion(1, "weather fixture generates the golden notebook in under a second",
              golden_end_to_end);
    criterion(2, "an independent reader accepts the notebook and its import cell",
              independent_reader);
    criterion(3, "name mappings take precedence over stereotype mappings",
              name_mapping_precedence);
    criterion(4, "command language: every keyword form parses and evaluates; round trips hold",
              command_dsl_suite);
    criterion(5, "shared inputs render once and inputs precede consumers", diamond_dedup);
    criterion(6, "template semantics: mandatory, default, kwargs, single anchor",
              template_semantics);
    criterion(7, "syntax warnings never block generation unless --strict", nonfatal_validation);
    criterion(8, "repeated runs are byte-identical", determinism);

    fs::remove_all(tempRoot, ignored);
    if (g_failures != 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
