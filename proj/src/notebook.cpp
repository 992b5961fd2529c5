#include "mlgen/notebook.hpp"

#include "json_util.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mlgen {

using jsonutil::Json;

namespace {

bool is_blank(const std::string& line) {
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::vector<std::string> split_plain(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (true) {
        std::size_t newline = text.find('\n', pos);
        if (newline == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, newline - pos));
        pos = newline + 1;
    }
    return lines;
}

// Drops leading/trailing blank lines and collapses interior runs to one.
std::string trim_blank_lines(const std::string& text) {
    std::vector<std::string> kept;
    bool pendingBlank = false;
    for (const auto& line : split_plain(text)) {
        if (is_blank(line)) {
            if (!kept.empty()) pendingBlank = true;
            continue;
        }
        if (pendingBlank) {
            kept.push_back("");
            pendingBlank = false;
        }
        kept.push_back(line);
    }
    std::string out;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i) out += '\n';
        out += kept[i];
    }
    return out;
}

std::string trim_copy(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

} // namespace

Notebook compose(const ContextRegistry& registry, const MappingConfig& config,
                 const std::optional<std::string>& kernelName) {
    Notebook notebook;
    notebook.kernelName = kernelName;

    std::vector<std::string> imports;
    std::set<std::string> seenImports;
    for (const auto& context : registry.contexts()) {
        if (!context.snippet) {
            throw ComposeError("block '" + context.blockRef.str() + "' has no rendered snippet");
        }
        for (const auto& line : context.snippet->imports) {
            if (seenImports.insert(trim_copy(line)).second) imports.push_back(line);
        }
    }
    if (!imports.empty()) {
        std::string source;
        for (std::size_t i = 0; i < imports.size(); ++i) {
            if (i) source += '\n';
            source += imports[i];
        }
        notebook.cells.push_back({CellKind::Code, std::move(source)});
    }

    for (const auto& context : registry.contexts()) {
        for (const auto& comment : context.comments) {
            notebook.cells.push_back({CellKind::Markdown, comment});
        }
        std::string body = context.snippet->body;
        if (config.trim_empty_lines()) body = trim_blank_lines(body);
        notebook.cells.push_back({CellKind::Code, std::move(body)});
    }
    return notebook;
}

namespace {

// nbformat source arrays: one entry per line, each keeping its newline except
// the last; empty text maps to an empty array.
Json source_lines(const std::string& text) {
    Json lines = Json::array();
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t newline = text.find('\n', pos);
        if (newline == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, newline - pos + 1));
        pos = newline + 1;
    }
    return lines;
}

} // namespace

std::string serialize(const Notebook& notebook) {
    Json document = Json::object();
    auto& cells = document["cells"] = Json::array();
    for (const auto& cell : notebook.cells) {
        Json node = Json::object();
        if (cell.kind == CellKind::Code) {
            node["cell_type"] = "code";
            node["execution_count"] = nullptr;
            node["metadata"] = Json::object();
            node["outputs"] = Json::array();
        } else {
            node["cell_type"] = "markdown";
            node["metadata"] = Json::object();
        }
        node["source"] = source_lines(cell.source);
        cells.push_back(std::move(node));
    }
    auto& metadata = document["metadata"] = Json::object();
    if (notebook.kernelName) {
        metadata["kernelspec"] =
            Json{{"display_name", *notebook.kernelName}, {"name", *notebook.kernelName}};
    }
    document["nbformat"] = 4;
    document["nbformat_minor"] = 5;
    return document.dump(1) + "\n";
}

namespace {

// Balanced-bracket and single-line-quote scan over one code cell. Purely
// best-effort: comments are skipped, triple-quoted strings are not understood.
std::vector<std::string> scan_cell(const std::string& text) {
    std::vector<std::string> issues;
    std::vector<char> stack;
    int lineNumber = 0;
    for (const auto& line : split_plain(text)) {
        ++lineNumber;
        bool inString = false;
        char quote = '"';
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (inString) {
                if (c == '\\') ++i;
                else if (c == quote) inString = false;
                continue;
            }
            if (c == '#') break;
            if (c == '"' || c == '\'') {
                inString = true;
                quote = c;
            } else if (c == '(' || c == '[' || c == '{') {
                stack.push_back(c);
            } else if (c == ')' || c == ']' || c == '}') {
                char open = c == ')' ? '(' : c == ']' ? '[' : '{';
                if (stack.empty() || stack.back() != open) {
                    issues.push_back("line " + std::to_string(lineNumber) + ": unexpected '" +
                                     std::string(1, c) + "'");
                } else {
                    stack.pop_back();
                }
            }
        }
        if (inString) {
            issues.push_back("line " + std::to_string(lineNumber) + ": unterminated string");
        }
    }
    if (!stack.empty()) {
        issues.push_back("unbalanced '" + std::string(1, stack.back()) + "'");
    }
    return issues;
}

} // namespace

std::vector<std::string> validate_syntax(const std::string& notebookFile,
                                         const std::optional<std::string>& validatorCommand) {
    std::vector<std::string> warnings;

    std::ifstream file(notebookFile, std::ios::binary);
    if (!file) {
        warnings.push_back("cannot re-open '" + notebookFile + "' for syntax validation");
    } else {
        std::ostringstream buffer;
        buffer << file.rdbuf();
        try {
            Json document = Json::parse(buffer.str());
            int index = -1;
            for (const auto& cell : document.at("cells")) {
                ++index;
                if (cell.at("cell_type") != "code") continue;
                std::string source;
                for (const auto& line : cell.at("source")) source += line.get<std::string>();
                for (const auto& issue : scan_cell(source)) {
                    warnings.push_back("cell " + std::to_string(index) + ": " + issue);
                }
            }
        } catch (const Json::exception& error) {
            warnings.push_back("notebook is not readable as JSON: " + std::string(error.what()));
        }
    }

    if (validatorCommand) {
        std::string command = *validatorCommand;
        const std::string placeholder = "{file}";
        std::size_t pos = 0;
        while ((pos = command.find(placeholder, pos)) != std::string::npos) {
            command.replace(pos, placeholder.size(), notebookFile);
            pos += notebookFile.size();
        }
        std::string captured;
        FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
        if (!pipe) {
            warnings.push_back("validator command could not be started: " + command);
        } else {
            char chunk[4096];
            std::size_t got;
            while ((got = std::fread(chunk, 1, sizeof(chunk), pipe)) > 0) {
                captured.append(chunk, got);
            }
            int status = ::pclose(pipe);
            if (status != 0) {
                std::string message = "validator command failed";
                if (WIFEXITED(status)) {
                    message += " (exit " + std::to_string(WEXITSTATUS(status)) + ")";
                }
                if (!trim_copy(captured).empty()) message += ": " + trim_copy(captured);
                warnings.push_back(std::move(message));
            }
        }
    }
    return warnings;
}

} // namespace mlgen
