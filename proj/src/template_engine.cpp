#include "mlgen/template_engine.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mlgen {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

void flush_literal(Template& tmpl, const std::string& text, std::size_t from, std::size_t to) {
    if (to <= from) return;
    std::string slice = text.substr(from, to - from);
    tmpl.segments.push_back({TemplateSegment::Kind::Literal, slice, "", slice});
}

// Parses `${name}` / `${(name, default)}` starting at `at` (which points to
// the `$`); returns the position just past the closing brace.
std::size_t parse_placeholder(Template& tmpl, const std::string& text, std::size_t at) {
    std::size_t cursor = at + 2;
    if (cursor < text.size() && text[cursor] == '(') {
        ++cursor;
        std::size_t comma = text.find(',', cursor);
        std::size_t close = text.find(")}", cursor);
        if (comma == std::string::npos || (close != std::string::npos && close < comma)) {
            throw TemplateError("template '" + tmpl.name +
                                "': optional placeholder needs a ', default' part");
        }
        std::string name = trim(text.substr(cursor, comma - cursor));
        if (name.empty()) {
            throw TemplateError("template '" + tmpl.name + "': empty placeholder name");
        }
        cursor = comma + 1;
        while (cursor < text.size() && std::isspace(static_cast<unsigned char>(text[cursor]))) {
            ++cursor;
        }
        std::string defaultText;
        if (cursor < text.size() && text[cursor] == '"') {
            ++cursor;
            while (cursor < text.size() && text[cursor] != '"') {
                if (text[cursor] == '\\' && cursor + 1 < text.size()) ++cursor;
                defaultText += text[cursor];
                ++cursor;
            }
            if (cursor >= text.size()) {
                throw TemplateError("template '" + tmpl.name +
                                    "': unterminated quoted default for '" + name + "'");
            }
            ++cursor; // closing quote
            while (cursor < text.size() && std::isspace(static_cast<unsigned char>(text[cursor]))) {
                ++cursor;
            }
            if (cursor + 1 >= text.size() || text[cursor] != ')' || text[cursor + 1] != '}') {
                throw TemplateError("template '" + tmpl.name + "': expected ')}' to close '" +
                                    name + "'");
            }
            cursor += 2;
        } else {
            std::size_t end = text.find(")}", cursor);
            if (end == std::string::npos) {
                throw TemplateError("template '" + tmpl.name + "': unterminated placeholder '" +
                                    name + "'");
            }
            defaultText = trim(text.substr(cursor, end - cursor));
            cursor = end + 2;
        }
        std::string raw = text.substr(at, cursor - at);
        tmpl.segments.push_back({TemplateSegment::Kind::VarDefault, name, defaultText, raw});
        return cursor;
    }

    std::size_t close = text.find('}', cursor);
    if (close == std::string::npos) {
        throw TemplateError("template '" + tmpl.name + "': unterminated placeholder");
    }
    std::string name = trim(text.substr(cursor, close - cursor));
    if (name.empty()) {
        throw TemplateError("template '" + tmpl.name + "': empty placeholder name");
    }
    std::string raw = text.substr(at, close + 1 - at);
    tmpl.segments.push_back({TemplateSegment::Kind::Var, name, "", raw});
    return close + 1;
}

} // namespace

std::string Template::source() const {
    std::string out;
    for (const auto& segment : segments) out += segment.raw;
    return out;
}

Template parse_template(const std::string& name, const std::string& text) {
    constexpr const char* kAnchor = "**kwargs";
    constexpr std::size_t kAnchorLength = 8;

    Template tmpl;
    tmpl.name = name;
    bool haveAnchor = false;
    std::size_t literalStart = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t placeholder = text.find("${", pos);
        std::size_t anchor = text.find(kAnchor, pos);
        if (placeholder == std::string::npos && anchor == std::string::npos) break;
        if (anchor < placeholder) {
            if (haveAnchor) {
                throw TemplateError("template '" + name +
                                    "' contains a second **kwargs anchor; only one is allowed");
            }
            haveAnchor = true;
            flush_literal(tmpl, text, literalStart, anchor);
            tmpl.segments.push_back({TemplateSegment::Kind::KwargsAnchor, "", "", kAnchor});
            pos = literalStart = anchor + kAnchorLength;
        } else {
            flush_literal(tmpl, text, literalStart, placeholder);
            pos = literalStart = parse_placeholder(tmpl, text, placeholder);
        }
    }
    flush_literal(tmpl, text, literalStart, text.size());
    return tmpl;
}

Template load_template(const std::string& root, const std::string& name) {
    std::string path = root + "/" + name + ".tmpl";
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw TemplateError("template '" + name + "' not found under '" + root + "' (expected " +
                            path + ")");
    }
    std::ostringstream content;
    content << file.rdbuf();
    return parse_template(name, content.str());
}

std::string render(const Template& tmpl, const std::map<std::string, std::string>& bindings,
                   const std::vector<std::pair<std::string, std::string>>& kwargs) {
    std::string out;
    for (const auto& segment : tmpl.segments) {
        switch (segment.kind) {
        case TemplateSegment::Kind::Literal:
            out += segment.text;
            break;
        case TemplateSegment::Kind::Var: {
            auto it = bindings.find(segment.text);
            if (it == bindings.end()) {
                throw TemplateError("template '" + tmpl.name +
                                    "': no binding for mandatory variable '" + segment.text + "'");
            }
            out += it->second;
            break;
        }
        case TemplateSegment::Kind::VarDefault: {
            auto it = bindings.find(segment.text);
            out += it == bindings.end() ? segment.defaultText : it->second;
            break;
        }
        case TemplateSegment::Kind::KwargsAnchor: {
            bool first = true;
            for (const auto& [name, value] : kwargs) {
                if (!first) out += ", ";
                first = false;
                out += name + "=" + value;
            }
            break;
        }
        }
    }
    return out;
}

namespace {

std::vector<std::string> collect_variables(const Template& tmpl, bool mandatoryOnly) {
    std::vector<std::string> names;
    for (const auto& segment : tmpl.segments) {
        bool isVar = segment.kind == TemplateSegment::Kind::Var ||
                     (!mandatoryOnly && segment.kind == TemplateSegment::Kind::VarDefault);
        if (!isVar) continue;
        bool seen = false;
        for (const auto& name : names) {
            if (name == segment.text) {
                seen = true;
                break;
            }
        }
        if (!seen) names.push_back(segment.text);
    }
    return names;
}

} // namespace

std::vector<std::string> mandatory_variables(const Template& tmpl) {
    return collect_variables(tmpl, true);
}

std::vector<std::string> all_variables(const Template& tmpl) {
    return collect_variables(tmpl, false);
}

namespace {

struct Line {
    std::string content;
    bool hasNewline;
};

std::vector<Line> split_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t newline = text.find('\n', pos);
        if (newline == std::string::npos) {
            lines.push_back({text.substr(pos), false});
            break;
        }
        lines.push_back({text.substr(pos, newline - pos), true});
        pos = newline + 1;
    }
    return lines;
}

std::string join_lines(const std::vector<Line>& lines) {
    std::string out;
    for (const auto& line : lines) {
        out += line.content;
        if (line.hasNewline) out += '\n';
    }
    return out;
}

bool starts_with_word(const std::string& line, const std::string& word, std::size_t at = 0) {
    if (line.compare(at, word.size(), word) != 0) return false;
    std::size_t end = at + word.size();
    return end == line.size() || std::isspace(static_cast<unsigned char>(line[end]));
}

// Column-0 `import ...` or `from <module> import ...` lines only.
bool is_import_line(const std::string& line) {
    if (starts_with_word(line, "import")) return true;
    if (!starts_with_word(line, "from")) return false;
    std::size_t pos = 4;
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::size_t moduleStart = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos == moduleStart) return false;
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    return starts_with_word(line, "import", pos);
}

} // namespace

ImportExtraction extract_imports(const std::string& text) {
    ImportExtraction result;
    std::vector<Line> kept;
    for (const auto& line : split_lines(text)) {
        if (is_import_line(line.content)) {
            result.imports.push_back(line.content);
        } else {
            kept.push_back(line);
        }
    }
    result.body = join_lines(kept);
    return result;
}

OutputExtraction extract_output(const std::string& text) {
    constexpr const char* kDirective = "#@output";

    OutputExtraction result;
    std::vector<Line> kept;
    for (const auto& line : split_lines(text)) {
        if (starts_with_word(line.content, kDirective)) {
            std::string name = trim(line.content.substr(std::string(kDirective).size()));
            if (!name.empty()) {
                result.output = name;
                continue; // directive line is dropped from the body
            }
        }
        kept.push_back(line);
    }
    result.body = join_lines(kept);
    if (result.output) return result;

    for (const auto& line : kept) {
        const std::string& content = line.content;
        if (content.empty()) continue;
        char first = content.front();
        if (first == ' ' || first == '\t' || first == '#') continue;
        for (std::size_t i = 0; i < content.size(); ++i) {
            if (content[i] != '=') continue;
            if (i + 1 < content.size() && content[i + 1] == '=') {
                ++i; // skip the second '=' of '=='
                continue;
            }
            if (i > 0 && (content[i - 1] == '=' || content[i - 1] == '<' ||
                          content[i - 1] == '>' || content[i - 1] == '!')) {
                continue;
            }
            std::string lhs = trim(content.substr(0, i));
            if (!lhs.empty()) result.output = lhs; // later assignments win
            break;
        }
    }
    return result;
}

} // namespace mlgen
