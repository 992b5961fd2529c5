#pragma once

#include "mlgen/errors.hpp"
#include "mlgen/snippet.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mlgen {

// Placeholder grammar: `${name}` is a mandatory variable, `${(name, default)}`
// an optional one (quoted defaults are unwrapped, anything else is taken
// verbatim), and a literal `**kwargs` token anchors the extras expansion.
struct TemplateSegment {
    enum class Kind { Literal, Var, VarDefault, KwargsAnchor };
    Kind kind = Kind::Literal;
    std::string text;        // literal content, or the variable name
    std::string defaultText; // VarDefault only
    std::string raw;         // exact source slice; concatenation restores the file
};

struct Template {
    std::string name;
    std::vector<TemplateSegment> segments;

    // The original file text, reassembled from the raw slices.
    std::string source() const;
};

// Parses template text. At most one kwargs anchor is allowed.
Template parse_template(const std::string& name, const std::string& text);

// Reads `<root>/<name>.tmpl`; the name may contain `/` sub-paths.
Template load_template(const std::string& root, const std::string& name);

// Substitutes bindings into the template. Optional variables fall back to
// their defaults; the kwargs anchor expands to `name=value` pairs joined with
// ", " in the given order (empty when no extras exist).
std::string render(const Template& tmpl, const std::map<std::string, std::string>& bindings,
                   const std::vector<std::pair<std::string, std::string>>& kwargs);

// Mandatory variable names in order of first appearance.
std::vector<std::string> mandatory_variables(const Template& tmpl);

// All variable names (mandatory and optional) in order of first appearance.
std::vector<std::string> all_variables(const Template& tmpl);

struct ImportExtraction {
    std::vector<std::string> imports; // extracted lines, original spelling
    std::string body;                 // text with those lines removed
};

// Pulls column-0 `import ...` / `from ... import ...` lines out of the text.
// Indented imports stay put.
ImportExtraction extract_imports(const std::string& text);

struct OutputExtraction {
    std::optional<std::string> output;
    std::string body; // text with `#@output` directive lines removed
};

// Determines the snippet's produced variable: an explicit `#@output <name>`
// directive wins (last one if repeated); otherwise the left-hand side of the
// last column-0 assignment; otherwise none.
OutputExtraction extract_output(const std::string& text);

} // namespace mlgen
