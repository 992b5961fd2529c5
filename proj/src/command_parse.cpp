#include "mlgen/command.hpp"

#include <cctype>
#include <set>

namespace mlgen {

namespace {

class Scanner {
public:
    explicit Scanner(const std::string& text) : text_(text) {}

    // Position of the next token, with leading whitespace skipped.
    std::size_t token_pos() {
        skip_ws();
        return pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& where) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) {
            throw CommandParseError(std::string("expected '") + c + "' " + where, pos_);
        }
        ++pos_;
    }

    std::string keyword() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) throw CommandParseError("expected a keyword", start);
        return text_.substr(start, pos_ - start);
    }

    std::string quoted() {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != '"') {
            throw CommandParseError("expected a double-quoted string", pos_);
        }
        std::size_t open = pos_++;
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                if (pos_ + 1 >= text_.size()) break;
                char escaped = text_[pos_ + 1];
                if (escaped != '"' && escaped != '\\') {
                    throw CommandParseError("unsupported escape sequence", pos_);
                }
                out += escaped;
                pos_ += 2;
                continue;
            }
            if (c == '"') {
                ++pos_;
                return out;
            }
            out += c;
            ++pos_;
        }
        throw CommandParseError("unterminated string literal", open);
    }

    int integer(const std::string& what) {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (digits == pos_) throw CommandParseError("expected an integer " + what, start);
        try {
            return std::stoi(text_.substr(start, pos_ - start));
        } catch (const std::out_of_range&) {
            throw CommandParseError("integer out of range", start);
        }
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

// Counts top-level period-separated segments. Returns no value when quoting
// or bracketing is unbalanced; the main parser then reports a precise offset.
std::optional<std::size_t> count_keywords(const std::string& text) {
    std::size_t segments = 1;
    int depth = 0;
    bool inString = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (inString) {
            if (c == '\\') ++i;
            else if (c == '"') inString = false;
            continue;
        }
        if (c == '"') inString = true;
        else if (c == '[' || c == '{') ++depth;
        else if (c == ']' || c == '}') --depth;
        else if (c == '.' && depth == 0) ++segments;
    }
    if (inString || depth != 0) return std::nullopt;
    return segments;
}

ConnectedSelector parse_selector(Scanner& scanner) {
    ConnectedSelector selector;
    if (scanner.consume(']')) return selector;
    std::set<std::string> seen;
    while (true) {
        std::size_t keyPos = scanner.token_pos();
        std::string key = scanner.keyword();
        if (!seen.insert(key).second) {
            throw CommandParseError("malformed selector: duplicate key '" + key + "'", keyPos);
        }
        scanner.expect('=', "after selector key '" + key + "'");
        if (key == "Name") {
            selector.name = scanner.quoted();
        } else if (key == "Nr") {
            int nr = scanner.integer("for Nr");
            if (nr < 0) {
                throw CommandParseError("malformed selector: Nr must be non-negative", keyPos);
            }
            selector.nr = nr;
        } else if (key == "StereotypeName") {
            selector.stereotypeName = scanner.quoted();
        } else if (key == "OUTPUT_Name") {
            selector.outputName = scanner.quoted();
        } else if (key == "AttributeValue") {
            scanner.expect('{', "to open the AttributeValue map");
            if (!scanner.consume('}')) {
                while (true) {
                    std::size_t attrPos = scanner.token_pos();
                    std::string attrName = scanner.quoted();
                    if (selector.attributeValue.count(attrName)) {
                        throw CommandParseError(
                            "malformed selector: duplicate attribute '" + attrName + "'", attrPos);
                    }
                    scanner.expect(':', "after attribute name");
                    selector.attributeValue[attrName] = scanner.quoted();
                    if (scanner.consume('}')) break;
                    scanner.expect(',', "between attribute entries");
                }
            }
        } else {
            throw CommandParseError("malformed selector: unknown key '" + key + "'", keyPos);
        }
        if (scanner.consume(']')) break;
        scanner.expect(',', "between selector entries");
    }
    return selector;
}

std::optional<int> parse_index(Scanner& scanner) {
    std::size_t bracketPos = scanner.token_pos();
    if (!scanner.consume('[')) return std::nullopt;
    int value = scanner.integer("index");
    if (value < 0) throw CommandParseError("index must be non-negative", bracketPos);
    scanner.expect(']', "to close the index");
    return value;
}

Accessor parse_accessor(Scanner& scanner) {
    std::size_t pos = scanner.token_pos();
    std::string word = scanner.keyword();
    Accessor accessor;
    if (word == "NAME") {
        accessor.kind = AccessorKind::Name;
    } else if (word == "ATTRIBUTES") {
        accessor.kind = AccessorKind::Attributes;
    } else if (word == "OUTPUT") {
        accessor.kind = AccessorKind::Output;
    } else if (word == "STEREOTYPEofATTRIBUTE") {
        accessor.kind = AccessorKind::StereotypeOfAttribute;
        scanner.expect('[', "after STEREOTYPEofATTRIBUTE");
        accessor.attribute = scanner.quoted();
        scanner.expect(']', "to close the attribute argument");
    } else {
        throw CommandParseError("unknown keyword '" + word +
                                    "': expected NAME, ATTRIBUTES, STEREOTYPEofATTRIBUTE, or OUTPUT",
                                pos);
    }
    accessor.index = parse_index(scanner);
    return accessor;
}

std::string quote(const std::string& text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

CommandAst parse_command(const std::string& text) {
    if (auto keywords = count_keywords(text); keywords && *keywords < 3) {
        throw CommandParseError(
            "command requires at least three period-separated keywords (source, scope, accessor)",
            text.size());
    }

    Scanner scanner(text);
    CommandAst ast;

    std::size_t pos = scanner.token_pos();
    std::string word = scanner.keyword();
    if (word == "THIS") {
        ast.source.kind = SourceKind::This;
    } else if (word == "CONNECTED") {
        ast.source.kind = SourceKind::Connected;
        if (scanner.consume('[')) ast.source.selector = parse_selector(scanner);
    } else {
        throw CommandParseError("unknown keyword '" + word + "': expected THIS or CONNECTED", pos);
    }
    scanner.expect('.', "after the source keyword");

    pos = scanner.token_pos();
    word = scanner.keyword();
    if (word == "BLOCK") {
        ast.scope.kind = ScopeKind::Block;
    } else if (word == "STEREOTYPE") {
        ast.scope.kind = ScopeKind::Stereotype;
        scanner.expect('[', "after STEREOTYPE");
        ast.scope.stereotypeName = scanner.quoted();
        scanner.expect(']', "to close the stereotype argument");
    } else {
        throw CommandParseError("unknown keyword '" + word + "': expected BLOCK or STEREOTYPE", pos);
    }
    scanner.expect('.', "after the scope keyword");

    ast.accessor = parse_accessor(scanner);

    while (true) {
        std::size_t dotPos = scanner.token_pos();
        if (!scanner.consume('.')) break;
        if (ast.accessor.kind == AccessorKind::Name || ast.accessor.kind == AccessorKind::Output) {
            std::string name = ast.accessor.kind == AccessorKind::Name ? "NAME" : "OUTPUT";
            throw CommandParseError("nothing may follow the " + name + " accessor", dotPos);
        }
        if (!ast.chain.empty() && ast.chain.back().kind == ChainKind::Name) {
            throw CommandParseError("nothing may follow a terminal NAME step", dotPos);
        }
        pos = scanner.token_pos();
        word = scanner.keyword();
        ChainStep step;
        if (word == "ATTRIBUTES") {
            step.kind = ChainKind::Attributes;
        } else if (word == "NAME") {
            step.kind = ChainKind::Name;
        } else if (word == "STEREOTYPEofATTRIBUTE") {
            step.kind = ChainKind::StereotypeOfAttribute;
            scanner.expect('[', "after STEREOTYPEofATTRIBUTE");
            step.attribute = scanner.quoted();
            scanner.expect(']', "to close the attribute argument");
        } else {
            throw CommandParseError(
                "unknown keyword '" + word + "': expected ATTRIBUTES, STEREOTYPEofATTRIBUTE, or NAME",
                pos);
        }
        step.index = parse_index(scanner);
        ast.chain.push_back(std::move(step));
    }

    if (!scanner.at_end()) {
        throw CommandParseError("unexpected trailing characters", scanner.token_pos());
    }
    return ast;
}

std::string canonical_text(const CommandAst& ast) {
    std::string out;

    if (ast.source.kind == SourceKind::This) {
        out += "THIS";
    } else {
        out += "CONNECTED";
        const ConnectedSelector& selector = ast.source.selector;
        if (!selector.empty()) {
            std::vector<std::string> parts;
            if (selector.name) parts.push_back("Name=" + quote(*selector.name));
            if (selector.nr != 0) parts.push_back("Nr=" + std::to_string(selector.nr));
            if (selector.stereotypeName) {
                parts.push_back("StereotypeName=" + quote(*selector.stereotypeName));
            }
            if (!selector.attributeValue.empty()) {
                std::string map = "AttributeValue={";
                bool first = true;
                for (const auto& [attrName, expected] : selector.attributeValue) {
                    if (!first) map += ", ";
                    first = false;
                    map += quote(attrName) + ": " + quote(expected);
                }
                map += "}";
                parts.push_back(std::move(map));
            }
            if (selector.outputName) parts.push_back("OUTPUT_Name=" + quote(*selector.outputName));
            out += "[";
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) out += ", ";
                out += parts[i];
            }
            out += "]";
        }
    }

    out += ".";
    if (ast.scope.kind == ScopeKind::Block) {
        out += "BLOCK";
    } else {
        out += "STEREOTYPE[" + quote(ast.scope.stereotypeName) + "]";
    }

    out += ".";
    switch (ast.accessor.kind) {
    case AccessorKind::Name: out += "NAME"; break;
    case AccessorKind::Attributes: out += "ATTRIBUTES"; break;
    case AccessorKind::Output: out += "OUTPUT"; break;
    case AccessorKind::StereotypeOfAttribute:
        out += "STEREOTYPEofATTRIBUTE[" + quote(ast.accessor.attribute) + "]";
        break;
    }
    if (ast.accessor.index) out += "[" + std::to_string(*ast.accessor.index) + "]";

    for (const ChainStep& step : ast.chain) {
        out += ".";
        switch (step.kind) {
        case ChainKind::Attributes: out += "ATTRIBUTES"; break;
        case ChainKind::Name: out += "NAME"; break;
        case ChainKind::StereotypeOfAttribute:
            out += "STEREOTYPEofATTRIBUTE[" + quote(step.attribute) + "]";
            break;
        }
        if (step.index) out += "[" + std::to_string(*step.index) + "]";
    }
    return out;
}

} // namespace mlgen
