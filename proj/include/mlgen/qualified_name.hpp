#pragma once

#include "mlgen/errors.hpp"

#include <compare>
#include <string>
#include <vector>

namespace mlgen {

// The `::`-separated unique identifier of a named model element.
class QualifiedName {
public:
    QualifiedName() = default;

    explicit QualifiedName(std::vector<std::string> segments) : segments_(std::move(segments)) {
        validate();
    }

    // Parses "Pkg::Sub::Name". Empty segments are rejected.
    static QualifiedName parse(const std::string& text) {
        std::vector<std::string> segments;
        std::size_t start = 0;
        while (true) {
            std::size_t sep = text.find("::", start);
            if (sep == std::string::npos) {
                segments.push_back(text.substr(start));
                break;
            }
            segments.push_back(text.substr(start, sep - start));
            start = sep + 2;
        }
        for (const auto& segment : segments) {
            if (segment.empty()) {
                throw ParseError("invalid qualified name '" + text + "': empty segment");
            }
        }
        return QualifiedName(std::move(segments));
    }

    const std::vector<std::string>& segments() const { return segments_; }

    // Last segment; the element's simple name.
    const std::string& leaf() const { return segments_.back(); }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < segments_.size(); ++i) {
            if (i > 0) out += "::";
            out += segments_[i];
        }
        return out;
    }

    bool empty() const { return segments_.empty(); }

    friend bool operator==(const QualifiedName&, const QualifiedName&) = default;
    friend auto operator<=>(const QualifiedName&, const QualifiedName&) = default;

private:
    void validate() const {
        if (segments_.empty()) throw ParseError("qualified name must have at least one segment");
        for (const auto& segment : segments_) {
            if (segment.empty()) throw ParseError("qualified name segment must be non-empty");
            if (segment.find("::") != std::string::npos) {
                throw ParseError("qualified name segment must not contain '::'");
            }
        }
    }

    std::vector<std::string> segments_;
};

} // namespace mlgen
