#pragma once

#include "mlgen/qualified_name.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mlgen {

// A rendered code fragment: the template output with import lines hoisted out
// and the produced variable (if any) identified.
struct Snippet {
    std::string body;
    std::vector<std::string> imports;
    std::optional<std::string> outputVar;
    QualifiedName sourceBlock;
};

} // namespace mlgen
