#pragma once

#include "mlgen/model.hpp"

#include <string>

namespace mlgen {

// Loads a *.model.json document and returns a fully linked model. Structural
// invariants (resolvable references, acyclic inheritance and parts graphs,
// unique qualified names, ascending state orders) are enforced here;
// mandatory stereotype properties are enforced later, at generation time.
Model load_model(const std::string& text);

// Serializes back to the interchange format. load(save(load(x))) is
// structurally identical to load(x).
std::string save_model(const Model& model);

} // namespace mlgen
