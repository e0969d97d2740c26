#pragma once

#include <string>

#include "qf/model.hpp"

namespace qf {

// JSON schema: {"n", "lambda" (rational strings), "sigma"/"tau" (1-based),
// "d_max", "perturbations": [{"l" (1-based), "k", "poly"}]}.
// Parse and validation failures carry 1-based positions where available.
PerturbedManifold read_manifold(const std::string& text,
                                bool strict_real = false);
PerturbedManifold load_manifold_file(const std::string& path,
                                     bool strict_real = false);

// Canonical serialization: fixed key order, canonical rational and
// polynomial strings, two-space indent, trailing newline. Reading a
// canonical file and writing it back is byte-identical.
std::string write_manifold(const PerturbedManifold& pm);

}  // namespace qf
