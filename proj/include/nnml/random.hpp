#pragma once

#include "nnml/formula.hpp"

#include <random>
#include <string>
#include <vector>

namespace nnml {

using Rng = std::mt19937_64;

// A random formula with at most `size` nodes and modal depth at most
// `depth`, over the given atoms. Negation is built as A -> false.
Formula random_formula(Rng& rng, int size, int depth, const std::vector<std::string>& atoms);

}  // namespace nnml
