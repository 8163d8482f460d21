#include "nnml/random.hpp"

namespace nnml {

namespace {

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Formula leaf(Rng& rng, const std::vector<std::string>& atoms) {
    if (pick(rng, 0, 7) == 0) return pick(rng, 0, 1) ? Formula::top() : Formula::bottom();
    return Formula::atom(atoms[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(atoms.size()) - 1))]);
}

}  // namespace

Formula random_formula(Rng& rng, int size, int depth, const std::vector<std::string>& atoms) {
    if (atoms.empty()) throw Error("random_formula needs at least one atom");
    if (size <= 1 || (size == 2 && depth <= 0)) return leaf(rng, atoms);
    bool box = depth > 0 && (size == 2 || pick(rng, 0, 3) == 0);
    if (box) return Formula::box(random_formula(rng, size - 1, depth - 1, atoms));
    int left = pick(rng, 1, size - 2);
    Formula a = random_formula(rng, left, depth, atoms);
    Formula b = random_formula(rng, size - 1 - left, depth, atoms);
    switch (pick(rng, 0, 3)) {
    case 0: return Formula::conj(a, b);
    case 1: return Formula::disj(a, b);
    case 2: return Formula::imp(a, b);
    default: return Formula::imp(a, Formula::bottom());
    }
}

}  // namespace nnml
