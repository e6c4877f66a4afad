#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csr/term.hpp"

namespace csr {

/**
 * Result of flattening nested left-hand side patterns. Fresh auxiliary symbols
 * are recorded with the defined symbol they descend from and the constructor
 * path that was peeled off on the way.
 */
struct ShallowingResult {
    Trs output;
    std::map<std::string, std::pair<std::string, std::vector<std::string>>> symbol_map;
    std::vector<std::string> log;
};

/**
 * Splits every defined symbol along its definitional tree until each rule
 * matches constructors only directly below the root. Requires a constructor
 * system admitting definitional trees; throws Error otherwise. The rewrite
 * relation on original terms is preserved, with auxiliary steps interleaved.
 */
ShallowingResult shallow_transform(const Trs& R);

}  // namespace csr
