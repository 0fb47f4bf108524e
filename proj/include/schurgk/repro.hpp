#pragma once

#include <string>
#include <vector>

#include "schurgk/io.hpp"

namespace schurgk {

// Names accepted by reproduce().
const std::vector<std::string>& reproduction_names();

// Golden JSON for one of the reference computations. Throws InvalidInput for
// an unknown name.
Json reproduce(const std::string& name);

}  // namespace schurgk
