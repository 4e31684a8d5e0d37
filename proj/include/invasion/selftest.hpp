#pragma once

#include <ostream>

namespace invasion {

// Parallel kernels against their serial references on random data.
// Prints one line per check and returns true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace invasion
