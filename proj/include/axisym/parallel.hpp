#pragma once

namespace axisym {

/// Thread count from --threads (when > 0), else AXISYM_THREADS, else the
/// OpenMP default. Throws std::invalid_argument on a malformed variable.
int resolve_threads(int cli_threads);

/// Applies the count to every later parallel region.
void set_threads(int n);
int current_threads();

}  // namespace axisym
