#include "axisym/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace axisym {

int resolve_threads(int cli_threads) {
  if (cli_threads > 0) return cli_threads;
  if (const char* env = std::getenv("AXISYM_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n <= 0)
      throw std::invalid_argument(std::string("AXISYM_THREADS must be a positive integer, got ") + env);
    return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int current_threads() { return omp_get_max_threads(); }

}  // namespace axisym
