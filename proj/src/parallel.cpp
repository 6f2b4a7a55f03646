#include "covadmm/parallel.hpp"

#include "covadmm/errors.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

namespace covadmm {

namespace {
int g_default_threads = 0;
}

void set_max_threads(int n) {
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : g_default_threads);
}

int max_threads() { return omp_get_max_threads(); }

void apply_thread_env() {
  const char* raw = std::getenv("COVADMM_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  int n = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, n);
  if (ec != std::errc() || ptr != end || n < 0)
    throw InvalidInput(std::string("COVADMM_THREADS must be a non-negative integer, got '") + raw + "'");
  set_max_threads(n);
}

}  // namespace covadmm
