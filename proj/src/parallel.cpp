#include "wforge/parallel.hpp"

#include <cstdlib>
#include <string>

namespace wforge {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("WFORGE_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  return 1;
}

}  // namespace wforge
