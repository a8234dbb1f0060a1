#include "kpo/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kpo {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KPO_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace kpo
