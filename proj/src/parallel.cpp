#include "nbv/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace nbv {

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("NBV_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<int>(std::min(cap, 1024L)));
  }
  return n;
}

}  // namespace nbv
