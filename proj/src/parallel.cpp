#include "rankgauge/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace rankgauge {

int worker_count() {
  if (const char* env = std::getenv("RANKGAUGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) {
      return static_cast<int>(std::min<long>(v, 512));
    }
    return 1;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {
// Loops nested inside a worker run serially; only the outermost loop fans out.
thread_local bool g_inside_worker = false;
}  // namespace

void parallel_chunks(std::int64_t count,
                     const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (count <= 0) {
    return;
  }
  const int workers =
      g_inside_worker ? 1 : static_cast<int>(std::min<std::int64_t>(worker_count(), count));
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::int64_t chunk = (count + workers - 1) / workers;
  for (int w = 1; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, count);
    if (begin >= end) {
      break;
    }
    pool.emplace_back([&fn, begin, end] {
      g_inside_worker = true;
      fn(begin, end);
    });
  }
  g_inside_worker = true;
  fn(0, std::min<std::int64_t>(chunk, count));
  g_inside_worker = false;
  for (auto& th : pool) {
    th.join();
  }
}

void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn) {
  parallel_chunks(count, [&fn](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      fn(i);
    }
  });
}

}  // namespace rankgauge
