#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace ctvol {

/// Worker count used by the bulk per-element passes. Results never depend on it:
/// every pass writes only to slots owned by its own element range.
void setThreadCount(std::size_t n);
std::size_t threadCount();

/// Calls body(begin, end) over contiguous chunks of [0, n).
template <typename Body>
void parallelForRange(std::size_t n, Body&& body)
{
  const std::size_t workers = std::min(threadCount(), std::max<std::size_t>(1, n / 1024));
  if (workers <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e)
      break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
}

template <typename Body>
void parallelFor(std::size_t n, Body&& body)
{
  parallelForRange(n, [&body](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      body(i);
  });
}

} // namespace ctvol
