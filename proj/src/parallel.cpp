#include "ctvol/parallel.h"

#include <atomic>

namespace ctvol {

namespace {
std::atomic<std::size_t> gThreads{1};
}

void setThreadCount(std::size_t n) { gThreads = std::max<std::size_t>(1, n); }
std::size_t threadCount() { return gThreads; }

} // namespace ctvol
