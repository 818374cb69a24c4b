#include "acca/kernels.hpp"

#include <atomic>
#include <vector>

namespace acca::kernels {

#if ACCA_BUILD_AVX2
const Backend& avx2_backend();
#endif

namespace {

std::vector<const Backend*> build_backend_list() {
  std::vector<const Backend*> list{&scalar_backend()};
#if ACCA_BUILD_AVX2
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    list.push_back(&avx2_backend());
  }
#endif
  return list;
}

const std::vector<const Backend*>& backend_list() {
  static const std::vector<const Backend*> list = build_backend_list();
  return list;
}

const Backend* pick_best() { return backend_list().back(); }

std::atomic<const Backend*>& active_slot() {
  static std::atomic<const Backend*> slot{pick_best()};
  return slot;
}

}  // namespace

std::span<const Backend* const> backends() {
  const auto& list = backend_list();
  return {list.data(), list.size()};
}

const Backend& active() { return *active_slot().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  if (name == "auto") {
    active_slot().store(pick_best(), std::memory_order_relaxed);
    return true;
  }
  for (const Backend* b : backend_list()) {
    if (name == b->name) {
      active_slot().store(b, std::memory_order_relaxed);
      return true;
    }
  }
  return false;
}

}  // namespace acca::kernels
