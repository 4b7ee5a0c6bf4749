#include "ecmaze/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace ecmaze::kernels {

#if defined(__x86_64__) || defined(__i386__)
const Ops& avx2_ops_impl();
#endif

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Ops* ops_by_name(std::string_view name) {
  if (name == "scalar") return &scalar_ops();
#if defined(__x86_64__) || defined(__i386__)
  if (name == "avx2" && avx2_available()) return &avx2_ops_impl();
#endif
  return nullptr;
}

std::vector<std::string> available_backends() {
  std::vector<std::string> out = {"scalar"};
  if (avx2_available()) out.push_back("avx2");
  return out;
}

namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* resolve_default() {
  if (const char* env = std::getenv("ECMAZE_KERNELS")) {
    if (const Ops* ops = ops_by_name(env)) return ops;
    // Unknown or unavailable request falls through to auto selection.
  }
  if (const Ops* ops = ops_by_name("avx2")) return ops;
  return &scalar_ops();
}

}  // namespace

const Ops& active() {
  const Ops* ops = g_active.load(std::memory_order_acquire);
  if (!ops) {
    ops = resolve_default();
    g_active.store(ops, std::memory_order_release);
  }
  return *ops;
}

bool set_active(std::string_view name) {
  const Ops* ops = ops_by_name(name);
  if (!ops) return false;
  g_active.store(ops, std::memory_order_release);
  return true;
}

}  // namespace ecmaze::kernels
