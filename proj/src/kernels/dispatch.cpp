#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "mnmt/kernels.hpp"

namespace mnmt::kernels {

#if defined(MNMT_WITH_AVX2)
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#if defined(MNMT_WITH_AVX2)
  return avx2_ops_impl();
#else
  return nullptr;
#endif
}

namespace {

struct Selection {
  const Ops* ops;
  Backend backend;
};

Selection g_selection = {nullptr, Backend::scalar};

Selection pick_default() {
  if (const char* env = std::getenv("MNMT_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return {&scalar_ops, Backend::scalar};
    if (std::strcmp(env, "avx2") == 0) {
      if (const Ops* ops = avx2_ops()) return {ops, Backend::avx2};
      throw std::runtime_error("MNMT_KERNELS=avx2 requested but AVX2 is unavailable");
    }
    throw std::runtime_error("unknown MNMT_KERNELS value (use scalar or avx2)");
  }
  if (const Ops* ops = avx2_ops()) return {ops, Backend::avx2};
  return {&scalar_ops, Backend::scalar};
}

Selection& selection() {
  if (g_selection.ops == nullptr) g_selection = pick_default();
  return g_selection;
}

}  // namespace

const Ops& active() { return *selection().ops; }

Backend active_backend() { return selection().backend; }

const char* backend_name() {
  switch (selection().backend) {
    case Backend::avx2: return "avx2";
    case Backend::scalar: default: return "scalar";
  }
}

void force_backend(Backend b) {
  if (b == Backend::scalar) {
    g_selection = {&scalar_ops, Backend::scalar};
    return;
  }
  if (const Ops* ops = avx2_ops()) {
    g_selection = {ops, Backend::avx2};
    return;
  }
  throw std::invalid_argument("AVX2 backend unavailable on this machine/build");
}

}  // namespace mnmt::kernels
