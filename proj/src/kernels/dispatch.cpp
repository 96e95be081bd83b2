#include <atomic>

#include "kernels/tables.hpp"
#include "optround/errors.hpp"
#include "optround/kernels.hpp"

namespace optround::kernels {

namespace {

Backend detect() noexcept {
#if defined(OPTROUND_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& selected() noexcept {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool backend_available(Backend backend) noexcept {
  if (backend == Backend::scalar) return true;
#if defined(OPTROUND_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (backend == Backend::avx2) return __builtin_cpu_supports("avx2");
#endif
  return false;
}

Backend active_backend() noexcept { return selected().load(std::memory_order_relaxed); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    fail(ErrorCode::InvalidArgument, "requested kernel backend is not available on this host");
  }
  selected().store(backend, std::memory_order_relaxed);
}

void reset_backend() noexcept { selected().store(detect(), std::memory_order_relaxed); }

const KernelTable& table(Backend backend) {
#if defined(OPTROUND_HAVE_AVX2)
  if (backend == Backend::avx2) return avx2_table();
#endif
  (void)backend;
  return scalar_table();
}

const KernelTable& active() { return table(active_backend()); }

void snap_integers(std::span<const double> in, double tol, std::span<double> out) {
  active().snap_integers(in.data(), in.size(), tol, out.data());
}

DecomposeSums split_floor_frac(std::span<const double> values, std::span<double> floors,
                               std::span<double> fracs) {
  return active().split_floor_frac(values.data(), values.size(), floors.data(), fracs.data());
}

double abs_err_pow_sum(std::span<const double> x, std::span<const double> m, double q) {
  return active().abs_err_pow_sum(x.data(), m.data(), x.size(), q);
}

double rel_err_pow_sum(std::span<const double> x, std::span<const double> m, double q) {
  return active().rel_err_pow_sum(x.data(), m.data(), x.size(), q);
}

}  // namespace optround::kernels
