// AVX2+FMA variants. Functions carry target attributes instead of the file
// being compiled with -mavx2, so no AVX2 instantiation of a shared inline
// function can leak into code that runs on older CPUs.
#include "wcospec/kernels.hpp"

#if defined(WCOSPEC_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <algorithm>
#include <vector>

#define WCOSPEC_AVX2 __attribute__((target("avx2,fma")))

namespace wcospec::kernels::avx2 {

namespace {

WCOSPEC_AVX2 inline __m256d load2(const cd* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

WCOSPEC_AVX2 inline void store2(cd* p, __m256d v) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), v);
}

// [w0, w1] -> [w0, w0, w1, w1]
WCOSPEC_AVX2 inline __m256d dup_weights(const double* w) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0x50);
}

WCOSPEC_AVX2 inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d yre = _mm256_movedup_pd(y);
  const __m256d yim = _mm256_permute_pd(y, 0xF);
  const __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, yre, _mm256_mul_pd(xs, yim));
}

WCOSPEC_AVX2 inline double hsum_even(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[0] + t[2];
}

WCOSPEC_AVX2 inline double hsum_odd(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[1] + t[3];
}

WCOSPEC_AVX2 cd dot_raw(const cd* x, const cd* y, std::size_t n) {
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d yv = load2(y + i);
    acc1 = _mm256_fmadd_pd(xv, _mm256_movedup_pd(yv), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_permute_pd(xv, 0x5), _mm256_permute_pd(yv, 0xF), acc2);
  }
  double re = hsum_even(acc1) - hsum_even(acc2);
  double im = hsum_odd(acc1) + hsum_odd(acc2);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() - x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() + x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

WCOSPEC_AVX2 void cauchy_product(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  const std::size_t n = out.size();
  const std::size_t nb = b.size();
  if (nb == 0 || a.empty()) {
    std::fill(out.begin(), out.end(), cd{});
    return;
  }
  thread_local std::vector<cd> rev;
  rev.assign(b.rbegin(), b.rend());
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t jlo = k >= nb ? k - nb + 1 : 0;
    const std::size_t jhi = std::min(k + 1, a.size());
    if (jhi <= jlo) {
      out[k] = cd{};
      continue;
    }
    // b[k-j] == rev[nb-1-k+j]
    out[k] = dot_raw(a.data() + jlo, rev.data() + (nb - 1 - k + jlo), jhi - jlo);
  }
}

WCOSPEC_AVX2 void axpy(cd alpha, std::span<const cd> x, std::span<cd> y) {
  const std::size_t n = std::min(x.size(), y.size());
  const __m256d are = _mm256_set1_pd(alpha.real());
  const __m256d aim = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x.data() + i);
    const __m256d prod =
        _mm256_fmaddsub_pd(xv, are, _mm256_mul_pd(_mm256_permute_pd(xv, 0x5), aim));
    store2(y.data() + i, _mm256_add_pd(load2(y.data() + i), prod));
  }
  for (; i < n; ++i) {
    const double re = alpha.real() * x[i].real() - alpha.imag() * x[i].imag();
    const double im = alpha.real() * x[i].imag() + alpha.imag() * x[i].real();
    y[i] = {y[i].real() + re, y[i].imag() + im};
  }
}

WCOSPEC_AVX2 void pointwise_mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out) {
  const std::size_t n = std::min({a.size(), b.size(), out.size()});
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(out.data() + i, cmul(load2(a.data() + i), load2(b.data() + i)));
  for (; i < n; ++i) {
    const double re = a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    const double im = a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
    out[i] = {re, im};
  }
}

WCOSPEC_AVX2 double weighted_norm2(std::span<const cd> x, std::span<const double> w) {
  const std::size_t n = std::min(x.size(), w.size());
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x.data() + i);
    acc = _mm256_fmadd_pd(dup_weights(w.data() + i), _mm256_mul_pd(xv, xv), acc);
  }
  double s = hsum_even(acc) + hsum_odd(acc);
  for (; i < n; ++i) s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  return s;
}

WCOSPEC_AVX2 cd weighted_inner(std::span<const cd> x, std::span<const cd> y,
                               std::span<const double> w) {
  const std::size_t n = std::min({x.size(), y.size(), w.size()});
  const __m256d conj_mask = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_mul_pd(load2(x.data() + i), dup_weights(w.data() + i));
    const __m256d yv = _mm256_mul_pd(load2(y.data() + i), conj_mask);
    acc1 = _mm256_fmadd_pd(xv, _mm256_movedup_pd(yv), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_permute_pd(xv, 0x5), _mm256_permute_pd(yv, 0xF), acc2);
  }
  double re = hsum_even(acc1) - hsum_even(acc2);
  double im = hsum_odd(acc1) + hsum_odd(acc2);
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = -y[i].imag();
    re += w[i] * (xr * yr - xi * yi);
    im += w[i] * (xr * yi + xi * yr);
  }
  return {re, im};
}

WCOSPEC_AVX2 cd dot(std::span<const cd> x, std::span<const cd> y) {
  return dot_raw(x.data(), y.data(), std::min(x.size(), y.size()));
}

}  // namespace wcospec::kernels::avx2

#endif
