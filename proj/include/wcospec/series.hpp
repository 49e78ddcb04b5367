#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace wcospec {

using cd = std::complex<double>;

// Truncated power series c_0 + c_1 z + ... + c_N z^N on the unit disk.
// Binary operations on series of different orders zero-pad the shorter one
// (polynomial semantics) and return the larger order.
class TaylorSeries {
 public:
  TaylorSeries() : c_(1) {}
  explicit TaylorSeries(std::size_t order) : c_(order + 1) {}
  explicit TaylorSeries(std::vector<cd> coeffs);

  static TaylorSeries constant(cd value, std::size_t order);
  static TaylorSeries identity(std::size_t order);
  static TaylorSeries monomial(std::size_t k, std::size_t order, cd coeff = 1.0);

  std::size_t order() const { return c_.size() - 1; }
  const std::vector<cd>& coeffs() const { return c_; }
  std::vector<cd>& coeffs() { return c_; }
  cd operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cd{}; }
  cd& operator[](std::size_t k) { return c_[k]; }

  // Horner evaluation of the stored polynomial.
  cd evaluate(cd z) const;
  TaylorSeries resized(std::size_t order) const;
  double max_abs() const;
  // Index of the last nonzero coefficient (0 for the zero series).
  std::size_t degree() const;

 private:
  std::vector<cd> c_;
};

TaylorSeries add(const TaylorSeries& f, const TaylorSeries& g);
TaylorSeries sub(const TaylorSeries& f, const TaylorSeries& g);
TaylorSeries scale(const TaylorSeries& f, cd s);
TaylorSeries mul(const TaylorSeries& f, const TaylorSeries& g);
// f∘phi; requires |phi(0)| < 1 (DivergentComposition otherwise).
TaylorSeries compose(const TaylorSeries& f, const TaylorSeries& phi);
TaylorSeries exp_series(const TaylorSeries& f);
// Principal log at the constant term; LogAtZero if f(0) = 0.
TaylorSeries log_series(const TaylorSeries& f);
TaylorSeries reciprocal(const TaylorSeries& f);
TaylorSeries divide(const TaylorSeries& f, const TaylorSeries& g);
// f^s = f(0)^s exp(s log(f/f(0))), principal f(0)^s.
TaylorSeries power(const TaylorSeries& f, cd s);
TaylorSeries integer_power(const TaylorSeries& f, long n);
// (c - z)^s = c^s (1 - z/c)^s with principal branches.
TaylorSeries fractional_power(cd c, cd s, std::size_t order);
// Term-by-term derivative; order N-1 (order 0 for constants).
TaylorSeries derivative(const TaylorSeries& f);

inline TaylorSeries operator+(const TaylorSeries& f, const TaylorSeries& g) { return add(f, g); }
inline TaylorSeries operator-(const TaylorSeries& f, const TaylorSeries& g) { return sub(f, g); }
inline TaylorSeries operator*(const TaylorSeries& f, const TaylorSeries& g) { return mul(f, g); }
inline TaylorSeries operator*(cd s, const TaylorSeries& f) { return scale(f, s); }

// Coefficient magnitude beyond which results are treated as overflowed.
inline constexpr double kIllConditionedThreshold = 1e12;

// Throws IllConditioned if some coefficient is non-finite or exceeds the
// threshold.
void check_conditioning(const TaylorSeries& f, std::string_view context,
                        double threshold = kIllConditionedThreshold);

}  // namespace wcospec
