#include "wcospec/orbit_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wcospec/error.hpp"
#include "wcospec/kernels.hpp"
#include "wcospec/parallel.hpp"
#include "wcospec/quadrature.hpp"

namespace wcospec {

namespace {

constexpr double kPi = std::numbers::pi;

cd reduce_imag(cd v) { return {v.real(), std::remainder(v.imag(), 2.0 * kPi)}; }

}  // namespace

OrbitGrid::OrbitGrid(const Automorphism& psi, const SpaceSpec& space, const OrbitGridOptions& opt)
    : psi_(psi), space_(space) {
  if (space.p != 2.0) throw Error(ErrorKind::UnsupportedExponent, "orbit grid norms need p = 2");
  if (opt.steps_per_shift < 1 || opt.core_left <= 0 || opt.core_right <= 0)
    throw Error(ErrorKind::InvalidArgument, "invalid orbit grid options");
  const cd a = psi.a(), b = psi.b();
  const double delta = psi.shift();
  m_ = static_cast<std::size_t>(opt.steps_per_shift);
  const double h = delta / static_cast<double>(m_);

  const std::size_t n_left = static_cast<std::size_t>(std::ceil(opt.core_left / h));
  const std::size_t n_right = static_cast<std::size_t>(std::ceil(opt.core_right / h));
  const std::size_t pad_left = m_ * static_cast<std::size_t>(std::max(0, opt.extra_shifts_left));
  const std::size_t pad_right = m_ * static_cast<std::size_t>(std::max(0, opt.extra_shifts_right));
  const std::size_t cols = pad_left + n_left + n_right + 1 + pad_right;
  core_lo_ = pad_left;
  core_hi_ = pad_left + n_left + n_right + 1;
  x_.resize(cols);
  for (std::size_t c = 0; c < cols; ++c)
    x_[c] = (static_cast<double>(c) - static_cast<double>(pad_left + n_left)) * h;

  // 1 - |z|^2 = 2 e^x |a conj(b) - 1| sin(y - y_lo) / |1 - e^W|^2
  const cd c_ab = a * std::conj(b) - 1.0;
  const double phase = std::arg(c_ab);
  const double y0 = std::arg(b / a);
  double y_lo = -phase - kPi / 2;
  y_lo += 2.0 * kPi * std::floor((y0 - y_lo) / (2.0 * kPi));
  y_lo_ = y_lo;

  std::vector<double> line_logw;
  if (space.is_hardy()) {
    y_ = {y_lo, y_lo + kPi};
    line_logw = {0.0, 0.0};
  } else {
    const double s = space.sigma;
    const GaussRule g = gauss_jacobi(opt.bergman_lines, s, s);
    for (int j = 0; j < opt.bergman_lines; ++j) {
      const double t = g.nodes[j];
      y_.push_back(y_lo + 0.5 * kPi * (1.0 + t));
      line_logw.push_back(std::log(0.5 * kPi * g.weights[j]) +
                          s * (std::log(std::cos(0.5 * kPi * t)) - std::log1p(-t * t)));
    }
  }

  const std::size_t total = y_.size() * cols;
  z_.resize(total);
  log_a_.resize(total);
  log_b_.resize(total);
  log_w_.assign(total, -std::numeric_limits<double>::infinity());
  w_.assign(total, 0.0);

  const cd log_a = std::log(a), log_b = std::log(b);
  const cd log_1_ba = std::log(1.0 - b / a);
  const cd log_ab_b = std::log((a - b) / b);
  const double log_ba = std::log(std::abs(b - a));
  const double log_cab = std::log(std::abs(c_ab));
  const double log_h = std::log(h);

  parallel_for(total, [&](std::size_t i) {
    const std::size_t line = i / cols, col = i % cols;
    const cd W(x_[col], y_[line]);
    cd z, l1e;  // l1e = log(1 - e^W) up to 2 pi i
    double log_abs_1e;
    if (W.real() <= 0.0) {
      const cd E = std::exp(W);
      z = (b - a * E) / (1.0 - E);
      l1e = std::log(1.0 - E);
      log_abs_1e = l1e.real();
    } else {
      const cd Einv = std::exp(-W);
      z = (b * Einv - a) / (Einv - 1.0);
      l1e = W + std::log(Einv - 1.0);
      log_abs_1e = l1e.real();
    }
    z_[i] = z;
    log_a_[i] = log_a + reduce_imag(log_1_ba - l1e);
    log_b_[i] = log_b + reduce_imag(W + log_ab_b - l1e);
    if (col >= core_lo_ && col < core_hi_) {
      const double x = W.real();
      const double log_jac = log_ba + x - 2.0 * log_abs_1e;  // log |dz/dW|
      double lw;
      if (space.is_hardy()) {
        lw = log_h - std::log(2.0 * kPi) + log_jac;
      } else {
        const double s = space.sigma;
        lw = log_h + line_logw[line] + s * (std::log(2.0) + x + log_cab - 2.0 * log_abs_1e) + 2.0 * log_jac;
      }
      log_w_[i] = lw;
      w_[i] = std::exp(lw);
    }
  });
}

GridFunction OrbitGrid::blank(std::size_t lo, std::size_t hi) const {
  GridFunction f;
  f.values.assign(size(), cd{});
  f.lo = lo;
  f.hi = std::max(lo, hi);
  return f;
}

GridFunction OrbitGrid::sample(const WeightExpr& e) const {
  GridFunction f = blank(0, columns());
  parallel_for(size(), [&](std::size_t i) { f.values[i] = e.evaluate(z_[i]); });
  return f;
}

GridFunction OrbitGrid::sample(const TaylorSeries& poly) const {
  GridFunction f = blank(0, columns());
  parallel_for(size(), [&](std::size_t i) { f.values[i] = poly.evaluate(z_[i]); });
  return f;
}

GridFunction OrbitGrid::sample(const FactoredFunction& f) const {
  return multiply(boundary_power(f.exp_a, f.exp_b), sample(f.poly));
}

WeightExpr FactoredFunction::to_expr(const Automorphism& psi) const {
  const WeightExpr z = WeightExpr::variable();
  WeightExpr p = WeightExpr::constant(0.0);
  for (std::size_t k = poly.degree() + 1; k-- > 0;) p = p * z + WeightExpr::constant(poly[k]);
  const auto atom = [&](cd c, cd s) {
    return s == cd{} ? WeightExpr::constant(1.0) : WeightExpr::pow(WeightExpr::constant(c) - z, s);
  };
  return atom(psi.a(), exp_a) * atom(psi.b(), exp_b) * p;
}

TaylorSeries FactoredFunction::to_series(const Automorphism& psi, std::size_t order) const {
  TaylorSeries s = poly.resized(order);
  if (exp_a != cd{}) s = mul(s, fractional_power(psi.a(), exp_a, order));
  if (exp_b != cd{}) s = mul(s, fractional_power(psi.b(), exp_b, order));
  return s;
}

GridFunction OrbitGrid::boundary_power(cd ea, cd eb) const {
  GridFunction f = blank(0, columns());
  parallel_for(size(), [&](std::size_t i) { f.values[i] = std::exp(ea * log_a_[i] + eb * log_b_[i]); });
  return f;
}

GridFunction OrbitGrid::strip_exp(cd w) const {
  GridFunction f = blank(0, columns());
  parallel_for(size(), [&](std::size_t i) { f.values[i] = std::exp(w * strip_coordinate(i)); });
  return f;
}

GridFunction OrbitGrid::constant(cd c) const {
  GridFunction f = blank(0, columns());
  std::fill(f.values.begin(), f.values.end(), c);
  return f;
}

GridFunction OrbitGrid::multiply(const GridFunction& f, const GridFunction& g) const {
  GridFunction r = blank(std::max(f.lo, g.lo), std::min(f.hi, g.hi));
  kernels::pointwise_mul(f.values, g.values, r.values);
  return r;
}

GridFunction OrbitGrid::add(const GridFunction& f, const GridFunction& g) const { return axpy(1.0, g, f); }

GridFunction OrbitGrid::scale(const GridFunction& f, cd s) const {
  GridFunction r = blank(f.lo, f.hi);
  kernels::axpy(s, f.values, r.values);
  return r;
}

GridFunction OrbitGrid::axpy(cd s, const GridFunction& x, const GridFunction& y) const {
  GridFunction r = y;
  r.lo = std::max(x.lo, y.lo);
  r.hi = std::max(r.lo, std::min(x.hi, y.hi));
  kernels::axpy(s, x.values, r.values);
  return r;
}

GridFunction OrbitGrid::forward(const GridFunction& u, const GridFunction& f) const {
  const std::size_t cols = columns();
  const std::size_t hi = std::min(u.hi, f.hi >= m_ ? f.hi - m_ : 0);
  GridFunction r = blank(std::max(u.lo, f.lo >= m_ ? f.lo - m_ : 0), hi);
  for (std::size_t line = 0; line < lines(); ++line) {
    const std::size_t base = line * cols;
    for (std::size_t c = r.lo; c < r.hi; ++c) r.values[base + c] = u.values[base + c] * f.values[base + c + m_];
  }
  return r;
}

GridFunction OrbitGrid::backward(const GridFunction& u, const GridFunction& f) const {
  const std::size_t cols = columns();
  const std::size_t lo = std::max(u.lo, f.lo) + m_;
  GridFunction r = blank(lo, std::min(cols, std::min(u.hi, f.hi) + m_));
  for (std::size_t line = 0; line < lines(); ++line) {
    const std::size_t base = line * cols;
    for (std::size_t c = r.lo; c < r.hi; ++c) r.values[base + c] = f.values[base + c - m_] / u.values[base + c - m_];
  }
  return r;
}

void OrbitGrid::require_core(const GridFunction& f) const {
  if (!covers_core(f))
    throw Error(ErrorKind::InvalidArgument, "grid function does not cover the quadrature window; add padding shifts");
}

double OrbitGrid::norm(const GridFunction& f) const {
  require_core(f);
  const std::size_t cols = columns(), n = core_hi_ - core_lo_;
  double s = 0.0;
  for (std::size_t line = 0; line < lines(); ++line) {
    const std::size_t off = line * cols + core_lo_;
    s += kernels::weighted_norm2(std::span<const cd>(f.values).subspan(off, n),
                                 std::span<const double>(w_).subspan(off, n));
  }
  return std::sqrt(s);
}

cd OrbitGrid::inner(const GridFunction& f, const GridFunction& g) const {
  require_core(f);
  require_core(g);
  const std::size_t cols = columns(), n = core_hi_ - core_lo_;
  cd s = 0.0;
  for (std::size_t line = 0; line < lines(); ++line) {
    const std::size_t off = line * cols + core_lo_;
    s += kernels::weighted_inner(std::span<const cd>(f.values).subspan(off, n),
                                 std::span<const cd>(g.values).subspan(off, n),
                                 std::span<const double>(w_).subspan(off, n));
  }
  return s;
}

}  // namespace wcospec
