#include "bbm/numerics.hpp"

#include <cmath>

namespace bbm {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double gaussian_tail(double a, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("gaussian_tail: sigma must be > 0");
  return 0.5 * std::erfc(a / sigma * kInvSqrt2);
}

double erfcx(double x) {
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  // Asymptotic series; for x >= 25 the truncation error is below 1e-13.
  const double z = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2 * k - 1) * z;
    sum += term;
  }
  return sum / (x * std::sqrt(M_PI));
}

double log_gaussian_tail(double a, double sigma) {
  if (!(sigma > 0.0))
    throw std::domain_error("log_gaussian_tail: sigma must be > 0");
  const double z = a / sigma * kInvSqrt2;
  if (z < 0.0) return std::log(gaussian_tail(a, sigma));
  return std::log(0.5 * erfcx(z)) - z * z;
}

double gaussian_tail_upper(double a, double sigma) {
  if (!(a > 0.0))
    throw std::domain_error("gaussian_tail_upper: requires a > 0");
  if (!(sigma > 0.0))
    throw std::domain_error("gaussian_tail_upper: sigma must be > 0");
  const double r = a / sigma;
  return kInvSqrt2Pi / r * std::exp(-0.5 * r * r);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, int depth, int max_depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth)
    throw depth_exceeded_error("integrate: max recursion depth reached");
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  if (a > b) throw std::domain_error("integrate: requires a <= b");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adapt(f, a, fa, b, fb, m, fm, whole, spec.abs_tol, 0, spec.max_depth);
}

MaxResult maximize_unimodal(const std::function<double(double)>& f, double a,
                            double b, double arg_tol) {
  if (a > b) throw std::domain_error("maximize_unimodal: requires a <= b");
  const double invphi = 0.6180339887498948482;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > arg_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace bbm
