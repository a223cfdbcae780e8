#pragma once

#include <functional>
#include <stdexcept>

namespace bbm {

class depth_exceeded_error : public std::runtime_error {
 public:
  explicit depth_exceeded_error(const std::string& what)
      : std::runtime_error(what) {}
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_depth = 40;
};

// P(X > a) for X centered Gaussian with variance sigma^2.
double gaussian_tail(double a, double sigma);

// log P(X > a), stable far into the tail (uses the scaled complementary
// error function, so e^{beta t} * tail products can be formed in log space).
double log_gaussian_tail(double a, double sigma);

// (2 pi)^{-1/2} (sigma/a) e^{-a^2/(2 sigma^2)}; an upper bound on
// gaussian_tail for every a > 0. Throws std::domain_error for a <= 0.
double gaussian_tail_upper(double a, double sigma);

// exp(x^2) * erfc(x) without overflow for large x.
double erfcx(double x);

// Adaptive Simpson integral of f over [a, b] with absolute error target
// spec.abs_tol. Deterministic; throws depth_exceeded_error if the recursion
// reaches spec.max_depth without converging.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

struct MaxResult {
  double x_star;
  double f_star;
};

// Golden-section search for the maximum of a unimodal f on [a, b].
// |x_star - argmax| <= arg_tol; f_star = f(x_star).
MaxResult maximize_unimodal(const std::function<double(double)>& f, double a,
                            double b, double arg_tol = 1e-10);

}  // namespace bbm
