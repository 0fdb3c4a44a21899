#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace lpl {

/// Binary Gaussian model: x | +1 ~ N(theta, sigma^2 I), x | -1 ~ N(-theta,
/// (K sigma)^2 I) with theta = [eta, ..., eta] in d dimensions and class
/// priors P+ : P- = 1 : gamma. Perturbation bounds are rho_plus * epsilon for
/// class +1 and rho_minus * epsilon for class -1. The classifier is
/// u = sum_i x_i + b (weights fixed to all ones).
struct TheoryParams {
  int d = 2;
  double eta = 1.0;
  double sigma = 1.0;
  double gamma = 1.0;
  double k = 1.0;
  double epsilon = 0.0;
  double rho_plus = 1.0;
  double rho_minus = 1.0;

  /// Domain checks shared by every theorem (positivity, finiteness).
  void validate() const;
  std::string describe() const;
};

/// Which closed form applies.
///  one:   first-type perturbation on both classes, bounds (rho+ eps, eps), K = 1.
///  two:   first type on +1 with bound eps, second type on -1 with rho- eps, K = 1.
///  three: first type on both classes, bounds (rho+ eps, rho- eps), K > 1.
enum class Theorem { one = 1, two = 2, three = 3 };

Theorem theorem_from_int(int n);

/// Class-conditional natural errors and their prior-weighted combination.
struct ErrorPair {
  double err_minus = 0.0;
  double err_plus = 0.0;
  /// (err_plus + gamma * err_minus) / (1 + gamma).
  double total = 0.0;
  /// (err_plus + err_minus) / 2.
  double total_mean = 0.0;
};

ErrorPair make_error_pair(double err_minus, double err_plus, double gamma);

/// Throws InfeasibleParameterError / SingularParameterError /
/// std::invalid_argument when `p` lies outside the theorem's preconditions.
void check_theorem_preconditions(const TheoryParams& p, Theorem theorem);
bool is_feasible(const TheoryParams& p, Theorem theorem);

// Optimal biases: the stationary point of the perturbed objective in b.
double optimal_bias_thm1(const TheoryParams& p);
double optimal_bias_thm2(const TheoryParams& p);
double optimal_bias_thm3(const TheoryParams& p);
double optimal_bias(const TheoryParams& p, Theorem theorem);

// Closed-form natural errors at the optimal bias.
ErrorPair errors_thm1(const TheoryParams& p);
ErrorPair errors_thm2(const TheoryParams& p);
ErrorPair errors_thm3(const TheoryParams& p);
ErrorPair closed_form_errors(const TheoryParams& p, Theorem theorem);

/// Natural (unperturbed) class errors of sign(sum x + b) at an arbitrary b.
ErrorPair natural_errors(const TheoryParams& p, double bias);

/// Logit shifts the worst/best-case class perturbation applies under the
/// theorem: the classifier output for class y becomes u + shift_y.
struct ClassShifts {
  double plus = 0.0;
  double minus = 0.0;
};
ClassShifts perturbation_shifts(const TheoryParams& p, Theorem theorem);

/// gamma * Pr(err | -1, perturbed) + Pr(err | +1, perturbed), the
/// unnormalized perturbed risk minimized over b.
double perturbed_objective(const TheoryParams& p, Theorem theorem, double bias);

/// d b* / d rho for theorem three, rho being rho_plus or rho_minus. Its sign
/// decides the error directions along a sweep: a rising b* lowers err_plus
/// and raises err_minus.
double thm3_bias_slope(const TheoryParams& p, bool wrt_rho_plus);

struct GridSearchResult {
  double argmin = 0.0;
  double value = 0.0;
  /// False when no interior local minimum exists and a grid end was returned.
  bool interior = false;
};

/// Evaluates f on lo, lo + step, ..., hi and returns the lowest interior local
/// minimum; falls back to the global grid minimum if there is none.
GridSearchResult grid_search_minimum(const std::function<double(double)>& f, double lo, double hi, double step);

/// Coarse grid at `step`, then a second pass at `fine_step` over one coarse
/// cell on either side of the coarse minimum.
GridSearchResult refined_grid_search(const std::function<double(double)>& f, double lo, double hi, double step,
                                     double fine_step);

/// The inequalities of the three corollaries, evaluated exactly as stated.
struct CorollaryConditions {
  bool cor1_applies = false;
  bool cor2_applies = false;
  bool cor3_class_imbalance_window = false;
  bool cor3_variance_dominant = false;
  /// exp(((2d-1) eta - eps)^2 / (2 d sigma^2)).
  double cor1_gamma_threshold = 0.0;
  /// K exp((2 d eta - eps)^2 / (2 d K^2 sigma^2)) and K exp(2 d eta^2 / ((K^2-1) sigma^2)).
  double cor3_window_low = 0.0;
  double cor3_window_high = 0.0;
};

CorollaryConditions corollary_conditions(const TheoryParams& p);

}  // namespace lpl
