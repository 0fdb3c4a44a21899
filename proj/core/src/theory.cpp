#include "lpl/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lpl/errors.hpp"
#include "lpl/math.hpp"

namespace lpl {
namespace {

double scale(const TheoryParams& p) { return std::sqrt(static_cast<double>(p.d)) * p.sigma; }

double thm3_radicand(const TheoryParams& p) {
  const double x = p.epsilon * p.rho_minus + p.epsilon * p.rho_plus - 2.0 * p.d * p.eta;
  return x * x + 2.0 * p.d * (p.k * p.k - 1.0) * p.sigma * p.sigma * std::log(p.k / p.gamma);
}

void require_unit_k(const TheoryParams& p, const char* what) {
  if (p.k != 1.0) throw std::invalid_argument(std::string(what) + ": requires equal class variances (K = 1)");
}

void require_bound_below_eta(double rho, const TheoryParams& p, const char* name) {
  if (rho < 0.0) throw std::invalid_argument(std::string(name) + " must be >= 0");
  if (!(rho * p.epsilon < p.eta)) {
    throw InfeasibleParameterError(std::string(name) + " * epsilon must be below eta");
  }
}

}  // namespace

void TheoryParams::validate() const {
  if (d < 1) throw std::invalid_argument("theory: d must be a positive integer");
  for (double v : {eta, sigma, gamma, k, epsilon, rho_plus, rho_minus}) {
    if (!std::isfinite(v)) throw std::invalid_argument("theory: parameters must be finite");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("theory: eta must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("theory: sigma must be > 0");
  if (!(gamma >= 1.0)) throw std::invalid_argument("theory: gamma must be >= 1");
  if (!(k >= 1.0)) throw std::invalid_argument("theory: K must be >= 1");
  if (epsilon < 0.0) throw std::invalid_argument("theory: epsilon must be >= 0");
  if (rho_plus < 0.0 || rho_minus < 0.0) throw std::invalid_argument("theory: rho must be >= 0");
}

std::string TheoryParams::describe() const {
  std::ostringstream os;
  os << "d=" << d << " eta=" << eta << " sigma=" << sigma << " gamma=" << gamma << " K=" << k
     << " epsilon=" << epsilon << " rho_plus=" << rho_plus << " rho_minus=" << rho_minus;
  return os.str();
}

Theorem theorem_from_int(int n) {
  switch (n) {
    case 1: return Theorem::one;
    case 2: return Theorem::two;
    case 3: return Theorem::three;
    default: throw std::invalid_argument("theorem must be 1, 2 or 3");
  }
}

ErrorPair make_error_pair(double err_minus, double err_plus, double gamma) {
  ErrorPair e;
  e.err_minus = err_minus;
  e.err_plus = err_plus;
  e.total = (err_plus + gamma * err_minus) / (1.0 + gamma);
  e.total_mean = 0.5 * (err_plus + err_minus);
  return e;
}

void check_theorem_preconditions(const TheoryParams& p, Theorem theorem) {
  p.validate();
  switch (theorem) {
    case Theorem::one: {
      require_unit_k(p, "theorem 1");
      require_bound_below_eta(p.rho_plus, p, "rho_plus");
      if (p.epsilon - 2.0 * p.d * p.eta + p.epsilon * p.rho_plus == 0.0) {
        throw SingularParameterError("theorem 1: eps - 2 d eta + eps rho_plus is zero");
      }
      break;
    }
    case Theorem::two: {
      require_unit_k(p, "theorem 2");
      require_bound_below_eta(p.rho_minus, p, "rho_minus");
      if (p.epsilon - 2.0 * p.d * p.eta - p.epsilon * p.rho_minus == 0.0) {
        throw SingularParameterError("theorem 2: eps - 2 d eta - eps rho_minus is zero");
      }
      break;
    }
    case Theorem::three: {
      if (!(p.k > 1.0)) throw SingularParameterError("theorem 3: requires K > 1");
      require_bound_below_eta(p.rho_plus, p, "rho_plus");
      require_bound_below_eta(p.rho_minus, p, "rho_minus");
      if (thm3_radicand(p) < 0.0) throw InfeasibleParameterError("theorem 3: B^2 + q(K, gamma) is negative");
      break;
    }
  }
}

bool is_feasible(const TheoryParams& p, Theorem theorem) {
  try {
    check_theorem_preconditions(p, theorem);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

double optimal_bias_thm1(const TheoryParams& p) {
  check_theorem_preconditions(p, Theorem::one);
  const double denom = p.epsilon - 2.0 * p.d * p.eta + p.epsilon * p.rho_plus;
  return 0.5 * p.epsilon * (p.rho_plus - 1.0) + p.d * p.sigma * p.sigma * std::log(p.gamma) / denom;
}

double optimal_bias_thm2(const TheoryParams& p) {
  check_theorem_preconditions(p, Theorem::two);
  const double a = (p.epsilon - 2.0 * p.d * p.eta - p.epsilon * p.rho_minus) / scale(p);
  return scale(p) * std::log(p.gamma) / a + 0.5 * p.epsilon * (1.0 + p.rho_minus);
}

double optimal_bias_thm3(const TheoryParams& p) {
  check_theorem_preconditions(p, Theorem::three);
  const double k2 = p.k * p.k;
  return (p.epsilon * (p.rho_minus + k2 * p.rho_plus) - p.d * p.eta * (k2 + 1.0) +
          p.k * std::sqrt(thm3_radicand(p))) /
         (k2 - 1.0);
}

double optimal_bias(const TheoryParams& p, Theorem theorem) {
  switch (theorem) {
    case Theorem::one: return optimal_bias_thm1(p);
    case Theorem::two: return optimal_bias_thm2(p);
    case Theorem::three: return optimal_bias_thm3(p);
  }
  throw std::invalid_argument("unknown theorem");
}

ErrorPair errors_thm1(const TheoryParams& p) {
  check_theorem_preconditions(p, Theorem::one);
  const double s = scale(p);
  const double a = (p.epsilon - 2.0 * p.d * p.eta + p.epsilon * p.rho_plus) / s;
  const double lg = std::log(p.gamma);
  return make_error_pair(std_normal_cdf(a / 2.0 + lg / a - p.epsilon / s),
                         std_normal_cdf(a / 2.0 - lg / a - p.epsilon * p.rho_plus / s), p.gamma);
}

ErrorPair errors_thm2(const TheoryParams& p) {
  check_theorem_preconditions(p, Theorem::two);
  const double s = scale(p);
  const double a = (p.epsilon - 2.0 * p.d * p.eta - p.epsilon * p.rho_minus) / s;
  const double lg = std::log(p.gamma);
  return make_error_pair(std_normal_cdf(a / 2.0 + lg / a + p.epsilon * p.rho_minus / s),
                         std_normal_cdf(a / 2.0 - lg / a - p.epsilon / s), p.gamma);
}

ErrorPair errors_thm3(const TheoryParams& p) {
  check_theorem_preconditions(p, Theorem::three);
  const double s = scale(p);
  const double k2m1 = p.k * p.k - 1.0;
  const double b = (p.epsilon * p.rho_plus + p.epsilon * p.rho_minus - 2.0 * p.d * p.eta) / (s * k2m1);
  const double q = 2.0 * std::log(p.k / p.gamma) / k2m1;
  const double root = std::sqrt(std::max(0.0, b * b + q));
  return make_error_pair(std_normal_cdf(p.k * b + root - p.epsilon * p.rho_minus / (p.k * s)),
                         std_normal_cdf(-p.k * root - b - p.epsilon * p.rho_plus / s), p.gamma);
}

ErrorPair closed_form_errors(const TheoryParams& p, Theorem theorem) {
  switch (theorem) {
    case Theorem::one: return errors_thm1(p);
    case Theorem::two: return errors_thm2(p);
    case Theorem::three: return errors_thm3(p);
  }
  throw std::invalid_argument("unknown theorem");
}

ErrorPair natural_errors(const TheoryParams& p, double bias) {
  p.validate();
  const double s = scale(p);
  const double dn = p.d * p.eta;
  return make_error_pair(std_normal_cdf((bias - dn) / (p.k * s)), std_normal_cdf(-(dn + bias) / s), p.gamma);
}

ClassShifts perturbation_shifts(const TheoryParams& p, Theorem theorem) {
  // First type pushes the logit towards the wrong side (-y * bound),
  // second type away from it (+y * bound).
  switch (theorem) {
    case Theorem::one: return {-p.rho_plus * p.epsilon, p.epsilon};
    case Theorem::two: return {-p.epsilon, -p.rho_minus * p.epsilon};
    case Theorem::three: return {-p.rho_plus * p.epsilon, p.rho_minus * p.epsilon};
  }
  throw std::invalid_argument("unknown theorem");
}

double perturbed_objective(const TheoryParams& p, Theorem theorem, double bias) {
  p.validate();
  const ClassShifts shift = perturbation_shifts(p, theorem);
  const double s = scale(p);
  const double dn = p.d * p.eta;
  const double err_minus = std_normal_cdf((bias + shift.minus - dn) / (p.k * s));
  const double err_plus = std_normal_cdf(-(dn + bias + shift.plus) / s);
  return p.gamma * err_minus + err_plus;
}

double thm3_bias_slope(const TheoryParams& p, bool wrt_rho_plus) {
  check_theorem_preconditions(p, Theorem::three);
  const double k2 = p.k * p.k;
  const double x = p.epsilon * p.rho_minus + p.epsilon * p.rho_plus - 2.0 * p.d * p.eta;
  const double root = std::sqrt(thm3_radicand(p));
  if (root == 0.0) throw SingularParameterError("theorem 3: zero radicand, slope undefined");
  const double lead = wrt_rho_plus ? p.epsilon * k2 : p.epsilon;
  return (lead + p.k * x * p.epsilon / root) / (k2 - 1.0);
}

GridSearchResult grid_search_minimum(const std::function<double(double)>& f, double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw std::invalid_argument("grid_search_minimum: bad grid");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = f(lo + static_cast<double>(i) * step);

  GridSearchResult best;
  bool found = false;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (values[i] <= values[i - 1] && values[i] <= values[i + 1] && (!found || values[i] < best.value)) {
      best = {lo + static_cast<double>(i) * step, values[i], true};
      found = true;
    }
  }
  if (!found) {
    const auto it = std::min_element(values.begin(), values.end());
    const auto i = static_cast<std::size_t>(it - values.begin());
    best = {lo + static_cast<double>(i) * step, *it, false};
  }
  return best;
}

GridSearchResult refined_grid_search(const std::function<double(double)>& f, double lo, double hi, double step,
                                     double fine_step) {
  const GridSearchResult coarse = grid_search_minimum(f, lo, hi, step);
  const double flo = std::max(lo, coarse.argmin - step);
  const double fhi = std::min(hi, coarse.argmin + step);
  GridSearchResult fine = grid_search_minimum(f, flo, fhi, fine_step);
  fine.interior = coarse.interior;
  return fine;
}

CorollaryConditions corollary_conditions(const TheoryParams& p) {
  CorollaryConditions c;
  const double d = static_cast<double>(p.d);
  const double s2 = p.sigma * p.sigma;
  const double t1 = (2.0 * d - 1.0) * p.eta - p.epsilon;
  c.cor1_gamma_threshold = std::exp(t1 * t1 / (2.0 * d * s2));
  c.cor1_applies = p.gamma < c.cor1_gamma_threshold;
  c.cor2_applies = p.gamma > 1.0;
  const double k2 = p.k * p.k;
  const double t3 = 2.0 * d * p.eta - p.epsilon;
  c.cor3_window_low = p.k * std::exp(t3 * t3 / (2.0 * d * k2 * s2));
  c.cor3_window_high = p.k > 1.0 ? p.k * std::exp(2.0 * d * p.eta * p.eta / ((k2 - 1.0) * s2))
                                 : std::numeric_limits<double>::infinity();
  c.cor3_class_imbalance_window = p.gamma > c.cor3_window_low && p.gamma < c.cor3_window_high;
  c.cor3_variance_dominant = p.k > p.gamma;
  return c;
}

}  // namespace lpl
