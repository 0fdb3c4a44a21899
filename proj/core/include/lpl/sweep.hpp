#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lpl/theory.hpp"

namespace lpl {

enum class SweptParam { rho_plus, rho_minus };

const char* swept_param_name(SweptParam s);
SweptParam swept_param_from_string(const std::string& name);

/// Theorem three when K > 1; otherwise one for a rho_plus sweep, two for rho_minus.
Theorem infer_theorem(const TheoryParams& p, SweptParam swept);

struct SweepRow {
  double value = 0.0;
  bool feasible = false;
  double bias = 0.0;
  ErrorPair closed_form;
  std::optional<ErrorPair> monte_carlo;
  /// Larger of the two class standard errors of the MC estimate.
  double mc_se = 0.0;
  /// Reason the row is infeasible, empty otherwise.
  std::string note;
};

struct SweepTable {
  SweptParam swept = SweptParam::rho_plus;
  Theorem theorem = Theorem::one;
  std::vector<SweepRow> rows;

  std::size_t feasible_count() const;
  /// Column of a feasible-row quantity in grid order.
  std::vector<double> err_plus() const;
  std::vector<double> err_minus() const;
};

struct SweepOptions {
  std::optional<Theorem> theorem;
  bool with_mc = false;
  std::size_t mc_samples = 1000000;
  std::uint64_t seed = 0;
  std::size_t shards = 1;
};

/// Rows follow `grid` order. Infeasible points are kept and marked.
SweepTable sweep(const TheoryParams& base, SweptParam swept, const std::vector<double>& grid,
                 const SweepOptions& options = {});

/// n points lo, lo + h, ..., with h = (hi - lo) / n; hi itself is excluded.
std::vector<double> half_open_grid(double lo, double hi, std::size_t n);

/// Header: swept_param,value,err_plus_cf,err_minus_cf,total_cf,err_plus_mc,err_minus_mc,mc_se,feasible
void write_sweep_csv(std::ostream& os, const SweepTable& table);

enum class Trend { decreasing, increasing };

/// Exhaustive pairwise check: for every i < j, v[j] < v[i] + slack
/// (decreasing) or v[j] > v[i] - slack (increasing).
bool is_monotone(const std::vector<double>& values, Trend trend, double slack = 1e-12);

}  // namespace lpl
