#include "lpl/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "lpl/monte_carlo.hpp"
#include "lpl/rng.hpp"

namespace lpl {

const char* swept_param_name(SweptParam s) {
  return s == SweptParam::rho_plus ? "rho_plus" : "rho_minus";
}

SweptParam swept_param_from_string(const std::string& name) {
  if (name == "rho_plus") return SweptParam::rho_plus;
  if (name == "rho_minus") return SweptParam::rho_minus;
  throw std::invalid_argument("swept parameter must be rho_plus or rho_minus, got '" + name + "'");
}

Theorem infer_theorem(const TheoryParams& p, SweptParam swept) {
  if (p.k > 1.0) return Theorem::three;
  return swept == SweptParam::rho_plus ? Theorem::one : Theorem::two;
}

std::size_t SweepTable::feasible_count() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.feasible; }));
}

std::vector<double> SweepTable::err_plus() const {
  std::vector<double> out;
  for (const SweepRow& r : rows) {
    if (r.feasible) out.push_back(r.closed_form.err_plus);
  }
  return out;
}

std::vector<double> SweepTable::err_minus() const {
  std::vector<double> out;
  for (const SweepRow& r : rows) {
    if (r.feasible) out.push_back(r.closed_form.err_minus);
  }
  return out;
}

SweepTable sweep(const TheoryParams& base, SweptParam swept, const std::vector<double>& grid,
                 const SweepOptions& options) {
  base.validate();
  SweepTable table;
  table.swept = swept;
  table.theorem = options.theorem.value_or(infer_theorem(base, swept));
  const RngStream root(options.seed, 0);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow row;
    row.value = grid[i];
    TheoryParams p = base;
    (swept == SweptParam::rho_plus ? p.rho_plus : p.rho_minus) = grid[i];
    try {
      row.bias = optimal_bias(p, table.theorem);
      row.closed_form = closed_form_errors(p, table.theorem);
      row.feasible = true;
    } catch (const std::exception& e) {
      row.note = e.what();
    }
    if (row.feasible && options.with_mc) {
      const McErrorEstimate mc =
          mc_error_estimate(p, table.theorem, row.bias, options.mc_samples, root.derive(i), options.shards);
      row.monte_carlo = mc.natural;
      row.mc_se = std::max(mc.se_plus, mc.se_minus);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<double> half_open_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double h = n == 0 ? 0.0 : (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + static_cast<double>(i) * h;
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "swept_param,value,err_plus_cf,err_minus_cf,total_cf,err_plus_mc,err_minus_mc,mc_se,feasible\n";
  const char* name = swept_param_name(table.swept);
  for (const SweepRow& r : table.rows) {
    if (!r.feasible) {
      os << fmt::format("{},{:.12g},,,,,,,0\n", name, r.value);
      continue;
    }
    std::string mc = ",,";
    if (r.monte_carlo) {
      mc = fmt::format("{:.12g},{:.12g},{:.6g}", r.monte_carlo->err_plus, r.monte_carlo->err_minus, r.mc_se);
    }
    os << fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g},{},1\n", name, r.value, r.closed_form.err_plus,
                      r.closed_form.err_minus, r.closed_form.total, mc);
  }
}

bool is_monotone(const std::vector<double>& values, Trend trend, double slack) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const bool ok = trend == Trend::decreasing ? values[j] < values[i] + slack : values[j] > values[i] - slack;
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace lpl
