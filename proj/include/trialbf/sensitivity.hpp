#pragma once

// Bayes factors over a (mu, tau) prior lattice: the sensitivity analysis
// behind the heatmap displays. Cells are independent pure evaluations, so
// the grid fills in parallel yet bit-identically for any thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

#include "trialbf/bayes_factor.hpp"
#include "trialbf/effect.hpp"
#include "trialbf/errors.hpp"
#include "trialbf/prior.hpp"

namespace trialbf {

struct GridSpec {
  double mu_min = 0.0;
  double mu_max = 1.0;
  double tau_min = 0.0;
  double tau_max = 1.0;
  std::size_t n_mu = 201;
  std::size_t n_tau = 201;
  Truncation truncation = Truncation::none;
  double clip_floor = 0.01;  // display clip for exported BF values

  void validate() const {
    if (!std::isfinite(mu_min) || !std::isfinite(mu_max) || mu_min >= mu_max) {
      throw config_error("grid: requires mu_min < mu_max");
    }
    if (!(tau_min >= 0.0) || !(tau_min <= tau_max) || !std::isfinite(tau_max)) {
      throw config_error("grid: requires 0 <= tau_min <= tau_max");
    }
    if (n_mu < 2 || n_tau < 2) {
      throw config_error("grid: requires at least 2 points per axis");
    }
    if (!(clip_floor > 0.0) || !std::isfinite(clip_floor)) {
      throw config_error("grid: clip_floor must be positive");
    }
  }
};

struct GridCell {
  double mu = 0.0;
  double tau = 0.0;
  double log_bf = 0.0;
};

/// Evaluated lattice. log_bf is row-major with n_tau rows and n_mu columns;
/// NaN marks absent cells (point priors infeasible under the truncation).
struct SensitivityGrid {
  GridSpec spec;
  std::vector<double> mu_axis;
  std::vector<double> tau_axis;
  std::vector<double> log_bf;
  GridCell max_cell;
  LogEffect effect;

  double at(std::size_t i_tau, std::size_t j_mu) const {
    return log_bf[i_tau * spec.n_mu + j_mu];
  }
  bool present(std::size_t i_tau, std::size_t j_mu) const { return !std::isnan(at(i_tau, j_mu)); }
};

/// n evenly spaced points with exact endpoints. Interior points use the
/// ratio k/(n-1), which doubles exactly in IEEE arithmetic, so refining
/// n -> 2n-1 reproduces every coarse point bit-for-bit.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> points(n);
  points.front() = lo;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    points[k] = lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(n - 1));
  }
  points.back() = hi;
  return points;
}

/// Argmax over present cells; ties break to the smallest tau, then the
/// smallest |mu|. Throws when every cell is absent.
inline GridCell grid_max(const SensitivityGrid& grid) {
  bool found = false;
  GridCell best;
  for (std::size_t i = 0; i < grid.tau_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.mu_axis.size(); ++j) {
      const double value = grid.at(i, j);
      if (std::isnan(value)) {
        continue;
      }
      const GridCell cell{grid.mu_axis[j], grid.tau_axis[i], value};
      const bool better =
          !found || value > best.log_bf ||
          (value == best.log_bf &&
           (cell.tau < best.tau ||
            (cell.tau == best.tau && std::abs(cell.mu) < std::abs(best.mu))));
      if (better) {
        best = cell;
        found = true;
      }
    }
  }
  if (!found) {
    throw config_error("grid: every cell is absent, nothing to maximize");
  }
  return best;
}

/// Fill the lattice. n_threads = 0 picks the hardware concurrency; any
/// thread count yields bit-identical results since cells are pure and
/// writes are disjoint.
inline SensitivityGrid grid_eval(const LogEffect& effect, const GridSpec& spec,
                                 unsigned n_threads = 0) {
  effect.validate();
  spec.validate();

  SensitivityGrid grid;
  grid.spec = spec;
  grid.effect = effect;
  grid.mu_axis = linspace(spec.mu_min, spec.mu_max, spec.n_mu);
  grid.tau_axis = linspace(spec.tau_min, spec.tau_max, spec.n_tau);
  grid.log_bf.assign(spec.n_tau * spec.n_mu, std::numeric_limits<double>::quiet_NaN());

  const auto eval_cell = [&](double mu, double tau) -> double {
    if (tau == 0.0) {
      if (!PriorSpec::point_mass_allowed(mu, spec.truncation)) {
        return std::numeric_limits<double>::quiet_NaN();
      }
      return bf_point(effect, mu).log_bf;
    }
    const PriorSpec prior{mu, tau, spec.truncation};
    return spec.truncation == Truncation::none ? bf_normal(effect, prior).log_bf
                                               : bf_trunc(effect, prior).log_bf;
  };
  const auto fill_rows = [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      const double tau = grid.tau_axis[i];
      for (std::size_t j = 0; j < spec.n_mu; ++j) {
        grid.log_bf[i * spec.n_mu + j] = eval_cell(grid.mu_axis[j], tau);
      }
    }
  };

  unsigned workers = n_threads != 0 ? n_threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(spec.n_tau)));
  if (workers == 1) {
    fill_rows(0, spec.n_tau);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (spec.n_tau + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = static_cast<std::size_t>(w) * chunk;
      const std::size_t end = std::min(begin + chunk, spec.n_tau);
      if (begin >= end) {
        break;
      }
      pool.emplace_back(fill_rows, begin, end);
    }
    for (auto& worker : pool) {
      worker.join();
    }
  }

  const bool any_present =
      std::any_of(grid.log_bf.begin(), grid.log_bf.end(), [](double v) { return !std::isnan(v); });
  if (!any_present) {
    throw config_error("grid: truncation leaves no evaluable cells");
  }
  grid.max_cell = grid_max(grid);
  return grid;
}

/// Display values: BF clipped from below at clip_floor; absent cells stay NaN.
inline std::vector<double> grid_clip(const SensitivityGrid& grid) {
  std::vector<double> clipped(grid.log_bf.size());
  for (std::size_t k = 0; k < grid.log_bf.size(); ++k) {
    const double value = grid.log_bf[k];
    clipped[k] = std::isnan(value) ? value : std::max(std::exp(value), grid.spec.clip_floor);
  }
  return clipped;
}

}  // namespace trialbf
