#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ranging/core.hpp"
#include "ranging/engine.hpp"

namespace ranging {

/// One grid point of a window/alpha sweep, reported at the horizon (final
/// frame). Invalid combinations keep their row with `valid = false` and the
/// validation message, so a sweep never aborts mid-grid.
struct SweepRow {
  std::uint32_t rssw_start_hp = 0;
  std::uint32_t rssw_start_lp = 0;
  double alpha = 0.0;
  double p_a = 0.0;
  bool valid = false;
  std::string error;
  double hp_mean = 0.0;
  double hp_std = 0.0;
  double lp_mean = 0.0;
  double lp_std = 0.0;
  std::uint32_t n_seeds = 0;
};

struct SweepResult {
  SimConfig base;  // template the grid points were derived from
  std::vector<SweepRow> rows;
};

/// Initial-window grid 1, 2, 4, ..., 512.
inline std::vector<std::uint32_t> default_window_grid() {
  std::vector<std::uint32_t> grid;
  for (std::uint32_t w = 1; w <= 512; w *= 2) grid.push_back(w);
  return grid;
}

/// Evaluates every (hp_window, lp_window, alpha) combination through
/// run_replications on the template config (same base seed per point, which
/// pairs the comparisons). Rows come back in grid order: hp outermost,
/// alpha innermost.
inline SweepResult sweep(const SimConfig& config_template,
                         std::span<const std::uint32_t> hp_windows,
                         std::span<const std::uint32_t> lp_windows,
                         std::span<const double> alphas,
                         std::uint32_t n_seeds, unsigned jobs = 1) {
  SweepResult result;
  result.base = config_template;
  result.rows.reserve(hp_windows.size() * lp_windows.size() * alphas.size());
  for (const std::uint32_t hp : hp_windows) {
    for (const std::uint32_t lp : lp_windows) {
      for (const double alpha : alphas) {
        SweepRow row;
        row.rssw_start_hp = hp;
        row.rssw_start_lp = lp;
        row.alpha = alpha;
        row.p_a = config_template.arrival_prob;
        row.n_seeds = n_seeds;
        SimConfig cfg = config_template;
        cfg.rssw_start_hp = hp;
        cfg.rssw_start_lp = lp;
        cfg.alpha = alpha;
        try {
          const ReplicationAggregate agg = run_replications(cfg, n_seeds, jobs);
          const AggFrame& last = agg.final_frame();
          row.valid = true;
          row.hp_mean = last.hp.mean_ratio;
          row.hp_std = last.hp.std_ratio;
          row.lp_mean = last.lp.mean_ratio;
          row.lp_std = last.lp.std_ratio;
        } catch (const InvalidConfig& e) {
          row.error = e.what();
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

/// Picks the window pair meeting the HP target with the least LP sacrifice:
/// among valid rows with hp_mean >= tsrr, the one with the largest lp_mean.
/// Ties prefer the larger HP window (least aggressive differentiation),
/// then the smaller LP window. Returns nothing when no row qualifies.
inline std::optional<SweepRow> find_optimal(const SweepResult& result, double tsrr) {
  const SweepRow* best = nullptr;
  for (const SweepRow& row : result.rows) {
    if (!row.valid || row.hp_mean < tsrr) continue;
    if (!best || row.lp_mean > best->lp_mean ||
        (row.lp_mean == best->lp_mean &&
         (row.rssw_start_hp > best->rssw_start_hp ||
          (row.rssw_start_hp == best->rssw_start_hp &&
           row.rssw_start_lp < best->rssw_start_lp)))) {
      best = &row;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

}  // namespace ranging
