#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "ranging/config_file.hpp"
#include "ranging/engine.hpp"
#include "ranging/sweep.hpp"

namespace ranging {

/// Fixed 6-decimal formatting keeps CSV output diffable across platforms.
inline std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

namespace detail {
inline void echo_config(std::ostringstream& out, const SimConfig& cfg, std::uint32_t n_seeds) {
  std::istringstream lines(serialize_config(cfg, n_seeds));
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << '\n';
}
}  // namespace detail

inline constexpr const char* kRunCsvHeader =
    "frame,hp_arrived,hp_succeeded,hp_ratio,lp_arrived,lp_succeeded,lp_ratio";

/// Single-run CSV: `#`-prefixed config echo (re-ingestable as a config file
/// once the prefix is stripped) followed by one row per frame.
inline std::string run_csv(const MetricsSeries& m) {
  std::ostringstream out;
  detail::echo_config(out, m.config, 1);
  out << kRunCsvHeader << '\n';
  for (std::size_t f = 0; f < m.frames.size(); ++f) {
    const FrameStats& s = m.frames[f];
    out << (f + 1) << ','
        << format_fixed(s.hp.arrived) << ',' << format_fixed(s.hp.succeeded) << ','
        << format_fixed(s.hp.ratio) << ','
        << format_fixed(s.lp.arrived) << ',' << format_fixed(s.lp.succeeded) << ','
        << format_fixed(s.lp.ratio) << '\n';
  }
  return out.str();
}

/// Replication-aggregate CSV: identical schema, values are per-frame means
/// over the replications.
inline std::string run_csv(const ReplicationAggregate& agg) {
  std::ostringstream out;
  detail::echo_config(out, agg.config, agg.n_seeds);
  out << kRunCsvHeader << '\n';
  for (std::size_t f = 0; f < agg.frames.size(); ++f) {
    const AggFrame& a = agg.frames[f];
    out << (f + 1) << ','
        << format_fixed(a.hp.mean_arrived) << ',' << format_fixed(a.hp.mean_succeeded) << ','
        << format_fixed(a.hp.mean_ratio) << ','
        << format_fixed(a.lp.mean_arrived) << ',' << format_fixed(a.lp.mean_succeeded) << ','
        << format_fixed(a.lp.mean_ratio) << '\n';
  }
  return out.str();
}

inline constexpr const char* kSweepCsvHeader =
    "rssw_hp,rssw_lp,alpha,pa,hp_mean,hp_std,lp_mean,lp_std,n_seeds";

/// Sweep CSV: template echo, one comment line per rejected grid point, then
/// one data row per valid point.
inline std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  detail::echo_config(out, result.base, result.rows.empty() ? 1 : result.rows.front().n_seeds);
  for (const SweepRow& row : result.rows) {
    if (!row.valid) {
      out << "# invalid point (rssw_hp=" << row.rssw_start_hp
          << ", rssw_lp=" << row.rssw_start_lp << ", alpha=" << format_fixed(row.alpha)
          << ", pa=" << format_fixed(row.p_a) << "): " << row.error << '\n';
    }
  }
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : result.rows) {
    if (!row.valid) continue;
    out << row.rssw_start_hp << ',' << row.rssw_start_lp << ','
        << format_fixed(row.alpha) << ',' << format_fixed(row.p_a) << ','
        << format_fixed(row.hp_mean) << ',' << format_fixed(row.hp_std) << ','
        << format_fixed(row.lp_mean) << ',' << format_fixed(row.lp_std) << ','
        << row.n_seeds << '\n';
  }
  return out.str();
}

}  // namespace ranging
