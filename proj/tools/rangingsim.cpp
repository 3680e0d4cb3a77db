// Command-line front door for the ranging contention simulator: single runs,
// seed-replication batches, window/alpha sweeps, and the UCD codec.
//
// Exit codes: 0 success, 1 usage/config/input error, 2 internal error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ranging/config_file.hpp"
#include "ranging/engine.hpp"
#include "ranging/report.hpp"
#include "ranging/sweep.hpp"
#include "ranging/ucd.hpp"

namespace {

using namespace ranging;

struct ConfigOpts {
  std::string preset;
  std::string config_path;
  std::optional<std::uint32_t> u, opps, codes, rssw_hp, rssw_lp, rssw_end, frames;
  std::optional<double> pa, hp_fraction, alpha, frame_ms, t3_ms;
  std::optional<std::string> beta, max_retries;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> overflow_policy, success_timing, t3_counting, initial_defer;
};

void add_config_options(CLI::App* cmd, ConfigOpts& o) {
  cmd->add_option("--preset", o.preset, "Named parameter preset")
      ->check(CLI::IsMember({"table1"}));
  cmd->add_option("--config", o.config_path, "Config file (key = value lines)");
  cmd->add_option("--u,--total-stations", o.u, "Total number of stations (U)");
  cmd->add_option("--pa", o.pa, "Per-frame arrival probability p_a");
  cmd->add_option("--hp-fraction", o.hp_fraction, "Fraction of stations that are high priority");
  cmd->add_option("--opps", o.opps, "Ranging opportunities per frame");
  cmd->add_option("--codes", o.codes, "Number of initial-ranging CDMA codes (N)");
  cmd->add_option("--alpha", o.alpha, "Fraction of codes reserved to HP stations");
  cmd->add_option("--rssw-hp", o.rssw_hp, "Initial RSSW for HP stations (opportunities)");
  cmd->add_option("--rssw-lp", o.rssw_lp, "Initial RSSW for LP stations");
  cmd->add_option("--rssw-end", o.rssw_end, "Final (truncation) RSSW");
  cmd->add_option("--frame-ms", o.frame_ms, "Frame duration in milliseconds");
  cmd->add_option("--t3-ms", o.t3_ms, "T3 timer in milliseconds");
  cmd->add_option("--beta", o.beta, "Detection cap per opportunity (count or 'unbounded')");
  cmd->add_option("--frames", o.frames, "Simulation horizon in frames");
  cmd->add_option("--max-retries", o.max_retries, "Retry cap (count or 'unlimited')");
  cmd->add_option("--seed", o.seed, "Base PRNG seed");
  cmd->add_option("--overflow-policy", o.overflow_policy,
                  "Overflow tie-breaking: uniform | first_k_by_code_index");
  cmd->add_option("--success-timing", o.success_timing,
                  "Metric credit frame: transmit_frame | response_frame");
  cmd->add_option("--t3-counting", o.t3_counting,
                  "T3 countdown vs transmit frame: exclusive | inclusive");
  cmd->add_option("--initial-defer", o.initial_defer,
                  "First attempt defer: windowed | immediate");
}

// Layering: built-in defaults, then the preset, then the config file, then
// explicit flags.
RunSpec resolve_spec(const ConfigOpts& o) {
  RunSpec spec;
  if (o.preset == "table1") spec.config = table1_preset();
  if (!o.config_path.empty()) apply_config_file(spec, o.config_path);

  SimConfig& c = spec.config;
  if (o.u) c.total_stations = *o.u;
  if (o.pa) c.arrival_prob = *o.pa;
  if (o.hp_fraction) c.hp_fraction = *o.hp_fraction;
  if (o.opps) c.opportunities_per_frame = *o.opps;
  if (o.codes) c.n_codes = *o.codes;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.rssw_hp) c.rssw_start_hp = *o.rssw_hp;
  if (o.rssw_lp) c.rssw_start_lp = *o.rssw_lp;
  if (o.rssw_end) c.rssw_end = *o.rssw_end;
  if (o.frame_ms) c.frame_duration_ms = *o.frame_ms;
  if (o.t3_ms) c.t3_ms = *o.t3_ms;
  if (o.seed) c.seed = *o.seed;
  if (o.beta) apply_config_entry(spec, "beta", *o.beta);
  if (o.max_retries) apply_config_entry(spec, "max_retries", *o.max_retries);
  if (o.frames) c.n_frames = *o.frames;
  if (o.overflow_policy) apply_config_entry(spec, "overflow_policy", *o.overflow_policy);
  if (o.success_timing) apply_config_entry(spec, "success_timing", *o.success_timing);
  if (o.t3_counting) apply_config_entry(spec, "t3_counting", *o.t3_counting);
  if (o.initial_defer) apply_config_entry(spec, "initial_defer", *o.initial_defer);
  return spec;
}

unsigned default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InvalidConfig("cannot open output file: " + out_path);
  out << text;
}

int cmd_run(const ConfigOpts& opts, std::optional<std::uint32_t> seeds,
            unsigned jobs, const std::string& out_path) {
  RunSpec spec = resolve_spec(opts);
  if (seeds) spec.n_seeds = *seeds;
  if (spec.n_seeds == 0) throw InvalidConfig("--seeds must be >= 1");
  spec.config = validate(spec.config);

  const auto t0 = std::chrono::steady_clock::now();
  std::string csv;
  if (spec.n_seeds == 1) {
    csv = run_csv(run(spec.config));
  } else {
    csv = run_csv(run_replications(spec.config, spec.n_seeds, jobs));
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);

  write_output(csv, out_path);
  std::cerr << "runtime: " << elapsed.count() << " ms\n";
  return 0;
}

int cmd_sweep(const ConfigOpts& opts, std::vector<std::uint32_t> hp_windows,
              std::vector<std::uint32_t> lp_windows, std::vector<double> alphas,
              std::uint32_t seeds, unsigned jobs, std::optional<double> tsrr,
              const std::string& out_path) {
  RunSpec spec = resolve_spec(opts);
  if (seeds == 0) throw InvalidConfig("--seeds must be >= 1");
  if (hp_windows.empty()) hp_windows = default_window_grid();
  if (lp_windows.empty()) lp_windows = default_window_grid();
  if (alphas.empty()) alphas = {spec.config.alpha};

  const SweepResult result = sweep(spec.config, hp_windows, lp_windows, alphas, seeds, jobs);
  write_output(sweep_csv(result), out_path);

  if (tsrr) {
    if (*tsrr <= 0.0 || *tsrr > 1.0) throw InvalidConfig("--tsrr must be in (0, 1]");
    const auto best = find_optimal(result, *tsrr);
    if (best) std::cout << best->rssw_start_hp << ',' << best->rssw_start_lp << '\n';
    else std::cout << "none\n";
  }
  return 0;
}

int cmd_ucd_encode(const UcdMessage& msg, const std::string& out_path) {
  const auto bytes = encode_ucd(msg);
  if (out_path.empty()) {
    std::cout << to_hex(bytes) << '\n';
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidConfig("cannot open output file: " + out_path);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }
  return 0;
}

std::string trim_ws(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

int cmd_ucd_decode(const std::string& hex_arg, const std::string& in_path,
                   std::uint32_t n_codes) {
  std::vector<std::uint8_t> bytes;
  if (!in_path.empty()) {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw InvalidConfig("cannot open input file: " + in_path);
    char c;
    while (in.get(c)) bytes.push_back(static_cast<std::uint8_t>(c));
  } else if (!hex_arg.empty()) {
    bytes = from_hex(hex_arg);
  } else {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    bytes = from_hex(trim_ws(ss.str()));
  }

  const UcdMessage m = decode_ucd(bytes);
  const auto window_note = [](std::uint8_t exponent) {
    return " (window " + std::to_string(1ULL << exponent) + ")";
  };
  std::cout << "config_change_count = " << int(m.config_change_count) << '\n'
            << "ranging_backoff_start = " << int(m.ranging_backoff_start)
            << (m.ranging_backoff_start <= 63 ? window_note(m.ranging_backoff_start) : "") << '\n'
            << "ranging_backoff_end = " << int(m.ranging_backoff_end)
            << (m.ranging_backoff_end <= 63 ? window_note(m.ranging_backoff_end) : "") << '\n'
            << "request_backoff_start = " << int(m.request_backoff_start) << '\n'
            << "request_backoff_end = " << int(m.request_backoff_end) << '\n'
            << "ranging_backoff_start_hp = " << int(m.ranging_backoff_start_hp)
            << (m.ranging_backoff_start_hp <= 63 ? window_note(m.ranging_backoff_start_hp) : "")
            << '\n'
            << "ranging_backoff_end_hp = " << int(m.ranging_backoff_end_hp)
            << (m.ranging_backoff_end_hp <= 63 ? window_note(m.ranging_backoff_end_hp) : "")
            << '\n';
  const std::uint32_t reserved = (n_codes * m.cdma_code_reservation_fraction_hp + 3) / 4;
  std::cout << "cdma_code_reservation_fraction_hp = " << int(m.cdma_code_reservation_fraction_hp)
            << " (" << reserved << '/' << n_codes << " codes)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Priority-differentiated OFDMA initial-ranging contention simulator"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Simulate and emit per-frame CSV metrics");
  ConfigOpts run_opts;
  add_config_options(run_cmd, run_opts);
  std::optional<std::uint32_t> run_seeds;
  unsigned run_jobs = default_jobs();
  std::string run_out;
  run_cmd->add_option("--seeds", run_seeds, "Seed replications to aggregate (default 1)");
  run_cmd->add_option("--jobs", run_jobs, "Max concurrent replications");
  run_cmd->add_option("--out", run_out, "Write CSV to file instead of stdout");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid-evaluate window pairs and alphas");
  ConfigOpts sweep_opts;
  add_config_options(sweep_cmd, sweep_opts);
  std::vector<std::uint32_t> hp_windows, lp_windows;
  std::vector<double> alphas;
  std::uint32_t sweep_seeds = 100;
  unsigned sweep_jobs = default_jobs();
  std::optional<double> tsrr;
  std::string sweep_out;
  sweep_cmd->add_option("--hp-windows", hp_windows,
                        "HP start windows to sweep (default: powers of two 1..512)");
  sweep_cmd->add_option("--lp-windows", lp_windows,
                        "LP start windows to sweep (default: powers of two 1..512)");
  sweep_cmd->add_option("--alphas", alphas, "Alpha values to sweep (default: config alpha)");
  sweep_cmd->add_option("--seeds", sweep_seeds, "Seed replications per grid point");
  sweep_cmd->add_option("--jobs", sweep_jobs, "Max concurrent replications");
  sweep_cmd->add_option("--tsrr", tsrr,
                        "Print the optimal window pair for this HP target (or 'none')");
  sweep_cmd->add_option("--out", sweep_out, "Write CSV to file instead of stdout");

  // ucd encode/decode
  auto* ucd_cmd = app.add_subcommand("ucd", "Encode or decode the modified UCD message");
  ucd_cmd->require_subcommand(1);
  auto* enc_cmd = ucd_cmd->add_subcommand("encode", "Pack fields into the 8-octet message");
  UcdMessage enc_msg;
  std::string enc_out;
  enc_cmd->add_option("--cc", enc_msg.config_change_count, "Configuration change count");
  enc_cmd->add_option("--lp-start", enc_msg.ranging_backoff_start, "LP ranging backoff start exponent");
  enc_cmd->add_option("--lp-end", enc_msg.ranging_backoff_end, "LP ranging backoff end exponent");
  enc_cmd->add_option("--req-start", enc_msg.request_backoff_start, "Request backoff start exponent");
  enc_cmd->add_option("--req-end", enc_msg.request_backoff_end, "Request backoff end exponent");
  enc_cmd->add_option("--hp-start", enc_msg.ranging_backoff_start_hp, "HP ranging backoff start exponent");
  enc_cmd->add_option("--hp-end", enc_msg.ranging_backoff_end_hp, "HP ranging backoff end exponent");
  enc_cmd->add_option("--frac", enc_msg.cdma_code_reservation_fraction_hp,
                      "2-bit CDMA code reservation fraction (alpha = value/4)");
  enc_cmd->add_option("--out", enc_out, "Write the 8 raw octets to file instead of hex to stdout");

  auto* dec_cmd = ucd_cmd->add_subcommand("decode", "Unpack an 8-octet message");
  std::string dec_hex, dec_in;
  std::uint32_t dec_codes = 32;
  dec_cmd->add_option("hex", dec_hex, "Hex string (reads stdin when omitted)");
  dec_cmd->add_option("--in", dec_in, "Read the raw octets from file");
  dec_cmd->add_option("--n-codes", dec_codes, "Code count used to annotate the reservation");

  try {
    app.parse(argc, argv);
    if (*run_cmd) return cmd_run(run_opts, run_seeds, run_jobs, run_out);
    if (*sweep_cmd)
      return cmd_sweep(sweep_opts, hp_windows, lp_windows, alphas, sweep_seeds, sweep_jobs,
                       tsrr, sweep_out);
    if (*enc_cmd) return cmd_ucd_encode(enc_msg, enc_out);
    if (*dec_cmd) return cmd_ucd_decode(dec_hex, dec_in, dec_codes);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const InvalidConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const BadLength& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ReservedBitsSet& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidField& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const EmptyCodeSet& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
