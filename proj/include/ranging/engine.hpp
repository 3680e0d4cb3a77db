#pragma once

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "ranging/arrival.hpp"
#include "ranging/channel.hpp"
#include "ranging/core.hpp"
#include "ranging/rng.hpp"
#include "ranging/station.hpp"

namespace ranging {

struct ClassFrameStats {
  std::uint32_t arrived = 0;    // cumulative
  std::uint32_t succeeded = 0;  // cumulative
  double ratio = 0.0;           // succeeded / arrived, 0 when nothing arrived
};

struct FrameStats {
  ClassFrameStats hp;
  ClassFrameStats lp;
};

/// Per-frame cumulative counters for both classes, plus the resolved config
/// that produced them (seed and policy knobs included).
struct MetricsSeries {
  SimConfig config;
  std::vector<FrameStats> frames;  // frames[f - 1] is the snapshot at frame f

  const FrameStats& at_frame(std::uint32_t frame) const { return frames[frame - 1]; }
};

/// One seeded simulation run, advanced a frame at a time.
///
/// Event order inside a frame is fixed so that a seed fully determines the
/// outcome:
///   1. arrivals (ascending id), each new station draws its initial defer
///   2. per opportunity: stations whose defer hit zero transmit (codes drawn
///      in ascending id), the opportunity resolves, then every remaining
///      deferring station counts down by one
///   3. at frame end T3 countdowns tick; expired stations run backoff
///      (ascending id) and start counting down from the next frame
class Simulation {
 public:
  explicit Simulation(const SimConfig& config)
      : cfg_(validate(config)),
        partition_(partition_codes(cfg_.n_codes, cfg_.alpha)),
        rng_(make_rng(cfg_.seed)),
        schedule_(cfg_.total_stations),
        hp_success_bucket_(cfg_.n_frames + 1, 0),
        lp_success_bucket_(cfg_.n_frames + 1, 0) {
    stations_.resize(cfg_.total_stations);
    pending_.reserve(cfg_.total_stations);
    for (std::uint32_t id = 0; id < cfg_.total_stations; ++id) {
      stations_[id].id = id;
      stations_[id].priority = station_priority(cfg_, id);
      pending_.push_back(id);
    }
    metrics_.config = cfg_;
    metrics_.frames.reserve(cfg_.n_frames);
  }

  const SimConfig& config() const { return cfg_; }
  std::uint32_t frame() const { return frame_; }
  const std::vector<Station>& stations() const { return stations_; }
  const ArrivalSchedule& schedule() const { return schedule_; }
  const MetricsSeries& metrics() const { return metrics_; }
  bool done() const { return frame_ >= cfg_.n_frames; }

  /// True once no station can change state any more (arrivals exhausted and
  /// nobody deferring or waiting on T3).
  bool idle() const { return pending_.empty() && n_deferring_ == 0 && n_awaiting_ == 0; }

  void step_frame() {
    assert(!done());
    const std::uint32_t f = frame_ + 1;

    if (!idle()) {
      admit_arrivals(f);
      for (std::uint32_t o = 0; o < cfg_.opportunities_per_frame; ++o)
        run_opportunity(f, o);
      expire_timers(f);
    }

    // Snapshot: credit successes booked for this frame, then record ratios.
    hp_cum_succeeded_ += hp_success_bucket_[f];
    lp_cum_succeeded_ += lp_success_bucket_[f];
    FrameStats snap;
    snap.hp = {hp_cum_arrived_, hp_cum_succeeded_,
               hp_cum_arrived_ ? static_cast<double>(hp_cum_succeeded_) / hp_cum_arrived_ : 0.0};
    snap.lp = {lp_cum_arrived_, lp_cum_succeeded_,
               lp_cum_arrived_ ? static_cast<double>(lp_cum_succeeded_) / lp_cum_arrived_ : 0.0};
    metrics_.frames.push_back(snap);
    frame_ = f;
  }

  MetricsSeries run_to_end() {
    while (!done()) step_frame();
    return metrics_;
  }

 private:
  std::uint32_t start_window(Priority p) const {
    return p == Priority::High ? cfg_.rssw_start_hp : cfg_.rssw_start_lp;
  }

  void admit_arrivals(std::uint32_t f) {
    const auto arrived = step_arrivals(f, pending_, cfg_.arrival_prob, rng_, &schedule_);
    for (const std::uint32_t id : arrived) {
      Station& s = stations_[id];
      s.phase = Phase::Deferring;
      s.arrival_frame = f;
      s.current_window = start_window(s.priority);
      s.slots_remaining = cfg_.initial_defer == InitialDefer::Windowed
                              ? draw_defer(s.current_window, rng_)
                              : 0;
      ++n_deferring_;
      if (s.priority == Priority::High) ++hp_cum_arrived_;
      else ++lp_cum_arrived_;
    }
  }

  void run_opportunity(std::uint32_t f, std::uint32_t o) {
    const std::uint64_t slot =
        static_cast<std::uint64_t>(f - 1) * cfg_.opportunities_per_frame + o;

    transmissions_.clear();
    for (const Station& s : stations_) {
      if (s.phase == Phase::Deferring && s.slots_remaining == 0)
        transmissions_.push_back({s.id, select_code(s.priority, partition_, rng_), slot});
    }

    if (!transmissions_.empty()) {
      const OpportunityOutcome outcome =
          resolve_opportunity(transmissions_, cfg_.beta, cfg_.overflow_policy, rng_);
      for (const std::uint32_t id : outcome.detected) {
        stations_[id] = on_success(stations_[id], f);
        --n_deferring_;
        book_success(stations_[id].priority, f);
      }
      for (const std::uint32_t id : outcome.collided) start_t3(stations_[id]);
      for (const std::uint32_t id : outcome.overflow_dropped) start_t3(stations_[id]);
    }

    for (Station& s : stations_) {
      if (s.phase == Phase::Deferring) {
        assert(s.slots_remaining > 0);
        --s.slots_remaining;
      }
    }
  }

  void start_t3(Station& s) {
    s.phase = Phase::AwaitingResponse;
    s.frames_remaining =
        cfg_.t3_frames + (cfg_.t3_counting == T3Counting::Exclusive ? 1 : 0);
    --n_deferring_;
    ++n_awaiting_;
  }

  void expire_timers(std::uint32_t f) {
    if (n_awaiting_ == 0) return;
    for (Station& s : stations_) {
      if (s.phase != Phase::AwaitingResponse) continue;
      if (s.frames_remaining > 0) --s.frames_remaining;
      if (s.frames_remaining == 0) {
        s = on_failure(s, cfg_.rssw_end, cfg_.max_retries, f, rng_);
        --n_awaiting_;
        if (s.phase == Phase::Deferring) ++n_deferring_;
        // New defer starts counting with the next frame's first opportunity.
      }
    }
  }

  void book_success(Priority p, std::uint32_t transmit_frame) {
    std::uint32_t credit = transmit_frame;
    if (cfg_.success_timing == SuccessTiming::ResponseFrame) credit += cfg_.t3_frames;
    if (credit > cfg_.n_frames) return;  // response lands past the horizon
    if (p == Priority::High) ++hp_success_bucket_[credit];
    else ++lp_success_bucket_[credit];
  }

  SimConfig cfg_;
  CodePartition partition_;
  Rng rng_;
  std::vector<Station> stations_;
  std::vector<std::uint32_t> pending_;
  ArrivalSchedule schedule_;
  std::vector<Transmission> transmissions_;
  std::vector<std::uint32_t> hp_success_bucket_;  // indexed by credited frame
  std::vector<std::uint32_t> lp_success_bucket_;
  MetricsSeries metrics_;
  std::uint32_t frame_ = 0;
  std::uint32_t n_deferring_ = 0;
  std::uint32_t n_awaiting_ = 0;
  std::uint32_t hp_cum_arrived_ = 0;
  std::uint32_t lp_cum_arrived_ = 0;
  std::uint32_t hp_cum_succeeded_ = 0;
  std::uint32_t lp_cum_succeeded_ = 0;
};

inline MetricsSeries run(const SimConfig& config) {
  return Simulation(config).run_to_end();
}

struct AggClassFrame {
  double mean_arrived = 0.0;
  double mean_succeeded = 0.0;
  double mean_ratio = 0.0;
  double std_ratio = 0.0;  // sample (n-1) standard deviation
};

struct AggFrame {
  AggClassFrame hp;
  AggClassFrame lp;
};

/// Per-frame mean / spread of the success ratio over seed replications.
struct ReplicationAggregate {
  SimConfig config;  // replication i ran with seed derive_seed(config.seed, i)
  std::uint32_t n_seeds = 0;
  std::vector<AggFrame> frames;

  const AggFrame& at_frame(std::uint32_t frame) const { return frames[frame - 1]; }
  const AggFrame& final_frame() const { return frames.back(); }
};

/// Runs n_seeds independent replications (optionally on `jobs` threads) and
/// aggregates them. Replication seeds derive from config.seed by index and
/// results are reduced in index order, so the aggregate does not depend on
/// the thread count or completion order.
inline ReplicationAggregate run_replications(const SimConfig& config,
                                             std::uint32_t n_seeds,
                                             unsigned jobs = 1) {
  if (n_seeds == 0) throw InvalidConfig("n_seeds must be >= 1");
  const SimConfig base = validate(config);

  std::vector<MetricsSeries> results(n_seeds);
  auto worker_body = [&](std::uint32_t index) {
    SimConfig cfg = base;
    cfg.seed = derive_seed(base.seed, index);
    results[index] = run(cfg);
  };

  if (jobs <= 1 || n_seeds == 1) {
    for (std::uint32_t i = 0; i < n_seeds; ++i) worker_body(i);
  } else {
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const unsigned n_threads = std::min<unsigned>(jobs, n_seeds);
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      threads.emplace_back([&] {
        for (;;) {
          const std::uint32_t i = next.fetch_add(1);
          if (i >= n_seeds) return;
          try {
            worker_body(i);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
  }

  ReplicationAggregate agg;
  agg.config = base;
  agg.n_seeds = n_seeds;
  agg.frames.resize(base.n_frames);

  for (std::uint32_t f = 0; f < base.n_frames; ++f) {
    AggFrame& a = agg.frames[f];
    for (const auto& r : results) {
      const FrameStats& s = r.frames[f];
      a.hp.mean_arrived += s.hp.arrived;
      a.hp.mean_succeeded += s.hp.succeeded;
      a.hp.mean_ratio += s.hp.ratio;
      a.lp.mean_arrived += s.lp.arrived;
      a.lp.mean_succeeded += s.lp.succeeded;
      a.lp.mean_ratio += s.lp.ratio;
    }
    const double n = static_cast<double>(n_seeds);
    a.hp.mean_arrived /= n;
    a.hp.mean_succeeded /= n;
    a.hp.mean_ratio /= n;
    a.lp.mean_arrived /= n;
    a.lp.mean_succeeded /= n;
    a.lp.mean_ratio /= n;
    if (n_seeds > 1) {
      double hp_ss = 0.0, lp_ss = 0.0;
      for (const auto& r : results) {
        const FrameStats& s = r.frames[f];
        hp_ss += (s.hp.ratio - a.hp.mean_ratio) * (s.hp.ratio - a.hp.mean_ratio);
        lp_ss += (s.lp.ratio - a.lp.mean_ratio) * (s.lp.ratio - a.lp.mean_ratio);
      }
      a.hp.std_ratio = std::sqrt(hp_ss / (n - 1.0));
      a.lp.std_ratio = std::sqrt(lp_ss / (n - 1.0));
    }
  }
  return agg;
}

}  // namespace ranging
