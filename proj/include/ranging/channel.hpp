#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "ranging/core.hpp"
#include "ranging/rng.hpp"

namespace ranging {

/// One ranging code sent in one ranging opportunity.
struct Transmission {
  std::uint32_t station_id = 0;
  std::uint32_t code = 0;
  std::uint64_t opportunity = 0;  // global slot index
};

/// BS-side resolution of a single opportunity. The three sets are disjoint
/// and together cover every transmitter; ids are ascending.
struct OpportunityOutcome {
  std::vector<std::uint32_t> detected;
  std::vector<std::uint32_t> collided;
  std::vector<std::uint32_t> overflow_dropped;
};

/// Groups transmissions by code: any code sent twice or more collides all of
/// its senders; uniquely-coded senders are detection candidates. At most
/// `beta` candidates are accepted (all of them when beta is unbounded);
/// excess candidates are dropped per `policy`.
///
/// Deterministic for a fixed rng stream and input order.
inline OpportunityOutcome resolve_opportunity(std::span<const Transmission> transmissions,
                                              std::optional<std::uint32_t> beta,
                                              OverflowPolicy policy, Rng& rng) {
  OpportunityOutcome out;
  if (transmissions.empty()) return out;

  std::unordered_map<std::uint32_t, std::uint32_t> multiplicity;
  multiplicity.reserve(transmissions.size());
  for (const auto& tx : transmissions) ++multiplicity[tx.code];

  // Candidates keep the input order (engine feeds ascending station ids).
  std::vector<const Transmission*> candidates;
  for (const auto& tx : transmissions) {
    if (multiplicity[tx.code] >= 2) out.collided.push_back(tx.station_id);
    else candidates.push_back(&tx);
  }

  if (!beta || candidates.size() <= *beta) {
    for (const auto* tx : candidates) out.detected.push_back(tx->station_id);
  } else {
    const std::size_t k = *beta;
    if (policy == OverflowPolicy::Uniform) {
      // Partial Fisher-Yates: the first k entries end up a uniform k-subset.
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(uniform_below(rng, candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
      }
    } else {
      std::sort(candidates.begin(), candidates.end(),
                [](const Transmission* a, const Transmission* b) { return a->code < b->code; });
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      (i < k ? out.detected : out.overflow_dropped).push_back(candidates[i]->station_id);
    }
  }

  std::sort(out.detected.begin(), out.detected.end());
  std::sort(out.collided.begin(), out.collided.end());
  std::sort(out.overflow_dropped.begin(), out.overflow_dropped.end());
  return out;
}

}  // namespace ranging
