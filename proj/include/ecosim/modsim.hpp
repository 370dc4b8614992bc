#pragma once

#include "ecosim/graph.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ecosim {

// Moderators act only on the named platforms.
struct MajorPlatformsOnly {
    std::vector<PlatformId> platforms;
};

// Moderators act anywhere, ranking communities by recent cross-platform out-links.
struct AdaptiveSystemWide {};

struct ModerationPolicy {
    std::variant<MajorPlatformsOnly, AdaptiveSystemWide> strategy;
    std::size_t budget_per_tick = 0;
    std::size_t detection_delay_ticks = 0;

    std::string label() const;
};

struct AdaptationRule {
    double bypass_probability = 0.0;  // per removed community
    std::size_t relink_window_ticks = 1;
};

struct TickRecord {
    std::size_t tick = 0;
    std::size_t active_hate_nodes = 0;
    std::uint64_t reach_communities = 0;
    std::uint64_t reach_members = 0;
    std::size_t removals = 0;
    std::size_t bypasses_created = 0;
};

struct SimOutcome {
    TickRecord initial;               // state before the first tick
    std::vector<TickRecord> ticks;    // one per tick, 1-based
    std::size_t total_removals = 0;
    std::size_t total_bypasses = 0;
    double residual_fraction = 1.0;   // final reach / initial reach (active-node share if no reach)
};

// The k platforms with the largest summed hate-community membership.
std::vector<PlatformId> major_platforms(const EcosystemGraph& g, std::size_t k = 3);

// Budgeted removals against bypass respawns on the sealed graph's full link
// set. Deterministic in (g, policy, rule, ticks, seed).
SimOutcome run_sim(const EcosystemGraph& g, const ModerationPolicy& policy, const AdaptationRule& rule,
                   std::size_t ticks, std::uint64_t seed);

struct PolicySummary {
    std::string label;
    std::vector<double> residuals;  // seed order
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct StrategyComparison {
    std::vector<std::uint64_t> seeds;
    std::vector<PolicySummary> policies;
    // le_fraction[i][j]: share of seeds where policy i's residual <= policy j's.
    std::vector<std::vector<double>> le_fraction;
    std::vector<std::size_t> ranking;  // policy indices by mean residual, ascending
};

StrategyComparison compare_strategies(const EcosystemGraph& g, std::span<const ModerationPolicy> policies,
                                      const AdaptationRule& rule, std::size_t ticks,
                                      std::span<const std::uint64_t> seeds);

} // namespace ecosim
