#pragma once

#include "ecosim/ingest.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ecosim {

struct PlatformSpec {
    std::string name;
    std::uint32_t n_hate_communities = 0;
    double mean_members = 0.0;
    // Relative share of core-originated link activity. Equal weights give
    // every platform the same expected out-link rate regardless of size.
    double activity_weight = 1.0;
};

struct ShockSpec {
    Timestamp t = 0;
    HateCategory category = HateCategory::Other;
    double multiplier = 1.0;
    double decay_days = 1.0;
};

struct PostStreamSpec {
    HateCategory category = HateCategory::Other;
    double rate_per_day = 0.0;      // baseline, across the whole core
    double flag_probability = 0.0;  // chance a post carries a hate flag
};

struct GeneratorConfig {
    std::uint64_t seed = 1;
    std::vector<PlatformSpec> platforms;
    std::uint32_t n_mainstream = 0;
    double mainstream_mean_members = 1000.0;
    std::uint32_t n_news = 0;
    double member_sigma = 1.0;  // log-normal shape for community sizes

    double rate_core_core = 0.0;        // events/day
    double rate_core_mainstream = 0.0;  // events/day
    double rate_core_news = 0.0;        // events/day
    double preferential_probability = 0.5;

    // Core-core links stay inside one of n_clusters cross-platform clusters
    // except with probability cross_cluster_probability.
    std::uint32_t n_clusters = 1;
    double cross_cluster_probability = 0.0;

    Timestamp t_start = 0;
    double duration_days = 1.0;

    std::vector<PostStreamSpec> post_streams;
    std::vector<ShockSpec> shock_events;
    double bypass_probability = 0.0;  // chance a core-core link spawns a return hop via another platform
    double bypass_return_days = 1.0;  // mean delay of that return hop

    std::uint32_t n_individuals = 0;
    std::uint32_t max_journey_length = 403;
    double journey_horizon_days = 180.0;
    double ban_fraction = 0.0;

    void validate() const;
    std::uint32_t total_hate_communities() const;
};

GeneratorConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const GeneratorConfig& cfg);
GeneratorConfig load_config(const std::string& path);

// Builds a sealed synthetic ecosystem. Output is a pure function of cfg.
Dataset generate_ecosystem(const GeneratorConfig& cfg);

// Base rate times (1 + sum over active shocks of (multiplier-1) * exp(-dt/decay)).
double post_intensity(const GeneratorConfig& cfg, const PostStreamSpec& stream, double t_seconds);

} // namespace ecosim
