#pragma once

#include "ecosim/graph.hpp"
#include "ecosim/ingest.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ecosim {

struct JourneyStep {
    std::string community;
    Timestamp t = 0;
    BanStatus status = BanStatus::Active;  // status at study end
    friend bool operator==(const JourneyStep&, const JourneyStep&) = default;
};

struct Journey {
    std::uint64_t individual = 0;
    std::vector<JourneyStep> joins;  // by (t, community)
    friend bool operator==(const Journey&, const Journey&) = default;
};

// One journey per individual, ordered by individual id. Communities absent
// from `bans` are Active. Throws UnknownCommunity for unregistered ids and
// IntegrityError for a repeated (individual, community) pair.
std::vector<Journey> build_journeys(std::span<const JoinEvent> joins, const BanStatusMap& bans,
                                    const EcosystemGraph& g);

inline constexpr Timestamp kDefaultHorizon = 180 * kSecondsPerDay;

// Closed bins [lower, upper] over journey length.
struct LengthBin {
    std::size_t lower;
    std::size_t upper;
    friend bool operator==(const LengthBin&, const LengthBin&) = default;
};

// 1, 2, 3-4, 5-8, ... up to the first bin covering max_length.
std::vector<LengthBin> log2_bins(std::size_t max_length);

struct JourneyHistogram {
    Timestamp horizon = kDefaultHorizon;
    std::vector<LengthBin> bins;
    std::vector<std::uint64_t> counts;
    std::size_t min_length = 0;
    std::size_t max_length = 0;
    std::uint64_t individuals = 0;
};

// Journey length = joins with t - first_join <= horizon.
std::size_t length_within(const Journey& j, Timestamp horizon);

// Bins default to log2_bins over the observed maximum length.
JourneyHistogram journey_histogram(std::span<const Journey> journeys, Timestamp horizon = kDefaultHorizon,
                                   std::vector<LengthBin> bins = {});

struct ViolenceMix {
    std::size_t banned = 0;
    std::size_t active = 0;
    double fraction_banned = 0.0;
};

ViolenceMix violence_mix(const Journey& j);

} // namespace ecosim
