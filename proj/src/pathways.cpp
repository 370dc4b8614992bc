#include "ecosim/pathways.hpp"

#include "ecosim/error.hpp"

#include <algorithm>
#include <map>

namespace ecosim {

std::vector<Journey> build_journeys(std::span<const JoinEvent> joins, const BanStatusMap& bans,
                                    const EcosystemGraph& g) {
    std::map<std::uint64_t, Journey> by_person;
    for (const auto& j : joins) {
        if (!g.find(j.community)) throw UnknownCommunity(j.community);
        auto status = BanStatus::Active;
        if (auto it = bans.find(j.community); it != bans.end()) status = it->second;
        auto& journey = by_person[j.individual];
        journey.individual = j.individual;
        journey.joins.push_back(JourneyStep{j.community, j.t, status});
    }

    std::vector<Journey> out;
    out.reserve(by_person.size());
    for (auto& [id, journey] : by_person) {
        auto& steps = journey.joins;
        std::sort(steps.begin(), steps.end(), [](const JourneyStep& a, const JourneyStep& b) {
            return a.t != b.t ? a.t < b.t : a.community < b.community;
        });
        std::vector<std::string_view> seen;
        for (const auto& s : steps) seen.push_back(s.community);
        std::sort(seen.begin(), seen.end());
        if (auto dup = std::adjacent_find(seen.begin(), seen.end()); dup != seen.end()) {
            throw IntegrityError({"individual " + std::to_string(id) + " joined " + std::string(*dup) + " twice"});
        }
        out.push_back(std::move(journey));
    }
    return out;
}

std::vector<LengthBin> log2_bins(std::size_t max_length) {
    std::vector<LengthBin> bins{{1, 1}};
    std::size_t upper = 1;
    while (upper < max_length) {
        bins.push_back({upper + 1, upper * 2});
        upper *= 2;
    }
    return bins;
}

std::size_t length_within(const Journey& j, Timestamp horizon) {
    if (j.joins.empty()) return 0;
    const Timestamp first = j.joins.front().t;
    return static_cast<std::size_t>(std::count_if(j.joins.begin(), j.joins.end(),
                                                   [&](const JourneyStep& s) { return s.t - first <= horizon; }));
}

JourneyHistogram journey_histogram(std::span<const Journey> journeys, Timestamp horizon, std::vector<LengthBin> bins) {
    if (journeys.empty()) throw InsufficientData("no journeys");
    JourneyHistogram h;
    h.horizon = horizon;

    std::vector<std::size_t> lengths;
    for (const auto& j : journeys) {
        const auto len = length_within(j, horizon);
        if (len > 0) lengths.push_back(len);
    }
    if (!lengths.empty()) {
        h.min_length = *std::min_element(lengths.begin(), lengths.end());
        h.max_length = *std::max_element(lengths.begin(), lengths.end());
    }
    h.bins = bins.empty() ? log2_bins(std::max<std::size_t>(1, h.max_length)) : std::move(bins);
    h.counts.assign(h.bins.size(), 0);
    for (auto len : lengths) {
        auto it = std::find_if(h.bins.begin(), h.bins.end(),
                               [len](const LengthBin& b) { return len >= b.lower && len <= b.upper; });
        if (it == h.bins.end()) throw Error("journey length " + std::to_string(len) + " not covered by bins");
        ++h.counts[static_cast<std::size_t>(it - h.bins.begin())];
        ++h.individuals;
    }
    return h;
}

ViolenceMix violence_mix(const Journey& j) {
    ViolenceMix mix;
    for (const auto& s : j.joins) {
        if (s.status == BanStatus::Banned) {
            ++mix.banned;
        } else {
            ++mix.active;
        }
    }
    if (!j.joins.empty()) mix.fraction_banned = static_cast<double>(mix.banned) / static_cast<double>(j.joins.size());
    return mix;
}

} // namespace ecosim
