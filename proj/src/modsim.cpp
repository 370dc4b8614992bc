#include "ecosim/modsim.hpp"

#include "ecosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ecosim {

std::string ModerationPolicy::label() const {
    std::string base;
    if (const auto* majors = std::get_if<MajorPlatformsOnly>(&strategy)) {
        base = "majors(";
        for (std::size_t i = 0; i < majors->platforms.size(); ++i) {
            if (i) base += ",";
            base += majors->platforms[i].name();
        }
        base += ")";
    } else {
        base = "adaptive";
    }
    return base + "/budget=" + std::to_string(budget_per_tick) + "/delay=" + std::to_string(detection_delay_ticks);
}

std::vector<PlatformId> major_platforms(const EcosystemGraph& g, std::size_t k) {
    std::vector<std::uint64_t> members(g.platforms().size(), 0);
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        if (g.node(i).klass == NodeClass::HateCore) members[g.platform_of(i)] += g.node(i).members;
    }
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return members[a] > members[b]; });
    std::vector<PlatformId> out;
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) out.push_back(g.platforms()[order[i]]);
    return out;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

enum Salt : std::uint32_t { kBypass = 1, kDelay = 2, kPlatform = 3 };

// Uniform [0,1) keyed on (seed, community, purpose), so a community's fate
// does not depend on what else was removed in the same run.
double keyed_uniform(std::uint64_t seed, std::string_view key, Salt salt) {
    const auto h = fnv1a(key);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32), static_cast<std::uint32_t>(salt)};
    std::mt19937_64 rng(seq);
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct SimNode {
    std::string key;
    PlatformIndex platform;
    bool original;
    bool active;
    std::size_t created_tick;
    std::vector<NodeIndex> targets;
    std::size_t cross_links;
};

class Simulation {
public:
    Simulation(const EcosystemGraph& g, const ModerationPolicy& policy, const AdaptationRule& rule, std::uint64_t seed)
        : g_(g), policy_(policy), rule_(rule), seed_(seed), inbound_(g.node_count(), 0) {
        if (const auto* majors = std::get_if<MajorPlatformsOnly>(&policy.strategy)) {
            in_scope_.assign(g.platforms().size(), false);
            for (const auto& p : majors->platforms) {
                auto idx = g.find_platform(p);
                if (!idx) throw InvalidPolicy("platform not in dataset: " + p.name());
                in_scope_[*idx] = true;
            }
        }

        const auto snap = g.snapshot_at(g.events().empty() ? 0 : g.events().back().t);
        std::vector<std::vector<NodeIndex>> targets(g.node_count());
        for (const auto& e : snap.edges()) targets[e.source].push_back(e.target);
        for (NodeIndex i = 0; i < g.node_count(); ++i) {
            if (g.node(i).klass != NodeClass::HateCore) continue;
            add_node(g.node(i).id, g.platform_of(i), true, 0, std::move(targets[i]));
        }
        initial_nodes_ = nodes_.size();
    }

    SimOutcome run(std::size_t ticks) {
        SimOutcome out;
        out.initial = record(0, 0, 0);
        for (std::size_t tick = 1; tick <= ticks; ++tick) {
            const auto spawned = spawn_due(tick);
            const auto removed = moderate(tick);
            out.total_removals += removed;
            out.total_bypasses += spawned;
            out.ticks.push_back(record(tick, removed, spawned));
        }
        const auto& last = out.ticks.empty() ? out.initial : out.ticks.back();
        if (out.initial.reach_communities > 0) {
            out.residual_fraction =
                static_cast<double>(last.reach_communities) / static_cast<double>(out.initial.reach_communities);
        } else if (initial_nodes_ > 0) {
            out.residual_fraction =
                std::min(1.0, static_cast<double>(last.active_hate_nodes) / static_cast<double>(initial_nodes_));
        }
        return out;
    }

private:
    struct Pending {
        std::size_t due;
        std::size_t parent;
        PlatformIndex platform;
    };

    void add_node(std::string key, PlatformIndex platform, bool original, std::size_t tick,
                  std::vector<NodeIndex> targets) {
        std::size_t cross = 0;
        for (auto t : targets) cross += g_.platform_of(t) != platform ? 1 : 0;
        nodes_.push_back(SimNode{std::move(key), platform, original, false, tick, std::move(targets), cross});
        activate(nodes_.size() - 1);
    }

    void activate(std::size_t i) {
        nodes_[i].active = true;
        ++active_;
        for (auto t : nodes_[i].targets) {
            if (inbound_[t]++ == 0 && g_.node(t).klass == NodeClass::VulnerableMainstream) {
                ++reach_.first;
                reach_.second += g_.node(t).members;
            }
        }
    }

    void deactivate(std::size_t i) {
        nodes_[i].active = false;
        --active_;
        for (auto t : nodes_[i].targets) {
            if (--inbound_[t] == 0 && g_.node(t).klass == NodeClass::VulnerableMainstream) {
                --reach_.first;
                reach_.second -= g_.node(t).members;
            }
        }
    }

    std::size_t spawn_due(std::size_t tick) {
        std::size_t spawned = 0;
        std::vector<Pending> later;
        for (const auto& p : pending_) {
            if (p.due != tick) {
                later.push_back(p);
                continue;
            }
            auto targets = nodes_[p.parent].targets;
            add_node(nodes_[p.parent].key + "~b", p.platform, false, tick, std::move(targets));
            ++spawned;
        }
        pending_ = std::move(later);
        return spawned;
    }

    std::size_t moderate(std::size_t tick) {
        if (policy_.budget_per_tick == 0) return 0;
        const bool adaptive = std::holds_alternative<AdaptiveSystemWide>(policy_.strategy);

        struct Candidate {
            std::size_t recent;
            std::size_t cross;
            std::size_t links;
            std::size_t node;
        };
        std::vector<Candidate> pool;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& n = nodes_[i];
            if (!n.active) continue;
            if (!n.original && tick - n.created_tick < policy_.detection_delay_ticks) continue;
            if (!adaptive && !in_scope_[n.platform]) continue;
            const bool fresh = n.created_tick + rule_.relink_window_ticks >= tick;
            pool.push_back({adaptive && fresh ? n.cross_links : 0, n.cross_links, n.targets.size(), i});
        }
        const auto k = std::min(policy_.budget_per_tick, pool.size());
        auto key_less = [&](const Candidate& a, const Candidate& b) {
            if (adaptive) {
                if (a.recent != b.recent) return a.recent > b.recent;
                if (a.cross != b.cross) return a.cross > b.cross;
                if (a.links != b.links) return a.links > b.links;
            } else {
                if (a.links != b.links) return a.links > b.links;
                if (a.cross != b.cross) return a.cross > b.cross;
            }
            return nodes_[a.node].key < nodes_[b.node].key;
        };
        std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(), key_less);

        for (std::size_t r = 0; r < k; ++r) {
            const auto i = pool[r].node;
            deactivate(i);
            maybe_bypass(i, tick);
        }
        return k;
    }

    void maybe_bypass(std::size_t i, std::size_t tick) {
        const auto np = g_.platforms().size();
        if (rule_.bypass_probability <= 0.0 || np < 2) return;
        const auto& key = nodes_[i].key;
        if (keyed_uniform(seed_, key, kBypass) >= rule_.bypass_probability) return;
        const auto window = std::max<std::size_t>(1, rule_.relink_window_ticks);
        const auto delay =
            1 + std::min(window - 1, static_cast<std::size_t>(keyed_uniform(seed_, key, kDelay) * static_cast<double>(window)));
        auto other = std::min(np - 2, static_cast<std::size_t>(keyed_uniform(seed_, key, kPlatform) * static_cast<double>(np - 1)));
        if (other >= nodes_[i].platform) ++other;
        pending_.push_back(Pending{tick + delay, i, static_cast<PlatformIndex>(other)});
    }

    TickRecord record(std::size_t tick, std::size_t removed, std::size_t spawned) const {
        return TickRecord{tick, active_, reach_.first, reach_.second, removed, spawned};
    }

    const EcosystemGraph& g_;
    const ModerationPolicy& policy_;
    const AdaptationRule& rule_;
    std::uint64_t seed_;
    std::vector<bool> in_scope_;
    std::vector<SimNode> nodes_;
    std::vector<std::uint32_t> inbound_;
    std::vector<Pending> pending_;
    std::pair<std::uint64_t, std::uint64_t> reach_{0, 0};
    std::size_t active_ = 0;
    std::size_t initial_nodes_ = 0;
};

void validate(const ModerationPolicy& policy, const AdaptationRule& rule) {
    if (const auto* majors = std::get_if<MajorPlatformsOnly>(&policy.strategy); majors && majors->platforms.empty()) {
        throw InvalidPolicy("major-platforms policy names no platforms");
    }
    if (!(rule.bypass_probability >= 0.0 && rule.bypass_probability <= 1.0)) {
        throw InvalidPolicy("bypass probability must be in [0,1]");
    }
    if (rule.relink_window_ticks == 0) throw InvalidPolicy("relink window must be at least one tick");
}

} // namespace

SimOutcome run_sim(const EcosystemGraph& g, const ModerationPolicy& policy, const AdaptationRule& rule,
                   std::size_t ticks, std::uint64_t seed) {
    if (!g.sealed()) throw GraphNotSealed();
    validate(policy, rule);
    Simulation sim(g, policy, rule, seed);
    return sim.run(ticks);
}

StrategyComparison compare_strategies(const EcosystemGraph& g, std::span<const ModerationPolicy> policies,
                                      const AdaptationRule& rule, std::size_t ticks,
                                      std::span<const std::uint64_t> seeds) {
    if (policies.size() < 2) throw InvalidPolicy("comparison needs at least two policies");
    if (seeds.size() < 10) throw InvalidPolicy("comparison needs at least ten seeds");

    StrategyComparison cmp;
    cmp.seeds.assign(seeds.begin(), seeds.end());
    for (const auto& policy : policies) {
        PolicySummary s;
        s.label = policy.label();
        for (auto seed : seeds) s.residuals.push_back(run_sim(g, policy, rule, ticks, seed).residual_fraction);
        const double n = static_cast<double>(s.residuals.size());
        s.mean = std::accumulate(s.residuals.begin(), s.residuals.end(), 0.0) / n;
        double ss = 0.0;
        for (double r : s.residuals) ss += (r - s.mean) * (r - s.mean);
        s.stddev = s.residuals.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        s.min = *std::min_element(s.residuals.begin(), s.residuals.end());
        s.max = *std::max_element(s.residuals.begin(), s.residuals.end());
        cmp.policies.push_back(std::move(s));
    }

    const auto np = cmp.policies.size();
    cmp.le_fraction.assign(np, std::vector<double>(np, 0.0));
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            std::size_t le = 0;
            for (std::size_t k = 0; k < seeds.size(); ++k) {
                le += cmp.policies[i].residuals[k] <= cmp.policies[j].residuals[k] ? 1 : 0;
            }
            cmp.le_fraction[i][j] = static_cast<double>(le) / static_cast<double>(seeds.size());
        }
    }
    cmp.ranking.resize(np);
    std::iota(cmp.ranking.begin(), cmp.ranking.end(), 0);
    std::stable_sort(cmp.ranking.begin(), cmp.ranking.end(),
                     [&](std::size_t a, std::size_t b) { return cmp.policies[a].mean < cmp.policies[b].mean; });
    return cmp;
}

} // namespace ecosim
