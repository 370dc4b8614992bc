#include "ecosim/generator.hpp"

#include "ecosim/error.hpp"

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/discrete_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/lognormal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <set>

namespace ecosim {

using nlohmann::json;

void GeneratorConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    auto probability = [&](double p, const char* name) {
        require(p >= 0.0 && p <= 1.0, std::string(name) + " must be in [0,1]");
    };

    require(!platforms.empty(), "at least one platform is required");
    std::set<PlatformId> names;
    for (const auto& p : platforms) {
        require(names.insert(PlatformId(p.name)).second, "duplicate platform " + p.name);
        require(p.mean_members >= 0.0, "mean_members must be >= 0 on " + p.name);
        require(p.activity_weight >= 0.0, "activity_weight must be >= 0 on " + p.name);
    }
    require(rate_core_core >= 0.0 && rate_core_mainstream >= 0.0 && rate_core_news >= 0.0,
            "link rates must be >= 0");
    require(duration_days > 0.0, "duration_days must be > 0");
    require(member_sigma >= 0.0, "member_sigma must be >= 0");
    require(mainstream_mean_members >= 0.0, "mainstream_mean_members must be >= 0");
    require(n_clusters >= 1, "n_clusters must be >= 1");
    probability(preferential_probability, "preferential_probability");
    probability(cross_cluster_probability, "cross_cluster_probability");
    probability(bypass_probability, "bypass_probability");
    probability(ban_fraction, "ban_fraction");
    require(bypass_return_days > 0.0, "bypass_return_days must be > 0");
    require(max_journey_length >= 1, "max_journey_length must be >= 1");
    require(journey_horizon_days > 0.0, "journey_horizon_days must be > 0");
    for (const auto& s : post_streams) {
        require(s.rate_per_day >= 0.0, "post rate must be >= 0");
        probability(s.flag_probability, "flag_probability");
    }
    for (const auto& s : shock_events) {
        require(s.multiplier >= 0.0, "shock multiplier must be >= 0");
        require(s.decay_days > 0.0, "shock decay_days must be > 0");
    }

    const auto hate = total_hate_communities();
    const bool any_link = rate_core_core > 0.0 || rate_core_mainstream > 0.0 || rate_core_news > 0.0;
    if (any_link) {
        require(hate > 0, "link rates > 0 need at least one hate community");
        double active_weight = 0.0;
        for (const auto& p : platforms) {
            if (p.n_hate_communities > 0) active_weight += p.activity_weight;
        }
        require(active_weight > 0.0, "no platform with hate communities has activity_weight > 0");
    }
    require(rate_core_mainstream == 0.0 || n_mainstream > 0, "rate_core_mainstream > 0 needs n_mainstream > 0");
    require(rate_core_news == 0.0 || n_news > 0, "rate_core_news > 0 needs n_news > 0");
    require(n_individuals == 0 || hate > 0, "journeys need at least one hate community");
    bool posts = std::any_of(post_streams.begin(), post_streams.end(),
                             [](const PostStreamSpec& s) { return s.rate_per_day > 0.0; });
    require(!posts || hate > 0, "post streams need at least one hate community");
}

std::uint32_t GeneratorConfig::total_hate_communities() const {
    std::uint32_t n = 0;
    for (const auto& p : platforms) n += p.n_hate_communities;
    return n;
}

GeneratorConfig config_from_json(const json& j) {
    GeneratorConfig c;
    try {
        c.seed = j.value("seed", c.seed);
        for (const auto& p : j.at("platforms")) {
            c.platforms.push_back(PlatformSpec{p.at("name").get<std::string>(),
                                               p.value("n_hate_communities", 0u), p.value("mean_members", 0.0),
                                               p.value("activity_weight", 1.0)});
        }
        c.n_mainstream = j.value("n_mainstream", c.n_mainstream);
        c.mainstream_mean_members = j.value("mainstream_mean_members", c.mainstream_mean_members);
        c.n_news = j.value("n_news", c.n_news);
        c.member_sigma = j.value("member_sigma", c.member_sigma);
        c.rate_core_core = j.value("rate_core_core", c.rate_core_core);
        c.rate_core_mainstream = j.value("rate_core_mainstream", c.rate_core_mainstream);
        c.rate_core_news = j.value("rate_core_news", c.rate_core_news);
        c.preferential_probability = j.value("preferential_probability", c.preferential_probability);
        c.n_clusters = j.value("n_clusters", c.n_clusters);
        c.cross_cluster_probability = j.value("cross_cluster_probability", c.cross_cluster_probability);
        c.t_start = j.value("t_start", c.t_start);
        c.duration_days = j.value("duration_days", c.duration_days);
        if (j.contains("post_streams")) {
            for (const auto& s : j["post_streams"]) {
                c.post_streams.push_back(PostStreamSpec{parse_category(s.at("category").get<std::string>()),
                                                        s.value("rate_per_day", 0.0),
                                                        s.value("flag_probability", 0.0)});
            }
        }
        if (j.contains("shock_events")) {
            for (const auto& s : j["shock_events"]) {
                c.shock_events.push_back(ShockSpec{s.at("t").get<Timestamp>(),
                                                   parse_category(s.at("category").get<std::string>()),
                                                   s.at("multiplier").get<double>(), s.at("decay_days").get<double>()});
            }
        }
        c.bypass_probability = j.value("bypass_probability", c.bypass_probability);
        c.bypass_return_days = j.value("bypass_return_days", c.bypass_return_days);
        c.n_individuals = j.value("n_individuals", c.n_individuals);
        c.max_journey_length = j.value("max_journey_length", c.max_journey_length);
        c.journey_horizon_days = j.value("journey_horizon_days", c.journey_horizon_days);
        c.ban_fraction = j.value("ban_fraction", c.ban_fraction);
    } catch (const json::exception& e) {
        throw ConfigError(e.what());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

json config_to_json(const GeneratorConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["platforms"] = json::array();
    for (const auto& p : c.platforms) {
        j["platforms"].push_back({{"name", p.name},
                                  {"n_hate_communities", p.n_hate_communities},
                                  {"mean_members", p.mean_members},
                                  {"activity_weight", p.activity_weight}});
    }
    j["n_mainstream"] = c.n_mainstream;
    j["mainstream_mean_members"] = c.mainstream_mean_members;
    j["n_news"] = c.n_news;
    j["member_sigma"] = c.member_sigma;
    j["rate_core_core"] = c.rate_core_core;
    j["rate_core_mainstream"] = c.rate_core_mainstream;
    j["rate_core_news"] = c.rate_core_news;
    j["preferential_probability"] = c.preferential_probability;
    j["n_clusters"] = c.n_clusters;
    j["cross_cluster_probability"] = c.cross_cluster_probability;
    j["t_start"] = c.t_start;
    j["duration_days"] = c.duration_days;
    j["post_streams"] = json::array();
    for (const auto& s : c.post_streams) {
        j["post_streams"].push_back({{"category", to_string(s.category)},
                                     {"rate_per_day", s.rate_per_day},
                                     {"flag_probability", s.flag_probability}});
    }
    j["shock_events"] = json::array();
    for (const auto& s : c.shock_events) {
        j["shock_events"].push_back({{"t", s.t},
                                     {"category", to_string(s.category)},
                                     {"multiplier", s.multiplier},
                                     {"decay_days", s.decay_days}});
    }
    j["bypass_probability"] = c.bypass_probability;
    j["bypass_return_days"] = c.bypass_return_days;
    j["n_individuals"] = c.n_individuals;
    j["max_journey_length"] = c.max_journey_length;
    j["journey_horizon_days"] = c.journey_horizon_days;
    j["ban_fraction"] = c.ban_fraction;
    return j;
}

GeneratorConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_json(j);
}

double post_intensity(const GeneratorConfig& cfg, const PostStreamSpec& stream, double t_seconds) {
    double factor = 1.0;
    for (const auto& s : cfg.shock_events) {
        if (s.category != stream.category || t_seconds < static_cast<double>(s.t)) continue;
        const double age_days = (t_seconds - static_cast<double>(s.t)) / kSecondsPerDay;
        factor += (s.multiplier - 1.0) * std::exp(-age_days / s.decay_days);
    }
    return stream.rate_per_day * std::max(factor, 0.0);
}

namespace {

using Engine = std::mt19937_64;

// Independent stream per generator stage so that, e.g., enabling posts does
// not perturb the link log for the same seed.
Engine stage_engine(std::uint64_t seed, std::uint32_t stage) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stage};
    return Engine(seq);
}

enum Stage : std::uint32_t { kNodes = 1, kCoreCore, kCoreMainstream, kCoreNews, kPosts, kJoins, kBans };

std::uint64_t sample_members(Engine& rng, double mean, double sigma) {
    if (mean <= 0.0) return 0;
    if (sigma == 0.0) return static_cast<std::uint64_t>(std::llround(mean));
    boost::random::lognormal_distribution<double> dist(std::log(mean) - 0.5 * sigma * sigma, sigma);
    return static_cast<std::uint64_t>(std::llround(dist(rng)));
}

// Poisson arrival offsets (seconds from t_start) over [0, duration), one-day slices.
std::vector<Timestamp> poisson_offsets(Engine& rng, double rate_per_day, double duration_days) {
    std::vector<Timestamp> out;
    if (rate_per_day <= 0.0) return out;
    const auto total_seconds = static_cast<Timestamp>(std::llround(duration_days * kSecondsPerDay));
    out.reserve(static_cast<std::size_t>(rate_per_day * duration_days * 1.05) + 16);
    for (Timestamp day_start = 0; day_start < total_seconds; day_start += kSecondsPerDay) {
        const Timestamp len = std::min(kSecondsPerDay, total_seconds - day_start);
        const double mean = rate_per_day * static_cast<double>(len) / kSecondsPerDay;
        boost::random::poisson_distribution<std::int64_t, double> count(mean);
        const auto n = count(rng);
        boost::random::uniform_int_distribution<Timestamp> when(0, len - 1);
        const auto first = out.size();
        for (std::int64_t k = 0; k < n; ++k) out.push_back(day_start + when(rng));
        std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
    }
    return out;
}

struct Layout {
    std::vector<NodeIndex> hate;                        // all hate nodes
    std::vector<std::vector<NodeIndex>> hate_by_platform;
    std::vector<std::uint32_t> cluster_of;              // indexed by position in `hate`
    std::vector<std::vector<NodeIndex>> cluster_members;
    std::vector<std::uint32_t> hate_position;           // graph index -> position in `hate`
    std::vector<NodeIndex> mainstream;
    std::vector<NodeIndex> news;
    std::vector<double> platform_weights;               // zero for platforms without hate nodes
};

class TargetPicker {
public:
    TargetPicker(std::span<const NodeIndex> pool, double preferential) : pool_(pool), pref_(preferential) {}

    NodeIndex pick(Engine& rng) {
        boost::random::bernoulli_distribution<double> use_history(pref_);
        NodeIndex chosen;
        if (!history_.empty() && use_history(rng)) {
            boost::random::uniform_int_distribution<std::size_t> i(0, history_.size() - 1);
            chosen = history_[i(rng)];
        } else {
            boost::random::uniform_int_distribution<std::size_t> i(0, pool_.size() - 1);
            chosen = pool_[i(rng)];
        }
        return chosen;
    }
    void record(NodeIndex target) { history_.push_back(target); }

private:
    std::span<const NodeIndex> pool_;
    double pref_;
    std::vector<NodeIndex> history_;
};

NodeIndex pick_source(Engine& rng, const Layout& L, boost::random::discrete_distribution<std::size_t, double>& platform) {
    const auto& nodes = L.hate_by_platform[platform(rng)];
    boost::random::uniform_int_distribution<std::size_t> i(0, nodes.size() - 1);
    return nodes[i(rng)];
}

void generate_core_core(Engine& rng, const GeneratorConfig& cfg, const Layout& L, EcosystemGraph& g) {
    const auto offsets = poisson_offsets(rng, cfg.rate_core_core, cfg.duration_days);
    if (offsets.empty()) return;
    boost::random::discrete_distribution<std::size_t, double> platform(L.platform_weights.begin(),
                                                                       L.platform_weights.end());
    std::vector<TargetPicker> pickers;
    for (const auto& members : L.cluster_members) pickers.emplace_back(members, cfg.preferential_probability);
    TargetPicker global(L.hate, cfg.preferential_probability);

    boost::random::bernoulli_distribution<double> cross_cluster(cfg.cross_cluster_probability);
    boost::random::bernoulli_distribution<double> bypass(cfg.bypass_probability);
    boost::random::exponential_distribution<double> return_delay(1.0 / (cfg.bypass_return_days * kSecondsPerDay));

    struct PendingReturn {
        double due;
        NodeIndex from;
        NodeIndex to;
        bool operator>(const PendingReturn& o) const { return due > o.due; }
    };
    std::priority_queue<PendingReturn, std::vector<PendingReturn>, std::greater<>> pending;

    for (auto offset : offsets) {
        const Timestamp t = cfg.t_start + offset;
        // A due return hop consumes this arrival instead of a fresh link, so
        // the core-core total stays Poisson(rate x duration).
        if (!pending.empty() && pending.top().due <= static_cast<double>(offset)) {
            auto r = pending.top();
            pending.pop();
            g.append_event(r.from, r.to, t, LinkKind::CoreToCore);
            continue;
        }

        const NodeIndex source = pick_source(rng, L, platform);
        const auto cluster = L.cluster_of[L.hate_position[source]];
        const bool any_cluster = L.cluster_members.size() > 1 && cross_cluster(rng);
        TargetPicker& picker = any_cluster ? global : pickers[cluster];
        const auto pool_size = any_cluster ? L.hate.size() : L.cluster_members[cluster].size();

        NodeIndex target = picker.pick(rng);
        for (int attempt = 0; target == source && pool_size > 1 && attempt < 16; ++attempt) {
            target = picker.pick(rng);
        }
        picker.record(target);
        g.append_event(source, target, t, LinkKind::CoreToCore);

        if (cfg.bypass_probability > 0.0 && g.platform_of(source) != g.platform_of(target) && bypass(rng)) {
            pending.push({static_cast<double>(offset) + return_delay(rng), target, source});
        }
    }
}

void generate_core_sink(Engine& rng, const GeneratorConfig& cfg, const Layout& L, std::span<const NodeIndex> sinks,
                        double rate, LinkKind kind, EcosystemGraph& g) {
    const auto offsets = poisson_offsets(rng, rate, cfg.duration_days);
    if (offsets.empty()) return;
    boost::random::discrete_distribution<std::size_t, double> platform(L.platform_weights.begin(),
                                                                       L.platform_weights.end());
    TargetPicker picker(sinks, cfg.preferential_probability);
    for (auto offset : offsets) {
        const NodeIndex source = pick_source(rng, L, platform);
        const NodeIndex target = picker.pick(rng);
        picker.record(target);
        g.append_event(source, target, cfg.t_start + offset, kind);
    }
}

// Expected post count of a stream over [a, b) seconds from t_start.
double expected_posts(const GeneratorConfig& cfg, const PostStreamSpec& stream, double a, double b) {
    const double base = stream.rate_per_day / kSecondsPerDay;
    double total = base * (b - a);
    for (const auto& s : cfg.shock_events) {
        if (s.category != stream.category) continue;
        const double ts = static_cast<double>(s.t - cfg.t_start);
        if (b <= ts) continue;
        const double decay = s.decay_days * kSecondsPerDay;
        const double lo = std::max(a, ts);
        total += base * (s.multiplier - 1.0) * decay * (std::exp(-(lo - ts) / decay) - std::exp(-(b - ts) / decay));
    }
    return std::max(total, 0.0);
}

void generate_posts(Engine& rng, const GeneratorConfig& cfg, const Layout& L, const EcosystemGraph& g,
                    std::vector<PostRecord>& posts) {
    constexpr Timestamp kSlice = 60;
    const auto total_seconds = static_cast<Timestamp>(std::llround(cfg.duration_days * kSecondsPerDay));
    boost::random::uniform_int_distribution<std::size_t> community(0, L.hate.size() - 1);
    boost::random::uniform_int_distribution<int> flag_kind(1, 3);
    for (const auto& stream : cfg.post_streams) {
        if (stream.rate_per_day <= 0.0) continue;
        boost::random::bernoulli_distribution<double> flagged(stream.flag_probability);
        for (Timestamp a = 0; a < total_seconds; a += kSlice) {
            const Timestamp len = std::min(kSlice, total_seconds - a);
            const double mean = expected_posts(cfg, stream, static_cast<double>(a), static_cast<double>(a + len));
            if (mean <= 0.0) continue;
            boost::random::poisson_distribution<std::int64_t, double> count(mean);
            const auto n = count(rng);
            boost::random::uniform_int_distribution<Timestamp> when(0, len - 1);
            for (std::int64_t k = 0; k < n; ++k) {
                PostRecord p;
                p.community = g.node(L.hate[community(rng)]).id;
                p.t = cfg.t_start + a + when(rng);
                p.flags = flagged(rng) ? static_cast<std::uint8_t>(flag_kind(rng)) : 0;
                p.category = stream.category;
                posts.push_back(std::move(p));
            }
        }
    }
    std::stable_sort(posts.begin(), posts.end(), [](const PostRecord& x, const PostRecord& y) { return x.t < y.t; });
}

void generate_joins(Engine& rng, const GeneratorConfig& cfg, const Layout& L, const EcosystemGraph& g,
                    std::vector<JoinEvent>& joins) {
    const auto total_seconds = static_cast<Timestamp>(std::llround(cfg.duration_days * kSecondsPerDay));
    const auto horizon = static_cast<Timestamp>(std::llround(cfg.journey_horizon_days * kSecondsPerDay));
    const auto max_len = std::min<std::size_t>(cfg.max_journey_length, L.hate.size());
    boost::random::uniform_real_distribution<double> unit(0.0, 1.0);
    boost::random::uniform_int_distribution<Timestamp> first_join(0, std::max<Timestamp>(0, total_seconds - 1 - horizon));
    boost::random::uniform_int_distribution<Timestamp> later(1, std::max<Timestamp>(1, horizon));
    boost::random::uniform_int_distribution<std::size_t> community(0, L.hate.size() - 1);

    for (std::uint64_t person = 1; person <= cfg.n_individuals; ++person) {
        // Log-uniform journey length on [1, max_len].
        auto len = static_cast<std::size_t>(std::floor(std::exp(unit(rng) * std::log(static_cast<double>(max_len) + 1.0))));
        len = std::clamp<std::size_t>(len, 1, max_len);

        std::set<Timestamp> times{0};
        while (times.size() < len && static_cast<Timestamp>(times.size()) <= horizon) times.insert(later(rng));
        len = times.size();
        std::set<std::size_t> chosen;
        std::vector<std::size_t> order;
        while (chosen.size() < len) {
            auto c = community(rng);
            if (chosen.insert(c).second) order.push_back(c);
        }
        const Timestamp start = cfg.t_start + first_join(rng);
        std::size_t k = 0;
        for (auto offset : times) {
            joins.push_back(JoinEvent{person, g.node(L.hate[order[k++]]).id, start + offset});
        }
    }
}

} // namespace

Dataset generate_ecosystem(const GeneratorConfig& cfg) {
    cfg.validate();

    std::vector<PlatformId> platforms;
    for (const auto& p : cfg.platforms) platforms.emplace_back(p.name);
    const auto total_seconds = static_cast<Timestamp>(std::llround(cfg.duration_days * kSecondsPerDay));
    Dataset ds{EcosystemGraph(platforms, TimeRange{cfg.t_start, cfg.t_start + total_seconds}), {}, {}, {}};
    auto& g = ds.graph;

    Layout L;
    L.hate_by_platform.resize(cfg.platforms.size());
    L.platform_weights.resize(cfg.platforms.size(), 0.0);
    L.cluster_members.resize(cfg.n_clusters);
    {
        auto rng = stage_engine(cfg.seed, kNodes);
        boost::random::uniform_int_distribution<std::uint32_t> cluster(0, cfg.n_clusters - 1);
        for (std::size_t p = 0; p < cfg.platforms.size(); ++p) {
            const auto& spec = cfg.platforms[p];
            for (std::uint32_t k = 0; k < spec.n_hate_communities; ++k) {
                char suffix[16];
                std::snprintf(suffix, sizeof suffix, "%05u", k);
                auto idx = g.register_node(CommunityNode{"hc-" + platforms[p].name() + "-" + suffix, platforms[p],
                                                         NodeClass::HateCore,
                                                         std::max<std::uint64_t>(1, sample_members(rng, spec.mean_members, cfg.member_sigma)),
                                                         cfg.t_start});
                const auto c = cluster(rng);
                L.hate_position.resize(idx + 1, 0);
                L.hate_position[idx] = static_cast<std::uint32_t>(L.hate.size());
                L.hate.push_back(idx);
                L.cluster_of.push_back(c);
                L.cluster_members[c].push_back(idx);
                L.hate_by_platform[p].push_back(idx);
            }
            if (spec.n_hate_communities > 0) L.platform_weights[p] = spec.activity_weight;
        }
        // Empty clusters would make target selection impossible.
        std::erase_if(L.cluster_members, [](const auto& m) { return m.empty(); });
        for (std::uint32_t c = 0; c < L.cluster_members.size(); ++c) {
            for (auto idx : L.cluster_members[c]) L.cluster_of[L.hate_position[idx]] = c;
        }

        boost::random::uniform_int_distribution<std::size_t> any_platform(0, platforms.size() - 1);
        for (std::uint32_t k = 0; k < cfg.n_mainstream; ++k) {
            L.mainstream.push_back(g.register_node(CommunityNode{"vm-" + std::to_string(k),
                                                                 platforms[any_platform(rng)],
                                                                 NodeClass::VulnerableMainstream,
                                                                 sample_members(rng, cfg.mainstream_mean_members, cfg.member_sigma),
                                                                 cfg.t_start}));
        }
        for (std::uint32_t k = 0; k < cfg.n_news; ++k) {
            L.news.push_back(g.register_node(
                CommunityNode{"ns-" + std::to_string(k), platforms[any_platform(rng)], NodeClass::NewsSource, 0, cfg.t_start}));
        }
        L.hate_position.resize(g.node_count(), 0);
    }

    {
        auto rng = stage_engine(cfg.seed, kCoreCore);
        generate_core_core(rng, cfg, L, g);
    }
    {
        auto rng = stage_engine(cfg.seed, kCoreMainstream);
        generate_core_sink(rng, cfg, L, L.mainstream, cfg.rate_core_mainstream, LinkKind::CoreToMainstream, g);
    }
    {
        auto rng = stage_engine(cfg.seed, kCoreNews);
        generate_core_sink(rng, cfg, L, L.news, cfg.rate_core_news, LinkKind::CoreToNews, g);
    }
    if (!L.hate.empty()) {
        auto rng = stage_engine(cfg.seed, kPosts);
        generate_posts(rng, cfg, L, g, ds.posts);
    }
    if (cfg.n_individuals > 0) {
        auto rng = stage_engine(cfg.seed, kJoins);
        generate_joins(rng, cfg, L, g, ds.joins);
    }
    {
        auto rng = stage_engine(cfg.seed, kBans);
        boost::random::bernoulli_distribution<double> banned(cfg.ban_fraction);
        for (auto idx : L.hate) ds.bans.emplace(g.node(idx).id, banned(rng) ? BanStatus::Banned : BanStatus::Active);
    }

    g.seal();
    return ds;
}

} // namespace ecosim
