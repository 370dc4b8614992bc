#include "cli.hpp"

#include "manifest.hpp"

#include "ecosim/analytics.hpp"
#include "ecosim/attrition.hpp"
#include "ecosim/error.hpp"
#include "ecosim/export.hpp"
#include "ecosim/generator.hpp"
#include "ecosim/ingest.hpp"
#include "ecosim/modsim.hpp"
#include "ecosim/pathways.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>

#ifndef ECOSIM_VERSION
#define ECOSIM_VERSION "dev"
#endif

namespace ecosim::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
namespace at = ecosim::attrition;

struct Globals {
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string json_path;
    bool quiet = false;
};

std::ofstream open_for_write(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    return f;
}

void write_text(const fs::path& p, const std::string& text) {
    auto f = open_for_write(p);
    f << text;
    if (!f) throw Error("write failed: " + p.string());
}

// Collects provenance while a subcommand runs, then emits result + manifest.
class Run {
public:
    Run(const std::vector<std::string>& args, const Globals& g, std::ostream& out, std::ostream& err)
        : g_(g), out_(out), err_(err), start_(std::chrono::steady_clock::now()) {
        manifest_.command_line.push_back("ecosim");
        manifest_.command_line.insert(manifest_.command_line.end(), args.begin(), args.end());
        manifest_.tool_version = ECOSIM_VERSION;
    }

    const Globals& globals() const { return g_; }
    void config(const json& params) { manifest_.config_hash = json_hash(params); }
    void dataset(const fs::path& dir) { manifest_.dataset_hash = dataset_hash(dir); }
    void seed(std::uint64_t s) { manifest_.seeds.push_back(s); }
    void output(const fs::path& p) { manifest_.outputs.push_back(p.string()); }

    void finish(const json& result, std::optional<fs::path> manifest_path = std::nullopt) {
        if (!g_.json_path.empty()) {
            write_text(g_.json_path, result.dump(2) + "\n");
            output(g_.json_path);
            if (!manifest_path) manifest_path = g_.json_path + ".manifest.json";
        } else if (!g_.quiet) {
            out_ << result.dump(2) << "\n";
        }
        manifest_.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (manifest_path) {
            write_text(*manifest_path, manifest_.to_json().dump(2) + "\n");
        } else {
            err_ << manifest_.to_json().dump() << "\n";
        }
    }

private:
    const Globals& g_;
    std::ostream& out_;
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_;
    RunManifest manifest_;
};

Timestamp default_as_of(const EcosystemGraph& g) { return g.time_range().end; }

json class_counts(const EcosystemGraph& g) {
    return {{"HateCore", g.count_class(NodeClass::HateCore)},
            {"VulnerableMainstream", g.count_class(NodeClass::VulnerableMainstream)},
            {"NewsSource", g.count_class(NodeClass::NewsSource)}};
}

json kind_counts(const EcosystemGraph& g) {
    std::array<std::uint64_t, kLinkKindCount> n{};
    for (const auto& e : g.events()) ++n[static_cast<std::size_t>(e.kind)];
    json j = json::object();
    for (std::size_t k = 0; k < kLinkKindCount; ++k) j[std::string(to_string(static_cast<LinkKind>(k)))] = n[k];
    return j;
}

// ---- generate / validate ----

struct GenerateArgs {
    std::string config;
    std::string out;
};

void run_generate(Run& run, const GenerateArgs& a) {
    auto cfg = load_config(a.config);
    if (run.globals().seed_given) cfg.seed = run.globals().seed;
    const auto ds = generate_ecosystem(cfg);
    fs::create_directories(a.out);
    save_dataset(ds, a.out);

    run.config(config_to_json(cfg));
    run.seed(cfg.seed);
    run.dataset(a.out);
    run.output(a.out);
    const auto& g = ds.graph;
    run.finish({{"out", a.out},
                {"seed", cfg.seed},
                {"platforms", g.platforms().size()},
                {"nodes", class_counts(g)},
                {"events", kind_counts(g)},
                {"joins", ds.joins.size()},
                {"posts", ds.posts.size()}},
               fs::path(a.out) / "manifest.json");
}

struct ValidateArgs {
    std::string dir;
    bool strict_labels = false;
};

int run_validate(Run& run, const ValidateArgs& a, std::ostream& err) {
    const auto ds = load_dataset(a.dir);
    const auto& g = ds.graph;

    // Each community with posts must carry the class its posts imply.
    std::uint64_t checked = 0, agree = 0;
    std::vector<std::string> disagreements;
    for (const auto& [id, label] : classify_all(ds.posts)) {
        auto idx = g.find(id);
        if (!idx) continue;
        ++checked;
        const bool is_core = g.node(*idx).klass == NodeClass::HateCore;
        if (is_core == (label == CommunityLabel::Hate)) {
            ++agree;
        } else if (disagreements.size() < IntegrityError::kMaxReported) {
            disagreements.push_back(id);
        }
    }
    const auto range = g.time_range();

    run.config({{"command", "validate"}, {"strict_labels", a.strict_labels}});
    run.dataset(a.dir);
    run.finish({{"valid", true},
                {"platforms", g.platforms().size()},
                {"nodes", class_counts(g)},
                {"events", kind_counts(g)},
                {"time_range", {range.start, range.end}},
                {"joins", ds.joins.size()},
                {"posts", ds.posts.size()},
                {"bans", ds.bans.size()},
                {"estimated_core_size", estimate_core_size(g)},
                {"labels", {{"checked", checked}, {"agree", agree}, {"disagree_examples", disagreements}}}});
    if (a.strict_labels && agree != checked) {
        err << "error: " << (checked - agree) << " communities disagree with their post labels\n";
        return kExitDataError;
    }
    return kExitOk;
}

// ---- analyze ----

struct AnalyzeArgs {
    std::string dir;
    std::string metric;
    std::optional<Timestamp> at;
    std::size_t samples = 1;
    bool members = false;
    Timestamp bin_seconds = kSecondsPerDay;
    double window_days = kDefaultBypassWindowDays;
    std::size_t limit = 20;
    std::string category;
    std::optional<Timestamp> event_t;
    std::size_t pre = 30;
    std::size_t post = 30;
    std::string csv;
};

json components_json(const EcosystemGraph& g, const AnalyzeArgs& a, Timestamp as_of, std::ostream* csv) {
    std::vector<Timestamp> times;
    const auto start = g.time_range().start;
    const std::size_t n = std::max<std::size_t>(1, a.samples);
    for (std::size_t i = 1; i <= n; ++i) {
        times.push_back(n == 1 ? as_of : start + static_cast<Timestamp>((as_of - start) * static_cast<double>(i) / n));
    }
    json reports = json::array();
    if (csv) *csv << "as_of,rank,size\n";
    for (const auto& r : components_over_time(g, times)) {
        const auto in_components = std::accumulate(r.largest_sizes.begin(), r.largest_sizes.end(), std::size_t{0});
        json jr{{"as_of", r.as_of},
                {"n_components", r.components.size()},
                {"sizes", r.largest_sizes},
                {"core_nodes", r.core_nodes},
                {"isolated", r.core_nodes - in_components}};
        if (a.members) {
            json comps = json::array();
            for (const auto& c : r.components) {
                json ids = json::array();
                for (auto m : c.members) ids.push_back(g.node(m).id);
                comps.push_back(std::move(ids));
            }
            jr["members"] = std::move(comps);
        }
        if (csv) {
            for (std::size_t k = 0; k < r.largest_sizes.size(); ++k)
                *csv << r.as_of << ',' << k + 1 << ',' << r.largest_sizes[k] << '\n';
        }
        reports.push_back(std::move(jr));
    }
    return {{"reports", reports}};
}

json growth_json(const EcosystemGraph& g, const AnalyzeArgs& a, std::ostream* csv) {
    const auto lg = link_growth(g, a.bin_seconds);
    json kinds = json::object();
    for (const auto& k : lg.kinds) {
        kinds[std::string(to_string(k.kind))] = {{"total", k.total},
                                                 {"slope_per_bin", k.slope},
                                                 {"intercept", k.intercept},
                                                 {"r_squared", k.r_squared},
                                                 {"mean_rate_per_bin", k.mean_rate},
                                                 {"steady", k.steady}};
    }
    if (csv) {
        *csv << "bin_end";
        for (const auto& k : lg.kinds) *csv << ',' << to_string(k.kind);
        *csv << '\n';
        for (std::size_t b = 0; b < lg.n_bins; ++b) {
            *csv << lg.t0 + lg.bin_width * static_cast<Timestamp>(b + 1);
            for (const auto& k : lg.kinds) *csv << ',' << k.cumulative[b];
            *csv << '\n';
        }
    }
    return {{"t0", lg.t0}, {"bin_seconds", lg.bin_width}, {"n_bins", lg.n_bins}, {"kinds", kinds}};
}

json connectivity_json(const EcosystemGraph& g, Timestamp as_of, std::ostream* csv) {
    const auto pc = platform_connectivity(g, as_of);
    json degrees = json::array();
    if (csv) *csv << "platform,out_weight,in_weight,total\n";
    for (const auto& d : pc.degrees) {
        degrees.push_back({{"platform", d.platform}, {"out", d.out_weight}, {"in", d.in_weight}, {"total", d.total()}});
        if (csv) *csv << d.platform << ',' << d.out_weight << ',' << d.in_weight << ',' << d.total() << '\n';
    }
    return {{"degrees", degrees},
            {"max_total", pc.max_total},
            {"median_total", pc.median_total},
            {"equivalence_ratio", pc.equivalence_ratio}};
}

json bypass_json(const EcosystemGraph& g, const AnalyzeArgs& a, Timestamp as_of, std::ostream* csv) {
    if (!csv && a.limit == 0) {
        return {{"window_days", a.window_days}, {"count", count_bypasses(g, a.window_days, as_of)}};
    }
    const auto motifs = detect_bypasses(g, a.window_days, as_of);
    auto motif = [&](const BypassMotif& m) {
        return json{{"a", g.node(m.a).id}, {"b", g.node(m.b).id}, {"c", g.node(m.return_target).id},
                    {"t1", m.t1}, {"t2", m.t2}};
    };
    json listed = json::array();
    for (std::size_t i = 0; i < std::min(a.limit, motifs.size()); ++i) listed.push_back(motif(motifs[i]));
    if (csv) {
        *csv << "a,b,c,t1,t2\n";
        for (const auto& m : motifs) {
            *csv << g.node(m.a).id << ',' << g.node(m.b).id << ',' << g.node(m.return_target).id << ',' << m.t1 << ','
                 << m.t2 << '\n';
        }
    }
    return {{"window_days", a.window_days}, {"count", motifs.size()}, {"motifs", listed}};
}

json shock_json(const Dataset& ds, const AnalyzeArgs& a, std::ostream* csv) {
    if (a.category.empty() || !a.event_t) throw Error("shock metric needs --category and --event-t");
    const auto category = parse_category(a.category);
    const Timestamp bin = a.bin_seconds;
    const Timestamp t0 = *a.event_t - static_cast<Timestamp>(a.pre) * bin;
    const Timestamp t1 = *a.event_t + static_cast<Timestamp>(a.post) * bin;
    const auto series = bin_posts(ds.posts, category, t0, t1, bin);
    const auto r = shock_response(series, *a.event_t, a.pre, a.post);
    if (csv) {
        *csv << "bin_start,count\n";
        for (std::size_t i = 0; i < series.counts.size(); ++i)
            *csv << series.t0 + bin * static_cast<Timestamp>(i) << ',' << series.counts[i] << '\n';
    }
    json latency = r.latency_bins ? json(*r.latency_bins) : json(nullptr);
    return {{"event_t", r.event_t},
            {"category", to_string(r.category)},
            {"bin_seconds", bin},
            {"pre_bins", a.pre},
            {"post_bins", a.post},
            {"pre_rate", r.pre_rate},
            {"post_rate", r.post_rate},
            {"pre_sigma", r.pre_sigma},
            {"ratio", std::isinf(r.ratio) ? json("inf") : json(r.ratio)},
            {"latency_bins", latency},
            {"verdict", to_string(r.verdict)}};
}

void run_analyze(Run& run, const AnalyzeArgs& a) {
    const auto ds = load_dataset(a.dir);
    const auto& g = ds.graph;
    const Timestamp as_of = a.at.value_or(default_as_of(g));

    std::optional<std::ofstream> csv_file;
    if (!a.csv.empty()) csv_file = open_for_write(a.csv);
    std::ostream* csv = csv_file ? &*csv_file : nullptr;

    json result{{"metric", a.metric}, {"as_of", as_of}};
    json body;
    if (a.metric == "components") {
        body = components_json(g, a, as_of, csv);
    } else if (a.metric == "reach") {
        const auto r = one_click_reach(g, as_of);
        body = {{"communities", r.communities}, {"members", r.members}};
        if (csv) *csv << "as_of,communities,members\n" << as_of << ',' << r.communities << ',' << r.members << '\n';
    } else if (a.metric == "growth") {
        body = growth_json(g, a, csv);
    } else if (a.metric == "connectivity") {
        body = connectivity_json(g, as_of, csv);
    } else if (a.metric == "bypass") {
        body = bypass_json(g, a, as_of, csv);
    } else {
        body = shock_json(ds, a, csv);
    }
    result.update(body);

    run.config({{"metric", a.metric}, {"as_of", as_of}, {"samples", a.samples}, {"bin_seconds", a.bin_seconds},
                {"window_days", a.window_days}, {"category", a.category},
                {"event_t", a.event_t ? json(*a.event_t) : json(nullptr)}, {"pre", a.pre}, {"post", a.post}});
    run.dataset(a.dir);
    if (csv_file) {
        csv_file->close();
        run.output(a.csv);
    }
    run.finish(result);
}

// ---- pathways ----

struct PathwaysArgs {
    std::string dir;
    double horizon_days = 180.0;
    std::string csv;
};

void run_pathways(Run& run, const PathwaysArgs& a) {
    const auto ds = load_dataset(a.dir);
    const auto journeys = build_journeys(ds.joins, ds.bans, ds.graph);
    const auto horizon = static_cast<Timestamp>(std::llround(a.horizon_days * kSecondsPerDay));
    const auto h = journey_histogram(journeys, horizon);

    json bins = json::array();
    for (std::size_t i = 0; i < h.bins.size(); ++i)
        bins.push_back({{"lower", h.bins[i].lower}, {"upper", h.bins[i].upper}, {"count", h.counts[i]}});

    double banned_sum = 0.0;
    std::uint64_t all_banned = 0, none_banned = 0;
    for (const auto& j : journeys) {
        const auto mix = violence_mix(j);
        banned_sum += mix.fraction_banned;
        if (mix.active == 0) ++all_banned;
        if (mix.banned == 0) ++none_banned;
    }

    if (!a.csv.empty()) {
        auto f = open_for_write(a.csv);
        f << "individual,step,community,t,status\n";
        for (const auto& j : journeys) {
            for (std::size_t k = 0; k < j.joins.size(); ++k) {
                const auto& s = j.joins[k];
                f << j.individual << ',' << k + 1 << ',' << s.community << ',' << s.t << ',' << to_string(s.status)
                  << '\n';
            }
        }
        f.close();
        run.output(a.csv);
    }

    run.config({{"horizon_days", a.horizon_days}});
    run.dataset(a.dir);
    run.finish({{"horizon_days", a.horizon_days},
                {"individuals", h.individuals},
                {"min_length", h.min_length},
                {"max_length", h.max_length},
                {"bins", bins},
                {"mean_fraction_banned", journeys.empty() ? 0.0 : banned_sum / static_cast<double>(journeys.size())},
                {"all_banned", all_banned},
                {"none_banned", none_banned}});
}

// ---- attrition ----

struct AttritionArgs {
    std::string law = "square";
    double m = 1.0;
    double h = 1.0;
    double hate0 = 1.0;
    double moderators0 = 1.0;
    std::optional<double> dt;
    std::optional<double> horizon;
    std::string trajectory_csv;

    bool sweep = false;
    at::SweepAxis efficiency{1.0, 1.0, 1};
    at::SweepAxis force{1.0, 1.0, 1};
    bool no_confirm = false;
    std::string csv;
};

json prediction_json(const at::OutcomePrediction& p) {
    return {{"winner", at::to_string(p.winner)},
            {"threshold_quantity", p.threshold_quantity},
            {"survivor_level", p.survivor_level},
            {"degenerate", p.degenerate}};
}

void run_attrition_single(Run& run, const AttritionArgs& a) {
    const at::Scenario s{at::parse_law(a.law), a.m, a.h, a.hate0, a.moderators0};
    s.validate();
    const auto pred = at::predict_outcome(s);
    double tau = at::characteristic_time(s);
    if (!std::isfinite(tau) || tau <= 0) tau = 1.0;
    const double dt = a.dt.value_or(1e-3 * tau);
    const double horizon = a.horizon.value_or(1e4 * tau);
    if (!(dt > 0) || !(horizon > 0)) throw Error("--dt and --T must be positive");

    at::IntegrateOptions opts;
    const auto traj = at::integrate(s, dt, horizon, opts);
    const auto integrated_winner = at::winner_of(traj.outcome);

    if (!a.trajectory_csv.empty()) {
        auto f = open_for_write(a.trajectory_csv);
        f.precision(17);
        f << "t,H,M\n";
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            f << traj.times[i] << ',' << traj.hate[i] << ',' << traj.moderators[i] << '\n';
        f.close();
        run.output(a.trajectory_csv);
    }

    json params{{"law", at::to_string(s.law)}, {"m", s.m}, {"h", s.h}, {"H0", s.hate0}, {"M0", s.moderators0},
                {"dt", dt}, {"T", horizon}};
    json result = params;
    result["winner"] = at::to_string(pred.winner);
    result["characteristic_time"] = tau;
    result["prediction"] = prediction_json(pred);
    result["integration"] = {{"outcome", at::to_string(traj.outcome)},
                             {"winner", integrated_winner ? json(at::to_string(*integrated_winner)) : json(nullptr)},
                             {"end_time", traj.end_time},
                             {"final_H", traj.final_state.hate},
                             {"final_M", traj.final_state.moderators},
                             {"invariant_drift", traj.invariant_drift},
                             {"steps", traj.steps}};
    if (s.law == at::Law::Ambush) result["containment_capacity"] = at::containment_capacity(s.moderators0, s.m, s.h);
    run.config(params);
    run.finish(result);
}

void run_attrition_sweep(Run& run, const AttritionArgs& a) {
    at::SweepSpec spec;
    spec.law = at::parse_law(a.law);
    spec.h = a.h;
    spec.moderators0 = a.moderators0;
    spec.efficiency_ratio = a.efficiency;
    spec.force_ratio = a.force;
    spec.confirm_numerically = !a.no_confirm;
    const auto res = at::sweep(spec);

    if (!a.csv.empty()) {
        auto f = open_for_write(a.csv);
        f.precision(17);
        f << "efficiency_ratio,force_ratio,boundary,predicted,integrated,confirmed\n";
        for (const auto& c : res.cells) {
            f << c.efficiency_ratio << ',' << c.force_ratio << ','
              << at::analytic_boundary(spec.law, c.force_ratio, spec.moderators0) << ','
              << at::to_string(c.prediction.winner) << ',' << (c.integrated ? at::to_string(*c.integrated) : "") << ','
              << (c.confirmed ? 1 : 0) << '\n';
        }
        f.close();
        run.output(a.csv);
    }

    std::array<std::uint64_t, 3> wins{};
    for (const auto& c : res.cells) ++wins[static_cast<std::size_t>(c.prediction.winner)];
    json params{{"law", at::to_string(spec.law)},
                {"h", spec.h},
                {"M0", spec.moderators0},
                {"efficiency_ratio", {a.efficiency.min, a.efficiency.max, a.efficiency.points}},
                {"force_ratio", {a.force.min, a.force.max, a.force.points}},
                {"confirm", spec.confirm_numerically}};
    json result = params;
    result["cells"] = res.cells.size();
    result["predicted"] = {{"Moderators", wins[0]}, {"Hate", wins[1]}, {"Stalemate", wins[2]}};
    result["disagreements"] = res.disagreements;
    run.config(params);
    run.finish(result);
}

// ---- simulate ----

struct SimulateArgs {
    std::string dir;
    std::string policy;
    std::size_t budget = 1;
    std::size_t ticks = 10;
    std::size_t delay = 0;
    double bypass_prob = 0.5;
    std::size_t relink_window = 1;
    std::vector<std::string> platforms;
    std::size_t majors_k = 3;
    std::size_t compare_seeds = 0;
    std::string csv;
};

json tick_json(const TickRecord& t) {
    return {{"tick", t.tick},
            {"active_hate_nodes", t.active_hate_nodes},
            {"reach_communities", t.reach_communities},
            {"reach_members", t.reach_members},
            {"removals", t.removals},
            {"bypasses_created", t.bypasses_created}};
}

void run_simulate(Run& run, const SimulateArgs& a) {
    const auto ds = load_dataset(a.dir);
    const auto& g = ds.graph;

    std::vector<PlatformId> majors;
    if (!a.platforms.empty()) {
        for (const auto& p : a.platforms) majors.emplace_back(p);
    } else {
        majors = major_platforms(g, a.majors_k);
    }
    json major_names = json::array();
    for (const auto& p : majors) major_names.push_back(p.name());

    auto make = [&](bool adaptive) {
        ModerationPolicy p;
        if (adaptive) {
            p.strategy = AdaptiveSystemWide{};
        } else {
            p.strategy = MajorPlatformsOnly{majors};
        }
        p.budget_per_tick = a.budget;
        p.detection_delay_ticks = a.delay;
        return p;
    };
    const AdaptationRule rule{a.bypass_prob, a.relink_window};
    const std::uint64_t seed = run.globals().seed;

    json params{{"policy", a.policy},         {"budget", a.budget},
                {"ticks", a.ticks},           {"delay", a.delay},
                {"bypass_probability", a.bypass_prob}, {"relink_window", a.relink_window},
                {"majors", major_names},      {"seed", seed},
                {"compare_seeds", a.compare_seeds}};
    json result = params;

    if (a.compare_seeds > 0) {
        const std::vector<ModerationPolicy> policies{make(false), make(true)};
        std::vector<std::uint64_t> seeds(a.compare_seeds);
        std::iota(seeds.begin(), seeds.end(), seed);
        const auto cmp = compare_strategies(g, policies, rule, a.ticks, seeds);
        json pols = json::array();
        for (const auto& p : cmp.policies) {
            pols.push_back({{"label", p.label}, {"mean", p.mean}, {"stddev", p.stddev}, {"min", p.min},
                            {"max", p.max}, {"residuals", p.residuals}});
        }
        json ranking = json::array();
        for (auto i : cmp.ranking) ranking.push_back(cmp.policies[i].label);
        result["comparison"] = {{"policies", pols}, {"le_fraction", cmp.le_fraction}, {"ranking", ranking}};
        for (auto s : seeds) run.seed(s);
        if (!a.csv.empty()) {
            auto f = open_for_write(a.csv);
            f << "seed";
            for (const auto& p : cmp.policies) f << ',' << p.label;
            f << '\n';
            f.precision(17);
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                f << seeds[i];
                for (const auto& p : cmp.policies) f << ',' << p.residuals[i];
                f << '\n';
            }
            f.close();
            run.output(a.csv);
        }
    } else {
        const auto policy = make(a.policy == "adaptive");
        const auto o = run_sim(g, policy, rule, a.ticks, seed);
        run.seed(seed);
        result["label"] = policy.label();
        result["initial"] = tick_json(o.initial);
        result["final"] = tick_json(o.ticks.empty() ? o.initial : o.ticks.back());
        result["total_removals"] = o.total_removals;
        result["total_bypasses"] = o.total_bypasses;
        result["residual_fraction"] = o.residual_fraction;
        if (!a.csv.empty()) {
            auto f = open_for_write(a.csv);
            f << "tick,active_hate_nodes,reach_communities,reach_members,removals,bypasses_created\n";
            auto row = [&](const TickRecord& t) {
                f << t.tick << ',' << t.active_hate_nodes << ',' << t.reach_communities << ',' << t.reach_members
                  << ',' << t.removals << ',' << t.bypasses_created << '\n';
            };
            row(o.initial);
            for (const auto& t : o.ticks) row(t);
            f.close();
            run.output(a.csv);
        }
    }
    run.config(params);
    run.dataset(a.dir);
    run.finish(result);
}

// ---- export-gexf ----

struct ExportArgs {
    std::string dir;
    std::optional<Timestamp> at;
    bool aggregate = false;
    std::string out;
    std::string csv;
};

void run_export(Run& run, const ExportArgs& a) {
    const auto ds = load_dataset(a.dir);
    const auto& g = ds.graph;
    const Timestamp as_of = a.at.value_or(default_as_of(g));
    const auto snap = g.snapshot_at(as_of);

    json result{{"as_of", as_of}, {"aggregate", a.aggregate}, {"out", a.out}};
    auto f = open_for_write(a.out);
    std::optional<std::ofstream> csv;
    if (!a.csv.empty()) csv = open_for_write(a.csv);
    if (a.aggregate) {
        const auto agg = aggregate_by_platform(snap);
        write_gexf(f, agg);
        if (csv) write_edge_csv(*csv, agg);
        result["nodes"] = agg.labels.size();
        result["edges"] = agg.edges.size();
    } else {
        write_gexf(f, snap);
        if (csv) write_edge_csv(*csv, snap);
        result["nodes"] = g.node_count();
        result["edges"] = snap.edges().size();
    }
    f.close();
    if (!f) throw Error("write failed: " + a.out);
    run.output(a.out);
    if (csv) {
        csv->close();
        run.output(a.csv);
    }
    run.config({{"as_of", as_of}, {"aggregate", a.aggregate}});
    run.dataset(a.dir);
    run.finish(result, fs::path(a.out + ".manifest.json"));
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Temporal toolkit for cross-platform hate-community link ecosystems", "ecosim"};
    app.set_version_flag("--version", ECOSIM_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--json", g.json_path, "Write the JSON result to this file instead of stdout");
    app.add_flag("--quiet", g.quiet, "Suppress stdout output");

    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "Generate a synthetic ecosystem dataset");
    c_gen->add_option("--config", gen.config, "Generator config (JSON)")->required()->check(CLI::ExistingFile);
    c_gen->add_option("--out", gen.out, "Output dataset directory")->required();

    ValidateArgs val;
    auto* c_val = app.add_subcommand("validate", "Check a dataset for integrity and label consistency");
    c_val->add_option("dir", val.dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_val->add_flag("--strict-labels", val.strict_labels, "Fail when node classes disagree with post labels");

    AnalyzeArgs an;
    auto* c_an = app.add_subcommand("analyze", "Structural and temporal metrics");
    c_an->add_option("dir", an.dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_an->add_option("--metric", an.metric)
        ->required()
        ->check(CLI::IsMember({"components", "reach", "growth", "connectivity", "bypass", "shock"}));
    c_an->add_option("--at", an.at, "Snapshot time (epoch seconds); default end of range");
    c_an->add_option("--samples", an.samples, "components: evenly spaced sample times ending at --at");
    c_an->add_flag("--members", an.members, "components: list member ids");
    c_an->add_option("--bin", an.bin_seconds, "growth/shock: bin width in seconds")->check(CLI::PositiveNumber);
    c_an->add_option("--window-days", an.window_days, "bypass: return window in days")->check(CLI::NonNegativeNumber);
    c_an->add_option("--limit", an.limit, "bypass: motifs listed in the JSON");
    c_an->add_option("--category", an.category, "shock: Antisemitic | Islamophobic | Other");
    c_an->add_option("--event-t", an.event_t, "shock: event time (epoch seconds)");
    c_an->add_option("--pre", an.pre, "shock: bins before the event")->check(CLI::PositiveNumber);
    c_an->add_option("--post", an.post, "shock: bins from the event on")->check(CLI::PositiveNumber);
    c_an->add_option("--csv", an.csv, "Also write a CSV table");

    PathwaysArgs pw;
    auto* c_pw = app.add_subcommand("pathways", "Journey-length histogram");
    c_pw->add_option("dir", pw.dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_pw->add_option("--horizon-days", pw.horizon_days)->check(CLI::NonNegativeNumber);
    c_pw->add_option("--csv", pw.csv, "Per-individual timeline CSV");

    AttritionArgs atr;
    auto* c_at = app.add_subcommand("attrition", "Moderator/hate attrition models");
    c_at->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
    c_at->add_option("--law", atr.law)->check(CLI::IsMember({"square", "linear", "ambush"}));
    c_at->add_option("--m", atr.m, "Moderator efficiency");
    c_at->add_option("--h", atr.h, "Hate efficiency");
    c_at->add_option("--H0", atr.hate0, "Initial hate activity");
    c_at->add_option("--M0", atr.moderators0, "Initial moderator activity");
    c_at->add_option("--dt", atr.dt, "RK4 step (default 1e-3 of the characteristic time)");
    c_at->add_option("--T", atr.horizon, "Horizon (default 1e4 characteristic times)");
    c_at->add_option("--trajectory-csv", atr.trajectory_csv);
    c_at->add_flag("--sweep", atr.sweep, "Sweep m/h x H0/M0 instead of a single run");
    c_at->add_option("--ratio-min", atr.efficiency.min);
    c_at->add_option("--ratio-max", atr.efficiency.max);
    c_at->add_option("--ratio-points", atr.efficiency.points)->check(CLI::PositiveNumber);
    c_at->add_option("--force-min", atr.force.min);
    c_at->add_option("--force-max", atr.force.max);
    c_at->add_option("--force-points", atr.force.points)->check(CLI::PositiveNumber);
    c_at->add_flag("--no-confirm", atr.no_confirm, "Sweep: skip numerical confirmation");
    c_at->add_option("--csv", atr.csv, "Sweep grid CSV");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Moderation strategy simulation");
    c_sim->add_option("dir", sim.dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_sim->add_option("--policy", sim.policy)->required()->check(CLI::IsMember({"majors", "adaptive"}));
    c_sim->add_option("--budget", sim.budget, "Removals per tick")->required();
    c_sim->add_option("--ticks", sim.ticks)->required();
    c_sim->add_option("--delay", sim.delay, "Detection delay in ticks for respawned communities");
    c_sim->add_option("--bypass-prob", sim.bypass_prob)->check(CLI::Range(0.0, 1.0));
    c_sim->add_option("--relink-window", sim.relink_window)->check(CLI::PositiveNumber);
    c_sim->add_option("--platforms", sim.platforms, "majors: platforms in scope")->delimiter(',');
    c_sim->add_option("--majors-k", sim.majors_k, "majors: number of largest platforms when --platforms is absent")
        ->check(CLI::PositiveNumber);
    c_sim->add_option("--compare-seeds", sim.compare_seeds, "Compare majors vs adaptive over this many seeds");
    c_sim->add_option("--csv", sim.csv, "Per-tick trace CSV (or per-seed residuals with --compare-seeds)");

    ExportArgs ex;
    auto* c_ex = app.add_subcommand("export-gexf", "Write a snapshot as GEXF");
    c_ex->add_option("dir", ex.dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
    c_ex->add_option("--at", ex.at, "Snapshot time (epoch seconds); default end of range");
    c_ex->add_flag("--aggregate", ex.aggregate, "Platform-level aggregate instead of communities");
    c_ex->add_option("--out", ex.out, "GEXF path")->required();
    c_ex->add_option("--csv", ex.csv, "Also write an edge list CSV");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help / --version
            if (dynamic_cast<const CLI::CallForVersion*>(&e)) {
                out << e.what() << "\n";
            } else {
                const auto subs = app.get_subcommands();
                out << (subs.empty() ? app.help() : subs.back()->help());
            }
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.back()->help());
        return kExitUsage;
    }
    g.seed_given = seed_opt->count() > 0;

    Run run(args, g, out, err);
    try {
        if (c_gen->parsed()) {
            run_generate(run, gen);
        } else if (c_val->parsed()) {
            return run_validate(run, val, err);
        } else if (c_an->parsed()) {
            run_analyze(run, an);
        } else if (c_pw->parsed()) {
            run_pathways(run, pw);
        } else if (c_at->parsed()) {
            if (atr.sweep) {
                run_attrition_sweep(run, atr);
            } else {
                run_attrition_single(run, atr);
            }
        } else if (c_sim->parsed()) {
            run_simulate(run, sim);
        } else if (c_ex->parsed()) {
            run_export(run, ex);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitOk;
}

} // namespace ecosim::cli
