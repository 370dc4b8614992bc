#include "ecosim/attrition.hpp"

#include "ecosim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ecosim::attrition {

std::string_view to_string(Law law) {
    switch (law) {
    case Law::Square: return "square";
    case Law::Linear: return "linear";
    case Law::Ambush: return "ambush";
    }
    return "?";
}

Law parse_law(std::string_view s) {
    if (s == "square") return Law::Square;
    if (s == "linear") return Law::Linear;
    if (s == "ambush") return Law::Ambush;
    throw UnsupportedLaw(std::string(s));
}

std::string_view to_string(Winner w) {
    switch (w) {
    case Winner::Moderators: return "Moderators";
    case Winner::Hate: return "Hate";
    case Winner::Stalemate: return "Stalemate";
    }
    return "?";
}

std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::HateExtinct: return "HateExtinct";
    case Outcome::ModeratorsExtinct: return "ModeratorsExtinct";
    case Outcome::Stalemate: return "Stalemate";
    case Outcome::Undetermined: return "Undetermined";
    }
    return "?";
}

std::optional<Winner> winner_of(Outcome o) {
    switch (o) {
    case Outcome::HateExtinct: return Winner::Moderators;
    case Outcome::ModeratorsExtinct: return Winner::Hate;
    case Outcome::Stalemate: return Winner::Stalemate;
    case Outcome::Undetermined: return std::nullopt;
    }
    return std::nullopt;
}

void Scenario::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto nonnegative = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!positive(m) || !positive(h)) throw Error("fighting efficiencies m and h must be positive");
    if (!nonnegative(hate0) || !nonnegative(moderators0)) throw Error("initial activities must be >= 0");
}

State derivative(const Scenario& s, State x) {
    switch (s.law) {
    case Law::Square: return {-s.m * x.moderators, -s.h * x.hate};
    case Law::Linear: return {-s.m * x.moderators * x.hate, -s.h * x.hate * x.moderators};
    case Law::Ambush: return {-s.m * x.moderators * x.hate, -s.h * x.hate};
    }
    return {};
}

double conserved_quantity(const Scenario& s, State x) {
    switch (s.law) {
    case Law::Square: return s.h * x.hate * x.hate - s.m * x.moderators * x.moderators;
    case Law::Linear: return s.h * x.hate - s.m * x.moderators;
    case Law::Ambush: return x.hate - s.m / (2.0 * s.h) * x.moderators * x.moderators;
    }
    return 0.0;
}

double invariant_scale(const Scenario& s) {
    double a = 0.0;
    double b = 0.0;
    switch (s.law) {
    case Law::Square:
        a = s.h * s.hate0 * s.hate0;
        b = s.m * s.moderators0 * s.moderators0;
        break;
    case Law::Linear:
        a = s.h * s.hate0;
        b = s.m * s.moderators0;
        break;
    case Law::Ambush:
        a = s.hate0;
        b = s.m / (2.0 * s.h) * s.moderators0 * s.moderators0;
        break;
    }
    const double scale = std::max(a, b);
    return scale > 0.0 ? scale : 1.0;
}

double characteristic_time(const Scenario& s) {
    double rate = 0.0;
    switch (s.law) {
    case Law::Square: rate = std::sqrt(s.m * s.h); break;
    case Law::Linear: rate = std::max(s.m * s.moderators0, s.h * s.hate0); break;
    case Law::Ambush:
        rate = s.m * s.moderators0;
        if (s.moderators0 > 0.0) rate = std::max(rate, s.h * s.hate0 / s.moderators0);
        break;
    }
    return rate > 0.0 ? 1.0 / rate : 1.0;
}

OutcomePrediction predict_outcome(const Scenario& s) {
    s.validate();
    OutcomePrediction p;
    p.threshold_quantity = conserved_quantity(s, s.initial());
    p.degenerate = s.hate0 == 0.0 || s.moderators0 == 0.0;
    if (p.degenerate) {
        if (s.hate0 == 0.0 && s.moderators0 == 0.0) {
            p.winner = Winner::Stalemate;
        } else if (s.hate0 == 0.0) {
            p.winner = Winner::Moderators;
            p.survivor_level = s.moderators0;
        } else {
            p.winner = Winner::Hate;
            p.survivor_level = s.hate0;
        }
        return p;
    }

    const double q = p.threshold_quantity;
    if (q == 0.0) {
        p.winner = Winner::Stalemate;
        return p;
    }
    p.winner = q < 0.0 ? Winner::Moderators : Winner::Hate;
    switch (s.law) {
    case Law::Square:
        // At H = 0: -m M^2 = q.  At M = 0: h H^2 = q.
        p.survivor_level = q < 0.0 ? std::sqrt(-q / s.m) : std::sqrt(q / s.h);
        break;
    case Law::Linear:
        p.survivor_level = q < 0.0 ? -q / s.m : q / s.h;
        break;
    case Law::Ambush:
        // At H = 0: M^2 = -2 h q / m.  At M = 0: H = q.
        p.survivor_level = q < 0.0 ? std::sqrt(-2.0 * s.h * q / s.m) : q;
        break;
    }
    return p;
}

double containment_capacity(double moderators0, double m, double h) {
    if (!(moderators0 >= 0.0) || !(m > 0.0) || !(h > 0.0)) {
        throw Error("containment capacity needs M0 >= 0 and m, h > 0");
    }
    return m / (2.0 * h) * moderators0 * moderators0;
}

std::optional<double> square_law_extinction_time(const Scenario& s) {
    if (s.law != Law::Square) throw UnsupportedLaw("extinction time has a closed form only for the square law");
    s.validate();
    if (s.hate0 == 0.0 || s.moderators0 == 0.0) return std::nullopt;
    const double q = conserved_quantity(s, s.initial());
    if (q == 0.0) return std::nullopt;
    const double k = std::sqrt(s.m * s.h);
    // H(t) = 0 where tanh(kt) = H0 / (M0 sqrt(m/h)); M(t) = 0 where tanh(kt) = M0 / (H0 sqrt(h/m)).
    const double ratio = q < 0.0 ? s.hate0 / (s.moderators0 * std::sqrt(s.m / s.h))
                                 : s.moderators0 / (s.hate0 * std::sqrt(s.h / s.m));
    return std::atanh(ratio) / k;
}

State closed_form(const Scenario& s, double t) {
    if (s.law != Law::Square) throw UnsupportedLaw(std::string(to_string(s.law)) + " has no closed-form time course");
    s.validate();
    if (t < 0.0) throw std::invalid_argument("closed_form: t must be >= 0");
    if (auto t_ext = square_law_extinction_time(s); t_ext && t > *t_ext) throw PastExtinction(*t_ext);
    if (s.hate0 == 0.0 || s.moderators0 == 0.0) {
        // Degenerate: the surviving side is untouched.
        return s.initial();
    }
    const double k = std::sqrt(s.m * s.h);
    const double c = std::cosh(k * t);
    const double sh = std::sinh(k * t);
    return {s.hate0 * c - s.moderators0 * std::sqrt(s.m / s.h) * sh,
            s.moderators0 * c - s.hate0 * std::sqrt(s.h / s.m) * sh};
}

namespace {

State rk4_step(const Scenario& s, State x, double dt) {
    auto add = [](State a, State b, double f) { return State{a.hate + f * b.hate, a.moderators + f * b.moderators}; };
    const State k1 = derivative(s, x);
    const State k2 = derivative(s, add(x, k1, dt / 2.0));
    const State k3 = derivative(s, add(x, k2, dt / 2.0));
    const State k4 = derivative(s, add(x, k3, dt));
    return {x.hate + dt / 6.0 * (k1.hate + 2.0 * k2.hate + 2.0 * k3.hate + k4.hate),
            x.moderators + dt / 6.0 * (k1.moderators + 2.0 * k2.moderators + 2.0 * k3.moderators + k4.moderators)};
}

bool crossed(State x) { return x.hate <= 0.0 || x.moderators <= 0.0; }

} // namespace

Trajectory integrate(const Scenario& s, double dt, double horizon, const IntegrateOptions& opts) {
    s.validate();
    if (!(dt > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("integrate: dt and horizon must be positive");

    Trajectory tr;
    State x = s.initial();
    const double q0 = conserved_quantity(s, x);
    const double scale = invariant_scale(s);
    const double suggested = 1e-3 * characteristic_time(s);

    auto record = [&](double t, State v) {
        tr.times.push_back(t);
        tr.hate.push_back(v.hate);
        tr.moderators.push_back(v.moderators);
    };
    auto note_drift = [&](State v) {
        tr.invariant_drift = std::max(tr.invariant_drift, std::abs(conserved_quantity(s, v) - q0) / scale);
        if (tr.invariant_drift > opts.max_drift) throw StepTooLarge(tr.invariant_drift, suggested);
    };
    auto finish = [&](double t, State v, Outcome o) {
        tr.final_state = v;
        tr.end_time = t;
        tr.outcome = o;
        if (tr.times.empty() || tr.times.back() != t) record(t, v);
        return tr;
    };

    record(0.0, x);
    if (x.hate == 0.0 && x.moderators == 0.0) return finish(0.0, x, Outcome::Stalemate);
    if (x.hate == 0.0) return finish(0.0, x, Outcome::HateExtinct);
    if (x.moderators == 0.0) return finish(0.0, x, Outcome::ModeratorsExtinct);

    const bool hate_asymptotic = s.law != Law::Square;
    const bool mods_asymptotic = s.law == Law::Linear;
    const auto total_steps = static_cast<std::size_t>(std::ceil(horizon / dt));
    const std::size_t stride = std::max<std::size_t>(1, total_steps / std::max<std::size_t>(1, opts.max_samples - 1));

    double t = 0.0;
    while (t < horizon) {
        const double step = std::min(dt, horizon - t);
        State next = rk4_step(s, x, step);
        ++tr.steps;

        if (crossed(next)) {
            double lo = 0.0;
            double hi = step;
            while (hi - lo > opts.bisection_tolerance * std::max(t + hi, std::numeric_limits<double>::min())) {
                const double mid = 0.5 * (lo + hi);
                if (crossed(rk4_step(s, x, mid))) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if (lo > 0.0) note_drift(rk4_step(s, x, lo));
            State end = rk4_step(s, x, hi);
            const bool hate_gone = end.hate <= 0.0;
            const bool mods_gone = end.moderators <= 0.0;
            end.hate = std::max(end.hate, 0.0);
            end.moderators = std::max(end.moderators, 0.0);
            if (hate_gone) end.hate = 0.0;
            if (mods_gone) end.moderators = 0.0;
            const Outcome o = hate_gone && mods_gone ? Outcome::Stalemate
                              : hate_gone            ? Outcome::HateExtinct
                                                     : Outcome::ModeratorsExtinct;
            return finish(t + hi, end, o);
        }

        x = next;
        t += step;
        note_drift(x);
        if (tr.steps % stride == 0) record(t, x);

        const bool hate_low = hate_asymptotic && x.hate < opts.asymptotic_fraction * s.hate0;
        const bool mods_low = mods_asymptotic && x.moderators < opts.asymptotic_fraction * s.moderators0;
        if (hate_low && (mods_low || (s.law == Law::Ambush && x.moderators < opts.asymptotic_fraction * s.moderators0))) {
            return finish(t, x, Outcome::Stalemate);
        }
        if (hate_low) return finish(t, x, Outcome::HateExtinct);
        if (mods_low) return finish(t, x, Outcome::ModeratorsExtinct);
    }
    return finish(t, x, Outcome::Undetermined);
}

std::vector<double> SweepAxis::values() const {
    if (points == 0) throw Error("sweep axis needs at least one point");
    if (points == 1) return {min};
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        v[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return v;
}

double analytic_boundary(Law law, double force_ratio, double moderators0) {
    switch (law) {
    case Law::Square: return force_ratio * force_ratio;
    case Law::Linear: return force_ratio;
    case Law::Ambush: return 2.0 * force_ratio / moderators0;  // H0 = (m / 2h) M0^2
    }
    return 0.0;
}

SweepResult sweep(const SweepSpec& spec) {
    SweepResult result;
    result.spec = spec;
    const auto ratios = spec.efficiency_ratio.values();
    const auto forces = spec.force_ratio.values();
    for (double force : forces) {
        for (double ratio : ratios) {
            SweepCell cell;
            cell.efficiency_ratio = ratio;
            cell.force_ratio = force;
            const Scenario s{spec.law, ratio * spec.h, spec.h, force * spec.moderators0, spec.moderators0};
            cell.prediction = predict_outcome(s);
            if (spec.confirm_numerically) {
                const double tau = characteristic_time(s);
                const auto tr = integrate(s, spec.dt_fraction * tau, spec.horizon_multiple * tau);
                cell.integrated = tr.outcome;
                const auto w = winner_of(tr.outcome);
                if (cell.prediction.winner == Winner::Stalemate) {
                    cell.confirmed = !w || *w == Winner::Stalemate;
                } else {
                    cell.confirmed = w && *w == cell.prediction.winner;
                    if (w && *w != cell.prediction.winner) result.disagreements.push_back(result.cells.size());
                }
            }
            result.cells.push_back(cell);
        }
    }
    return result;
}

} // namespace ecosim::attrition
