#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace ecosim::attrition {

// Moderator activity M(t) against hate activity H(t):
//   Square: dH/dt = -m M,     dM/dt = -h H
//   Linear: dH/dt = -m M H,   dM/dt = -h H M
//   Ambush: dH/dt = -m M H,   dM/dt = -h H
enum class Law { Square, Linear, Ambush };

std::string_view to_string(Law law);
Law parse_law(std::string_view s);  // "square" | "linear" | "ambush"

struct State {
    double hate = 0.0;
    double moderators = 0.0;
};

struct Scenario {
    Law law = Law::Square;
    double m = 1.0;  // moderator fighting efficiency
    double h = 1.0;  // hate fighting efficiency
    double hate0 = 0.0;
    double moderators0 = 0.0;

    void validate() const;  // m, h > 0 and finite; populations >= 0
    State initial() const { return {hate0, moderators0}; }
};

State derivative(const Scenario& s, State x);

// Square: h H^2 - m M^2.  Linear: h H - m M.  Ambush: H - (m / 2h) M^2.
double conserved_quantity(const Scenario& s, State x);

// Magnitude of the initial terms of the conserved quantity; drift is
// reported relative to this.
double invariant_scale(const Scenario& s);

// Square: 1/sqrt(m h). Linear: 1/max(m M0, h H0). Ambush: 1/max(m M0, h H0 / M0).
double characteristic_time(const Scenario& s);

enum class Winner { Moderators, Hate, Stalemate };
std::string_view to_string(Winner w);

struct OutcomePrediction {
    Winner winner = Winner::Stalemate;
    double threshold_quantity = 0.0;  // conserved quantity at t = 0
    double survivor_level = 0.0;      // terminal level of the winning side; 0 at stalemate
    bool degenerate = false;          // H0 == 0 or M0 == 0
};

OutcomePrediction predict_outcome(const Scenario& s);

// Largest hate activity an ambushing moderator force M0 holds at stalemate.
double containment_capacity(double moderators0, double m, double h);

// Square law only. Throws UnsupportedLaw for other laws, PastExtinction for
// t beyond the first zero of H or M.
State closed_form(const Scenario& s, double t);

// First time H or M reaches zero under the square law; nullopt at stalemate
// or for degenerate scenarios.
std::optional<double> square_law_extinction_time(const Scenario& s);

enum class Outcome { HateExtinct, ModeratorsExtinct, Stalemate, Undetermined };
std::string_view to_string(Outcome o);
std::optional<Winner> winner_of(Outcome o);

struct IntegrateOptions {
    double max_drift = 1e-3;             // larger drift raises StepTooLarge
    double asymptotic_fraction = 1e-9;   // loser below this share of its start is extinct
    double bisection_tolerance = 1e-10;  // relative, on the crossing time
    std::size_t max_samples = 10001;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> hate;
    std::vector<double> moderators;
    double invariant_drift = 0.0;  // max |Q(t) - Q(0)| / invariant_scale, before extinction
    Outcome outcome = Outcome::Undetermined;
    double end_time = 0.0;         // extinction/decision time, or the horizon
    State final_state;
    std::size_t steps = 0;
};

// Classical RK4 with fixed step. A population crossing zero is located by
// bisection on the last step, clamped to zero, and integration stops.
Trajectory integrate(const Scenario& s, double dt, double horizon, const IntegrateOptions& opts = {});

// ---- parameter sweeps ----

struct SweepAxis {
    double min = 1.0;
    double max = 1.0;
    std::size_t points = 1;
    std::vector<double> values() const;  // evenly spaced, inclusive
};

struct SweepSpec {
    Law law = Law::Square;
    double h = 1.0;
    double moderators0 = 1.0;
    SweepAxis efficiency_ratio;  // m / h
    SweepAxis force_ratio;       // H0 / M0
    bool confirm_numerically = true;
    double dt_fraction = 1e-2;        // dt = dt_fraction * characteristic_time
    double horizon_multiple = 5e3;    // horizon = horizon_multiple * characteristic_time
};

struct SweepCell {
    double efficiency_ratio = 0.0;
    double force_ratio = 0.0;
    OutcomePrediction prediction;
    std::optional<Outcome> integrated;
    bool confirmed = false;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepCell> cells;            // row-major: force ratio outer, efficiency ratio inner
    std::vector<std::size_t> disagreements;  // cells where integration decided a different winner
};

SweepResult sweep(const SweepSpec& spec);

// m/h at which the winner flips for a given H0/M0 (and M0 for the ambush law).
double analytic_boundary(Law law, double force_ratio, double moderators0);

} // namespace ecosim::attrition
