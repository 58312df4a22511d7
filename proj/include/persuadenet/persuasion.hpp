#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "persuadenet/benefit.hpp"
#include "persuadenet/errors.hpp"
#include "persuadenet/game.hpp"
#include "persuadenet/graph.hpp"

namespace persuadenet {

inline constexpr int kDefaultBeliefGrid = 2001;
inline constexpr double kPolicyClassTol = 1e-9;
inline constexpr double kPolicyClampTol = 1e-12;
inline constexpr double kSignDeadBand = 1e-9;

/// Signaling policy: p_h is the chance the high state is reported as high,
/// p_l the chance the low state is reported as low.
struct Policy {
    double p_h;
    double p_l;
};

inline void require_policy(const Policy& pol) {
    if (!(pol.p_h >= 0.0 && pol.p_h <= 1.0 && pol.p_l >= 0.0 && pol.p_l <= 1.0))
        throw ConfigError("policy probabilities must lie in [0,1]");
}

enum class Objective { AggregateEffort, ProbabilitySafe };
enum class Attitude { Optimistic, Pessimistic };

/// Which government objective is being reduced; the saturation regime only
/// matters for the optimistic safety-probability case.
struct ObjectiveSpec {
    Objective objective;
    Attitude attitude;
    SigmaRegime regime = SigmaRegime::ToZero;
};

struct Posterior {
    Belief mu;
    double probability;
    bool used;  // false when the signal has zero probability
};

/// Bayes update of the prior on the high state after observing a signal.
inline Posterior posterior(const Policy& pol, Belief mu0, InfectionState signal) {
    require_policy(pol);
    require_belief(mu0);
    double high_mass, prob;
    if (signal == InfectionState::High) {
        high_mass = mu0 * pol.p_h;
        prob = high_mass + (1.0 - mu0) * (1.0 - pol.p_l);
    } else {
        high_mass = mu0 * (1.0 - pol.p_h);
        prob = high_mass + (1.0 - mu0) * pol.p_l;
    }
    if (prob == 0.0) return Posterior{mu0, 0.0, false};
    return Posterior{high_mass / prob, prob, true};
}

/// Government objective as a function of the public belief alone, after the
/// graph dependence is factored into a constant. Grid sampled on [0,1].
struct ReducedObjective {
    std::vector<double> grid;
    std::vector<double> values;
    ObjectiveSpec provenance;
    int n = 0;
    std::optional<double> alpha;        // filled when the case uses it
    std::optional<double> m_const;      // filled when the case uses it
    std::optional<double> alpha_w;      // filled when the case uses it
};

/// Piecewise-linear read of the sampled objective.
inline double evaluate(const ReducedObjective& ro, Belief mu) {
    require_belief(mu);
    const auto& g = ro.grid;
    const auto it = std::upper_bound(g.begin(), g.end(), mu);
    if (it == g.begin()) return ro.values.front();
    if (it == g.end()) return ro.values.back();
    const std::size_t j = static_cast<std::size_t>(it - g.begin());
    const double t = (mu - g[j - 1]) / (g[j] - g[j - 1]);
    return ro.values[j - 1] + t * (ro.values[j] - ro.values[j - 1]);
}

/// The four-case reduction: aggregate effort scales e*(mu) by the (weighted)
/// independence constant or the effort-system constant; safety probability is
/// the mixed benefit at e*(mu), with a weighted-independence correction in
/// the saturating optimistic regime.
inline ReducedObjective reduced_objective(const ObjectiveSpec& spec, const Graph& g,
                                          const GameParams& gp,
                                          int grid_size = kDefaultBeliefGrid) {
    if (grid_size < 2) throw ConfigError("belief grid needs at least 2 points");
    ReducedObjective ro;
    ro.provenance = spec;
    ro.n = g.node_count();
    double scale = 1.0;
    double shift_rate = 0.0;  // coefficient on e*(mu) added to the benefit term
    if (spec.objective == Objective::AggregateEffort) {
        if (spec.attitude == Attitude::Optimistic) {
            ro.alpha = static_cast<double>(independence_number(g));
            scale = *ro.alpha;
        } else {
            ro.m_const = network_constant_m(g);
            scale = *ro.m_const;
        }
    } else if (spec.attitude == Attitude::Optimistic && spec.regime == SigmaRegime::ToOne) {
        ro.alpha_w = weighted_max_independent_set(g, degree_plus_one_weights(g)).second;
        shift_rate = gp.cost * (*ro.alpha_w / static_cast<double>(ro.n) - 1.0);
    }
    ro.grid.reserve(static_cast<std::size_t>(grid_size));
    ro.values.reserve(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        const double mu = static_cast<double>(i) / (grid_size - 1);
        const double e = unilateral_effort(gp, mu);
        double v;
        if (spec.objective == Objective::AggregateEffort)
            v = scale * e;
        else
            v = mixed_benefit(gp.benefit, mu, e, 0) + shift_rate * e;
        ro.grid.push_back(mu);
        ro.values.push_back(v);
    }
    return ro;
}

/// Upper concave envelope of the sampled objective, stored as hull vertices.
struct ConcaveEnvelope {
    std::vector<double> mu;
    std::vector<double> value;
};

inline double evaluate(const ConcaveEnvelope& env, Belief mu) {
    require_belief(mu);
    const auto it = std::upper_bound(env.mu.begin(), env.mu.end(), mu);
    if (it == env.mu.begin()) return env.value.front();
    if (it == env.mu.end()) return env.value.back();
    const std::size_t j = static_cast<std::size_t>(it - env.mu.begin());
    const double t = (mu - env.mu[j - 1]) / (env.mu[j] - env.mu[j - 1]);
    return env.value[j - 1] + t * (env.value[j] - env.value[j - 1]);
}

/// Monotone-chain upper hull over the grid points; vertices are grid points,
/// so the envelope touches the objective at every vertex.
inline ConcaveEnvelope concave_envelope(const ReducedObjective& ro) {
    const std::vector<double>& xs = ro.grid;
    const std::vector<double>& ys = ro.values;
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            const double cross =
                (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if (cross >= 0.0)
                hull.pop_back();  // middle vertex not strictly above the chord
            else
                break;
        }
        hull.push_back(i);
    }
    ConcaveEnvelope env;
    env.mu.reserve(hull.size());
    env.value.reserve(hull.size());
    for (std::size_t i : hull) {
        env.mu.push_back(xs[i]);
        env.value.push_back(ys[i]);
    }
    return env;
}

struct OptimalPolicyResult {
    Policy policy;
    double value;
    Belief mu_l;  // low-signal posterior the hull segment splits to
    Belief mu_h;  // high-signal posterior
};

/// Reads the optimal signal off the hull segment containing the prior: the
/// prior is split between the segment endpoints and the policy is the Bayes
/// inverse of that split. A segment no wider than one grid cell is grid
/// noise, not a real split, and collapses to the uninformative policy (0,1).
inline OptimalPolicyResult optimal_policy(const ReducedObjective& ro, const ConcaveEnvelope& env,
                                          Belief mu0) {
    require_belief(mu0);
    if (mu0 == 0.0 || mu0 == 1.0)
        throw PriorOnBoundary("optimal policy needs an interior prior");
    const auto it = std::upper_bound(env.mu.begin(), env.mu.end(), mu0);
    std::size_t j = static_cast<std::size_t>(it - env.mu.begin());
    if (j == 0) j = 1;
    if (j == env.mu.size()) j = env.mu.size() - 1;
    const double lo = env.mu[j - 1], hi = env.mu[j];
    const double cell = ro.grid.size() > 1 ? ro.grid[1] - ro.grid[0] : 1.0;
    const double value = evaluate(env, mu0);

    double lam, mu_l, mu_h;
    if (hi - lo <= cell * (1.0 + 1e-9)) {
        lam = 1.0;
        mu_l = mu0;
        mu_h = mu0;
    } else {
        mu_l = lo;
        mu_h = hi;
        lam = (mu0 - mu_l) / (mu_h - mu_l);
    }
    double p_h = lam * mu_h / mu0;
    double p_l = (1.0 - lam) * (1.0 - mu_l) / (1.0 - mu0);
    p_h = std::min(1.0, std::max(0.0, p_h));
    p_l = std::min(1.0, std::max(0.0, p_l));
    return OptimalPolicyResult{Policy{p_h, p_l}, value, mu_l, mu_h};
}

/// Signal-probability-weighted objective at the induced posteriors.
inline double expected_objective(const Policy& pol, const ReducedObjective& ro, Belief mu0) {
    double total = 0.0;
    for (InfectionState s : {InfectionState::High, InfectionState::Low}) {
        const Posterior post = posterior(pol, mu0, s);
        if (!post.used) continue;
        total += post.probability * evaluate(ro, post.mu);
    }
    return total;
}

enum class PolicyClass { FullDisclosure, NoDisclosure, Exaggeration, Downplay, Intermediate };

inline const char* to_string(PolicyClass c) {
    switch (c) {
        case PolicyClass::FullDisclosure: return "FullDisclosure";
        case PolicyClass::NoDisclosure: return "NoDisclosure";
        case PolicyClass::Exaggeration: return "Exaggeration";
        case PolicyClass::Downplay: return "Downplay";
        default: return "Intermediate";
    }
}

/// Taxonomy on the (p_l, p_h) square: the two fully revealing corners, the
/// uninformative antidiagonal, the two edges where one state is always
/// reported truthfully, and everything else.
inline PolicyClass classify_policy(const Policy& pol) {
    require_policy(pol);
    const double t = kPolicyClassTol;
    const auto near = [t](double a, double b) { return std::abs(a - b) <= t; };
    if ((near(pol.p_h, 1.0) && near(pol.p_l, 1.0)) || (near(pol.p_h, 0.0) && near(pol.p_l, 0.0)))
        return PolicyClass::FullDisclosure;
    if (std::abs(pol.p_h + pol.p_l - 1.0) <= t) return PolicyClass::NoDisclosure;
    if (near(pol.p_h, 0.0) || near(pol.p_h, 1.0)) return PolicyClass::Exaggeration;
    if (near(pol.p_l, 0.0) || near(pol.p_l, 1.0)) return PolicyClass::Downplay;
    return PolicyClass::Intermediate;
}

/// Sign survey of the disclosure discriminant over a belief grid.
struct CurvatureReport {
    PolicyClass prediction;
    std::string summary;
    std::vector<double> mu;             // interior points actually evaluated
    std::vector<double> r_values;       // filled when the case reads R
    std::vector<double> r_tilde_values; // filled when the case reads R~
    std::vector<double> flip_locations; // midpoints of adjacent sign changes
    int clamped_points = 0;             // grid points with e* = 0, skipped
};

namespace detail {
// -1 / 0 / +1 with a dead band around zero
inline int band_sign(double v) {
    if (v > kSignDeadBand) return 1;
    if (v < -kSignDeadBand) return -1;
    return 0;
}

inline PolicyClass single_discriminant_prediction(const std::vector<double>& mu,
                                                  const std::vector<double>& vals,
                                                  std::vector<double>& flips,
                                                  std::string& note) {
    int prev = 0;
    int transitions = 0;
    bool any_nonzero = false;
    int first = 0, last = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const int s = band_sign(vals[i]);
        if (s == 0) continue;
        any_nonzero = true;
        if (first == 0) first = s;
        if (prev != 0 && s != prev) {
            ++transitions;
            std::size_t k = i;
            while (k > 0 && band_sign(vals[k - 1]) == 0) --k;
            flips.push_back(0.5 * (mu[k - 1] + mu[i]));
        }
        prev = s;
        last = s;
    }
    if (!any_nonzero) {
        note = "discriminant vanishes across the grid; every policy attains the same value";
        return PolicyClass::Intermediate;
    }
    if (transitions == 0) return first > 0 ? PolicyClass::NoDisclosure : PolicyClass::FullDisclosure;
    if (transitions == 1 && first < 0 && last > 0) return PolicyClass::Exaggeration;
    if (transitions == 1 && first > 0 && last < 0) return PolicyClass::Downplay;
    note = "multiple sign changes";
    return PolicyClass::Intermediate;
}
}  // namespace detail

/// Predicts the optimal policy class from discriminant signs alone: positive
/// everywhere means the objective is concave in the belief (no disclosure),
/// negative everywhere convex (full disclosure), and a single flip yields
/// exaggeration (- to +) or downplay (+ to -). The saturating optimistic
/// safety case pairs R on the convex side with R~ on the concave side, so its
/// gates are asymmetric; the summary says which discriminant guarded each
/// side.
inline CurvatureReport curvature_recommendation(const ObjectiveSpec& spec, const GameParams& gp,
                                                const std::vector<double>& mu_grid) {
    CurvatureReport rep;
    const bool mixed_gates = spec.objective == Objective::ProbabilitySafe &&
                             spec.attitude == Attitude::Optimistic &&
                             spec.regime == SigmaRegime::ToOne;
    const bool use_r = spec.objective == Objective::AggregateEffort;
    for (double mu : mu_grid) {
        require_belief(mu);
        if (!(unilateral_effort(gp, mu) > 0.0)) {
            rep.clamped_points += 1;
            continue;
        }
        rep.mu.push_back(mu);
        if (use_r || mixed_gates) rep.r_values.push_back(curvature_R(gp, mu));
        if (!use_r) rep.r_tilde_values.push_back(curvature_R_tilde(gp, mu));
    }
    if (rep.mu.empty()) {
        rep.prediction = PolicyClass::Intermediate;
        rep.summary = "no interior grid points; effort clamps to zero everywhere";
        return rep;
    }

    std::string note;
    if (!mixed_gates) {
        const std::vector<double>& vals = use_r ? rep.r_values : rep.r_tilde_values;
        rep.prediction =
            detail::single_discriminant_prediction(rep.mu, vals, rep.flip_locations, note);
        rep.summary = std::string(use_r ? "R" : "R~") + " read on " +
                      std::to_string(rep.mu.size()) + " interior points: " +
                      to_string(rep.prediction);
    } else {
        // prefix length P of points with R < 0, suffix start S of points with R~ > 0
        const std::size_t npts = rep.mu.size();
        std::size_t neg_prefix = 0;
        while (neg_prefix < npts && detail::band_sign(rep.r_values[neg_prefix]) < 0) ++neg_prefix;
        std::size_t pos_suffix_start = npts;
        while (pos_suffix_start > 0 &&
               detail::band_sign(rep.r_tilde_values[pos_suffix_start - 1]) > 0)
            --pos_suffix_start;
        std::size_t tilde_pos_prefix = 0;
        while (tilde_pos_prefix < npts && detail::band_sign(rep.r_tilde_values[tilde_pos_prefix]) > 0)
            ++tilde_pos_prefix;
        std::size_t r_neg_suffix_start = npts;
        while (r_neg_suffix_start > 0 && detail::band_sign(rep.r_values[r_neg_suffix_start - 1]) < 0)
            --r_neg_suffix_start;

        if (tilde_pos_prefix == npts)
            rep.prediction = PolicyClass::NoDisclosure;
        else if (neg_prefix == npts)
            rep.prediction = PolicyClass::FullDisclosure;
        else if (pos_suffix_start <= neg_prefix && pos_suffix_start > 0) {
            rep.prediction = PolicyClass::Exaggeration;
            rep.flip_locations.push_back(
                0.5 * (rep.mu[pos_suffix_start - 1] + rep.mu[std::min(neg_prefix, npts - 1)]));
        } else if (r_neg_suffix_start <= tilde_pos_prefix && r_neg_suffix_start > 0) {
            rep.prediction = PolicyClass::Downplay;
            rep.flip_locations.push_back(
                0.5 * (rep.mu[r_neg_suffix_start - 1] + rep.mu[std::min(tilde_pos_prefix, npts - 1)]));
        } else {
            rep.prediction = PolicyClass::Intermediate;
        }
        rep.summary = "asymmetric gates (R guards the convex side, R~ the concave side) on " +
                      std::to_string(npts) + " interior points: " + to_string(rep.prediction);
    }
    if (!note.empty()) rep.summary += "; " + note;
    if (rep.clamped_points > 0)
        rep.summary += "; " + std::to_string(rep.clamped_points) +
                       " grid point(s) skipped where effort clamps to zero";
    return rep;
}

/// Belief-free verdict from the Y and Z discriminants on an effort grid.
struct SufficientConditionReport {
    int y_negative = 0, y_zero = 0, y_positive = 0;
    int z_negative = 0, z_zero = 0, z_positive = 0;
    int degenerate_points = 0;  // gap slope under the guard; Y,Z undefined there
    std::string verdict;
};

inline SufficientConditionReport sufficient_condition_report(const GameParams& gp,
                                                             const std::vector<double>& x_grid) {
    SufficientConditionReport rep;
    constexpr double tol = 1e-12;
    for (double x : x_grid) {
        SufficientYZ yz{};
        try {
            yz = sufficient_Y_Z(gp.benefit, x);
        } catch (const DegenerateDerivative&) {
            rep.degenerate_points += 1;
            continue;
        }
        (yz.Y > tol ? rep.y_positive : (yz.Y < -tol ? rep.y_negative : rep.y_zero)) += 1;
        (yz.Z > tol ? rep.z_positive : (yz.Z < -tol ? rep.z_negative : rep.z_zero)) += 1;
    }
    const int evaluated = rep.y_negative + rep.y_zero + rep.y_positive;
    if (evaluated == 0) {
        rep.verdict = "degenerate: the benefit-gap slope vanishes on the whole grid";
    } else if (rep.y_zero + rep.z_zero > 0) {
        rep.verdict = "boundary — fall back to the belief-dependent discriminant";
    } else if (rep.y_negative == evaluated && rep.z_positive == evaluated) {
        rep.verdict = "no information sufficient";
    } else if (rep.y_positive == evaluated && rep.z_negative == evaluated) {
        rep.verdict = "full information sufficient";
    } else {
        rep.verdict = "neither sufficient condition holds";
    }
    if (rep.degenerate_points > 0)
        rep.verdict += " (" + std::to_string(rep.degenerate_points) + " degenerate point(s) skipped)";
    return rep;
}

struct SymmetryCheck {
    double posterior_discrepancy;  // across signal-swapped posterior pairs
    double objective_discrepancy;
};

/// The complemented policy with swapped signal labels carries the same
/// information; both discrepancies are zero up to roundoff.
inline SymmetryCheck symmetry_check(const Policy& pol, const ReducedObjective& ro, Belief mu0) {
    const Policy mirror{1.0 - pol.p_h, 1.0 - pol.p_l};
    double post_disc = 0.0;
    for (InfectionState s : {InfectionState::High, InfectionState::Low}) {
        const InfectionState sc =
            s == InfectionState::High ? InfectionState::Low : InfectionState::High;
        const Posterior a = posterior(pol, mu0, s);
        const Posterior b = posterior(mirror, mu0, sc);
        post_disc = std::max(post_disc, std::abs(a.mu - b.mu));
        post_disc = std::max(post_disc, std::abs(a.probability - b.probability));
    }
    const double obj_disc =
        std::abs(expected_objective(pol, ro, mu0) - expected_objective(mirror, ro, mu0));
    return SymmetryCheck{post_disc, obj_disc};
}

}  // namespace persuadenet
