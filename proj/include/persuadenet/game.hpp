#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persuadenet/benefit.hpp"
#include "persuadenet/errors.hpp"
#include "persuadenet/graph.hpp"
#include "persuadenet/linalg.hpp"

namespace persuadenet {

inline constexpr int kDefaultEnumerationCap = 16;
inline constexpr double kProfileDedupTol = 1e-9;

/// Effort vector over the nodes, remembering the unilateral effort it was
/// computed against. Entries of equilibria are nonnegative; boundary solves
/// attached by distributed_equilibrium may carry negative entries.
struct EffortProfile {
    std::vector<double> x;
    double e_ref = 0.0;
};

inline double equilibrium_tolerance(double e) { return 1e-9 * std::max(1.0, e); }

/// Total effort seen by node k: its own plus its neighbors'.
inline double neighborhood_effort(const Graph& g, const EffortProfile& p, int k) {
    double total = p.x[static_cast<std::size_t>(k)];
    for (std::uint32_t rest = g.neighbors_mask(k); rest;) {
        const int j = std::countr_zero(rest);
        rest &= rest - 1;
        total += p.x[static_cast<std::size_t>(j)];
    }
    return total;
}

/// Effort that makes node k's neighborhood reach e, clamped at zero.
inline double best_response(const Graph& g, const EffortProfile& p, int k, double e) {
    double others = 0.0;
    for (std::uint32_t rest = g.neighbors_mask(k); rest;) {
        const int j = std::countr_zero(rest);
        rest &= rest - 1;
        others += p.x[static_cast<std::size_t>(j)];
    }
    return std::max(0.0, e - others);
}

struct NashCheck {
    bool is_equilibrium;
    std::vector<double> residuals;  // per node, largest violated condition
    double tolerance;
};

/// Complementarity check: x >= 0, neighborhood effort >= e, and no node both
/// exerts effort and sees strictly more than e. The per-node residual is the
/// largest violation among the three.
inline NashCheck is_nash(const Graph& g, const EffortProfile& p, double e,
                         std::optional<double> tol = std::nullopt) {
    const int n = g.node_count();
    if (static_cast<int>(p.x.size()) != n) throw ConfigError("profile length does not match graph");
    const double t = tol.value_or(equilibrium_tolerance(e));
    NashCheck out{true, std::vector<double>(static_cast<std::size_t>(n), 0.0), t};
    for (int k = 0; k < n; ++k) {
        const double xk = p.x[static_cast<std::size_t>(k)];
        const double cover = neighborhood_effort(g, p, k);
        const double comp = std::min(std::max(xk, 0.0), std::max(cover - e, 0.0));
        const double r = std::max({-xk, e - cover, comp, 0.0});
        out.residuals[static_cast<std::size_t>(k)] = r;
        if (r > t) out.is_equilibrium = false;
    }
    return out;
}

enum class EquilibriumClass { Specialized, Distributed, Hybrid };

inline const char* to_string(EquilibriumClass c) {
    switch (c) {
        case EquilibriumClass::Specialized: return "Specialized";
        case EquilibriumClass::Distributed: return "Distributed";
        default: return "Hybrid";
    }
}

/// Taxonomy of an equilibrium profile. Full-effort-or-nothing profiles are
/// Specialized (a full-effort singleton graph lands here too), everywhere
/// positive ones Distributed, the rest Hybrid.
inline EquilibriumClass classify_equilibrium(const Graph& g, const EffortProfile& p, double e) {
    const NashCheck check = is_nash(g, p, e);
    if (!check.is_equilibrium) throw NotAnEquilibrium("profile fails the equilibrium conditions");
    const double spec_tol = 1e-9 * e;
    bool specialized = true;
    for (double v : p.x)
        if (std::abs(v) > spec_tol && std::abs(v - e) > spec_tol) specialized = false;
    if (specialized) return EquilibriumClass::Specialized;
    const double strict = equilibrium_tolerance(e);
    bool distributed = true;
    for (double v : p.x)
        if (!(v > strict)) distributed = false;
    return distributed ? EquilibriumClass::Distributed : EquilibriumClass::Hybrid;
}

struct EquilibriumSet {
    std::vector<EffortProfile> profiles;  // sorted lexicographically
    bool complete = false;                // exhaustive support enumeration
    int singular_supports_skipped = 0;
    std::optional<std::string> parametric_note;  // twin-induced continua among skipped supports
};

namespace detail {
/// Adjacent pair with identical closed neighborhoods inside the induced
/// subgraph on `support`; such supports carry equilibrium segments.
inline std::optional<std::pair<int, int>> induced_twin_pair(const Graph& g, std::uint32_t support) {
    for (std::uint32_t rest = support; rest;) {
        const int u = std::countr_zero(rest);
        rest &= rest - 1;
        for (std::uint32_t rest2 = rest; rest2;) {
            const int v = std::countr_zero(rest2);
            rest2 &= rest2 - 1;
            if (!g.has_edge(u, v)) continue;
            const std::uint32_t cu = g.closed_neighborhood_mask(u) & support;
            const std::uint32_t cv = g.closed_neighborhood_mask(v) & support;
            if (cu == cv) return std::make_pair(u, v);
        }
    }
    return std::nullopt;
}
}  // namespace detail

/// Exhaustive support enumeration of the complementarity system: solves the
/// closed-adjacency subsystem for every support, keeps strictly positive
/// solutions whose uncovered nodes still see effort e, verifies each survivor,
/// and de-duplicates. Singular supports are skipped and counted; a note is
/// attached when any of them contains induced closed twins, since those hold
/// one-dimensional equilibrium families whose extreme points the regular
/// supports already provide.
inline EquilibriumSet enumerate_equilibria(const Graph& g, double e,
                                           int cap = kDefaultEnumerationCap) {
    const int n = g.node_count();
    if (n > cap)
        throw CapExceeded("graph has " + std::to_string(n) + " nodes, enumeration cap is " +
                          std::to_string(cap));
    const double tol = equilibrium_tolerance(e);
    const SquareMatrix full = closed_adjacency(g);

    EquilibriumSet out;
    out.complete = true;
    int twin_supports = 0;
    std::optional<std::pair<int, int>> twin_example;

    for (std::uint32_t support = 0; support < (1u << n); ++support) {
        const std::vector<int> nodes = detail::mask_to_nodes(support);
        const std::size_t m = nodes.size();

        EffortProfile prof{std::vector<double>(static_cast<std::size_t>(n), 0.0), e};
        if (m > 0) {
            SquareMatrix sub(m);
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    sub(a, b) = full(static_cast<std::size_t>(nodes[a]),
                                     static_cast<std::size_t>(nodes[b]));
            const auto sol = solve_integer_matrix(sub, std::vector<double>(m, e));
            if (!sol) {
                out.singular_supports_skipped += 1;
                if (auto pair = detail::induced_twin_pair(g, support)) {
                    twin_supports += 1;
                    if (!twin_example) twin_example = pair;
                }
                continue;
            }
            bool positive = true;
            for (std::size_t a = 0; a < m; ++a) {
                if (!((*sol)[a] > tol)) positive = false;
                prof.x[static_cast<std::size_t>(nodes[a])] = (*sol)[a];
            }
            if (!positive) continue;
        }
        bool covered = true;
        for (int k = 0; k < n && covered; ++k)
            if (!((support >> k) & 1u) && neighborhood_effort(g, prof, k) < e - tol)
                covered = false;
        if (!covered) continue;
        if (!is_nash(g, prof, e).is_equilibrium) continue;
        out.profiles.push_back(std::move(prof));
    }

    std::sort(out.profiles.begin(), out.profiles.end(),
              [](const EffortProfile& a, const EffortProfile& b) {
                  return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(),
                                                      b.x.end());
              });
    std::vector<EffortProfile> unique;
    for (EffortProfile& p : out.profiles) {
        if (!unique.empty()) {
            double dist = 0.0;
            for (std::size_t i = 0; i < p.x.size(); ++i)
                dist = std::max(dist, std::abs(p.x[i] - unique.back().x[i]));
            if (dist < kProfileDedupTol) continue;
        }
        unique.push_back(std::move(p));
    }
    out.profiles = std::move(unique);

    if (twin_supports > 0) {
        out.parametric_note =
            std::to_string(twin_supports) +
            " singular support(s) hold equilibrium segments from induced closed twins, e.g. nodes {" +
            std::to_string(twin_example->first) + "," + std::to_string(twin_example->second) +
            "}; extreme points are listed, interiors are not sampled";
    }
    return out;
}

/// Full effort on a maximal independent set, nothing elsewhere.
inline EffortProfile specialized_from_mis(const Graph& g, const std::vector<int>& s, double e) {
    const int n = g.node_count();
    std::uint32_t mask = 0;
    for (int k : s) {
        if (k < 0 || k >= n) throw NotMaximalIndependent("set contains an out-of-range node");
        mask |= 1u << k;
    }
    if (!detail::mask_independent(g, mask))
        throw NotMaximalIndependent("set contains adjacent nodes");
    for (int k = 0; k < n; ++k)
        if (!((mask >> k) & 1u) && !(g.neighbors_mask(k) & mask))
            throw NotMaximalIndependent("set is not maximal, node " + std::to_string(k) +
                                        " can join");
    EffortProfile prof{std::vector<double>(static_cast<std::size_t>(n), 0.0), e};
    for (int k : s) prof.x[static_cast<std::size_t>(k)] = e;
    return prof;
}

struct DistributedOutcome {
    std::optional<EffortProfile> equilibrium;  // present iff strictly positive
    EffortProfile boundary_profile;            // the solve itself, any sign
};

/// Solves the closed-adjacency system for the everywhere-positive candidate.
/// A singular system is retried on the twin-reduced graph and the reduced
/// solution is expanded by equal split inside each merged class, which
/// preserves every neighborhood row sum. The solve is returned even when it
/// fails strict positivity, because its total pins the minimum aggregate
/// effort over equilibria whenever it is entrywise nonnegative.
inline DistributedOutcome distributed_equilibrium(const Graph& g, double e) {
    const int n = g.node_count();
    const std::vector<double> rhs(static_cast<std::size_t>(n), e);
    std::vector<double> x;
    if (auto sol = solve_integer_matrix(closed_adjacency(g), rhs)) {
        x = std::move(*sol);
    } else {
        const TwinReduction red = twin_reduce_with_classes(g);
        const std::vector<double> rhs2(static_cast<std::size_t>(red.graph.node_count()), e);
        auto sol2 = solve_integer_matrix(closed_adjacency(red.graph), rhs2);
        if (!sol2)
            throw SingularAfterReduction("effort system is singular even after twin reduction");
        x.assign(static_cast<std::size_t>(n), 0.0);
        for (std::size_t c = 0; c < red.classes.size(); ++c) {
            const double share = (*sol2)[c] / static_cast<double>(red.classes[c].size());
            for (int k : red.classes[c]) x[static_cast<std::size_t>(k)] = share;
        }
    }
    DistributedOutcome out{std::nullopt, EffortProfile{x, e}};
    const double strict = equilibrium_tolerance(e);
    bool positive = true;
    for (double v : x)
        if (!(v > strict)) positive = false;
    if (positive) out.equilibrium = EffortProfile{std::move(x), e};
    return out;
}

inline double aggregate_effort(const EffortProfile& p) {
    double s = 0.0;
    for (double v : p.x) s += v;
    return s;
}

inline double weighted_aggregate_effort(const EffortProfile& p, const NodeWeights& w) {
    if (w.w.size() != p.x.size()) throw ConfigError("weight vector length does not match profile");
    double s = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) s += w.w[i] * p.x[i];
    return s;
}

/// Sum over nodes of the mixed benefit at their neighborhood effort.
inline double aggregate_benefit(const Graph& g, const EffortProfile& p, const BenefitPair& bp,
                                Belief mu) {
    double s = 0.0;
    for (int k = 0; k < g.node_count(); ++k)
        s += mixed_benefit(bp, mu, neighborhood_effort(g, p, k), 0);
    return s;
}

struct BenefitBounds {
    double lower8, upper8;  // n b(e) and n b(ne)
    double lower9, upper9;  // n b(e) plus (alpha_w - n) times sigma_b c e / c e
};

/// Sandwich bounds for the best equilibrium aggregate benefit. The tighter
/// pair interpolates with the weighted independence number alpha_w; its lower
/// member is computed in a cancelled form that stays finite at e = 0.
inline BenefitBounds benefit_bounds(const Graph& g, double e, const GameParams& gp, Belief mu) {
    const int n = g.node_count();
    const double b_e = mixed_benefit(gp.benefit, mu, e, 0);
    const double b_ne = mixed_benefit(gp.benefit, mu, static_cast<double>(n) * e, 0);
    BenefitBounds out{};
    out.lower8 = n * b_e;
    out.upper8 = n * b_ne;
    if (n == 1) {
        out.lower9 = b_e;
        out.upper9 = b_e;
        return out;
    }
    const double alpha_w = weighted_max_independent_set(g, degree_plus_one_weights(g)).second;
    out.lower9 = n * b_e + (alpha_w - n) * (b_ne - b_e) / static_cast<double>(n - 1);
    out.upper9 = n * b_e + (alpha_w - n) * gp.cost * e;
    return out;
}

enum class SigmaRegime { ToZero, ToOne };

/// Best equilibrium aggregate benefit in the two saturation regimes: all
/// equilibria tie at n b(e) when the benefit curve is flat past e, and the
/// weighted-independence bound is attained when it is nearly linear.
inline double limit_max_benefit(const Graph& g, double e, const GameParams& gp, Belief mu,
                                SigmaRegime regime) {
    const int n = g.node_count();
    const double b_e = mixed_benefit(gp.benefit, mu, e, 0);
    if (regime == SigmaRegime::ToZero) return n * b_e;
    const double alpha_w = weighted_max_independent_set(g, degree_plus_one_weights(g)).second;
    return n * b_e + gp.cost * e * (alpha_w - static_cast<double>(n));
}

}  // namespace persuadenet
