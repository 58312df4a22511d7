#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "persuadenet/errors.hpp"

namespace persuadenet {

/// Probability assigned to the high infection state.
using Belief = double;

inline void require_belief(Belief mu) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("belief must lie in [0,1]");
}

enum class InfectionState { High, Low };

inline constexpr double kDerivativeGuard = 1e-14;  // denominators below this are degenerate
inline constexpr double kRootTol = 1e-12;          // absolute tolerance on the effort root
inline constexpr double kBracketCap = 0x1p60;
inline constexpr int kValidationPoints = 512;
inline constexpr double kValidationXMax = 40.0;
inline constexpr double kValidationTol = 1e-9;
inline constexpr double kSaturationTol = 1e-2;

/// Cubic interpolating spline with not-a-knot end conditions.
///
/// Needs at least 4 strictly increasing knots. Evaluation outside the sample
/// range continues the boundary polynomial piece. Orders 0..2 are exact piece
/// derivatives; the third derivative is a centered difference of order 2,
/// which keeps it continuous across knots.
class CubicSpline {
public:
    CubicSpline(std::vector<double> xs, const std::vector<double>& ys) : x_(std::move(xs)) {
        const std::size_t m = x_.size();
        if (m < 4) throw ConfigError("spline needs at least 4 sample points");
        if (ys.size() != m) throw ConfigError("spline sample column lengths differ");
        for (std::size_t i = 0; i + 1 < m; ++i)
            if (!(x_[i] < x_[i + 1])) throw ConfigError("spline sample x must be strictly increasing");

        std::vector<double> h(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) h[i] = x_[i + 1] - x_[i];

        // Moments M_i = S''(x_i). The two not-a-knot conditions express M_0
        // and M_{m-1} through their neighbors; the rest is tridiagonal.
        const std::size_t n = m - 2;  // unknowns M_1..M_{m-2}
        std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const std::size_t r = i - 1;
            lower[r] = h[i - 1];
            diag[r] = 2.0 * (h[i - 1] + h[i]);
            upper[r] = h[i];
            rhs[r] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
        }
        // substitute M_0 = ((h0+h1)M_1 - h0 M_2)/h1 into the first row
        diag[0] = (h[0] + h[1]) * (h[0] + 2.0 * h[1]) / h[1];
        upper[0] = (h[1] * h[1] - h[0] * h[0]) / h[1];
        lower[0] = 0.0;
        // substitute M_{m-1} = ((ha+hb)M_{m-2} - hb M_{m-3})/ha into the last
        // row, ha = h_{m-3}, hb = h_{m-2}
        {
            const double ha = h[m - 3], hb = h[m - 2];
            diag[n - 1] = (ha + hb) * (2.0 * ha + hb) / ha;
            lower[n - 1] = (ha * ha - hb * hb) / ha;
            upper[n - 1] = 0.0;
        }

        // Thomas elimination; rows are diagonally dominant by construction
        for (std::size_t r = 1; r < n; ++r) {
            const double w = lower[r] / diag[r - 1];
            diag[r] -= w * upper[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        std::vector<double> mo(m, 0.0);
        mo[m - 2] = rhs[n - 1] / diag[n - 1];
        for (std::size_t r = n - 1; r-- > 0;)
            mo[r + 1] = (rhs[r] - upper[r] * mo[r + 2]) / diag[r];
        mo[0] = ((h[0] + h[1]) * mo[1] - h[0] * mo[2]) / h[1];
        mo[m - 1] = ((h[m - 3] + h[m - 2]) * mo[m - 2] - h[m - 2] * mo[m - 3]) / h[m - 3];

        c0_.resize(m - 1);
        c1_.resize(m - 1);
        c2_.resize(m - 1);
        c3_.resize(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            c0_[i] = ys[i];
            c1_[i] = (ys[i + 1] - ys[i]) / h[i] - h[i] * (2.0 * mo[i] + mo[i + 1]) / 6.0;
            c2_[i] = mo[i] / 2.0;
            c3_[i] = (mo[i + 1] - mo[i]) / (6.0 * h[i]);
        }
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    /// Piece value or derivative, order 0..2.
    double eval(double x, int order) const {
        const std::size_t i = piece_index(x);
        const double u = x - x_[i];
        switch (order) {
            case 0: return c0_[i] + u * (c1_[i] + u * (c2_[i] + u * c3_[i]));
            case 1: return c1_[i] + u * (2.0 * c2_[i] + u * 3.0 * c3_[i]);
            case 2: return 2.0 * c2_[i] + u * 6.0 * c3_[i];
            default: throw ConfigError("spline eval order must be 0..2");
        }
    }

    /// Centered difference of the second derivative; the stencil shifts
    /// inward near the domain ends so the step never leaves the samples.
    double third_difference(double x, double step) const {
        const double lo = std::max(x - step, x_min());
        const double hi = std::min(x + step, x_max());
        return (eval(hi, 2) - eval(lo, 2)) / (hi - lo);
    }

private:
    std::size_t piece_index(double x) const {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t k = static_cast<std::size_t>(it - x_.begin());
        if (k == 0) return 0;
        return std::min(k - 1, x_.size() - 2);
    }

    std::vector<double> x_;
    std::vector<double> c0_, c1_, c2_, c3_;
};

/// State-conditional benefit pair b(x;h), b(x;l): probability of staying safe
/// given total protective effort x, in the high and low infection state.
///
/// Every family satisfies, on a validation grid checked at construction:
/// values in [0,1], increasing, concave, b(x;h) < b(x;l), saturation at 1.
class BenefitPair {
public:
    /// b(x;h) = 1 - H e^{-x}, b(x;l) = 1 - L e^{-x}, 0 < L < H <= 1.
    static BenefitPair exponential(double H, double L) {
        if (!(0.0 < L && L < H && H <= 1.0))
            throw ConfigError("exponential family needs 0 < L < H <= 1");
        return BenefitPair(Exp{H, L});
    }

    /// b(x;i) = 1 - a_i (1+x)^{-p}, 0 < a_l < a_h <= 1, p > 0.
    static BenefitPair power_saturating(double a_h, double a_l, double p) {
        if (!(0.0 < a_l && a_l < a_h && a_h <= 1.0))
            throw ConfigError("power family needs 0 < a_l < a_h <= 1");
        if (!(p > 0.0)) throw ConfigError("power family needs p > 0");
        return BenefitPair(Pow{a_h, a_l, p});
    }

    /// Splines through shared sample points; the third derivative uses a
    /// centered difference with step four mean cells.
    static BenefitPair tabulated(const std::vector<double>& xs, const std::vector<double>& b_h,
                                 const std::vector<double>& b_l) {
        CubicSpline sh(xs, b_h);
        CubicSpline sl(xs, b_l);
        const double step =
            4.0 * (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
        return BenefitPair(Tab{std::move(sh), std::move(sl), step});
    }

    /// Value (order 0) or derivative (orders 1..3) of the state benefit.
    double eval(double x, InfectionState s, int order) const {
        if (x < 0.0) throw ConfigError("effort must be nonnegative");
        if (order < 0 || order > 3) throw ConfigError("derivative order must be 0..3");
        if (const Exp* e = std::get_if<Exp>(&impl_))
            return exp_eval(s == InfectionState::High ? e->H : e->L, x, order);
        if (const Pow* p = std::get_if<Pow>(&impl_))
            return pow_eval(s == InfectionState::High ? p->a_h : p->a_l, p->p, x, order);
        const Tab& t = std::get<Tab>(impl_);
        const CubicSpline& s_ = s == InfectionState::High ? t.h : t.l;
        if (order == 3) return s_.third_difference(x, t.fd_step);
        return s_.eval(x, order);
    }

    /// b(x;l) - b(x;h) and its derivatives, in closed form where the family
    /// allows it (the subtraction of saturating values loses the gap).
    double delta(double x, int order) const {
        if (x < 0.0) throw ConfigError("effort must be nonnegative");
        if (order < 0 || order > 3) throw ConfigError("derivative order must be 0..3");
        if (const Exp* e = std::get_if<Exp>(&impl_)) {
            const double d = (e->H - e->L) * std::exp(-x);
            return (order % 2 == 0) ? d : -d;
        }
        if (const Pow* pw = std::get_if<Pow>(&impl_)) {
            const double d = pw->a_h - pw->a_l;
            const double p = pw->p;
            switch (order) {
                case 0: return d * std::pow(1.0 + x, -p);
                case 1: return -d * p * std::pow(1.0 + x, -p - 1.0);
                case 2: return d * p * (p + 1.0) * std::pow(1.0 + x, -p - 2.0);
                default: return -d * p * (p + 1.0) * (p + 2.0) * std::pow(1.0 + x, -p - 3.0);
            }
        }
        return eval(x, InfectionState::Low, order) - eval(x, InfectionState::High, order);
    }

    bool is_tabulated() const { return std::holds_alternative<Tab>(impl_); }

private:
    struct Exp {
        double H, L;
    };
    struct Pow {
        double a_h, a_l, p;
    };
    struct Tab {
        CubicSpline h, l;
        double fd_step;
    };

    static double exp_eval(double theta, double x, int order) {
        const double t = theta * std::exp(-x);
        if (order == 0) return 1.0 - t;
        return (order % 2 == 1) ? t : -t;
    }

    static double pow_eval(double a, double p, double x, int order) {
        switch (order) {
            case 0: return 1.0 - a * std::pow(1.0 + x, -p);
            case 1: return a * p * std::pow(1.0 + x, -p - 1.0);
            case 2: return -a * p * (p + 1.0) * std::pow(1.0 + x, -p - 2.0);
            default: return a * p * (p + 1.0) * (p + 2.0) * std::pow(1.0 + x, -p - 3.0);
        }
    }

    template <class T>
    explicit BenefitPair(T impl) : impl_(std::move(impl)) {
        validate();
    }

    void validate() const {
        double x_hi = kValidationXMax;
        if (const Tab* t = std::get_if<Tab>(&impl_)) x_hi = t->h.x_max();
        for (int j = 0; j < kValidationPoints; ++j) {
            const double x = x_hi * static_cast<double>(j) / (kValidationPoints - 1);
            for (InfectionState s : {InfectionState::High, InfectionState::Low}) {
                const double v = eval(x, s, 0);
                if (!(v >= -kValidationTol && v <= 1.0 + kValidationTol))
                    throw ConfigError("benefit leaves [0,1] at x=" + std::to_string(x));
                if (!(eval(x, s, 1) >= -kValidationTol))
                    throw ConfigError("benefit not increasing at x=" + std::to_string(x));
                if (!(eval(x, s, 2) <= kValidationTol))
                    throw ConfigError("benefit not concave at x=" + std::to_string(x));
            }
            if (!(delta(x, 0) > 0.0))
                throw ConfigError("high-state benefit not below low-state at x=" + std::to_string(x));
        }
        for (InfectionState s : {InfectionState::High, InfectionState::Low})
            if (!(1.0 - eval(x_hi, s, 0) <= kSaturationTol))
                throw ConfigError("benefit does not saturate at the grid end");
    }

    std::variant<Exp, Pow, Tab> impl_;
};

inline double benefit_eval(const BenefitPair& bp, double x, InfectionState s, int order) {
    return bp.eval(x, s, order);
}

/// mu b(x;h) + (1-mu) b(x;l), same order conventions as benefit_eval.
inline double mixed_benefit(const BenefitPair& bp, Belief mu, double x, int order) {
    require_belief(mu);
    return mu * bp.eval(x, InfectionState::High, order) +
           (1.0 - mu) * bp.eval(x, InfectionState::Low, order);
}

inline double delta_b(const BenefitPair& bp, double x, int order) { return bp.delta(x, order); }

/// Game primitives: the benefit pair, the marginal effort cost, and the
/// common prior on the high state. The two assumption flags are measured at
/// construction, not enforced; families violating them stay usable.
struct GameParams {
    BenefitPair benefit;
    double cost;
    Belief prior;
    bool a1_holds;  // delta_b' < 0 across the validation grid
    bool a2_holds;  // c < b'(0;l)
};

inline GameParams make_game_params(BenefitPair benefit, double cost, Belief prior) {
    if (!(cost > 0.0)) throw ConfigError("effort cost must be positive");
    require_belief(prior);
    bool a1 = true;
    for (int j = 0; j < kValidationPoints && a1; ++j) {
        const double x = kValidationXMax * static_cast<double>(j) / (kValidationPoints - 1);
        if (!(benefit.delta(x, 1) < kValidationTol)) a1 = false;
    }
    const bool a2 = cost < benefit.eval(0.0, InfectionState::Low, 1);
    return GameParams{std::move(benefit), cost, prior, a1, a2};
}

/// Effort e*(mu) at which the mixed marginal benefit equals the cost; 0 when
/// already below cost at zero effort. Bisection on the decreasing marginal,
/// then Newton steps to push the root residual to machine precision.
inline double unilateral_effort(const GameParams& gp, Belief mu) {
    require_belief(mu);
    const double c = gp.cost;
    if (mixed_benefit(gp.benefit, mu, 0.0, 1) <= c) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (mixed_benefit(gp.benefit, mu, hi, 1) > c) {
        lo = hi;
        hi *= 2.0;
        if (hi > kBracketCap)
            throw BracketFailure("marginal benefit stays above cost out to the bracket cap");
    }
    while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // spacing floor
        (mixed_benefit(gp.benefit, mu, mid, 1) > c ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double f = mixed_benefit(gp.benefit, mu, x, 1) - c;
        const double df = mixed_benefit(gp.benefit, mu, x, 2);
        if (!(std::abs(df) > kDerivativeGuard)) break;
        const double nx = x - f / df;
        if (!std::isfinite(nx) || nx < 0.0) break;
        if (nx == x) break;
        x = nx;
    }
    return x;
}

struct EStarDerivatives {
    double first;
    double second;
};

/// d e*/d mu and d^2 e*/d mu^2 by implicit differentiation of the root
/// condition. Requires an interior root.
inline EStarDerivatives e_star_derivatives(const GameParams& gp, Belief mu) {
    const double e = unilateral_effort(gp, mu);
    if (!(e > 0.0)) throw InteriorRequired("effort derivatives need an interior root");
    const double d1 = delta_b(gp.benefit, e, 1);
    const double b2 = mixed_benefit(gp.benefit, mu, e, 2);
    if (!(std::abs(b2) > kDerivativeGuard))
        throw DegenerateDerivative("mixed benefit second derivative vanishes at the root");
    const double first = d1 / b2;
    const double b3 = mixed_benefit(gp.benefit, mu, e, 3);
    const double gap2 = benefit_eval(gp.benefit, e, InfectionState::High, 2) -
                        benefit_eval(gp.benefit, e, InfectionState::Low, 2);
    const double second = first / (-b2) * (b3 * first + 2.0 * gap2);
    return EStarDerivatives{first, second};
}

/// -f''/f' given the two derivative values.
inline double risk_aversion(double f_order1, double f_order2) {
    if (!(std::abs(f_order1) > kDerivativeGuard))
        throw DegenerateDerivative("risk aversion needs a nonvanishing first derivative");
    return -f_order2 / f_order1;
}

/// -f'''/f'' given the two derivative values.
inline double prudence(double f_order2, double f_order3) {
    if (!(std::abs(f_order2) > kDerivativeGuard))
        throw DegenerateDerivative("prudence needs a nonvanishing second derivative");
    return -f_order3 / f_order2;
}

/// 2 A(delta_b) - P(mixed benefit), both evaluated at e*(mu). Its sign is the
/// opposite of the sign of e*''(mu).
inline double curvature_R(const GameParams& gp, Belief mu) {
    const double e = unilateral_effort(gp, mu);
    if (!(e > 0.0)) throw InteriorRequired("curvature needs an interior effort root");
    const double a_gap = risk_aversion(delta_b(gp.benefit, e, 1), delta_b(gp.benefit, e, 2));
    const double p_mix =
        prudence(mixed_benefit(gp.benefit, mu, e, 2), mixed_benefit(gp.benefit, mu, e, 3));
    return 2.0 * a_gap - p_mix;
}

/// curvature_R minus the risk aversion of the mixed benefit at e*(mu); the
/// analogous discriminant for the safety-probability objective.
inline double curvature_R_tilde(const GameParams& gp, Belief mu) {
    const double e = unilateral_effort(gp, mu);
    if (!(e > 0.0)) throw InteriorRequired("curvature needs an interior effort root");
    const double a_mix =
        risk_aversion(mixed_benefit(gp.benefit, mu, e, 1), mixed_benefit(gp.benefit, mu, e, 2));
    return curvature_R(gp, mu) - a_mix;
}

struct SufficientYZ {
    double Y;
    double Z;
};

/// Belief-free disclosure discriminants. Y < 0 with Z > 0 everywhere makes no
/// disclosure optimal; Y > 0 with Z < 0 makes full disclosure optimal.
inline SufficientYZ sufficient_Y_Z(const BenefitPair& bp, double x) {
    const double d1 = delta_b(bp, x, 1);
    if (!(std::abs(d1) > kDerivativeGuard))
        throw DegenerateDerivative("discriminants need a nonvanishing benefit-gap slope");
    const double ratio = delta_b(bp, x, 2) / d1;
    const double y = 2.0 * ratio * delta_b(bp, x, 2) - delta_b(bp, x, 3);
    const double z = 2.0 * ratio * benefit_eval(bp, x, InfectionState::Low, 2) -
                     benefit_eval(bp, x, InfectionState::Low, 3);
    return SufficientYZ{y, z};
}

/// Normalized mean-slope ratio (b~(n e*) - b~(e*)) / (c e* (n-1)), strictly
/// inside (0,1) for strictly concave benefits.
inline double sigma_b(const GameParams& gp, Belief mu, int n) {
    if (n < 2) throw ConfigError("sigma_b needs at least 2 nodes");
    const double e = unilateral_effort(gp, mu);
    if (!(e > 0.0)) throw InteriorRequired("sigma_b needs an interior effort root");
    const double lo = mixed_benefit(gp.benefit, mu, e, 0);
    const double hi = mixed_benefit(gp.benefit, mu, static_cast<double>(n) * e, 0);
    return (hi - lo) / (gp.cost * e * static_cast<double>(n - 1));
}

}  // namespace persuadenet
