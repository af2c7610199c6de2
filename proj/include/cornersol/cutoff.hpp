#pragma once

#include <cmath>

#include "cornersol/errors.hpp"
#include "cornersol/geometry.hpp"
#include "cornersol/laplace.hpp"
#include "cornersol/stokes.hpp"

namespace cornersol {

enum class CutoffSmoothness {
    C2Quintic,  // unique quintic with value/slope/curvature matched at both ends
    CInfExp,    // exp(-1/t) smoothed step, all derivatives vanish at both ends
};

/// Radial cut-off: 1 on [0, r0], 0 on [r1, inf), monotone in between.
struct CutoffProfile {
    double r0;
    double r1;
    CutoffSmoothness smoothness = CutoffSmoothness::C2Quintic;

    CutoffProfile(double r0_, double r1_, CutoffSmoothness s = CutoffSmoothness::C2Quintic)
        : r0(r0_), r1(r1_), smoothness(s) {
        if (!(0.0 < r0 && r0 < r1)) throw ValidationError("cutoff requires 0 < r0 < r1");
    }
};

/// Value and first two radial derivatives of the cut-off at one radius.
struct EtaJet {
    double eta;
    double d1;
    double d2;
};

namespace detail {

// f(x) = exp(-1/x) for x > 0, extended by 0; the C-infinity step ingredient.
inline double exp_step_f(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }
inline double exp_step_f1(double x) { return x > 0.0 ? exp_step_f(x) / (x * x) : 0.0; }
inline double exp_step_f2(double x) {
    return x > 0.0 ? exp_step_f(x) * (1.0 - 2.0 * x) / (x * x * x * x) : 0.0;
}

}  // namespace detail

inline EtaJet eta_jet(const CutoffProfile& profile, double r) {
    if (!(r >= 0.0)) throw ValidationError("radius must be nonnegative");
    if (r <= profile.r0) return {1.0, 0.0, 0.0};
    if (r >= profile.r1) return {0.0, 0.0, 0.0};
    const double width = profile.r1 - profile.r0;
    const double t = (r - profile.r0) / width;
    if (profile.smoothness == CutoffSmoothness::C2Quintic) {
        // eta = 1 - t^3 (6t^2 - 15t + 10); derivatives vanish to second
        // order at t = 0 and t = 1
        const double eta = 1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0);
        const double d1 = -30.0 * t * t * (1.0 - t) * (1.0 - t) / width;
        const double d2 = -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (width * width);
        return {eta, d1, d2};
    }
    // eta(t) = f(1-t) / (f(t) + f(1-t))
    const double a = detail::exp_step_f(1.0 - t);
    const double b = detail::exp_step_f(t);
    const double a1 = -detail::exp_step_f1(1.0 - t);
    const double b1 = detail::exp_step_f1(t);
    const double a2 = detail::exp_step_f2(1.0 - t);
    const double b2 = detail::exp_step_f2(t);
    const double S = a + b;
    const double S1 = a1 + b1;
    const double S2 = a2 + b2;
    const double eta = a / S;
    const double dt1 = a1 / S - a * S1 / (S * S);
    const double dt2 =
        a2 / S - 2.0 * a1 * S1 / (S * S) - a * S2 / (S * S) + 2.0 * a * S1 * S1 / (S * S * S);
    return {eta, dt1 / width, dt2 / (width * width)};
}

inline double eta(const CutoffProfile& profile, double r) { return eta_jet(profile, r).eta; }
inline double eta_d1(const CutoffProfile& profile, double r) { return eta_jet(profile, r).d1; }
inline double eta_d2(const CutoffProfile& profile, double r) { return eta_jet(profile, r).d2; }

/// Source term f = -Laplacian(eta * u) for harmonic u: the product rule
/// leaves f = -(eta'' + eta'/r) u - 2 eta' du/dr, supported in (r0, r1).
inline double laplace_rhs(const LaplaceField& field, const CutoffProfile& profile, Vec2 point) {
    const auto pol = field.frame().polar(point);
    if (pol.r == 0.0) {
        if (field.lambda() < 2.0) throw PoleAtVertex();
        return 0.0;
    }
    const EtaJet j = eta_jet(profile, pol.r);
    if (j.d1 == 0.0 && j.d2 == 0.0) return 0.0;
    const double u = field.eval_polar(pol.r, pol.theta);
    const double du_dr = field.gradient_polar(pol.r, pol.theta).x;
    return -(j.d2 + j.d1 / pol.r) * u - 2.0 * j.d1 * du_dr;
}

/// Momentum source f = -Laplacian(eta u) + grad(eta p) and mass source
/// g = div(eta u) = eta' u_r for an exact Stokes corner field. The cut-off
/// field is not divergence-free, so g is genuinely nonzero in (r0, r1).
struct StokesRhs {
    Vec2 f;   // world Cartesian components
    double g;
};

inline StokesRhs stokes_rhs(const StokesField& field, const CutoffProfile& profile, Vec2 point) {
    const auto pol = field.frame().polar(point);
    if (pol.r == 0.0) throw PoleAtVertex();
    const EtaJet j = eta_jet(profile, pol.r);
    if (j.d1 == 0.0 && j.d2 == 0.0) return {{0.0, 0.0}, 0.0};

    const double lam = field.lambda();
    const double r = pol.r;
    const double theta = pol.theta;
    // Cartesian velocity profile in frame axes: u = r^lam * ucart(theta),
    // so the radial derivative of each component is lam * r^(lam-1) * ucart.
    double ux = 0.0, uy = 0.0;
    for (int i = 1; i <= 4; ++i) {
        const std::array<double, 2> u = basis_cartesian_closed(i, lam, theta);
        ux += field.coeffs()[i - 1] * u[0];
        uy += field.coeffs()[i - 1] * u[1];
    }
    const double rl = std::pow(r, lam);
    const double rl1 = std::pow(r, lam - 1.0);
    const double p_ang = field.pressure_angular(theta);
    const double lap_eta = j.d2 + j.d1 / r;

    // f = -2 eta' du/dr - Laplacian(eta) u + p eta' e_r (the eta*(momentum)
    // term cancels because the field solves the homogeneous system)
    const double cth = std::cos(theta);
    const double sth = std::sin(theta);
    const Vec2 f_frame{-2.0 * j.d1 * lam * rl1 * ux - lap_eta * rl * ux +
                           rl1 * p_ang * j.d1 * cth,
                       -2.0 * j.d1 * lam * rl1 * uy - lap_eta * rl * uy +
                           rl1 * p_ang * j.d1 * sth};
    const double ur = field.velocity_angular(theta).x;
    return {field.frame().vector_from_frame(f_frame), j.d1 * rl * ur};
}

}  // namespace cornersol
