#pragma once

#include <cmath>
#include <vector>

#include "cornersol/cutoff.hpp"
#include "cornersol/errors.hpp"
#include "cornersol/geometry.hpp"
#include "cornersol/laplace.hpp"
#include "cornersol/quadrature.hpp"
#include "cornersol/stokes.hpp"

namespace cornersol {

/// Compactly supported dual test function v = eta(r) * r^xi * sin(xi*theta).
/// With xi = pi/omega (or any xi with sin(xi*omega) = 0) v vanishes on both
/// sector edges, and r^xi sin(xi*theta) is harmonic, so Laplacian(v) is
/// supported in the cut-off transition annulus only.
struct TestFunctionV {
    double xi;
    CutoffProfile profile;
    CornerFrame frame{};

    TestFunctionV(double xi_, CutoffProfile profile_, CornerFrame frame_ = {})
        : xi(xi_), profile(std::move(profile_)), frame(std::move(frame_)) {
        if (!(xi > 0.0)) throw ValidationError("test function exponent xi must be positive");
    }

    /// Radial factor w(r) = eta(r) r^xi and its derivative.
    double radial(double r) const { return eta(profile, r) * std::pow(r, xi); }
    double radial_derivative(double r) const {
        const EtaJet j = eta_jet(profile, r);
        return j.d1 * std::pow(r, xi) + xi * j.eta * std::pow(r, xi - 1.0);
    }

    double value_polar(double r, double theta) const {
        return radial(r) * std::sin(xi * theta);
    }

    /// Laplacian in polar form: (eta'' + (2 xi + 1) eta'/r) r^xi sin(xi theta);
    /// the harmonic core contributes nothing, so this vanishes outside the
    /// cut-off transition.
    double laplacian_polar(double r, double theta) const {
        const EtaJet j = eta_jet(profile, r);
        if (j.d1 == 0.0 && j.d2 == 0.0) return 0.0;
        return (j.d2 + (2.0 * xi + 1.0) * j.d1 / r) * std::pow(r, xi) * std::sin(xi * theta);
    }
};

namespace detail {

/// Angular integral refined by panel doubling until two passes agree.
template <class F>
double adaptive_angular(F&& f, double a, double b, double rel_tol) {
    double prev = quad::integrate_panels(f, a, b, 4, 32);
    for (int panels = 8; panels <= 64; panels *= 2) {
        const double cur = quad::integrate_panels(f, a, b, panels, 32);
        if (std::abs(cur - prev) <= rel_tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw NonConvergence("angular quadrature failed to settle");
}

}  // namespace detail

/// Green-formula arc functional at radius eps: the integral over the arc
/// r = eps of (u dv/dn - v du/dn) * eps dtheta, with the normal pointing
/// toward the vertex (outward from the domain minus the eps-disc).
inline double arc_integral(const LaplaceField& u, const TestFunctionV& v, double omega,
                           double eps) {
    const double w = v.radial(eps);
    const double dw = v.radial_derivative(eps);
    return detail::adaptive_angular(
        [&](double theta) {
            const double s = std::sin(v.xi * theta);
            const double uv = u.eval_polar(eps, theta);
            const double du_dr = u.gradient_polar(eps, theta).x;
            // d/dn = -d/dr on the arc
            return eps * (uv * (-dw * s) - w * s * (-du_dr));
        },
        0.0, omega, 1e-13);
}

/// Limit of the arc functional as eps -> 0, extrapolated from a decreasing
/// eps sequence inside the cut-off plateau. On the plateau the functional is
/// an exact power c * eps^(lambda + xi), so three-point Aitken extrapolation
/// recovers the limit of a geometric eps sequence; a constant sequence
/// (lambda = -xi, the limit case) is returned as-is.
inline double arc_limit_defect(const LaplaceField& u, const TestFunctionV& v, double omega,
                               const std::vector<double>& eps_sequence) {
    if (u.lambda() <= -1.0) throw NotInL2("field is not square-integrable near the corner");
    if (eps_sequence.empty()) throw ValidationError("empty eps sequence");
    for (std::size_t i = 0; i < eps_sequence.size(); ++i) {
        if (!(eps_sequence[i] > 0.0) || eps_sequence[i] >= v.profile.r0)
            throw EpsOutsidePlateau("eps values must lie in (0, r0)");
        if (i > 0 && !(eps_sequence[i] < eps_sequence[i - 1]))
            throw ValidationError("eps sequence must be strictly decreasing");
    }
    std::vector<double> values;
    values.reserve(eps_sequence.size());
    for (double eps : eps_sequence) values.push_back(arc_integral(u, v, omega, eps));
    const std::size_t n = values.size();
    if (n < 3) return values.back();
    const double x0 = values[n - 3], x1 = values[n - 2], x2 = values[n - 1];
    const double denom = x2 - 2.0 * x1 + x0;
    const double scale = std::abs(x0) + std::abs(x1) + std::abs(x2);
    if (std::abs(denom) <= 1e-10 * (scale + 1e-300)) return x2;  // already converged
    return x2 - (x2 - x1) * (x2 - x1) / denom;
}

/// Quadrature controls for the area-form pairings.
struct PairQuadrature {
    int radial_order = 24;
    int radial_panels = 4;
    int angular_order = 24;
    int angular_panels = 4;
    int max_annuli = 40;       // dyadic annuli toward the vertex
    double tail_rel = 1e-14;   // stop once an annulus adds less than this share
    int disc_order = 14;       // tensor order for compact-pair integrals
    int disc_panels = 6;
};

/// The very-weak defect (u, Laplacian v) - <u, dv/dn>_Gamma computed in area
/// form. The area term is integrated over the cut-off transition annulus
/// plus dyadic annuli toward the vertex (where the integrand vanishes
/// because v is harmonic under the plateau); the edge bracket has the closed
/// form -xi * (Phi(0) + Phi(omega)) * integral of eta r^(lambda+xi-1) when
/// sin(xi*omega) = 0, with the plateau part integrated exactly.
inline double area_pairing(const LaplaceField& u, const TestFunctionV& v, double omega,
                           const PairQuadrature& quadrature = {}) {
    if (u.lambda() <= -1.0) throw NotInL2("field is not square-integrable near the corner");
    if (std::abs(std::sin(v.xi * omega)) > 1e-9)
        throw ValidationError("test function must vanish on the sector edges (xi*omega = k*pi)");

    const double r0 = v.profile.r0;
    const double r1 = v.profile.r1;
    const auto integrand = [&](double r, double theta) {
        return u.eval_polar(r, theta) * v.laplacian_polar(r, theta);
    };

    // transition annulus, radially panelized
    double area = 0.0;
    for (int p = 0; p < quadrature.radial_panels; ++p) {
        const double a = r0 + (r1 - r0) * p / quadrature.radial_panels;
        const double b = r0 + (r1 - r0) * (p + 1) / quadrature.radial_panels;
        area += quad::sector_patch(integrand, 0.0, omega, a, b, quadrature.radial_order,
                                   quadrature.angular_panels, quadrature.angular_order);
    }

    // dyadic annuli toward the vertex; each is analytically zero, and the
    // geometric-tail rule certifies that numerically
    bool tail_ok = false;
    double hi = r0;
    for (int k = 0; k < quadrature.max_annuli; ++k) {
        const double lo = 0.5 * hi;
        const double contrib =
            quad::sector_patch(integrand, 0.0, omega, lo, hi, quadrature.radial_order,
                               quadrature.angular_panels, quadrature.angular_order);
        area += contrib;
        if (std::abs(contrib) <= quadrature.tail_rel * (std::abs(area) + 1e-300)) {
            tail_ok = true;
            break;
        }
        hi = lo;
    }
    if (!tail_ok) throw NonConvergent("annulus contributions failed the geometric tail bound");

    // edge bracket <u, dv/dn> over theta = 0 and theta = omega
    const double coeff_scale = std::abs(u.c1()) + std::abs(u.c2());
    double phi0 = u.angular_profile(0.0);
    double phiw = u.angular_profile(omega);
    if (std::abs(phi0) <= 1e-14 * coeff_scale) phi0 = 0.0;
    if (std::abs(phiw) <= 1e-14 * coeff_scale) phiw = 0.0;
    double bracket = 0.0;
    if (phi0 != 0.0 || phiw != 0.0) {
        const double p = u.lambda() + v.xi;
        if (p <= 0.0)
            throw NonConvergent("edge bracket is not integrable for this (lambda, xi)");
        const double radial_tail = quad::integrate_panels(
            [&](double r) { return eta(v.profile, r) * std::pow(r, p - 1.0); }, r0, r1, 4, 32);
        const double radial_full = std::pow(r0, p) / p + radial_tail;
        // dv/dn = -xi eta r^(xi-1) cos(0) on theta=0, +xi eta r^(xi-1) cos(xi omega) on theta=omega
        bracket = v.xi * (-phi0 + phiw * std::cos(v.xi * omega)) * radial_full;
    }
    return area - bracket;
}

/// Integrability of u * dv/dn along a corner edge: the integrand scales as
/// r^(lambda+xi-1), so the bracket exists iff lambda + xi > 0 or the edge
/// traces Phi(0), Phi(omega) both vanish.
inline bool edge_integrability(double lambda, double xi, double phi0, double phiOmega) {
    if (!(xi > 0.0)) throw ValidationError("xi must be positive");
    if (lambda + xi > 0.0) return true;
    return phi0 == 0.0 && phiOmega == 0.0;
}

/// Bivariate polynomial in world coordinates, dense-per-monomial form.
struct Poly2 {
    struct Term {
        int i, j;     // x^i y^j
        double coef;
    };
    std::vector<Term> terms;

    double eval(double x, double y) const {
        double s = 0.0;
        for (const Term& t : terms)
            s += t.coef * std::pow(x, t.i) * std::pow(y, t.j);
        return s;
    }

    Poly2 dx() const {
        Poly2 out;
        for (const Term& t : terms)
            if (t.i > 0) out.terms.push_back({t.i - 1, t.j, t.coef * t.i});
        return out;
    }

    Poly2 dy() const {
        Poly2 out;
        for (const Term& t : terms)
            if (t.j > 0) out.terms.push_back({t.i, t.j - 1, t.coef * t.j});
        return out;
    }
};

/// Smooth compactly supported Stokes test pair: polynomial velocity and
/// pressure multiplied by a C-infinity bump on a disc strictly inside the
/// sector.
struct CompactTestPair {
    Poly2 v1, v2;  // velocity components
    Poly2 q;       // pressure
    Vec2 center;
    double radius;

    CompactTestPair(Poly2 v1_, Poly2 v2_, Poly2 q_, Vec2 center_, double radius_)
        : v1(std::move(v1_)), v2(std::move(v2_)), q(std::move(q_)), center(center_),
          radius(radius_) {
        if (!(radius > 0.0)) throw ValidationError("bump radius must be positive");
    }
};

namespace detail {

/// Value, gradient, and Laplacian of the radial C-infinity bump
/// b = exp(-t/(1-t)), t = |x-c|^2 / R^2, extended by zero outside the disc.
struct BumpJet {
    double b;
    Vec2 grad;
    double lap;
};

inline BumpJet bump_jet(Vec2 center, double radius, Vec2 point) {
    const Vec2 d = point - center;
    const double t = dot(d, d) / (radius * radius);
    if (t >= 1.0) return {0.0, {0.0, 0.0}, 0.0};
    const double om = 1.0 - t;
    const double g1 = 1.0 / (om * om);          // g' of g(t) = t/(1-t)
    const double g2 = 2.0 / (om * om * om);     // g''
    const double E = std::exp(-t / om);
    const double E1 = -g1 * E;
    const double E2 = (g1 * g1 - g2) * E;
    const double r2inv = 1.0 / (radius * radius);
    return {E, (2.0 * r2inv * E1) * d, E2 * 4.0 * t * r2inv + E1 * 4.0 * r2inv};
}

inline double distance_to_edge_ray(const CornerFrame& frame, double edge_angle, Vec2 point) {
    // distance from a world point to the ray theta = edge_angle
    const Vec2 d = point - frame.vertex();
    const Vec2 dir = frame.point_at(1.0, edge_angle) - frame.vertex();
    const double along = dot(d, dir);
    if (along <= 0.0) return norm(d);
    return std::abs(cross(dir, d));
}

}  // namespace detail

/// Distributional Stokes identity defect (u, -Laplacian v + grad q) -
/// (div v, p) for a compactly supported pair inside the sector; zero for
/// every exact corner field, up to quadrature error. The integral is refined
/// by panel doubling and must settle, else NonConvergent.
inline double stokes_very_weak_defect(const StokesField& field, const CompactTestPair& pair,
                                      double omega, const PairQuadrature& quadrature = {}) {
    if (field.lambda() <= -1.0) throw NotInL2("field is not square-integrable near the corner");
    const auto pol = field.frame().polar(pair.center);
    const bool inside = pol.r > pair.radius && pol.theta > 0.0 && pol.theta < omega &&
                        detail::distance_to_edge_ray(field.frame(), 0.0, pair.center) >
                            pair.radius &&
                        detail::distance_to_edge_ray(field.frame(), omega, pair.center) >
                            pair.radius;
    if (!inside)
        throw SupportTouchesBoundary("test pair support must stay strictly inside the sector");

    const Poly2 v1x = pair.v1.dx(), v1y = pair.v1.dy();
    const Poly2 v2x = pair.v2.dx(), v2y = pair.v2.dy();
    const Poly2 qx = pair.q.dx(), qy = pair.q.dy();
    const Poly2 v1xx = v1x.dx(), v1yy = v1y.dy();
    const Poly2 v2xx = v2x.dx(), v2yy = v2y.dy();

    const auto integrand = [&](double x, double y) {
        const Vec2 p{x, y};
        const detail::BumpJet bj = detail::bump_jet(pair.center, pair.radius, p);
        if (bj.b == 0.0 && bj.grad.x == 0.0 && bj.grad.y == 0.0 && bj.lap == 0.0) return 0.0;
        const double P1 = pair.v1.eval(x, y), P2 = pair.v2.eval(x, y);
        const double Q = pair.q.eval(x, y);
        // Laplacian of b*P by the product rule
        const double lap_v1 = bj.lap * P1 + 2.0 * (bj.grad.x * v1x.eval(x, y) +
                                                   bj.grad.y * v1y.eval(x, y)) +
                              bj.b * (v1xx.eval(x, y) + v1yy.eval(x, y));
        const double lap_v2 = bj.lap * P2 + 2.0 * (bj.grad.x * v2x.eval(x, y) +
                                                   bj.grad.y * v2y.eval(x, y)) +
                              bj.b * (v2xx.eval(x, y) + v2yy.eval(x, y));
        const Vec2 grad_q{bj.grad.x * Q + bj.b * qx.eval(x, y),
                          bj.grad.y * Q + bj.b * qy.eval(x, y)};
        const double div_v = bj.grad.x * P1 + bj.grad.y * P2 +
                             bj.b * (v1x.eval(x, y) + v2y.eval(x, y));
        const Vec2 u = field.velocity_cartesian(p);
        const double pr = field.pressure(p);
        return u.x * (-lap_v1 + grad_q.x) + u.y * (-lap_v2 + grad_q.y) - div_v * pr;
    };

    const auto tensor_integral = [&](int panels) {
        const double x0 = pair.center.x - pair.radius, x1 = pair.center.x + pair.radius;
        const double y0 = pair.center.y - pair.radius, y1 = pair.center.y + pair.radius;
        return quad::integrate_panels(
            [&](double x) {
                return quad::integrate_panels([&](double y) { return integrand(x, y); }, y0, y1,
                                              panels, quadrature.disc_order);
            },
            x0, x1, panels, quadrature.disc_order);
    };

    double prev = tensor_integral(quadrature.disc_panels);
    for (int panels = 2 * quadrature.disc_panels; panels <= 16 * quadrature.disc_panels;
         panels *= 2) {
        const double cur = tensor_integral(panels);
        if (std::abs(cur - prev) <= 1e-9 * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    throw NonConvergent("compact-pair integral failed to settle under refinement");
}

}  // namespace cornersol
