#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "cornersol/errors.hpp"
#include "cornersol/exponents.hpp"
#include "cornersol/geometry.hpp"
#include "cornersol/quadrature.hpp"

namespace cornersol {

/// Position of a harmonic corner function in the weak/very-weak hierarchy,
/// relative to the smallest positive Dirichlet exponent xi of the corner.
enum class SolutionClass { Weak, VeryWeak, LimitCase, NotVeryWeak };

inline const char* solution_class_name(SolutionClass c) {
    switch (c) {
        case SolutionClass::Weak: return "weak";
        case SolutionClass::VeryWeak: return "very-weak";
        case SolutionClass::LimitCase: return "limit-case";
        case SolutionClass::NotVeryWeak: return "not-very-weak";
    }
    return "?";
}

/// Harmonic function on a plane sector, separated in polar coordinates:
/// u = r^lambda * (c1*cos(lambda*theta) + c2*sin(lambda*theta)), with the
/// distinct family u = c1 + c2*theta when lambda is exactly zero.
class LaplaceField {
public:
    LaplaceField(double lambda, double c1, double c2, CornerFrame frame = {})
        : lambda_(lambda), c1_(c1), c2_(c2), frame_(std::move(frame)) {}

    double lambda() const { return lambda_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    const CornerFrame& frame() const { return frame_; }

    /// Angular profile Phi(theta) so that u = r^lambda * Phi(theta).
    double angular_profile(double theta) const {
        if (lambda_ == 0.0) return c1_ + c2_ * theta;
        return c1_ * std::cos(lambda_ * theta) + c2_ * std::sin(lambda_ * theta);
    }

    double angular_profile_derivative(double theta) const {
        if (lambda_ == 0.0) return c2_;
        return lambda_ * (-c1_ * std::sin(lambda_ * theta) + c2_ * std::cos(lambda_ * theta));
    }

    double eval_polar(double r, double theta) const {
        if (r == 0.0) {
            if (lambda_ > 0.0) return 0.0;
            throw PoleAtVertex();
        }
        if (lambda_ == 0.0) return c1_ + c2_ * theta;
        return std::pow(r, lambda_) * angular_profile(theta);
    }

    double eval(Vec2 point) const {
        const auto p = frame_.polar(point);
        return eval_polar(p.r, p.theta);
    }

    /// Physical polar gradient components (d/dr u, (1/r) d/dtheta u).
    Vec2 gradient_polar(double r, double theta) const {
        if (r == 0.0) throw PoleAtVertex();
        if (lambda_ == 0.0) return {0.0, c2_ / r};
        const double rp = std::pow(r, lambda_ - 1.0);
        return {lambda_ * rp * angular_profile(theta), rp * angular_profile_derivative(theta)};
    }

    /// Cartesian gradient in world coordinates.
    Vec2 gradient(Vec2 point) const {
        const auto p = frame_.polar(point);
        const Vec2 g = gradient_polar(p.r, p.theta);
        return frame_.vector_from_polar(g.x, g.y, p.theta);
    }

private:
    double lambda_;
    double c1_, c2_;
    CornerFrame frame_;
};

enum class SectorEdge { Theta0, ThetaOmega };

/// Outward normal derivative on a sector edge; normals point out of the
/// sector 0 < theta < omega, so the theta=0 edge normal is -e_theta and the
/// theta=omega edge normal is +e_theta.
inline double normal_derivative(const LaplaceField& field, SectorEdge edge, double omega,
                                double r) {
    if (r <= 0.0) throw PoleAtVertex();
    const double theta = (edge == SectorEdge::Theta0) ? 0.0 : omega;
    const double dtheta_over_r = field.gradient_polar(r, theta).y;
    return (edge == SectorEdge::Theta0) ? -dtheta_over_r : dtheta_over_r;
}

/// Fields satisfying the homogeneous preset boundary conditions on both
/// edges: Dirichlet-Dirichlet (sin family), Neumann-Neumann (cos family),
/// or Dirichlet on theta=0 / Neumann on theta=omega.
inline LaplaceField preset(Angle omega, BcKind bc, std::int64_t k, double amplitude,
                           CornerFrame frame = {}) {
    const double lambda = laplace_exponent(omega, bc, k).value();
    const bool cosine = (bc == BcKind::NeumannNeumann);
    return LaplaceField(lambda, cosine ? amplitude : 0.0, cosine ? 0.0 : amplitude,
                        std::move(frame));
}

/// Supremum of Sobolev orders s with u in H^s near the corner (not attained).
inline double regularity_sup(const LaplaceField& field) { return 1.0 + field.lambda(); }

/// Classify the exponent lambda against the smallest positive Dirichlet
/// exponent xi: positive exponents give weak solutions, the window
/// -min(1,xi) < lambda <= 0 gives very weak solutions, lambda = -xi with
/// xi < 1 is the borderline (just outside every H^t pairing with t >= 0).
inline SolutionClass classify(double lambda, double xi) {
    if (!(xi > 0.0)) throw ValidationError("xi must be positive");
    if (lambda > 0.0) return SolutionClass::Weak;
    if (std::abs(lambda + xi) <= 1e-12 && xi < 1.0) return SolutionClass::LimitCase;
    if (lambda > -std::min(1.0, xi)) return SolutionClass::VeryWeak;
    return SolutionClass::NotVeryWeak;
}

/// Squared H^1 seminorm of the field over the annular sector
/// r_lo < r < r_hi, 0 < theta < omega, by dyadic-panel Gauss quadrature.
/// Diverges as r_lo -> 0 exactly when lambda <= 0.
inline double gradient_square_integral(const LaplaceField& field, double omega, double r_lo,
                                       double r_hi) {
    if (!(0.0 < r_lo && r_lo < r_hi)) throw ValidationError("need 0 < r_lo < r_hi");
    const auto density = [&](double r, double theta) {
        const Vec2 g = field.gradient_polar(r, theta);
        return g.x * g.x + g.y * g.y;
    };
    double total = 0.0;
    double a = r_lo;
    while (a < r_hi) {
        const double b = std::min(2.0 * a, r_hi);
        total += quad::sector_patch(density, 0.0, omega, a, b, 16, 4, 16);
        a = b;
    }
    return total;
}

}  // namespace cornersol
