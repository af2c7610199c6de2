#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "cornersol/errors.hpp"
#include "cornersol/exponents.hpp"
#include "cornersol/geometry.hpp"

namespace cornersol {

/// One row of the separated Stokes ansatz u = r^lambda * U(theta),
/// p = r^(lambda-1) * P(theta): angular velocity components and pressure.
template <class Scalar>
struct BasisTriple {
    Scalar ur, utheta, p;
};

/// The four homogeneous-Stokes basis rows in polar components. For indices
/// 3 and 4 the generic rows degenerate at lambda = 0 (they collapse onto
/// rows 1 and 2), so that case uses the independent replacement rows.
template <class Scalar>
BasisTriple<Scalar> basis_polar_generic(int i, Scalar lambda, double theta) {
    using std::cos;
    using std::sin;
    const Scalar zero{0.0};
    const Scalar one{1.0};
    switch (i) {
        case 1:
            return {cos((one + lambda) * theta), -sin((one + lambda) * theta), zero};
        case 2:
            return {sin((one + lambda) * theta), cos((one + lambda) * theta), zero};
        case 3:
            if (lambda == zero)
                return {Scalar{-std::cos(theta) + 2.0 * theta * std::sin(theta)},
                        Scalar{-std::sin(theta) + 2.0 * theta * std::cos(theta)},
                        Scalar{-4.0 * std::cos(theta)}};
            return {(one - lambda) * cos((one - lambda) * theta),
                    -(one + lambda) * sin((one - lambda) * theta),
                    -4.0 * lambda * cos((one - lambda) * theta)};
        case 4:
            if (lambda == zero)
                return {Scalar{-std::sin(theta) - 2.0 * theta * std::cos(theta)},
                        Scalar{std::cos(theta) + 2.0 * theta * std::sin(theta)},
                        Scalar{-4.0 * std::sin(theta)}};
            return {(one - lambda) * sin((one - lambda) * theta),
                    (one + lambda) * cos((one - lambda) * theta),
                    -4.0 * lambda * sin((one - lambda) * theta)};
    }
    throw ValidationError("basis index must be in {1,2,3,4}");
}

inline BasisTriple<double> basis_polar(int i, double lambda, double theta) {
    return basis_polar_generic<double>(i, lambda, theta);
}

/// d/dtheta of the angular velocity component U_theta of a basis row.
template <class Scalar>
Scalar basis_utheta_derivative(int i, Scalar lambda, double theta) {
    using std::cos;
    using std::sin;
    const Scalar zero{0.0};
    const Scalar one{1.0};
    switch (i) {
        case 1:
            return -(one + lambda) * cos((one + lambda) * theta);
        case 2:
            return -(one + lambda) * sin((one + lambda) * theta);
        case 3:
            if (lambda == zero) return Scalar{std::cos(theta) - 2.0 * theta * std::sin(theta)};
            return -(one + lambda) * (one - lambda) * cos((one - lambda) * theta);
        case 4:
            if (lambda == zero) return Scalar{std::sin(theta) + 2.0 * theta * std::cos(theta)};
            return -(one + lambda) * (one - lambda) * sin((one - lambda) * theta);
    }
    throw ValidationError("basis index must be in {1,2,3,4}");
}

/// Velocity of a basis row in the frame's Cartesian axes, as a closed form
/// in theta (the rotation by theta is already folded into the expressions).
template <class Scalar>
std::array<Scalar, 2> basis_cartesian_closed(int i, Scalar lambda, double theta) {
    using std::cos;
    using std::sin;
    const Scalar zero{0.0};
    const Scalar two{2.0};
    switch (i) {
        case 1:
            return {cos(lambda * theta), -sin(lambda * theta)};
        case 2:
            return {sin(lambda * theta), cos(lambda * theta)};
        case 3:
            if (lambda == zero)
                return {Scalar{-std::cos(2.0 * theta)}, Scalar{2.0 * theta - std::sin(2.0 * theta)}};
            return {cos(lambda * theta) - lambda * cos((two - lambda) * theta),
                    sin(lambda * theta) - lambda * sin((two - lambda) * theta)};
        case 4:
            if (lambda == zero)
                return {Scalar{-2.0 * theta - std::sin(2.0 * theta)}, Scalar{std::cos(2.0 * theta)}};
            return {-sin(lambda * theta) - lambda * sin((two - lambda) * theta),
                    cos(lambda * theta) + lambda * cos((two - lambda) * theta)};
    }
    throw ValidationError("basis index must be in {1,2,3,4}");
}

/// Reduction of (c1, c2) from the edge condition U(0) = 0 given unit weight
/// on basis j in {3, 4}: rows 1 and 2 evaluate to the identity at theta = 0,
/// so c1 = -U_r^(j)(0) and c2 = -U_theta^(j)(0).
template <class Scalar>
std::array<Scalar, 2> vertex_edge_reduction(int j, Scalar lambda) {
    const BasisTriple<Scalar> b = basis_polar_generic(j, lambda, 0.0);
    return {-b.ur, -b.utheta};
}

/// The 2x2 system for (c3, c4) obtained by eliminating (c1, c2) via the
/// theta = 0 edge condition and imposing U(omega) = 0; row-major entries.
template <class Scalar>
std::array<Scalar, 4> dirichlet_matrix(Scalar lambda, double omega) {
    const BasisTriple<Scalar> b1 = basis_polar_generic(1, lambda, omega);
    const BasisTriple<Scalar> b2 = basis_polar_generic(2, lambda, omega);
    const BasisTriple<Scalar> b3 = basis_polar_generic(3, lambda, omega);
    const BasisTriple<Scalar> b4 = basis_polar_generic(4, lambda, omega);
    const std::array<Scalar, 2> r3 = vertex_edge_reduction(3, lambda);
    const std::array<Scalar, 2> r4 = vertex_edge_reduction(4, lambda);
    return {b3.ur + r3[0] * b1.ur + r3[1] * b2.ur,
            b4.ur + r4[0] * b1.ur + r4[1] * b2.ur,
            b3.utheta + r3[0] * b1.utheta + r3[1] * b2.utheta,
            b4.utheta + r4[0] * b1.utheta + r4[1] * b2.utheta};
}

/// Determinant of the assembled 2x2 Dirichlet system; analytically equal to
/// stokes_determinant (checked as a property, not assumed).
inline Complex assembled_dirichlet_determinant(Complex lambda, double omega) {
    const std::array<Complex, 4> m = dirichlet_matrix(lambda, omega);
    return m[0] * m[3] - m[1] * m[2];
}

/// Nullspace construction for the Dirichlet corner field at a determinant
/// root: (c3, c4) spans the kernel of the 2x2 system (unit norm, first
/// nonzero component rotated to the positive real axis), and (c1, c2)
/// follow from the theta = 0 edge condition.
struct DirichletCoefficients {
    std::array<Complex, 4> c;
    double smallest_singular_value = 0.0;
    double largest_singular_value = 0.0;
    bool double_root = false;  // both singular values vanish: 2D kernel
};

inline DirichletCoefficients dirichlet_coefficients(double omega, Complex lambda) {
    const std::array<Complex, 4> m = dirichlet_matrix(lambda, omega);
    // singular values via the Hermitian 2x2 Gram matrix
    const double a = std::norm(m[0]) + std::norm(m[2]);
    const double c = std::norm(m[1]) + std::norm(m[3]);
    const Complex b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const double mid = 0.5 * (a + c);
    const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
    const double mu_min = std::max(0.0, mid - rad);
    const double mu_max = mid + rad;

    DirichletCoefficients out;
    out.smallest_singular_value = std::sqrt(mu_min);
    out.largest_singular_value = std::sqrt(mu_max);
    if (out.smallest_singular_value > 1e-6)
        throw NotARoot("the Dirichlet system is nonsingular at this lambda");
    out.double_root = out.largest_singular_value < 1e-10;

    // kernel of the Gram matrix at its smallest eigenvalue
    Complex v3, v4;
    if (out.double_root) {
        v3 = 1.0;
        v4 = 0.0;
    } else {
        const Complex cand1[2] = {b, Complex(mu_min - a, 0.0)};
        const Complex cand2[2] = {Complex(mu_min - c, 0.0), std::conj(b)};
        const double n1 = std::sqrt(std::norm(cand1[0]) + std::norm(cand1[1]));
        const double n2 = std::sqrt(std::norm(cand2[0]) + std::norm(cand2[1]));
        if (n1 >= n2) {
            v3 = cand1[0] / n1;
            v4 = cand1[1] / n1;
        } else {
            v3 = cand2[0] / n2;
            v4 = cand2[1] / n2;
        }
    }
    const Complex lead = (std::abs(v3) > 1e-12) ? v3 : v4;
    const Complex phase = lead / std::abs(lead);
    v3 /= phase;
    v4 /= phase;

    const std::array<Complex, 2> r3 = vertex_edge_reduction(3, lambda);
    const std::array<Complex, 2> r4 = vertex_edge_reduction(4, lambda);
    out.c = {r3[0] * v3 + r4[0] * v4, r3[1] * v3 + r4[1] * v4, v3, v4};
    return out;
}

/// Linear combination of the four basis rows with a real exponent:
/// u = r^lambda * sum_i c_i U^(i)(theta), p = r^(lambda-1) * sum_i c_i P^(i).
class StokesField {
public:
    StokesField(double lambda, std::array<double, 4> coeffs, CornerFrame frame = {})
        : lambda_(lambda), coeffs_(coeffs), frame_(std::move(frame)) {}

    double lambda() const { return lambda_; }
    const std::array<double, 4>& coeffs() const { return coeffs_; }
    const CornerFrame& frame() const { return frame_; }

    double coeff_scale() const {
        return std::abs(coeffs_[0]) + std::abs(coeffs_[1]) + std::abs(coeffs_[2]) +
               std::abs(coeffs_[3]);
    }

    /// Angular velocity profile (U_r, U_theta) at theta.
    Vec2 velocity_angular(double theta) const {
        double ur = 0.0, ut = 0.0;
        for (int i = 1; i <= 4; ++i) {
            const BasisTriple<double> b = basis_polar(i, lambda_, theta);
            ur += coeffs_[i - 1] * b.ur;
            ut += coeffs_[i - 1] * b.utheta;
        }
        return {ur, ut};
    }

    double pressure_angular(double theta) const {
        double p = 0.0;
        for (int i = 3; i <= 4; ++i) p += coeffs_[i - 1] * basis_polar(i, lambda_, theta).p;
        return p;
    }

    /// Physical polar velocity components (u_r, u_theta) at (r, theta).
    Vec2 velocity_polar(double r, double theta) const {
        if (r == 0.0) {
            if (lambda_ > 0.0) return {0.0, 0.0};
            throw PoleAtVertex();
        }
        const Vec2 ang = velocity_angular(theta);
        return std::pow(r, lambda_) * ang;
    }

    /// Cartesian velocity in world coordinates. Evaluates both the rotated
    /// polar components and the closed-form Cartesian profile and
    /// cross-checks them before returning the closed form.
    Vec2 velocity_cartesian(Vec2 point) const {
        const auto pol = frame_.polar(point);
        if (pol.r == 0.0) {
            if (lambda_ > 0.0) return {0.0, 0.0};
            throw PoleAtVertex();
        }
        const double rp = std::pow(pol.r, lambda_);
        double ux = 0.0, uy = 0.0;
        for (int i = 1; i <= 4; ++i) {
            const std::array<double, 2> u = basis_cartesian_closed(i, lambda_, pol.theta);
            ux += coeffs_[i - 1] * u[0];
            uy += coeffs_[i - 1] * u[1];
        }
        const Vec2 closed = frame_.vector_from_frame({rp * ux, rp * uy});
        const Vec2 ang = velocity_angular(pol.theta);
        const Vec2 rotated = frame_.vector_from_polar(rp * ang.x, rp * ang.y, pol.theta);
        const double scale = rp * (1.0 + std::abs(lambda_)) * coeff_scale() + norm(closed);
        if (norm(closed - rotated) > 1e-12 * scale)
            throw NumericalError("polar/Cartesian representations disagree");
        return closed;
    }

    double pressure(Vec2 point) const {
        const auto pol = frame_.polar(point);
        if (pol.r == 0.0 && lambda_ < 1.0) throw PoleAtVertex();
        return std::pow(pol.r, lambda_ - 1.0) * pressure_angular(pol.theta);
    }

    /// Analytic divergence r^(lambda-1) * ((1+lambda) U_r + U_theta');
    /// identically zero for every basis combination, kept as a checkable
    /// quantity rather than a hard-coded zero.
    double divergence_polar(double r, double theta) const {
        if (r <= 0.0) throw PoleAtVertex();
        double ur = 0.0, dut = 0.0;
        for (int i = 1; i <= 4; ++i) {
            ur += coeffs_[i - 1] * basis_polar(i, lambda_, theta).ur;
            dut += coeffs_[i - 1] * basis_utheta_derivative(i, lambda_, theta);
        }
        return std::pow(r, lambda_ - 1.0) * ((1.0 + lambda_) * ur + dut);
    }

    /// Second-order central-difference approximation of -Delta(u) + grad(p)
    /// in world Cartesian components; measures how far the field is from
    /// solving the momentum equation (truncation error only, O(h^2)).
    Vec2 momentum_residual_fd(Vec2 point, double h) const {
        const auto pol = frame_.polar(point);
        if (!(h > 0.0) || 4.0 * h >= pol.r)
            throw StepTooLarge("need 0 < 4h < r for the difference stencil");
        const Vec2 ex{h, 0.0}, ey{0.0, h};
        const Vec2 uc = velocity_cartesian(point);
        const Vec2 uxp = velocity_cartesian(point + ex), uxm = velocity_cartesian(point - ex);
        const Vec2 uyp = velocity_cartesian(point + ey), uym = velocity_cartesian(point - ey);
        const Vec2 lap = (uxp + uxm + uyp + uym - 4.0 * uc) / (h * h);
        const double px = (pressure(point + ex) - pressure(point - ex)) / (2.0 * h);
        const double py = (pressure(point + ey) - pressure(point - ey)) / (2.0 * h);
        return {-lap.x + px, -lap.y + py};
    }

private:
    double lambda_;
    std::array<double, 4> coeffs_;
    CornerFrame frame_;
};

/// Dirichlet corner field for a real determinant root: velocity vanishing
/// on both edges theta = 0 and theta = omega.
inline StokesField dirichlet_field(double omega, const ExponentRoot& root,
                                   CornerFrame frame = {}) {
    if (std::abs(root.lambda.imag()) > 1e-10)
        throw ValidationError("dirichlet_field requires a real exponent");
    const DirichletCoefficients dc = dirichlet_coefficients(omega, root.lambda);
    std::array<double, 4> c{};
    for (int i = 0; i < 4; ++i) {
        if (std::abs(dc.c[i].imag()) > 1e-10)
            throw NumericalError("coefficients acquired an imaginary part at a real root");
        c[i] = dc.c[i].real();
    }
    return StokesField(root.lambda.real(), c, std::move(frame));
}

/// Sobolev suprema (s_u, s_p) with u in H^(s_u'), p in H^(s_p') for all
/// s_u' < s_u = 1+lambda and s_p' < s_p = lambda (not attained).
struct StokesRegularity {
    double s_u;
    double s_p;
};

inline StokesRegularity regularity_sup_stokes(const StokesField& field) {
    return {1.0 + field.lambda(), field.lambda()};
}

}  // namespace cornersol
