#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cornersol/stokes.hpp"

using namespace cornersol;

namespace {

// hand-rolled frame-free rotation of polar components to Cartesian ones
Vec2 rotate_polar(const BasisTriple<double>& b, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {b.ur * c - b.utheta * s, b.ur * s + b.utheta * c};
}

StokesField single_row(int i, double lambda) {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
    c[i - 1] = 1.0;
    return StokesField(lambda, c);
}

// central-difference divergence in Cartesian coordinates
double fd_divergence(const StokesField& u, Vec2 p, double h) {
    const Vec2 xp = u.velocity_cartesian({p.x + h, p.y});
    const Vec2 xm = u.velocity_cartesian({p.x - h, p.y});
    const Vec2 yp = u.velocity_cartesian({p.x, p.y + h});
    const Vec2 ym = u.velocity_cartesian({p.x, p.y - h});
    return (xp.x - xm.x) / (2.0 * h) + (yp.y - ym.y) / (2.0 * h);
}

}  // namespace

TEST(StokesBasis, KnownPolarValues) {
    const auto b1 = basis_polar(1, 0.5, 0.0);
    EXPECT_DOUBLE_EQ(b1.ur, 1.0);
    EXPECT_DOUBLE_EQ(b1.utheta, 0.0);
    EXPECT_DOUBLE_EQ(b1.p, 0.0);

    const auto b3 = basis_polar(3, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(b3.ur, 0.0);
    EXPECT_DOUBLE_EQ(b3.utheta, 0.0);
    EXPECT_DOUBLE_EQ(b3.p, -4.0);

    const auto b4 = basis_polar(4, 0.0, 0.5 * std::numbers::pi);
    EXPECT_NEAR(b4.ur, -1.0, 1e-15);
    EXPECT_NEAR(b4.utheta, std::numbers::pi, 1e-15);
    EXPECT_NEAR(b4.p, -4.0, 1e-15);

    EXPECT_THROW(basis_polar(0, 0.5, 0.0), ValidationError);
    EXPECT_THROW(basis_polar(5, 0.5, 0.0), ValidationError);
}

TEST(StokesBasis, CartesianClosedFormKnownValue) {
    // row 3 at lambda = 1/2, theta = pi:
    // (cos(pi/2) - 0.5 cos(3pi/2), sin(pi/2) - 0.5 sin(3pi/2)) = (0, 3/2)
    const auto u = basis_cartesian_closed(3, 0.5, std::numbers::pi);
    EXPECT_NEAR(u[0], 0.0, 1e-15);
    EXPECT_NEAR(u[1], 1.5, 1e-15);
}

TEST(StokesBasis, RotationMatchesClosedForms) {
    std::mt19937 rng(6101);
    std::uniform_real_distribution<double> lam(-2.0, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const double lambda = lam(rng);
        const double theta = ang(rng);
        for (int i = 1; i <= 4; ++i) {
            const Vec2 rotated = rotate_polar(basis_polar(i, lambda, theta), theta);
            const auto closed = basis_cartesian_closed(i, lambda, theta);
            EXPECT_NEAR(rotated.x, closed[0], 1e-12) << "i=" << i << " lambda=" << lambda;
            EXPECT_NEAR(rotated.y, closed[1], 1e-12) << "i=" << i << " lambda=" << lambda;
        }
    }
    // the replacement rows at lambda = 0
    for (int trial = 0; trial < 100; ++trial) {
        const double theta = ang(rng);
        for (int i = 1; i <= 4; ++i) {
            const Vec2 rotated = rotate_polar(basis_polar(i, 0.0, theta), theta);
            const auto closed = basis_cartesian_closed(i, 0.0, theta);
            EXPECT_NEAR(rotated.x, closed[0], 1e-12) << "i=" << i << " theta=" << theta;
            EXPECT_NEAR(rotated.y, closed[1], 1e-12) << "i=" << i << " theta=" << theta;
        }
    }
}

TEST(StokesBasis, UthetaDerivativeMatchesFiniteDifferences) {
    std::mt19937 rng(6102);
    std::uniform_real_distribution<double> lam(-2.0, 3.0);
    std::uniform_real_distribution<double> ang(0.1, 2.0 * std::numbers::pi - 0.1);
    const double h = 1e-6;
    for (int trial = 0; trial < 50; ++trial) {
        for (double lambda : {lam(rng), 0.0}) {
            const double theta = ang(rng);
            for (int i = 1; i <= 4; ++i) {
                const double fd = (basis_polar(i, lambda, theta + h).utheta -
                                   basis_polar(i, lambda, theta - h).utheta) /
                                  (2.0 * h);
                EXPECT_NEAR(basis_utheta_derivative(i, lambda, theta), fd, 1e-7)
                    << "i=" << i << " lambda=" << lambda;
            }
        }
    }
}

TEST(StokesField, DivergenceFreeAnalyticallyAndByFd) {
    std::mt19937 rng(6103);
    std::uniform_real_distribution<double> lam(-1.5, 2.5);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_real_distribution<double> rad(0.3, 2.0);
    std::uniform_real_distribution<double> ang(0.1, 1.4 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const double lambda = (trial % 10 == 0) ? 0.0 : lam(rng);
        const StokesField u(lambda, {coef(rng), coef(rng), coef(rng), coef(rng)});
        const double r = rad(rng);
        const double theta = ang(rng);
        const double scale =
            std::pow(r, lambda - 1.0) * (1.0 + std::abs(lambda)) * u.coeff_scale();
        EXPECT_LE(std::abs(u.divergence_polar(r, theta)), 1e-12 * scale);
        const Vec2 p = CornerFrame{}.point_at(r, theta);
        EXPECT_NEAR(fd_divergence(u, p, 1e-6 * r), 0.0, 1e-5 * (1.0 + scale));
    }
}

TEST(StokesField, MomentumResidualVanishesAtSecondOrder) {
    // the residual -laplace(u) + grad(p) is analytically zero; the five-point
    // stencil exposes only its own O(h^2) truncation error
    std::mt19937 rng(6104);
    std::uniform_real_distribution<double> lam(-1.0, 2.5);
    std::uniform_real_distribution<double> rad(0.5, 1.5);
    std::uniform_real_distribution<double> ang(0.3, 1.2 * std::numbers::pi);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const double lambda = lam(rng);
        const int i = 1 + trial % 4;
        const StokesField u = single_row(i, lambda);
        const Vec2 p = CornerFrame{}.point_at(rad(rng), ang(rng));
        const double h = 1e-3;
        const double r1 = norm(u.momentum_residual_fd(p, h));
        const double r2 = norm(u.momentum_residual_fd(p, 0.5 * h));
        // the five-point stencil carries roundoff ~eps*|u|/h^2; only trust the
        // Richardson ratio when the coarse residual stands well above it
        const double noise = 5e-8 * (1.0 + norm(u.velocity_cartesian(p)));
        if (r1 < noise) {
            EXPECT_LE(r2, noise) << "i=" << i << " lambda=" << lambda;
            continue;
        }
        EXPECT_NEAR(r1 / r2, 4.0, 0.9) << "i=" << i << " lambda=" << lambda;
        ++checked;
    }
    EXPECT_GE(checked, 80);

    // lambda = 1, row 1 is globally linear: no truncation term at all, so the
    // residual is pure stencil roundoff, bounded by ~eps/h^2
    const StokesField lin = single_row(1, 1.0);
    EXPECT_LE(norm(lin.momentum_residual_fd({0.4, 0.7}, 1e-3)), 2e-9);

    EXPECT_THROW(single_row(1, 0.5).momentum_residual_fd({0.1, 0.0}, 0.05), StepTooLarge);
}

TEST(StokesField, CartesianAgreesWithHandRotation) {
    std::mt19937 rng(6105);
    std::uniform_real_distribution<double> lam(-1.0, 2.0);
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    std::uniform_real_distribution<double> rad(0.2, 2.5);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const double lambda = lam(rng);
        const StokesField u(lambda, {coef(rng), coef(rng), coef(rng), coef(rng)});
        const double r = rad(rng);
        const double theta = ang(rng);
        const Vec2 pol = u.velocity_polar(r, theta);
        const double c = std::cos(theta), s = std::sin(theta);
        const Vec2 expected{pol.x * c - pol.y * s, pol.x * s + pol.y * c};
        const Vec2 got = u.velocity_cartesian(CornerFrame{}.point_at(r, theta));
        const double tol = 1e-11 * (1.0 + norm(expected));
        EXPECT_NEAR(got.x, expected.x, tol);
        EXPECT_NEAR(got.y, expected.y, tol);
    }
}

TEST(StokesField, FrameEquivalence) {
    const double tilt = 2.0 * std::numbers::pi / 3.0;
    const CornerFrame frame({-0.3, 0.8}, {std::cos(tilt), std::sin(tilt)});
    const StokesField rotated(0.7, {0.4, -0.9, 1.1, 0.2}, frame);
    const StokesField plain(0.7, {0.4, -0.9, 1.1, 0.2});
    const double r = 0.9, theta = 0.6;
    const Vec2 world = rotated.velocity_cartesian(frame.point_at(r, theta));
    const Vec2 local = plain.velocity_cartesian(CornerFrame{}.point_at(r, theta));
    // world components are the local ones rotated by the frame's base angle
    const Vec2 expected = frame.vector_from_frame(local);
    EXPECT_NEAR(world.x, expected.x, 1e-13);
    EXPECT_NEAR(world.y, expected.y, 1e-13);
    EXPECT_NEAR(rotated.pressure(frame.point_at(r, theta)),
                plain.pressure(CornerFrame{}.point_at(r, theta)), 1e-13);
}

TEST(StokesField, PressureValues) {
    // lambda = 1, c = (0,0,1,0): p = -4 everywhere, including the vertex
    const StokesField u = single_row(3, 1.0);
    EXPECT_DOUBLE_EQ(u.pressure({0.7, -0.2}), -4.0);
    EXPECT_DOUBLE_EQ(u.pressure({0.0, 0.0}), -4.0);

    // lambda = 1/2: p = r^(-1/2) * (-4)(1/2) cos(theta/2) for row 3
    const StokesField v = single_row(3, 0.5);
    const double r = 0.64, theta = 0.9;
    EXPECT_NEAR(v.pressure(CornerFrame{}.point_at(r, theta)),
                std::pow(r, -0.5) * (-2.0) * std::cos(0.5 * theta), 1e-13);
    EXPECT_THROW(v.pressure({0.0, 0.0}), PoleAtVertex);

    // rows 1 and 2 carry no pressure
    EXPECT_DOUBLE_EQ(single_row(1, 0.5).pressure({0.3, 0.4}), 0.0);
    EXPECT_DOUBLE_EQ(single_row(2, 0.5).pressure({0.3, 0.4}), 0.0);
}

TEST(StokesField, VertexBehaviour) {
    const StokesField pos = single_row(1, 0.5);
    const Vec2 at_vertex = pos.velocity_cartesian({0.0, 0.0});
    EXPECT_DOUBLE_EQ(at_vertex.x, 0.0);
    EXPECT_DOUBLE_EQ(at_vertex.y, 0.0);
    const StokesField neg = single_row(1, -0.5);
    EXPECT_THROW(neg.velocity_cartesian({0.0, 0.0}), PoleAtVertex);
    EXPECT_THROW(neg.divergence_polar(0.0, 0.3), PoleAtVertex);
}

TEST(DirichletSystem, AssembledDeterminantEqualsClosedForm) {
    // eliminating (c1, c2) by hand shows det M = 4 (sin^2(lambda omega) -
    // lambda^2 sin^2(omega)) exactly, with proportionality constant one
    std::mt19937 rng(6106);
    std::uniform_real_distribution<double> re(-3.0, 3.0);
    std::uniform_real_distribution<double> womega(0.3, 2.0 * std::numbers::pi);
    for (int trial = 0; trial < 2000; ++trial) {
        const Complex lambda{re(rng), re(rng)};
        if (std::abs(lambda) < 1e-6) continue;  // lambda = 0 uses replacement rows
        const double omega = womega(rng);
        const Complex assembled = assembled_dirichlet_determinant(lambda, omega);
        const Complex closed = stokes_determinant(lambda, omega);
        EXPECT_LE(std::abs(assembled - closed), 1e-10 * (1.0 + std::abs(closed)))
            << "lambda=" << lambda << " omega=" << omega;
    }
}

TEST(DirichletKernel, NullspaceAgainstExplicitSolve) {
    const double omega = 1.5 * std::numbers::pi;
    const Complex lambda(0.54448373678246393, 0.0);
    const auto dc = dirichlet_coefficients(omega, lambda);
    EXPECT_LE(dc.smallest_singular_value, 1e-9);
    EXPECT_FALSE(dc.double_root);

    // independent check: (c3, c4) must be annihilated by the assembled system
    const auto m = dirichlet_matrix(lambda, omega);
    const Complex row1 = m[0] * dc.c[2] + m[1] * dc.c[3];
    const Complex row2 = m[2] * dc.c[2] + m[3] * dc.c[3];
    EXPECT_LE(std::abs(row1), 1e-9);
    EXPECT_LE(std::abs(row2), 1e-9);

    // explicit kernel direction of a rank-one 2x2 system: (m12, -m11) or
    // (m22, -m21), whichever row is better conditioned
    const bool top = std::abs(m[0]) + std::abs(m[1]) >= std::abs(m[2]) + std::abs(m[3]);
    const Complex v1 = top ? m[1] : m[3];
    const Complex v2 = top ? -m[0] : -m[2];
    const double colin = std::abs(dc.c[2] * v2 - dc.c[3] * v1);
    EXPECT_LE(colin, 1e-9 * (std::abs(v1) + std::abs(v2)));
}

TEST(DirichletKernel, NonRootIsRejected) {
    EXPECT_THROW(dirichlet_coefficients(1.5 * std::numbers::pi, Complex(0.7, 0.0)), NotARoot);
}

TEST(DirichletKernel, SlitDoubleRoot) {
    const auto dc = dirichlet_coefficients(2.0 * std::numbers::pi, Complex(0.5, 0.0));
    EXPECT_TRUE(dc.double_root);
    EXPECT_LE(dc.largest_singular_value, 1e-10);
    // the canonical member of the 2D kernel: c = (-1/2, 0, 1, 0)
    EXPECT_NEAR(dc.c[0].real(), -0.5, 1e-12);
    EXPECT_NEAR(std::abs(dc.c[1]), 0.0, 1e-12);
    EXPECT_NEAR(dc.c[2].real(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(dc.c[3]), 0.0, 1e-12);
}

TEST(DirichletField, EdgeVelocitiesVanish) {
    struct Case {
        double omega;
        double lambda;
        Branch branch;
    };
    const Case cases[] = {
        {1.5 * std::numbers::pi, 0.54448373678246393, Branch::Plus},
        {1.5 * std::numbers::pi, 0.90852918984609882, Branch::Minus},
        {1.5 * std::numbers::pi, 1.0, Branch::Minus},
        {2.0 * std::numbers::pi, 0.5, Branch::Plus},
    };
    for (const auto& c : cases) {
        const ExponentRoot root{Complex(c.lambda, 0.0), c.omega, c.branch, 0.0};
        const StokesField u = dirichlet_field(c.omega, root);
        if (c.lambda == 1.0) continue;  // degenerate: u == 0, rigid pressure
        EXPECT_GT(u.coeff_scale(), 1e-3);
        for (int j = 1; j <= 20; ++j) {
            const double r = 0.1 * j;
            const double scale = std::pow(r, c.lambda) * u.coeff_scale();
            EXPECT_LE(norm(u.velocity_polar(r, 0.0)), 1e-10 * scale)
                << "omega=" << c.omega << " lambda=" << c.lambda;
            EXPECT_LE(norm(u.velocity_polar(r, c.omega)), 1e-10 * scale)
                << "omega=" << c.omega << " lambda=" << c.lambda;
        }
    }
}

TEST(DirichletField, DegenerateUnitExponent) {
    // at lambda = 1 the kernel produces zero velocity with constant pressure
    const ExponentRoot root{Complex(1.0, 0.0), 1.5 * std::numbers::pi, Branch::Minus, 0.0};
    const StokesField u = dirichlet_field(root.omega, root);
    EXPECT_LE(norm(u.velocity_cartesian({0.4, 0.3})), 1e-12);
    EXPECT_NEAR(std::abs(u.pressure({0.4, 0.3})), 4.0, 1e-12);
}

TEST(DirichletField, ComplexRootIsRejected) {
    const ExponentRoot root{Complex(2.0, 1.0), 0.5 * std::numbers::pi, Branch::Plus, 0.0};
    EXPECT_THROW(dirichlet_field(root.omega, root), ValidationError);
}

TEST(Regularity, StokesSupremum) {
    const StokesField u = single_row(3, 0.54448373678246393);
    const StokesRegularity reg = regularity_sup_stokes(u);
    EXPECT_DOUBLE_EQ(reg.s_u, 1.54448373678246393);
    EXPECT_DOUBLE_EQ(reg.s_p, 0.54448373678246393);
}
