#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "cornersol/errors.hpp"
#include "cornersol/geometry.hpp"

namespace cornersol {

using Complex = std::complex<double>;

/// Boundary-condition presets on the two corner edges theta=0 and theta=omega.
enum class BcKind {
    DirichletDirichlet,
    NeumannNeumann,
    DirichletNeumann,  // Dirichlet on theta=0, Neumann on theta=omega
};

/// A Laplace corner exponent lambda = (mult_num/mult_den) * pi/omega, kept in
/// exact multiple-of-pi/omega form; when omega itself is a rational multiple
/// of pi, lambda is an exact rational.
class LaplaceExponent {
public:
    LaplaceExponent(std::int64_t mult_num, std::int64_t mult_den, Angle omega)
        : multiple_(Rational::reduced(mult_num, mult_den)), omega_(omega) {}

    const Rational& pi_over_omega_multiple() const { return multiple_; }
    const Angle& omega() const { return omega_; }

    double value() const { return multiple_.value() * std::numbers::pi / omega_.value(); }

    /// Exact value of lambda as a plain rational, available when omega is a
    /// rational multiple of pi.
    std::optional<Rational> rational() const {
        if (!omega_.is_pi_rational()) return std::nullopt;
        const Rational& w = *omega_.pi_fraction();  // omega = (w.num/w.den) * pi
        return Rational::reduced(multiple_.num * w.den, multiple_.den * w.num);
    }

private:
    Rational multiple_;
    Angle omega_;
};

/// Exponent of the homogeneous boundary-condition presets: k*pi/omega for
/// Dirichlet-Dirichlet and Neumann-Neumann, (k-1/2)*pi/omega for mixed.
inline LaplaceExponent laplace_exponent(Angle omega, BcKind bc, std::int64_t k) {
    const double w = omega.value();
    if (!(w > 0.0) || w > 2.0 * std::numbers::pi + 1e-15)
        throw ValidationError("omega must lie in (0, 2*pi]");
    switch (bc) {
        case BcKind::DirichletDirichlet:
            if (k < 1) throw ValidationError("Dirichlet-Dirichlet preset requires k >= 1");
            return LaplaceExponent(k, 1, omega);
        case BcKind::NeumannNeumann:
            if (k < 0) throw ValidationError("Neumann-Neumann preset requires k >= 0");
            return LaplaceExponent(k, 1, omega);
        case BcKind::DirichletNeumann:
            if (k < 1) throw ValidationError("Dirichlet-Neumann preset requires k >= 1");
            return LaplaceExponent(2 * k - 1, 2, omega);
    }
    throw ValidationError("unknown boundary-condition kind");
}

/// Which factor of the Stokes Dirichlet determinant vanishes at a root:
/// Minus for sin(lambda*omega) - lambda*sin(omega), Plus for the + sign.
enum class Branch { Minus, Plus };

inline const char* branch_name(Branch b) { return b == Branch::Minus ? "minus" : "plus"; }

/// Determinant of the 2x2 Dirichlet system for the Stokes corner ansatz:
/// 4*(sin^2(lambda*omega) - lambda^2*sin^2(omega)).
inline Complex stokes_determinant(Complex lambda, double omega) {
    const Complex s = std::sin(lambda * omega);
    const double sw = std::sin(omega);
    return 4.0 * (s * s - lambda * lambda * (sw * sw));
}

/// d/dlambda of the determinant, in the analytically reduced form
/// 4*(omega*sin(2*lambda*omega) - 2*lambda*sin^2(omega)).
inline Complex stokes_determinant_derivative(Complex lambda, double omega) {
    const double sw = std::sin(omega);
    return 4.0 * (omega * std::sin(2.0 * lambda * omega) - 2.0 * lambda * (sw * sw));
}

/// The scalar factor sin(lambda*omega) -/+ lambda*sin(omega).
inline Complex stokes_branch_factor(Branch b, Complex lambda, double omega) {
    const Complex s = std::sin(lambda * omega);
    const Complex t = lambda * std::sin(omega);
    return b == Branch::Minus ? s - t : s + t;
}

inline Complex stokes_branch_factor_derivative(Branch b, Complex lambda, double omega) {
    const Complex dc = omega * std::cos(lambda * omega);
    const double sw = std::sin(omega);
    return b == Branch::Minus ? dc - sw : dc + sw;
}

/// A refined root of the Stokes Dirichlet determinant.
struct ExponentRoot {
    Complex lambda;
    double omega = 0.0;
    Branch branch = Branch::Minus;
    double residual = 0.0;  // |determinant| at lambda
};

/// Rectangle in the complex lambda plane; its boundary must stay clear of
/// roots for the argument-principle count to be meaningful.
struct SearchRegion {
    double re_min, re_max;
    double im_min, im_max;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    bool contains(Complex z, double margin = 0.0) const {
        return z.real() >= re_min - margin && z.real() <= re_max + margin &&
               z.imag() >= im_min - margin && z.imag() <= im_max + margin;
    }
};

struct RootFindOptions {
    int boundary_points = 512;       // per edge, doubled until the winding integer settles
    int max_boundary_points = 16384;
    double boundary_clearance = 1e-8;
    double branch_tol = 1e-12;       // required |branch factor| after Newton
    int newton_max_iter = 100;
    double min_cell = 1e-4;          // cells this small are refined by Newton directly
};

namespace detail {

inline void region_corners(const SearchRegion& r, Complex c[4]) {
    c[0] = {r.re_min, r.im_min};
    c[1] = {r.re_max, r.im_min};
    c[2] = {r.re_max, r.im_max};
    c[3] = {r.re_min, r.im_max};
}

template <class F>
void for_each_boundary_sample(const SearchRegion& r, int per_edge, F&& f) {
    Complex c[4];
    region_corners(r, c);
    for (int e = 0; e < 4; ++e) {
        const Complex a = c[e];
        const Complex b = c[(e + 1) % 4];
        for (int i = 0; i < per_edge; ++i) f(a + (b - a) * (static_cast<double>(i) / per_edge));
    }
}

inline double boundary_min_abs_det(double omega, const SearchRegion& r, int per_edge) {
    double mn = std::numeric_limits<double>::infinity();
    for_each_boundary_sample(r, per_edge, [&](Complex z) {
        mn = std::min(mn, std::abs(stokes_determinant(z, omega)));
    });
    return mn;
}

inline double winding_integral(double omega, const SearchRegion& r, int per_edge) {
    // trapezoid rule for (1/2*pi*i) * contour integral of det'/det
    Complex c[4];
    region_corners(r, c);
    Complex total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const Complex a = c[e];
        const Complex b = c[(e + 1) % 4];
        const Complex dz = (b - a) / static_cast<double>(per_edge);
        Complex prev = stokes_determinant_derivative(a, omega) / stokes_determinant(a, omega);
        for (int i = 1; i <= per_edge; ++i) {
            const Complex z = a + (b - a) * (static_cast<double>(i) / per_edge);
            const Complex cur = stokes_determinant_derivative(z, omega) / stokes_determinant(z, omega);
            total += 0.5 * (prev + cur) * dz;
            prev = cur;
        }
    }
    return (total / (2.0 * std::numbers::pi * Complex(0.0, 1.0))).real();
}

/// Winding number with trapezoid refinement until two consecutive point
/// counts give the same integer close to the raw integral.
inline int winding_number(double omega, const SearchRegion& r, const RootFindOptions& opt) {
    int per_edge = opt.boundary_points;
    std::optional<int> last;
    while (per_edge <= opt.max_boundary_points) {
        const double w = winding_integral(omega, r, per_edge);
        const int rounded = static_cast<int>(std::lround(w));
        if (std::abs(w - rounded) < 0.25 && last && *last == rounded) return rounded;
        last = (std::abs(w - rounded) < 0.25) ? std::optional<int>(rounded) : std::nullopt;
        per_edge *= 2;
    }
    throw RegionBoundaryHitsRoot(
        "winding number failed to stabilize; region boundary passes too close to a root");
}

inline std::optional<Complex> newton_on_branch(Branch b, double omega, Complex start,
                                               const RootFindOptions& opt) {
    Complex z = start;
    for (int it = 0; it < opt.newton_max_iter; ++it) {
        const Complex g = stokes_branch_factor(b, z, omega);
        if (std::abs(g) < 0.1 * opt.branch_tol) return z;
        const Complex dg = stokes_branch_factor_derivative(b, z, omega);
        if (std::abs(dg) == 0.0) return std::nullopt;
        z -= g / dg;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
    }
    // linear (double-root) convergence may land within tolerance without
    // hitting the early-exit threshold
    if (std::abs(stokes_branch_factor(b, z, omega)) <= opt.branch_tol) return z;
    return std::nullopt;
}

struct RootAccumulator {
    std::vector<ExponentRoot> roots;

    void add(Complex z, Branch b, double omega) {
        roots.push_back({z, omega, b, std::abs(stokes_determinant(z, omega))});
    }
};

/// A split line is usable only if no root lies on or near it. Sampled |det|
/// alone cannot certify that (roots between samples slip through, and poles
/// exactly on a contour average to stable half-windings), so the decisive
/// check is that a thin strip straddling the line has winding number zero:
/// a nearby root either lands inside the strip (nonzero count) or sits close
/// enough to its boundary that the winding integral refuses to stabilize.
inline bool split_line_is_clear(double omega, const SearchRegion& r, bool vertical, double c,
                                const RootFindOptions& opt) {
    const double span = vertical ? r.width() : r.height();
    const double delta = 0.02 * span;
    SearchRegion strip = r;
    if (vertical) {
        strip.re_min = c - delta;
        strip.re_max = c + delta;
    } else {
        strip.im_min = c - delta;
        strip.im_max = c + delta;
    }
    // cheap pre-filter: reject lines that visibly touch a root
    const int n = 256;
    for (int i = 0; i <= n; ++i) {
        const double t =
            vertical ? (r.im_min + r.height() * i / n) : (r.re_min + r.width() * i / n);
        const Complex z = vertical ? Complex(c, t) : Complex(t, c);
        if (std::abs(stokes_determinant(z, omega)) <= 0.1 * opt.boundary_clearance) return false;
    }
    try {
        return winding_number(omega, strip, opt) == 0;
    } catch (const RegionBoundaryHitsRoot&) {
        return false;
    }
}

inline void subdivide(double omega, const SearchRegion& r, int winding, RootAccumulator& acc,
                      const RootFindOptions& opt) {
    if (winding == 0) return;
    if (std::max(r.width(), r.height()) < opt.min_cell) {
        const Complex center = r.center();
        const double margin = 2.0 * opt.min_cell;
        std::vector<std::pair<Complex, Branch>> found;
        for (Branch b : {Branch::Minus, Branch::Plus}) {
            const auto z = newton_on_branch(b, omega, center, opt);
            if (z && r.contains(*z, margin)) found.push_back({*z, b});
        }
        if (found.empty())
            throw NonConvergence("Newton refinement failed from a minimal cell center");
        if (found.size() == 2 && std::abs(found[0].first - found[1].first) < 1e-9 && winding >= 2) {
            // the point annihilates both factors; report it once per branch
            acc.add(found[0].first, Branch::Minus, omega);
            acc.add(found[1].first, Branch::Plus, omega);
            for (int m = 2; m < winding; ++m) acc.add(found[0].first, found[0].second, omega);
            return;
        }
        // single distinct limit: duplicate entries carry the multiplicity
        for (int m = 0; m < winding; ++m) acc.add(found[0].first, found[0].second, omega);
        return;
    }
    const bool vertical = r.width() >= r.height();
    const double lo = vertical ? r.re_min : r.im_min;
    const double hi = vertical ? r.re_max : r.im_max;
    // candidate split positions: midline first, then deterministic shifts
    static constexpr double kFractions[] = {0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65, 0.3, 0.7};
    for (double frac : kFractions) {
        const double c = lo + frac * (hi - lo);
        if (!split_line_is_clear(omega, r, vertical, c, opt)) continue;
        SearchRegion a = r, b = r;
        if (vertical) {
            a.re_max = c;
            b.re_min = c;
        } else {
            a.im_max = c;
            b.im_min = c;
        }
        int wa = 0, wb = 0;
        try {
            wa = winding_number(omega, a, opt);
            wb = winding_number(omega, b, opt);
        } catch (const RegionBoundaryHitsRoot&) {
            continue;  // a root still sits too close to this line; try the next
        }
        if (wa + wb != winding) continue;  // the line splits a root between the halves
        subdivide(omega, a, wa, acc, opt);
        subdivide(omega, b, wb, acc, opt);
        return;
    }
    throw NonConvergence("could not place a subdivision line away from roots");
}

}  // namespace detail

/// Minimum |determinant| over sampled boundary points of the region.
inline double region_boundary_min_det(double omega, const SearchRegion& region,
                                      int per_edge = 1024) {
    return detail::boundary_min_abs_det(omega, region, per_edge);
}

/// Argument-principle root count for the region (counted with multiplicity).
inline int region_winding_number(double omega, const SearchRegion& region,
                                 const RootFindOptions& options = {}) {
    return detail::winding_number(omega, region, options);
}

/// All determinant roots inside the region, refined by Newton on the branch
/// factor that vanishes. Multiple roots appear as duplicate entries, so the
/// list length always equals the argument-principle count for the region.
inline std::vector<ExponentRoot> find_stokes_exponents(double omega, const SearchRegion& region,
                                                       const RootFindOptions& options = {}) {
    if (!(omega > 0.0) || omega > 2.0 * std::numbers::pi + 1e-15)
        throw ValidationError("omega must lie in (0, 2*pi]");
    if (!(region.re_min < region.re_max) || !(region.im_min < region.im_max))
        throw ValidationError("degenerate search region");
    const double clearance =
        detail::boundary_min_abs_det(omega, region, options.boundary_points);
    if (clearance < options.boundary_clearance)
        throw RegionBoundaryHitsRoot("search region boundary passes through a root");

    const int total = detail::winding_number(omega, region, options);
    detail::RootAccumulator acc;
    detail::subdivide(omega, region, total, acc, options);

    for (ExponentRoot& root : acc.roots) {
        // relabel only when the branches are decisively different; at a
        // double root both factors vanish and the assigned pairing stands
        const double gm = std::abs(stokes_branch_factor(Branch::Minus, root.lambda, omega));
        const double gp = std::abs(stokes_branch_factor(Branch::Plus, root.lambda, omega));
        if (root.branch == Branch::Minus && gm > 100.0 * std::max(gp, options.branch_tol))
            root.branch = Branch::Plus;
        if (root.branch == Branch::Plus && gp > 100.0 * std::max(gm, options.branch_tol))
            root.branch = Branch::Minus;
    }
    std::sort(acc.roots.begin(), acc.roots.end(), [](const ExponentRoot& a, const ExponentRoot& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        if (a.lambda.imag() != b.lambda.imag()) return a.lambda.imag() < b.lambda.imag();
        return a.branch < b.branch;
    });
    return acc.roots;
}

/// min Re(lambda) over roots with Re(lambda) > 0.
inline double smallest_positive_exponent(const std::vector<ExponentRoot>& roots) {
    double best = std::numeric_limits<double>::infinity();
    for (const ExponentRoot& r : roots)
        if (r.lambda.real() > 1e-12) best = std::min(best, r.lambda.real());
    if (!std::isfinite(best)) throw NoPositiveRoot("no root with positive real part");
    return best;
}

}  // namespace cornersol
