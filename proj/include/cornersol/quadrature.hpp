#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "cornersol/errors.hpp"
#include "cornersol/geometry.hpp"

namespace cornersol::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

namespace detail {

inline GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    // Newton iteration on P_n from the Chebyshev-based initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // settle the weight with one extra polynomial evaluation
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;
    return rule;
}

}  // namespace detail

/// Cached rule of the given order (1..200).
inline const GaussRule& gauss(int n) {
    if (n < 1 || n > 200) throw ValidationError("gauss rule order out of range");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss(n)).first;
    return it->second;
}

template <class F>
double integrate(F&& f, double a, double b, int order) {
    const GaussRule& g = gauss(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i) sum += g.w[i] * f(mid + half * g.x[i]);
    return half * sum;
}

template <class F>
double integrate_panels(F&& f, double a, double b, int panels, int order) {
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        sum += integrate(f, pa, pb, order);
    }
    return sum;
}

/// Quadrature points on the reference triangle (0,0)-(1,0)-(0,1), exact for
/// polynomials up to the requested degree. Built by the Duffy transform of a
/// tensor Gauss rule, so the weights sum to the reference area 1/2.
struct TriangleRule {
    struct Point {
        double x, y, w;
    };
    std::vector<Point> points;
};

inline const TriangleRule& triangle_rule(int degree) {
    static std::map<int, TriangleRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(degree);
    if (it == cache.end()) {
        const int n = (degree + 3) / 2;  // Gauss order covering degree+1 in the collapsed variable
        const GaussRule& g = detail::compute_gauss(n);
        TriangleRule rule;
        rule.points.reserve(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            const double u = 0.5 * (g.x[i] + 1.0);
            const double wu = 0.5 * g.w[i];
            for (int j = 0; j < n; ++j) {
                const double v = 0.5 * (g.x[j] + 1.0);
                const double wv = 0.5 * g.w[j];
                rule.points.push_back({u * (1.0 - v), v, wu * wv * (1.0 - v)});
            }
        }
        it = cache.emplace(degree, std::move(rule)).first;
    }
    return it->second;
}

/// Integral of f(r, theta) * r over [ra, rb] x [t0, t1].
template <class F>
double sector_patch(F&& f, double t0, double t1, double ra, double rb, int radial_order,
                    int angular_panels, int angular_order) {
    return integrate(
        [&](double r) {
            const double ring =
                integrate_panels([&](double t) { return f(r, t); }, t0, t1, angular_panels,
                                 angular_order);
            return ring * r;
        },
        ra, rb, radial_order);
}

}  // namespace cornersol::quad
