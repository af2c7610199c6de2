#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>

#include "cornersol/errors.hpp"

namespace cornersol {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return s * a; }
    friend Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Reduced fraction with positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational reduced(std::int64_t n, std::int64_t d) {
        if (d == 0) throw ValidationError("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        return {g == 0 ? n : n / g, g == 0 ? d : d / g};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// An angle that remembers when it is an exact rational multiple of pi, so
/// quantities like k*pi/omega can be reported as exact fractions.
class Angle {
public:
    Angle() = default;

    static Angle radians(double v) {
        Angle a;
        a.value_ = v;
        return a;
    }

    /// num/den * pi.
    static Angle pi_times(std::int64_t num, std::int64_t den = 1) {
        const Rational f = Rational::reduced(num, den);
        Angle a;
        a.pi_fraction_ = f;
        a.value_ = f.value() * std::numbers::pi;
        return a;
    }

    double value() const { return value_; }
    bool is_pi_rational() const { return pi_fraction_.has_value(); }
    const std::optional<Rational>& pi_fraction() const { return pi_fraction_; }

    friend bool operator==(const Angle& a, const Angle& b) {
        if (a.pi_fraction_.has_value() != b.pi_fraction_.has_value()) return false;
        if (a.pi_fraction_) return *a.pi_fraction_ == *b.pi_fraction_;
        return a.value_ == b.value_;
    }

private:
    double value_ = 0.0;
    std::optional<Rational> pi_fraction_;
};

/// Local polar frame at a corner: theta is measured counterclockwise from
/// edge0_direction, and the sector occupies 0 <= theta <= omega.
class CornerFrame {
public:
    CornerFrame() = default;
    CornerFrame(Vec2 vertex, Vec2 edge0_direction) : vertex_(vertex) {
        const double n = norm(edge0_direction);
        if (!(n > 0.0)) throw ValidationError("corner frame needs a nonzero edge direction");
        edge0_ = edge0_direction / n;
        base_angle_ = std::atan2(edge0_.y, edge0_.x);
    }

    Vec2 vertex() const { return vertex_; }
    Vec2 edge0_direction() const { return edge0_; }

    struct Polar {
        double r;
        double theta;  // in [0, 2*pi)
    };

    Polar polar(Vec2 p) const {
        const Vec2 d = p - vertex_;
        const double r = norm(d);
        double theta = std::atan2(d.y, d.x) - base_angle_;
        const double two_pi = 2.0 * std::numbers::pi;
        while (theta < 0.0) theta += two_pi;
        while (theta >= two_pi) theta -= two_pi;
        return {r, theta};
    }

    Vec2 point_at(double r, double theta) const {
        const double a = theta + base_angle_;
        return vertex_ + Vec2{r * std::cos(a), r * std::sin(a)};
    }

    /// World components of v_r*e_r + v_theta*e_theta at local angle theta.
    Vec2 vector_from_polar(double v_r, double v_theta, double theta) const {
        const double a = theta + base_angle_;
        const double c = std::cos(a);
        const double s = std::sin(a);
        return {c * v_r - s * v_theta, s * v_r + c * v_theta};
    }

    /// World components of a vector given in the frame's Cartesian axes
    /// (x along edge0, y at +90 degrees).
    Vec2 vector_from_frame(Vec2 v) const {
        const double c = std::cos(base_angle_);
        const double s = std::sin(base_angle_);
        return {c * v.x - s * v.y, s * v.x + c * v.y};
    }

private:
    Vec2 vertex_{0.0, 0.0};
    Vec2 edge0_{1.0, 0.0};
    double base_angle_ = 0.0;
};

}  // namespace cornersol
