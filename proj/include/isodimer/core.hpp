#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace isodimer {

// Tolerance for all geometric incidence/length checks. Adjacency is always
// stored combinatorially; coordinates are never used to infer it.
inline constexpr double kGeomTol = 1e-9;

using cplx = std::complex<double>;

// Domain precondition violations (exit code 1 in the CLI, distinct from
// usage errors).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }
inline bool near(Vec2 a, Vec2 b, double tol = kGeomTol) { return (a - b).norm() <= tol; }
inline bool near(double a, double b, double tol = kGeomTol) { return std::abs(a - b) <= tol; }
inline cplx to_cplx(Vec2 v) { return {v.x, v.y}; }
inline cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline constexpr double kPi = 3.14159265358979323846;

// Wrap an angle to (-pi, pi].
inline double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

// Signed angle from direction a to direction b, in (-pi, pi].
inline double turn(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

// Two angles naming the same unit-circle point.
inline bool same_direction(double a, double b, double tol = kGeomTol) {
    return std::abs(unit(a) - unit(b)) <= tol;
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw DomainError(msg);
}

}  // namespace isodimer
