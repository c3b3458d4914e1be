#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rigidflow {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Error taxonomy. Construction-time invariant violations and user input
// problems throw; diagnostics (residual checks) return values instead.
// ---------------------------------------------------------------------------

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error("geometry: " + msg) {}
};
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error("numeric: " + msg) {}
};
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error("input: " + msg) {}
};
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error("io: " + msg) {}
};

// ---------------------------------------------------------------------------
// Small fixed-size vectors. Geometry and dynamics live on these; Eigen is
// reserved for the sparse solves.
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
    // Counterclockwise rotation by pi/2; the global perp convention.
    Vec2 perp() const { return {-y, x}; }
};
inline Vec2 operator*(double s, Vec2 v) { return v * s; }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(Vec3 o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(Vec3 o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const { double n = norm(); return {x / n, y / n, z / n}; }
};
inline Vec3 operator*(double s, Vec3 v) { return v * s; }

struct Mat2 {
    // row-major a[r][c]
    double a[2][2] = {{1, 0}, {0, 1}};

    static Mat2 rotation(double angle) {
        double c = std::cos(angle), s = std::sin(angle);
        Mat2 m;
        m.a[0][0] = c; m.a[0][1] = -s;
        m.a[1][0] = s; m.a[1][1] = c;
        return m;
    }
    Vec2 operator*(Vec2 v) const {
        return {a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y};
    }
    Mat2 transposed() const {
        Mat2 m = *this;
        std::swap(m.a[0][1], m.a[1][0]);
        return m;
    }
};

struct Mat3 {
    double a[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    static Mat3 identity() { return Mat3{}; }
    static Mat3 zero() {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m.a[r][c] = 0.0;
        return m;
    }
    Vec3 operator*(Vec3 v) const {
        return {a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
                a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
                a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z};
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 m = zero();
        for (int r = 0; r < 3; ++r)
            for (int k = 0; k < 3; ++k)
                for (int c = 0; c < 3; ++c) m.a[r][c] += a[r][k] * o.a[k][c];
        return m;
    }
    Mat3 operator+(const Mat3& o) const {
        Mat3 m = zero();
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m.a[r][c] = a[r][c] + o.a[r][c];
        return m;
    }
    Mat3 operator*(double s) const {
        Mat3 m = *this;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m.a[r][c] *= s;
        return m;
    }
    Mat3 transposed() const {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m.a[r][c] = a[c][r];
        return m;
    }
    double det() const {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    }
};

// Quintic smoothstep 10u^3 - 15u^4 + 6u^5, clamped to [0,1]; C^2 at both ends.
inline double smoothstep_quintic(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

// Run fn(i) for i in [0,n) on up to `threads` workers. Results must be written
// to per-index slots so the outcome is independent of scheduling. The lowest-
// index exception wins, so failures are reported deterministically too.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace rigidflow
