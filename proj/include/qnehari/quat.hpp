#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qnehari {

/// Absolute tolerance used for comparisons unless an operation says otherwise.
inline constexpr double kTolerance = 1e-12;

/// q = x0 + x1 i + x2 j + x3 k.
struct Quaternion {
    double x0 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double a) : x0(a) {}
    constexpr Quaternion(double a, double b, double c, double d) : x0(a), x1(b), x2(c), x3(d) {}

    constexpr double real() const { return x0; }
    constexpr Quaternion imag() const { return {0.0, x1, x2, x3}; }

    constexpr double norm_sq() const { return x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3; }
    double norm() const { return std::sqrt(norm_sq()); }
    double imag_norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }
    bool is_finite() const {
        return std::isfinite(x0) && std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3);
    }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        x0 += o.x0; x1 += o.x1; x2 += o.x2; x3 += o.x3;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        x0 -= o.x0; x1 -= o.x1; x2 -= o.x2; x3 -= o.x3;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        x0 *= s; x1 *= s; x2 *= s; x3 *= s;
        return *this;
    }

    std::array<double, 4> components() const { return {x0, x1, x2, x3}; }

    friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.x0, -a.x1, -a.x2, -a.x3}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

/// Hamilton product: ij = k, jk = i, ki = j, i^2 = j^2 = k^2 = -1.
constexpr Quaternion hamilton_mul(const Quaternion& a, const Quaternion& b) {
    return {a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
            a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
            a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
            a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0};
}

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return hamilton_mul(a, b); }

constexpr Quaternion conj_q(const Quaternion& a) { return {a.x0, -a.x1, -a.x2, -a.x3}; }

/// Throws DomainError for a zero argument.
Quaternion inv_q(const Quaternion& a);

/// Euclidean inner product of the imaginary parts.
constexpr double imag_dot(const Quaternion& a, const Quaternion& b) {
    return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

namespace units {
inline constexpr Quaternion one{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion i{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion j{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion k{0.0, 0.0, 0.0, 1.0};
}  // namespace units

/// Element of the sphere S of imaginary units (u^2 = -1).
class ImaginaryUnit {
public:
    /// The basis unit i.
    constexpr ImaginaryUnit() : u_(units::i) {}

    /// Accepts a quaternion with |Re| and ||u| - 1| below 1e-12 and renormalizes it.
    static ImaginaryUnit from(const Quaternion& u);
    /// Normalizes any quaternion with nonzero imaginary part.
    static ImaginaryUnit normalized(const Quaternion& v);

    static ImaginaryUnit i() { return ImaginaryUnit(units::i); }
    static ImaginaryUnit j() { return ImaginaryUnit(units::j); }
    static ImaginaryUnit k() { return ImaginaryUnit(units::k); }

    constexpr const Quaternion& value() const { return u_; }
    constexpr operator const Quaternion&() const { return u_; }
    ImaginaryUnit operator-() const { return ImaginaryUnit(-u_); }

    friend bool operator==(const ImaginaryUnit&, const ImaginaryUnit&) = default;

private:
    constexpr explicit ImaginaryUnit(const Quaternion& u) : u_(u) {}
    Quaternion u_;
};

/// q = r (cos theta + I sin theta).
struct PolarForm {
    double r = 0.0;
    double theta = 0.0;
    ImaginaryUnit unit;
};

/// x + y I with y >= 0.
struct SlicePoint {
    double x = 0.0;
    double y = 0.0;
    ImaginaryUnit unit;

    SlicePoint() = default;
    /// Flips the unit when y < 0 so the stored y is nonnegative.
    SlicePoint(double x_, double y_, const ImaginaryUnit& unit_);

    Quaternion to_quaternion() const;
    std::complex<double> to_complex() const { return {x, y}; }
};

Quaternion from_polar(double r, double theta, const ImaginaryUnit& unit);

/// theta in [0, pi]. Real inputs return theta in {0, pi} and the unit i.
PolarForm to_polar(const Quaternion& q);

/// Real inputs return y = 0 and the unit i.
SlicePoint to_slice(const Quaternion& q);

/// Point x + y I of the slice L_I; y may be negative.
Quaternion slice_point(double x, double y, const ImaginaryUnit& unit);
inline Quaternion slice_point(std::complex<double> z, const ImaginaryUnit& unit) {
    return slice_point(z.real(), z.imag(), unit);
}

/// Uniform (area) samples on S; reproducible for a given seed.
std::vector<ImaginaryUnit> sample_units(std::size_t n, std::uint64_t seed);

/// A unit orthogonal to `unit`, deterministic.
ImaginaryUnit orthogonal_unit(const ImaginaryUnit& unit);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace qnehari
