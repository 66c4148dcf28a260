#include "qnehari/quat.hpp"

#include <numbers>
#include <ostream>
#include <random>

#include "qnehari/error.hpp"
#include "qnehari/rng.hpp"

namespace qnehari {

Quaternion inv_q(const Quaternion& a) {
    const double n2 = a.norm_sq();
    if (n2 == 0.0) throw DomainError("inv_q: zero quaternion has no inverse");
    return conj_q(a) / n2;
}

ImaginaryUnit ImaginaryUnit::from(const Quaternion& u) {
    if (std::abs(u.x0) > kTolerance || std::abs(u.norm() - 1.0) > kTolerance)
        throw DomainError("ImaginaryUnit: expected a purely imaginary quaternion of unit norm");
    return normalized(u);
}

ImaginaryUnit ImaginaryUnit::normalized(const Quaternion& v) {
    const double n = v.imag_norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw DomainError("ImaginaryUnit: imaginary part must be nonzero and finite");
    return ImaginaryUnit(v.imag() / n);
}

SlicePoint::SlicePoint(double x_, double y_, const ImaginaryUnit& unit_)
    : x(x_), y(y_), unit(unit_) {
    if (y < 0.0) {
        y = -y;
        unit = -unit;
    }
}

Quaternion SlicePoint::to_quaternion() const { return slice_point(x, y, unit); }

Quaternion slice_point(double x, double y, const ImaginaryUnit& unit) {
    const Quaternion& u = unit.value();
    return {x, y * u.x1, y * u.x2, y * u.x3};
}

Quaternion from_polar(double r, double theta, const ImaginaryUnit& unit) {
    return slice_point(r * std::cos(theta), r * std::sin(theta), unit);
}

PolarForm to_polar(const Quaternion& q) {
    const double r = q.norm();
    const double y = q.imag_norm();
    if (y == 0.0) return {r, q.x0 < 0.0 ? std::numbers::pi : 0.0, ImaginaryUnit::i()};
    return {r, std::atan2(y, q.x0), ImaginaryUnit::normalized(q)};
}

SlicePoint to_slice(const Quaternion& q) {
    const double y = q.imag_norm();
    if (y == 0.0) return {q.x0, 0.0, ImaginaryUnit::i()};
    return {q.x0, y, ImaginaryUnit::normalized(q)};
}

std::vector<ImaginaryUnit> sample_units(std::size_t n, std::uint64_t seed) {
    std::vector<ImaginaryUnit> out;
    out.reserve(n);
    std::mt19937_64 rng(seed);
    // Archimedes: the height is uniform on [-1, 1] for the area measure.
    for (std::size_t m = 0; m < n; ++m) {
        const double z = 2.0 * uniform01(rng) - 1.0;
        const double phi = 2.0 * std::numbers::pi * uniform01(rng);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        out.push_back(ImaginaryUnit::normalized({0.0, s * std::cos(phi), s * std::sin(phi), z}));
    }
    return out;
}

ImaginaryUnit orthogonal_unit(const ImaginaryUnit& unit) {
    const Quaternion& u = unit.value();
    // Cross with the basis vector least aligned with u.
    const Quaternion e = (std::abs(u.x1) <= std::abs(u.x2) && std::abs(u.x1) <= std::abs(u.x3))
                             ? units::i
                             : (std::abs(u.x2) <= std::abs(u.x3) ? units::j : units::k);
    return ImaginaryUnit::normalized(hamilton_mul(u, e).imag());
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '(' << q.x0 << ", " << q.x1 << ", " << q.x2 << ", " << q.x3 << ')';
}

}  // namespace qnehari
