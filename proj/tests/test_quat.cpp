#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qnehari/error.hpp"
#include "qnehari/quat.hpp"
#include "support.hpp"

using namespace qnehari;
using qtest::dist;
using qtest::random_quat;

namespace {

// Product through the 4x4 real matrix of left multiplication by a.
Quaternion matrix_product(const Quaternion& a, const Quaternion& b) {
    const double m[4][4] = {{a.x0, -a.x1, -a.x2, -a.x3},
                            {a.x1, a.x0, -a.x3, a.x2},
                            {a.x2, a.x3, a.x0, -a.x1},
                            {a.x3, -a.x2, a.x1, a.x0}};
    const double v[4] = {b.x0, b.x1, b.x2, b.x3};
    double r[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += m[i][j] * v[j];
    return {r[0], r[1], r[2], r[3]};
}

}  // namespace

TEST_CASE("basis units multiply by the defining rules") {
    CHECK(units::i * units::j == units::k);
    CHECK(units::j * units::k == units::i);
    CHECK(units::k * units::i == units::j);
    CHECK(units::j * units::i == -units::k);
    for (const auto& u : {units::i, units::j, units::k}) CHECK(u * u == -units::one);
}

TEST_CASE("products of small integer quaternions") {
    CHECK((Quaternion{1, 1, 0, 0} * Quaternion{1, -1, 0, 0}) == Quaternion{2, 0, 0, 0});
    CHECK((Quaternion{1, 2, 3, 4} * Quaternion{5, 6, 7, 8}) == Quaternion{-60, 12, 30, 24});
    CHECK((Quaternion{5, 6, 7, 8} * Quaternion{1, 2, 3, 4}) == Quaternion{-60, 20, 14, 32});
}

TEST_CASE("hamilton_mul agrees with the left multiplication matrix") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 500; ++t) {
        const Quaternion a = random_quat(rng, 3.0);
        const Quaternion b = random_quat(rng, 3.0);
        CHECK(dist(a * b, matrix_product(a, b)) < 1e-14);
    }
}

TEST_CASE("associativity and multiplicative norm") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 500; ++t) {
        const Quaternion a = random_quat(rng), b = random_quat(rng), c = random_quat(rng);
        CHECK(dist((a * b) * c, a * (b * c)) < 1e-14);
        const double lhs = (a * b).norm();
        CHECK(std::abs(lhs - a.norm() * b.norm()) <= 1e-13 * lhs);
    }
}

TEST_CASE("conjugation") {
    CHECK(conj_q({1, 1, 1, 1}) == Quaternion{1, -1, -1, -1});
    CHECK(conj_q(units::i * units::j) == -units::k);
    CHECK(conj_q(units::i * units::j) == conj_q(units::j) * conj_q(units::i));
    std::mt19937_64 rng(13);
    for (int t = 0; t < 200; ++t) {
        const Quaternion a = random_quat(rng), b = random_quat(rng);
        CHECK(dist(conj_q(a * b), conj_q(b) * conj_q(a)) < 1e-15);
        const Quaternion n = a * conj_q(a);
        CHECK(std::abs(n.x0 - a.norm_sq()) < 1e-15);
        CHECK(n.imag_norm() < 1e-15);
    }
}

TEST_CASE("inverse") {
    CHECK(inv_q(units::i) == -units::i);
    CHECK(inv_q(Quaternion(2.0)) == Quaternion(0.5));
    CHECK_THROWS_AS(inv_q(Quaternion{}), DomainError);
    std::mt19937_64 rng(14);
    for (int t = 0; t < 200; ++t) {
        const Quaternion a = random_quat(rng);
        CHECK(dist(a * inv_q(a), units::one) < 1e-14);
        CHECK(dist(inv_q(a) * a, units::one) < 1e-14);
    }
}

TEST_CASE("imaginary units") {
    CHECK_THROWS_AS(ImaginaryUnit::from({0.1, 1, 0, 0}), DomainError);
    CHECK_THROWS_AS(ImaginaryUnit::from({0, 2, 0, 0}), DomainError);
    CHECK_THROWS_AS(ImaginaryUnit::normalized({3, 0, 0, 0}), DomainError);
    const auto u = ImaginaryUnit::normalized({5, 1, 2, 2});
    CHECK(u.value().x0 == 0.0);
    CHECK(std::abs(u.value().norm() - 1.0) < 1e-15);
    CHECK(dist(u.value() * u.value(), -units::one) < 1e-15);
}

TEST_CASE("polar form") {
    constexpr double pi = std::numbers::pi;
    CHECK(dist(from_polar(1.0, pi / 2, ImaginaryUnit::i()), units::i) < 1e-16);
    CHECK(from_polar(0.5, 0.0, ImaginaryUnit::j()) == Quaternion(0.5));

    const PolarForm neg = to_polar(Quaternion(-0.25));
    CHECK(neg.r == 0.25);
    CHECK(neg.theta == pi);
    CHECK(neg.unit == ImaginaryUnit::i());
    CHECK(to_polar(Quaternion(0.3)).theta == 0.0);

    std::mt19937_64 rng(15);
    const auto us = sample_units(1000, 99);
    for (const auto& u : us) {
        const double r = 0.01 + uniform01(rng);
        const double theta = pi * (0.001 + 0.998 * uniform01(rng));
        const PolarForm p = to_polar(from_polar(r, theta, u));
        CHECK(std::abs(p.r - r) < 1e-14);
        CHECK(std::abs(p.theta - theta) < 1e-13);
        CHECK(dist(p.unit.value(), u.value()) < 1e-13);
    }
}

TEST_CASE("slice points keep y nonnegative") {
    const SlicePoint s(0.3, -0.4, ImaginaryUnit::k());
    CHECK(s.y == 0.4);
    CHECK(s.unit == -ImaginaryUnit::k());
    CHECK(s.to_quaternion() == Quaternion{0.3, 0, 0, -0.4});

    std::mt19937_64 rng(16);
    for (int t = 0; t < 200; ++t) {
        const Quaternion q = random_quat(rng);
        const SlicePoint p = to_slice(q);
        CHECK(p.x == q.x0);
        CHECK(std::abs(p.y - q.imag_norm()) < 1e-15);
        CHECK(dist(p.to_quaternion(), q) < 1e-15);
    }
}

TEST_CASE("sphere sampling") {
    CHECK(sample_units(0, 1).empty());
    const auto a = sample_units(1, 42);
    const auto b = sample_units(1, 42);
    REQUIRE(a.size() == 1);
    CHECK(a[0] == b[0]);
    CHECK(a[0].value().x0 == 0.0);
    CHECK(std::abs(a[0].value().norm() - 1.0) < 1e-15);

    const std::size_t n = 100000;
    const auto us = sample_units(n, 2024);
    double m1 = 0, m2 = 0, m3 = 0, s11 = 0;
    for (const auto& u : us) {
        const Quaternion& v = u.value();
        CHECK(dist(v * v, -units::one) < 1e-14);
        m1 += v.x1;
        m2 += v.x2;
        m3 += v.x3;
        s11 += v.x1 * v.x1;
    }
    // Each component has variance 1/3 under the area measure.
    const double sigma = std::sqrt(1.0 / 3.0 / static_cast<double>(n));
    CHECK(std::abs(m1 / n) < 3 * sigma);
    CHECK(std::abs(m2 / n) < 3 * sigma);
    CHECK(std::abs(m3 / n) < 3 * sigma);
    CHECK(std::abs(s11 / n - 1.0 / 3.0) < 0.01 / 3.0);
}

TEST_CASE("orthogonal unit") {
    for (const auto& u : sample_units(50, 5)) {
        const auto w = orthogonal_unit(u);
        CHECK(std::abs(imag_dot(u.value(), w.value())) < 1e-15);
        CHECK(std::abs(w.value().norm() - 1.0) < 1e-15);
    }
}

TEST_CASE("stream output") {
    std::ostringstream os;
    os << Quaternion{1, -2, 0.5, 0};
    CHECK(!os.str().empty());
}
