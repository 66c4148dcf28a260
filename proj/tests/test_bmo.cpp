#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "qnehari/bmo.hpp"
#include "qnehari/error.hpp"
#include "qnehari/hardy.hpp"
#include "support.hpp"

using namespace qnehari;
using qtest::dist;
using qtest::random_series;

namespace {

constexpr double kPi = std::numbers::pi;

// Midpoint rule with many nodes, evaluating f pointwise.
std::pair<Quaternion, double> brute_moments(const TruncatedSeries& f, const ImaginaryUnit& u, const Arc& a) {
    const std::size_t n = 20000;
    const double h = a.length() / n;
    std::vector<Quaternion> vals(n);
    Quaternion mean;
    for (std::size_t m = 0; m < n; ++m) {
        vals[m] = eval(f, from_polar(1.0, a.alpha + (m + 0.5) * h, u));
        mean += vals[m] * (1.0 / n);
    }
    double var = 0.0;
    for (const auto& v : vals) var += (v - mean).norm_sq() / n;
    return {mean, var};
}

TruncatedSeries complex_coeffs(std::mt19937_64& rng, std::size_t deg) {
    std::vector<Quaternion> c(deg + 1);
    for (auto& q : c) q = {standard_normal(rng), standard_normal(rng), 0.0, 0.0};
    return TruncatedSeries(c);
}

}  // namespace

TEST_CASE("arc means") {
    const auto one = TruncatedSeries::constant(units::one);
    const auto q = TruncatedSeries::monomial(1, units::one);
    const Arc circle{0.0, 2 * kPi};
    CHECK(dist(arc_mean(one, ImaginaryUnit::j(), {0.3, 0.4}), units::one) < 1e-15);
    CHECK(arc_mean(q, ImaginaryUnit::i(), circle).norm() < 1e-15);
    CHECK(dist(arc_mean(q, ImaginaryUnit::i(), {0.0, kPi}), units::i * (2.0 / kPi)) < 1e-14);
    CHECK(dist(arc_mean(q, ImaginaryUnit::k(), {0.0, kPi}), units::k * (2.0 / kPi)) < 1e-14);
    CHECK_THROWS_AS(arc_mean(q, ImaginaryUnit::i(), {1.0, 1.0}), DomainError);
}

TEST_CASE("arc oscillation of the identity") {
    const auto q = TruncatedSeries::monomial(1, units::one);
    CHECK(arc_oscillation(q, ImaginaryUnit::i(), {0.0, 2 * kPi}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(arc_oscillation(q, ImaginaryUnit::j(), {0.0, kPi}) == doctest::Approx(1.0 - 4.0 / (kPi * kPi)).epsilon(1e-13));
    CHECK(arc_oscillation(TruncatedSeries::constant({1, 2, 3, 4}), ImaginaryUnit::i(), {0.1, 0.5}) < 1e-28);
}

TEST_CASE("arc quadrature against a dense midpoint rule") {
    std::mt19937_64 rng(41);
    const auto units = sample_units(5, 2);
    for (int t = 0; t < 5; ++t) {
        const auto f = random_series(rng, 30);
        const double alpha = 2 * kPi * uniform01(rng);
        const Arc a{alpha, alpha + 0.1 + 6.0 * uniform01(rng)};
        const auto [mean, var] = brute_moments(f, units[t], a);
        CHECK(dist(arc_mean(f, units[t], a), mean) < 1e-6);
        CHECK(std::abs(arc_oscillation(f, units[t], a) - var) < 1e-6 * (1 + var));
    }
}

TEST_CASE("arc node counts") {
    CHECK(arc_nodes(2 * kPi, 10, 8) >= 22);
    CHECK(arc_nodes(0.1, 3, 64) == 64);
    CHECK(arc_nodes(1.0, 1000, 8) > arc_nodes(1.0, 10, 8));
}

TEST_CASE("dyadic family") {
    const auto fam = ArcFamily::dyadic(2, 16);
    CHECK(fam.arcs.size() == 4 + 8 + 16);
    CHECK(fam.n_theta == 16);
    CHECK_NOTHROW(fam.validate());
    for (const auto& a : fam.arcs) CHECK(a.length() > 0.0);

    CHECK_THROWS_AS(ArcFamily{}.validate(), DomainError);
    ArcFamily small = fam;
    small.n_theta = 4;
    CHECK_THROWS_AS(small.validate(), DomainError);
    ArcFamily wide{{{0.0, 7.0}}, 16};
    CHECK_THROWS_AS(wide.validate(), DomainError);
    ArcFamily empty_arc{{{1.0, 1.0}}, 16};
    CHECK_THROWS_AS(empty_arc.validate(), DomainError);
}

TEST_CASE("slice norm is the largest arc oscillation") {
    std::mt19937_64 rng(42);
    const auto fam = ArcFamily::dyadic(4, 32);
    for (const auto& u : sample_units(4, 3)) {
        const auto f = random_series(rng, 12);
        double best = 0.0;
        for (const auto& a : fam.arcs) best = std::max(best, arc_oscillation(f, u, a, fam.n_theta));
        CHECK(std::abs(bmo_slice_norm(f, u, fam) - std::sqrt(best)) < 1e-12);
        const BmoMoments moments(f, fam);
        CHECK(moments.arcs() == fam.arcs.size());
        CHECK(std::abs(moments.slice_norm(u) - std::sqrt(best)) < 1e-12);
    }
}

TEST_CASE("constants do not change the norm") {
    std::mt19937_64 rng(43);
    const auto fam = ArcFamily::dyadic(5, 32);
    const auto f = random_series(rng, 20);
    auto g = f;
    g.at(0) += Quaternion{3, -1, 2, 7};
    CHECK(bmo_norm(f, 8, fam, 1) == bmo_norm(g, 8, fam, 1));
}

TEST_CASE("larger families give larger norms") {
    std::mt19937_64 rng(44);
    const auto f = random_series(rng, 40);
    const auto small = ArcFamily::dyadic(3, 32);
    const auto large = ArcFamily::dyadic(6, 32);
    CHECK(bmo_slice_norm(f, ImaginaryUnit::j(), small) <= bmo_slice_norm(f, ImaginaryUnit::j(), large) + 1e-14);
}

TEST_CASE("oscillation is bounded by the supremum") {
    std::mt19937_64 rng(45);
    const auto fam = ArcFamily::dyadic(6, 32);
    for (int t = 0; t < 5; ++t) {
        const auto f = random_series(rng, 8);
        CHECK(bmo_norm(f, 16, fam, 2) <= hinf_estimate(f, 4000, 3).value + 1e-12);
    }
    const auto q = TruncatedSeries::monomial(1, units::one);
    const double n = bmo_norm(q, 16, fam, 4);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("complex coefficients peak on their own slice") {
    std::mt19937_64 rng(46);
    const auto fam = ArcFamily::dyadic(5, 32);
    for (int t = 0; t < 4; ++t) {
        const auto f = complex_coeffs(rng, 10);
        const auto profile = bmo_slice_profile(f, 32, fam, 5);
        REQUIRE(profile.size() == 33);
        CHECK(profile[0].unit == ImaginaryUnit::i());
        const double on_i = profile[0].value;
        for (const auto& s : profile) CHECK(s.value <= on_i * (1 + 1e-12));
        CHECK(bmo_slice_norm(f, -ImaginaryUnit::i(), fam) == doctest::Approx(on_i).epsilon(1e-12));
    }
}

TEST_CASE("slice profile csv") {
    std::vector<SliceBmo> profile{{ImaginaryUnit::j(), 0.5}};
    std::ostringstream os;
    write_slice_csv(os, profile);
    CHECK(os.str() == "slice_x1,slice_x2,slice_x3,bmo\n0,1,0,0.5\n");
}
