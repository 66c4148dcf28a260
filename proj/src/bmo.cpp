#include "qnehari/bmo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "qnehari/error.hpp"
#include "qnehari/quadrature.hpp"

namespace qnehari {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Arcs this close to 2 pi are treated as the full circle.
constexpr double kFullCircleSlack = 1e-12;

bool is_full_circle(double length) { return length >= kTwoPi - kFullCircleSlack; }

void check_arc(const Arc& arc) {
    const double len = arc.length();
    if (!(len > 0.0) || len > kTwoPi + kFullCircleSlack)
        throw DomainError("arc length must lie in (0, 2 pi]");
}

// Quadrature on an arc, weights normalized to sum to one.
QuadratureRule arc_rule(const Arc& arc, std::ptrdiff_t degree, std::size_t floor) {
    const std::size_t n = arc_nodes(arc.length(), degree, floor);
    if (is_full_circle(arc.length())) {
        QuadratureRule rule;
        rule.nodes.resize(n);
        rule.weights.assign(n, 1.0 / static_cast<double>(n));
        for (std::size_t m = 0; m < n; ++m)
            rule.nodes[m] = arc.alpha + kTwoPi * static_cast<double>(m) / static_cast<double>(n);
        return rule;
    }
    QuadratureRule rule = gauss_legendre(n, arc.alpha, arc.beta);
    for (auto& w : rule.weights) w /= arc.length();
    return rule;
}

// Boundary values without the constant term, which every oscillation ignores.
TruncatedSeries drop_constant(const TruncatedSeries& f) {
    std::vector<Quaternion> c = f.coeffs();
    if (!c.empty()) c[0] = Quaternion{};
    return TruncatedSeries(std::move(c));
}

struct ArcStats {
    Quaternion mean_a;
    Quaternion mean_b;
    double s = 0.0;
    Quaternion v;
};

ArcStats arc_stats(const TruncatedSeries& f, const Arc& arc, std::size_t floor) {
    const QuadratureRule rule = arc_rule(arc, f.degree(), floor);
    const std::size_t n = rule.nodes.size();
    std::vector<SliceParts> parts(n);
    ArcStats st;
    for (std::size_t m = 0; m < n; ++m) {
        parts[m] = slice_parts(f, std::polar(1.0, rule.nodes[m]));
        st.mean_a += parts[m].a * rule.weights[m];
        st.mean_b += parts[m].b * rule.weights[m];
    }
    for (std::size_t m = 0; m < n; ++m) {
        const Quaternion da = parts[m].a - st.mean_a;
        const Quaternion db = parts[m].b - st.mean_b;
        st.s += rule.weights[m] * (da.norm_sq() + db.norm_sq());
        st.v += hamilton_mul(db, conj_q(da)).imag() * rule.weights[m];
    }
    return st;
}

}  // namespace

ArcFamily ArcFamily::dyadic(unsigned k_max, std::size_t n_theta) {
    ArcFamily fam;
    fam.n_theta = n_theta;
    for (unsigned k = 0; k <= k_max; ++k) {
        const double len = kTwoPi / std::ldexp(1.0, static_cast<int>(k));
        const std::size_t count = std::size_t{1} << (k + 2);
        for (std::size_t m = 0; m < count; ++m) {
            const double alpha = kTwoPi * static_cast<double>(m) / static_cast<double>(count);
            fam.arcs.push_back({alpha, alpha + len});
        }
    }
    return fam;
}

void ArcFamily::validate() const {
    if (arcs.empty()) throw DomainError("ArcFamily: empty family");
    if (n_theta < 8) throw DomainError("ArcFamily: n_theta must be at least 8");
    for (const auto& a : arcs) check_arc(a);
}

std::size_t arc_nodes(double length, std::ptrdiff_t degree, std::size_t floor) {
    const auto deg = static_cast<double>(std::max<std::ptrdiff_t>(degree, 0));
    if (is_full_circle(length)) return std::max(floor, static_cast<std::size_t>(2.0 * deg) + 2);
    // e^{i n theta} over an arc of length L needs about n L / 2 Gauss nodes.
    return std::max(floor, static_cast<std::size_t>(std::ceil(0.5 * deg * length)) + 16);
}

Quaternion arc_mean(const TruncatedSeries& f, const ImaginaryUnit& unit, const Arc& arc, std::size_t n_theta) {
    check_arc(arc);
    const QuadratureRule rule = arc_rule(arc, f.degree(), n_theta);
    Quaternion acc;
    for (std::size_t m = 0; m < rule.nodes.size(); ++m)
        acc += slice_parts(f, std::polar(1.0, rule.nodes[m])).at(unit) * rule.weights[m];
    return acc;
}

double arc_oscillation(const TruncatedSeries& f, const ImaginaryUnit& unit, const Arc& arc, std::size_t n_theta) {
    check_arc(arc);
    const ArcStats st = arc_stats(drop_constant(f), arc, n_theta);
    return std::max(0.0, st.s - 2.0 * imag_dot(unit.value(), st.v));
}

BmoMoments::BmoMoments(const TruncatedSeries& f, const ArcFamily& fam) {
    fam.validate();
    const TruncatedSeries g = drop_constant(f);
    s_.reserve(fam.arcs.size());
    v_.reserve(fam.arcs.size());
    for (const auto& arc : fam.arcs) {
        const ArcStats st = arc_stats(g, arc, fam.n_theta);
        s_.push_back(st.s);
        v_.push_back(st.v);
    }
}

double BmoMoments::slice_norm(const ImaginaryUnit& unit) const {
    double best = 0.0;
    for (std::size_t a = 0; a < s_.size(); ++a)
        best = std::max(best, s_[a] - 2.0 * imag_dot(unit.value(), v_[a]));
    return std::sqrt(best);
}

double bmo_slice_norm(const TruncatedSeries& f, const ImaginaryUnit& unit, const ArcFamily& fam) {
    return BmoMoments(f, fam).slice_norm(unit);
}

std::vector<SliceBmo> bmo_slice_profile(const TruncatedSeries& f, std::size_t n_slices, const ArcFamily& fam,
                                        std::uint64_t seed) {
    const BmoMoments moments(f, fam);
    std::vector<SliceBmo> out;
    out.reserve(n_slices + 1);
    out.push_back({ImaginaryUnit::i(), moments.slice_norm(ImaginaryUnit::i())});
    for (const auto& u : sample_units(n_slices, seed)) out.push_back({u, moments.slice_norm(u)});
    return out;
}

double bmo_norm(const TruncatedSeries& f, std::size_t n_slices, const ArcFamily& fam, std::uint64_t seed) {
    double best = 0.0;
    for (const auto& s : bmo_slice_profile(f, n_slices, fam, seed)) best = std::max(best, s.value);
    return best;
}

void write_slice_csv(std::ostream& os, const std::vector<SliceBmo>& profile) {
    os << "slice_x1,slice_x2,slice_x3,bmo\n";
    char buf[128];
    for (const auto& s : profile) {
        const Quaternion& u = s.unit.value();
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", u.x1, u.x2, u.x3, s.value);
        os << buf;
    }
}

}  // namespace qnehari
