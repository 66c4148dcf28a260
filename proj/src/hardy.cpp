#include "qnehari/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qnehari/error.hpp"
#include "qnehari/quadrature.hpp"
#include "qnehari/rng.hpp"

namespace qnehari {

namespace {

constexpr double kPi = std::numbers::pi;

// Upper end of the log-radial variable t = -2 log r; e^{-36} is below roundoff.
constexpr double kRadialSpan = 36.0;

// Sphere samples in antipodal pairs. After integrating t over a full period the
// integrands below are affine and even in I, so any antipodal set is exact.
std::vector<ImaginaryUnit> antipodal_units(std::size_t n, std::uint64_t seed) {
    const auto half = sample_units((n + 1) / 2, seed);
    std::vector<ImaginaryUnit> out;
    out.reserve(2 * half.size());
    for (const auto& u : half) {
        out.push_back(u);
        out.push_back(-u);
    }
    return out;
}

std::size_t angular_points(const QuadratureSpec& quad, std::ptrdiff_t degree) {
    const auto needed = static_cast<std::size_t>(2 * std::max<std::ptrdiff_t>(degree, 0) + 2);
    return std::max(quad.n_angular, needed);
}

}  // namespace

void QuadratureSpec::validate() const {
    if (n_radial == 0 || n_angular == 0 || n_sphere == 0)
        throw DomainError("QuadratureSpec: counts must be positive");
    if (!(r_max > 0.0 && r_max < 1.0)) throw DomainError("QuadratureSpec: r_max must lie in (0, 1)");
}

double h2_norm(const TruncatedSeries& f) {
    double s = 0.0;
    for (const auto& a : f.coeffs()) s += a.norm_sq();
    return std::sqrt(s);
}

Quaternion h2_inner(const TruncatedSeries& f, const TruncatedSeries& g) {
    const std::size_t n = std::min(f.size(), g.size());
    Quaternion s;
    for (std::size_t m = 0; m < n; ++m) s += hamilton_mul(conj_q(g[m]), f[m]);
    return s;
}

TruncatedSeries kernel(const Quaternion& w, std::size_t degree_bound) {
    if (!(w.norm() < 1.0)) throw DomainError("kernel: centre must satisfy |w| < 1");
    std::vector<Quaternion> coeffs(degree_bound + 1);
    const Quaternion wbar = conj_q(w);
    Quaternion p = units::one;
    for (auto& c : coeffs) {
        c = p;
        p = hamilton_mul(p, wbar);
    }
    return TruncatedSeries(std::move(coeffs));
}

double kernel_tail_mass(double abs_w, std::size_t degree_bound) {
    const double r2 = abs_w * abs_w;
    return std::pow(r2, static_cast<double>(degree_bound + 1)) / (1.0 - r2);
}

HinfEstimate hinf_estimate(const TruncatedSeries& f, std::size_t n_samples, std::uint64_t seed) {
    HinfEstimate best;
    best.n_samples = n_samples;
    best.value = f[0].norm();
    best.argmax = units::one;
    if (f.degree() <= 0) return best;

    auto consider = [&](double value, const Quaternion& q) {
        if (value > best.value) {
            best.value = value;
            best.argmax = q;
        }
    };

    const auto units_sample = sample_units(n_samples, derive_seed(seed, 0));
    std::mt19937_64 angle_rng(derive_seed(seed, 1));
    for (const auto& u : units_sample) {
        const Quaternion q = from_polar(1.0, kPi * uniform01(angle_rng), u);
        consider(eval(f, q).norm(), q);
    }

    // For fixed theta the sup over I of |A + I B| is closed-form.
    auto profile = [&](double theta) { return slice_parts(f, std::polar(1.0, theta)).max_norm(); };
    auto maximizer = [&](double theta) {
        const SliceParts parts = slice_parts(f, std::polar(1.0, theta));
        const Quaternion c = hamilton_mul(parts.b, conj_q(parts.a));
        const ImaginaryUnit u = c.imag_norm() > 0.0 ? ImaginaryUnit::normalized(-c) : ImaginaryUnit::i();
        return from_polar(1.0, theta, u);
    };

    const auto deg = static_cast<std::size_t>(f.degree());
    const std::size_t grid = std::max<std::size_t>(2048, 64 * deg);
    const double h = kPi / static_cast<double>(grid);
    double theta_best = 0.0;
    double grid_best = -1.0;
    for (std::size_t m = 0; m <= grid; ++m) {
        const double theta = h * static_cast<double>(m);
        const double v = profile(theta);
        if (v > grid_best) {
            grid_best = v;
            theta_best = theta;
        }
    }

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(0.0, theta_best - h);
    double hi = std::min(kPi, theta_best + h);
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = profile(c);
    double fd = profile(d);
    for (int iter = 0; iter < 80 && hi - lo > 1e-15; ++iter) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = profile(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = profile(d);
        }
    }
    for (double theta : {theta_best, c, d}) {
        const Quaternion q = maximizer(theta);
        consider(eval(f, q).norm(), q);
    }
    return best;
}

double h2_norm_volume(const TruncatedSeries& f, const QuadratureSpec& quad) {
    quad.validate();
    const double at_zero = f[0].norm_sq();
    const TruncatedSeries df = cullen_derive(f);
    if (df.degree() < 0) return std::sqrt(at_zero);

    const std::size_t n_theta = angular_points(quad, df.degree());
    const auto sphere = antipodal_units(quad.n_sphere, quad.seed);
    const double t_min = -2.0 * std::log(quad.r_max);

    // int_0^{r_max} g(r) (-2 log r) r dr = 1/2 int_{t_min}^inf g(e^{-t/2}) t e^{-t} dt,
    // with t = t_min + span u^2 to cluster nodes where the exponentials live.
    const QuadratureRule rule = gauss_legendre(quad.n_radial, 0.0, 1.0);
    std::vector<double> per_unit(sphere.size(), 0.0);
    const double dtheta = 2.0 * kPi / static_cast<double>(n_theta);
    std::vector<double> ring(n_theta);
    for (std::size_t ir = 0; ir < rule.nodes.size(); ++ir) {
        const double u = rule.nodes[ir];
        const double t = t_min + kRadialSpan * u * u;
        const double jac = 2.0 * kRadialSpan * u;
        const double r = std::exp(-0.5 * t);
        const double radial_weight = rule.weights[ir] * jac * 0.5 * t * std::exp(-t);

        std::vector<SliceParts> parts(n_theta);
        for (std::size_t m = 0; m < n_theta; ++m)
            parts[m] = slice_parts(df, std::polar(r, -kPi + dtheta * static_cast<double>(m)));
        for (std::size_t s = 0; s < sphere.size(); ++s) {
            for (std::size_t m = 0; m < n_theta; ++m) ring[m] = parts[m].norm_sq_at(sphere[s]);
            per_unit[s] += radial_weight * dtheta * pairwise_sum(ring);
        }
    }
    const double sphere_mean = pairwise_sum(per_unit) / static_cast<double>(per_unit.size());
    return std::sqrt(at_zero + sphere_mean / kPi);
}

Quaternion h2_inner_derivative(const TruncatedSeries& f, const TruncatedSeries& g, const QuadratureSpec& quad) {
    quad.validate();
    const Quaternion at_zero = hamilton_mul(conj_q(g[0]), f[0]);
    const TruncatedSeries df = cullen_derive(f);
    const TruncatedSeries dg = cullen_derive(g);
    if (df.degree() < 0 || dg.degree() < 0) return at_zero;

    const std::size_t n_theta = angular_points(quad, std::max(df.degree(), dg.degree()));
    const auto sphere = antipodal_units(quad.n_sphere, quad.seed);
    // The radial integrand is a polynomial in r of degree deg f + deg g - 1.
    const std::size_t n_radial =
        std::max(quad.n_radial, static_cast<std::size_t>(df.degree() + dg.degree()) / 2 + 3);
    const QuadratureRule rule = gauss_legendre(n_radial, 0.0, quad.r_max);
    const double dtheta = 2.0 * kPi / static_cast<double>(n_theta);

    // Slice parts are shared by every unit; only the recombination depends on I.
    std::vector<Quaternion> per_unit(sphere.size());
    for (std::size_t ir = 0; ir < rule.nodes.size(); ++ir) {
        const double r = rule.nodes[ir];
        const double w = rule.weights[ir] * r * (1.0 - r * r) * dtheta;
        std::vector<Quaternion> ring(sphere.size());
        for (std::size_t m = 0; m < n_theta; ++m) {
            const auto z = std::polar(r, -kPi + dtheta * static_cast<double>(m));
            const SliceParts pf = slice_parts(df, z);
            const SliceParts pg = slice_parts(dg, z);
            for (std::size_t s = 0; s < sphere.size(); ++s)
                ring[s] += hamilton_mul(conj_q(pg.at(sphere[s])), pf.at(sphere[s]));
        }
        for (std::size_t s = 0; s < sphere.size(); ++s) per_unit[s] += ring[s] * w;
    }
    Quaternion total;
    for (const auto& q : per_unit) total += q;
    return at_zero + total / (static_cast<double>(sphere.size()) * kPi);
}

double h1_norm_slice(const TruncatedSeries& f, const ImaginaryUnit& unit, std::size_t n_theta) {
    if (n_theta == 0) throw DomainError("h1_norm_slice: n_theta must be positive");
    std::vector<double> values(n_theta);
    const double dtheta = 2.0 * kPi / static_cast<double>(n_theta);
    for (std::size_t m = 0; m < n_theta; ++m)
        values[m] = std::sqrt(slice_parts(f, std::polar(1.0, dtheta * static_cast<double>(m))).norm_sq_at(unit));
    return pairwise_sum(values) / static_cast<double>(n_theta);
}

}  // namespace qnehari
