#include "qnehari/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qnehari/error.hpp"
#include "qnehari/hardy.hpp"
#include "qnehari/quadrature.hpp"
#include "qnehari/rng.hpp"

namespace qnehari {

namespace {

constexpr double kPi = std::numbers::pi;
// Sphere area 4 pi times half-disc area pi / 2, times the 1/4 of dVol.
constexpr double kParameterVolume = kPi * kPi / 2.0;
constexpr std::size_t kChunk = 4096;

}  // namespace

double MeasureSample::total_mass() const {
    double s = pairwise_sum(weights);
    for (const auto& a : atoms) s += a.weight;
    return s;
}

void MeasureSample::validate() const {
    if (points.size() != weights.size()) throw DomainError("MeasureSample: points and weights differ in length");
    for (std::size_t m = 0; m < points.size(); ++m) {
        if (!(std::isfinite(weights[m]) && weights[m] >= 0.0))
            throw DomainError("MeasureSample: weights must be finite and nonnegative");
        if (!(points[m].norm() < 1.0)) throw DomainError("MeasureSample: points must lie in the open unit ball");
    }
    for (const auto& a : atoms) {
        if (!(std::isfinite(a.weight) && a.weight >= 0.0))
            throw DomainError("MeasureSample: atom weights must be finite and nonnegative");
        if (!(std::abs(a.x) < 1.0)) throw DomainError("MeasureSample: atoms must lie in (-1, 1)");
    }
}

BoxSpec BoxSpec::from_center(const Quaternion& q) {
    const PolarForm p = to_polar(q);
    if (!(p.r < 1.0)) throw DomainError("BoxSpec: centre must satisfy |q| < 1");
    return {p.r, p.theta};
}

bool box_contains(const BoxSpec& box, const Quaternion& p) {
    const double side = 1.0 - box.r;
    const PolarForm pp = to_polar(p);
    const double depth = 1.0 - pp.r;
    if (!(depth > 0.0 && depth <= 2.0 * side)) return false;
    // The origin has no angle; it lies on every ray.
    if (pp.r == 0.0) return true;
    return std::abs(pp.theta - box.theta) <= side;
}

MeasureSample volume_sample(const std::function<double(const Quaternion&)>& density, std::size_t n,
                            std::uint64_t seed, std::string generator) {
    MeasureSample out;
    out.generator = std::move(generator);
    out.seed = seed;
    if (n == 0) return out;
    const auto units_sample = sample_units(n, derive_seed(seed, 0));
    std::mt19937_64 rng(derive_seed(seed, 1));
    out.points.reserve(n);
    out.weights.reserve(n);
    const double scale = kParameterVolume / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double rho = std::sqrt(uniform01(rng));
        const double angle = kPi * uniform01(rng);
        const Quaternion q = from_polar(rho, angle, units_sample[m]);
        out.points.push_back(q);
        out.weights.push_back(density(q) * scale);
    }
    return out;
}

MeasureSample project_to_slice(const MeasureSample& mu, const ImaginaryUnit& unit) {
    MeasureSample out = mu;
    for (auto& p : out.points) p = slice_point(p.x0, p.imag_norm(), unit);
    out.generator = mu.generator + "|projected";
    return out;
}

MeasureSample mu_b_sample(const TruncatedSeries& b, std::size_t n, std::uint64_t seed) {
    const TruncatedSeries db = cullen_derive(b);
    const auto density = [&](const Quaternion& q) {
        const SlicePoint s = to_slice(q);
        return slice_parts(db, s.to_complex()).norm_sq_at(s.unit) * (1.0 - q.norm_sq());
    };
    return volume_sample(density, n, seed, "mu_b");
}

std::vector<BoxSpec> default_box_centers() {
    std::vector<BoxSpec> out;
    for (double r : {0.0, 0.5, 0.75, 0.9, 0.95, 0.99})
        for (int m = 0; m < 16; ++m) out.push_back({r, kPi * m / 15.0});
    return out;
}

double box_constant(const MeasureSample& mu, std::span<const BoxSpec> centers) {
    if (centers.empty()) throw DomainError("box_constant: no box centres");
    // Polar coordinates once per point; membership only needs (rho, alpha).
    std::vector<PolarForm> polar;
    polar.reserve(mu.points.size() + mu.atoms.size());
    std::vector<double> weight;
    weight.reserve(mu.points.size() + mu.atoms.size());
    for (std::size_t m = 0; m < mu.points.size(); ++m) {
        polar.push_back(to_polar(mu.points[m]));
        weight.push_back(mu.weights[m]);
    }
    for (const auto& a : mu.atoms) {
        polar.push_back(to_polar(Quaternion(a.x)));
        weight.push_back(a.weight);
    }

    double best = 0.0;
    std::vector<double> inside;
    for (const auto& box : centers) {
        const double side = 1.0 - box.r;
        inside.clear();
        for (std::size_t m = 0; m < polar.size(); ++m) {
            const double depth = 1.0 - polar[m].r;
            if (!(depth > 0.0 && depth <= 2.0 * side)) continue;
            if (polar[m].r != 0.0 && std::abs(polar[m].theta - box.theta) > side) continue;
            inside.push_back(weight[m]);
        }
        best = std::max(best, pairwise_sum(inside) / side);
    }
    return best;
}

std::vector<double> weighted_square_integrals(const MeasureSample& mu, std::span<const TruncatedSeries> fs) {
    std::size_t len = 1;
    for (const auto& f : fs) len = std::max(len, f.size());

    struct Node {
        std::complex<double> z;
        ImaginaryUnit unit;
        double weight;
    };
    std::vector<Node> nodes;
    nodes.reserve(mu.points.size() + mu.atoms.size());
    for (std::size_t m = 0; m < mu.points.size(); ++m) {
        if (mu.weights[m] == 0.0) continue;
        const SlicePoint s = to_slice(mu.points[m]);
        nodes.push_back({s.to_complex(), s.unit, mu.weights[m]});
    }
    for (const auto& a : mu.atoms)
        if (a.weight != 0.0) nodes.push_back({{a.x, 0.0}, ImaginaryUnit::i(), a.weight});

    std::vector<std::vector<double>> chunk_sums(fs.size());
    std::vector<double> partial(fs.size());
    std::vector<std::complex<double>> powers(len);
    for (std::size_t start = 0; start < nodes.size(); start += kChunk) {
        std::fill(partial.begin(), partial.end(), 0.0);
        const std::size_t stop = std::min(nodes.size(), start + kChunk);
        for (std::size_t m = start; m < stop; ++m) {
            const Node& node = nodes[m];
            powers[0] = 1.0;
            for (std::size_t n = 1; n < len; ++n) powers[n] = powers[n - 1] * node.z;
            for (std::size_t t = 0; t < fs.size(); ++t) {
                SliceParts parts;
                const auto& a = fs[t].coeffs();
                for (std::size_t n = 0; n < a.size(); ++n) {
                    parts.a += a[n] * powers[n].real();
                    parts.b += a[n] * powers[n].imag();
                }
                partial[t] += node.weight * parts.norm_sq_at(node.unit);
            }
        }
        for (std::size_t t = 0; t < fs.size(); ++t) chunk_sums[t].push_back(partial[t]);
    }

    std::vector<double> out(fs.size());
    for (std::size_t t = 0; t < fs.size(); ++t) out[t] = pairwise_sum(chunk_sums[t]);
    return out;
}

double embedding_constant(const MeasureSample& mu, std::span<const TruncatedSeries> test_set) {
    if (test_set.empty()) throw DomainError("embedding_constant: empty test set");
    for (const auto& f : test_set)
        if (h2_norm(f) == 0.0) throw DomainError("embedding_constant: test function of zero norm");
    const auto integrals = weighted_square_integrals(mu, test_set);
    double best = 0.0;
    for (std::size_t t = 0; t < test_set.size(); ++t) {
        const double n = h2_norm(test_set[t]);
        best = std::max(best, integrals[t] / (n * n));
    }
    return best;
}

TruncatedSeries carleson_test_fn(const Quaternion& w, std::size_t degree_bound) {
    if (!(w.norm() < 1.0)) throw DomainError("carleson_test_fn: centre must satisfy |w| < 1");
    const SlicePoint s = to_slice(w);
    const std::complex<double> z = s.to_complex();
    std::vector<Quaternion> coeffs(degree_bound + 1);
    std::complex<double> p = 1.0;
    for (auto& c : coeffs) {
        c = Quaternion(p.real());
        p *= z;
    }
    return TruncatedSeries(std::move(coeffs));
}

double moebius_ratio(std::complex<double> w, std::complex<double> z) {
    if (!(std::abs(w) < 1.0) || !(std::abs(z) < 1.0))
        throw DomainError("moebius_ratio: w and z must lie in the open unit disc");
    const std::complex<double> den = 1.0 - z * w;
    if (den == 0.0) throw DomainError("moebius_ratio: pole at 1 - z w = 0");
    const std::complex<double> num = 1.0 - z * std::complex<double>(w.real(), 0.0);
    return std::abs(num) / std::abs(den);
}

MoebiusSweep moebius_sweep(std::size_t n_abs, std::size_t n_arg, double max_abs, std::size_t n_grid) {
    if (n_abs < 2 || n_arg < 2 || n_grid < 2) throw DomainError("moebius_sweep: grids need at least two points");
    if (!(max_abs >= 0.0 && max_abs < 1.0)) throw DomainError("moebius_sweep: max_abs must lie in [0, 1)");
    MoebiusSweep out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = 0.0;
    for (std::size_t ia = 0; ia < n_abs; ++ia) {
        // Quadratic spacing crowds the grid towards |w| = max_abs.
        const double t = 1.0 - static_cast<double>(ia) / static_cast<double>(n_abs - 1);
        const double abs_w = max_abs * (1.0 - t * t);
        const double side = 1.0 - abs_w;
        const double rho_lo = std::max(0.0, 1.0 - 2.0 * side);
        // |z| < 1 strictly; the ratio extends continuously to the circle.
        const double rho_hi = 1.0 - 1e-12;
        for (std::size_t ig = 0; ig < n_arg; ++ig) {
            const double arg_w = 0.5 * kPi * static_cast<double>(ig) / static_cast<double>(n_arg - 1);
            const std::complex<double> w = std::polar(abs_w, arg_w);
            for (std::size_t ir = 0; ir < n_grid; ++ir) {
                const double rho =
                    rho_lo + (rho_hi - rho_lo) * static_cast<double>(ir) / static_cast<double>(n_grid - 1);
                for (std::size_t ia2 = 0; ia2 < n_grid; ++ia2) {
                    const double alpha =
                        arg_w - side + 2.0 * side * static_cast<double>(ia2) / static_cast<double>(n_grid - 1);
                    const double v = moebius_ratio(w, std::polar(rho, alpha));
                    out.min_ratio = std::min(out.min_ratio, v);
                    out.max_ratio = std::max(out.max_ratio, v);
                    ++out.evaluations;
                }
            }
        }
    }
    out.constant = std::max(out.max_ratio, 1.0 / out.min_ratio);
    return out;
}

void write_measure_csv(std::ostream& os, const MeasureSample& mu) {
    os << "x0,x1,x2,x3,weight\n";
    char buf[160];
    const auto row = [&](const Quaternion& q, double w) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", q.x0, q.x1, q.x2, q.x3, w);
        os << buf;
    };
    for (std::size_t m = 0; m < mu.points.size(); ++m) row(mu.points[m], mu.weights[m]);
    for (const auto& a : mu.atoms) row(Quaternion(a.x), a.weight);
}

MeasureSample read_measure_csv(std::istream& is) {
    MeasureSample out;
    std::string line;
    if (!std::getline(is, line) || line.rfind("x0,x1,x2,x3,weight", 0) != 0)
        throw ConfigError("measure CSV: missing header x0,x1,x2,x3,weight");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[5];
        for (int c = 0; c < 5; ++c) {
            std::string cell;
            if (!std::getline(row, cell, ',')) throw ConfigError("measure CSV: short row: " + line);
            try {
                v[c] = std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError("measure CSV: bad number: " + cell);
            }
        }
        const Quaternion q{v[0], v[1], v[2], v[3]};
        if (q.imag_norm() == 0.0)
            out.atoms.push_back({q.x0, v[4]});
        else {
            out.points.push_back(q);
            out.weights.push_back(v[4]);
        }
    }
    out.validate();
    return out;
}

std::string measure_metadata_json(const MeasureSample& mu) {
    nlohmann::json j;
    j["generator"] = mu.generator;
    j["seed"] = mu.seed;
    j["points"] = mu.points.size();
    j["atoms"] = mu.atoms.size();
    j["total_mass"] = mu.total_mass();
    return j.dump(2);
}

}  // namespace qnehari
