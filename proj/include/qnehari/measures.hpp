#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qnehari/quat.hpp"
#include "qnehari/series.hpp"

namespace qnehari {

/// Point mass on the real diameter B cap R.
struct RealAtom {
    double x = 0.0;
    double weight = 0.0;
};

/// Weighted point cloud approximating a positive measure on B.
struct MeasureSample {
    std::vector<Quaternion> points;
    std::vector<double> weights;
    /// Explicit mass on B cap R; generators never put sampled points there.
    std::vector<RealAtom> atoms;
    std::string generator;
    std::uint64_t seed = 0;

    double total_mass() const;
    /// Throws DomainError on size mismatch, negative or non-finite weights, or |point| >= 1.
    void validate() const;
};

/// Symmetric box S(q) for q = r e^{J theta}; membership ignores J.
struct BoxSpec {
    double r = 0.0;
    /// Angle in [0, pi].
    double theta = 0.0;

    static BoxSpec from_center(const Quaternion& q);
};

/// p = rho e^{I alpha} with alpha in [0, pi] lies in S(q) iff |alpha - theta| <= 1 - r
/// and 0 < 1 - rho <= 2 (1 - r). The origin belongs to S(q) exactly when r <= 1/2.
bool box_contains(const BoxSpec& box, const Quaternion& p);

/// Weighted sample of density(q) dVol with dVol(x + yI) = dA(I) dx dy / 4:
/// I uniform on S and (x, y) uniform on the upper half disc.
MeasureSample volume_sample(const std::function<double(const Quaternion&)>& density, std::size_t n,
                            std::uint64_t seed, std::string generator);

/// Moves every point x + yJ onto the slice L_I, keeping (x, y) and the weight.
MeasureSample project_to_slice(const MeasureSample& mu, const ImaginaryUnit& unit);

/// Weighted sample of d mu_b = |d_c b|^2 (1 - |q|^2) dVol: I uniform on S and
/// (x, y) uniform on the upper half disc, weights carrying the density ratio.
MeasureSample mu_b_sample(const TruncatedSeries& b, std::size_t n, std::uint64_t seed);

/// Probe grid r in {0, .5, .75, .9, .95, .99} x 16 angles in [0, pi].
std::vector<BoxSpec> default_box_centers();

/// max over centres of mu(S(q)) / (1 - r). Throws DomainError for an empty list.
double box_constant(const MeasureSample& mu, std::span<const BoxSpec> centers);

/// max over f of int |f|^2 d mu / ||f||^2. Throws DomainError for an empty set
/// or a test function of zero norm.
double embedding_constant(const MeasureSample& mu, std::span<const TruncatedSeries> test_set);

/// int |f|^2 d mu for every f, sharing the powers of each sample point.
std::vector<double> weighted_square_integrals(const MeasureSample& mu, std::span<const TruncatedSeries> fs);

/// K = (k_w + k_{conj w}) / 2 truncated at N; real coefficients Re(w^n).
/// Throws DomainError when |w| >= 1.
TruncatedSeries carleson_test_fn(const Quaternion& w, std::size_t degree_bound);

/// |(1 - z Re w) / (1 - z w)| in the complex arithmetic of one slice.
/// Throws DomainError at the pole 1 - z w = 0 or when |w| or |z| is not below 1.
double moebius_ratio(std::complex<double> w, std::complex<double> z);

struct MoebiusSweep {
    double min_ratio = 1.0;
    double max_ratio = 1.0;
    /// max(max_ratio, 1 / min_ratio)
    double constant = 1.0;
    std::size_t evaluations = 0;
};

/// Sweeps z over a (rho, alpha) grid of s(w) for each w = |w| e^{i arg} of the grid
/// |w| in [0, max_abs], arg in [0, pi/2].
MoebiusSweep moebius_sweep(std::size_t n_abs, std::size_t n_arg, double max_abs, std::size_t n_grid);

/// CSV `x0,x1,x2,x3,weight`; atoms are written as real points.
void write_measure_csv(std::ostream& os, const MeasureSample& mu);
MeasureSample read_measure_csv(std::istream& is);
/// Generator metadata for the JSON sidecar.
std::string measure_metadata_json(const MeasureSample& mu);

}  // namespace qnehari
