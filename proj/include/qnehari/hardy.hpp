#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>

#include "qnehari/quat.hpp"
#include "qnehari/series.hpp"

namespace qnehari {

/// Vol(B) for dVol(x + yI) = 1/4 dA_S(I) dx dy, each point of B \ R counted once
/// (I over S, (x, y) over the upper half disc). With this value the
/// log-weight formula returns exactly ||q||_{H^2} = 1.
inline constexpr double kBallVolume = std::numbers::pi * std::numbers::pi / 2.0;

/// Discretization of integrals against dVol over the ball.
struct QuadratureSpec {
    std::size_t n_radial = 48;
    /// Raised internally to 2 deg + 2 when smaller (uniform grids are exact above that).
    std::size_t n_angular = 128;
    std::size_t n_sphere = 8;
    std::uint64_t seed = 7;
    /// Radial cutoff: integrals run over |q| <= r_max.
    double r_max = 1.0 - 1e-12;

    /// Throws DomainError when a count is zero or r_max is outside (0, 1).
    void validate() const;
};

/// (sum |a_n|^2)^{1/2}
double h2_norm(const TruncatedSeries& f);

/// <f, g> = sum conj(b_n) a_n
Quaternion h2_inner(const TruncatedSeries& f, const TruncatedSeries& g);

/// Reproducing kernel k_w truncated at degree N: coefficients conj(w)^n.
/// Throws DomainError when |w| >= 1.
TruncatedSeries kernel(const Quaternion& w, std::size_t degree_bound);

/// ||k_w - k_w^{(N)}||^2 = |w|^{2N+2} / (1 - |w|^2).
double kernel_tail_mass(double abs_w, std::size_t degree_bound);

struct HinfEstimate {
    /// Attained value, hence a lower bound for sup_B |f|.
    double value = 0.0;
    /// Boundary points sampled before refinement.
    std::size_t n_samples = 0;
    /// Point of the boundary where `value` is attained.
    Quaternion argmax;
};

/// sup of |f| over the boundary sphere: seeded samples e^{I theta}, then a dense
/// theta-grid where the maximizing I is computed exactly for each theta, then
/// golden-section refinement around the best theta.
HinfEstimate hinf_estimate(const TruncatedSeries& f, std::size_t n_samples, std::uint64_t seed);

/// (|f(0)|^2 + Vol(B)^{-1} int_B |d_c f|^2 log|q|^{-2} dVol)^{1/2}
double h2_norm_volume(const TruncatedSeries& f, const QuadratureSpec& quad = {});

/// conj(g(0)) f(0) + Vol(B)^{-1} int_B conj(d_c g) d_c f (1 - |q|^2) dVol.
/// An inner product equivalent to (not equal with) h2_inner.
Quaternion h2_inner_derivative(const TruncatedSeries& f, const TruncatedSeries& g,
                               const QuadratureSpec& quad = {});

/// (1/2pi) int_0^{2pi} |f(e^{I theta})| d theta on a uniform grid.
double h1_norm_slice(const TruncatedSeries& f, const ImaginaryUnit& unit, std::size_t n_theta);

}  // namespace qnehari
