#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qnehari/quat.hpp"
#include "qnehari/series.hpp"

namespace qnehari {

/// Arc (alpha, beta) of the unit circle of a slice, taken modulo 2 pi.
struct Arc {
    double alpha = 0.0;
    double beta = 0.0;
    double length() const { return beta - alpha; }
};

struct ArcFamily {
    std::vector<Arc> arcs;
    /// Floor on quadrature nodes per arc; at least 8.
    std::size_t n_theta = 64;

    /// Lengths 2 pi 2^-k for k = 0..k_max, 2^(k+2) evenly rotated copies each.
    /// The family is invariant under the reflection a -> -a.
    static ArcFamily dyadic(unsigned k_max = 8, std::size_t n_theta = 64);

    /// Throws DomainError on an empty family, a length outside (0, 2 pi] or n_theta < 8.
    void validate() const;
};

/// Nodes used on an arc: the floor, raised with length x degree. Full circles use a
/// uniform grid of more than 2 deg points, which is exact for |f|^2.
std::size_t arc_nodes(double length, std::ptrdiff_t degree, std::size_t floor);

/// (1/|a|) int_a f(e^{theta I}) d theta. Throws DomainError for a degenerate arc.
Quaternion arc_mean(const TruncatedSeries& f, const ImaginaryUnit& unit, const Arc& arc, std::size_t n_theta = 64);

/// Mean square oscillation of f on one arc of one slice.
double arc_oscillation(const TruncatedSeries& f, const ImaginaryUnit& unit, const Arc& arc,
                       std::size_t n_theta = 64);

/// Per-arc moments of the boundary values. With f(e^{theta I}) = A + I B and
/// primes denoting deviation from the arc mean, the oscillation on the slice
/// L_I is s - 2 <I, v> with s = mean(|A'|^2 + |B'|^2) and v = mean Im(B' conj A').
class BmoMoments {
public:
    BmoMoments(const TruncatedSeries& f, const ArcFamily& fam);

    double slice_norm(const ImaginaryUnit& unit) const;
    std::size_t arcs() const { return s_.size(); }

private:
    std::vector<double> s_;
    std::vector<Quaternion> v_;
};

/// max over arcs of the root mean square oscillation on the slice L_I.
double bmo_slice_norm(const TruncatedSeries& f, const ImaginaryUnit& unit, const ArcFamily& fam);

struct SliceBmo {
    ImaginaryUnit unit;
    double value = 0.0;
};

/// Slice norms on the canonical slice i followed by n_slices uniform units.
std::vector<SliceBmo> bmo_slice_profile(const TruncatedSeries& f, std::size_t n_slices, const ArcFamily& fam,
                                        std::uint64_t seed);

/// max of bmo_slice_profile.
double bmo_norm(const TruncatedSeries& f, std::size_t n_slices, const ArcFamily& fam, std::uint64_t seed);

/// CSV `slice_x1,slice_x2,slice_x3,bmo`.
void write_slice_csv(std::ostream& os, const std::vector<SliceBmo>& profile);

}  // namespace qnehari
