#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qnehari/quat.hpp"

namespace qnehari {

/// Degree bound applied to every product unless the caller passes another one.
inline constexpr std::size_t kDefaultDegreeBound = 256;

/// f(q) = sum_{n<=N} q^n a_n, coefficients multiplying on the right.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    explicit TruncatedSeries(std::vector<Quaternion> coeffs) : coeffs_(std::move(coeffs)) {}

    static TruncatedSeries constant(const Quaternion& c) { return TruncatedSeries({c}); }
    /// q^n c
    static TruncatedSeries monomial(std::size_t n, const Quaternion& c = units::one);

    const std::vector<Quaternion>& coeffs() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }
    bool empty() const { return coeffs_.empty(); }

    /// Largest n with a_n != 0, or -1 for the zero series.
    std::ptrdiff_t degree() const;

    /// a_n, zero past the stored range.
    Quaternion operator[](std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : Quaternion{}; }
    Quaternion& at(std::size_t n);

    /// Keeps coefficients 0..bound.
    TruncatedSeries truncated(std::size_t bound) const;

    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    /// Right scalar multiplication f * c (coefficients a_n c).
    TruncatedSeries scaled_right(const Quaternion& c) const;
    TruncatedSeries scaled(double s) const;

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }

private:
    std::vector<Quaternion> coeffs_;
};

/// Regular (star) product: c_n = sum_k a_k b_{n-k}, truncated at `degree_bound`.
TruncatedSeries star_mul(const TruncatedSeries& f, const TruncatedSeries& g,
                         std::size_t degree_bound = kDefaultDegreeBound);

/// f^c: coefficientwise conjugation.
TruncatedSeries regular_conj(const TruncatedSeries& f);

/// f * f^c; all coefficients are real up to roundoff.
TruncatedSeries symmetrize(const TruncatedSeries& f, std::size_t degree_bound = kDefaultDegreeBound);

struct StarInverse {
    TruncatedSeries inverse;
    /// prod_{n=1..N} max(1, sum_{k=1..n} |a_k| / |a_0|), a bound on |a_0| |b_N|.
    double condition = 1.0;
    /// max over degrees 1..N of |(f * inverse)_n|.
    double residual = 0.0;
    /// Set when residual exceeds kStarInverseWarnResidual.
    std::optional<std::string> warning;
};

inline constexpr double kStarInverseWarnResidual = 1e-8;

/// Formal star-inverse up to degree N via the triangular recursion
/// b_0 = a_0^{-1}, b_n = -a_0^{-1} sum_{k=1..n} a_k b_{n-k}.
/// Throws NotInvertibleError when a_0 = 0.
StarInverse star_inv(const TruncatedSeries& f, std::size_t degree_bound);

/// Slice derivative: coefficient n-1 of the result is n a_n.
TruncatedSeries cullen_derive(const TruncatedSeries& f);

/// sum q^n a_n by Horner's rule with q multiplying from the left.
Quaternion eval(const TruncatedSeries& f, const Quaternion& q);

/// f(q) = A + I B for every q = x + y I on the 2-sphere x + y S.
struct SliceParts {
    Quaternion a;
    Quaternion b;
    Quaternion at(const ImaginaryUnit& unit) const { return a + hamilton_mul(unit.value(), b); }
    /// |A + I B|^2 = |A|^2 + |B|^2 - 2 <I, Im(B conj(A))>.
    double norm_sq_at(const ImaginaryUnit& unit) const;
    /// max over the sphere of |A + I B|.
    double max_norm() const;
};

/// A and B from one complex Horner pass per real component.
SliceParts slice_parts(const TruncatedSeries& f, std::complex<double> z);

/// Threshold under which f(q) is treated as zero in eval_via_transform.
inline constexpr double kTransformZero = 1e-12;

/// f(q) g(f(q)^{-1} q f(q)), or 0 when |f(q)| < kTransformZero.
Quaternion eval_via_transform(const TruncatedSeries& f, const TruncatedSeries& g, const Quaternion& q);

/// f(x + yJ) from v_plus = f(x + yI) and v_minus = f(x - yI).
Quaternion rep_formula(const Quaternion& v_plus, const Quaternion& v_minus,
                       const ImaginaryUnit& unit_i, const ImaginaryUnit& unit_j);

/// Coefficients a_n = c_n + d_n J with c_n, d_n in L_I, stored as complex
/// numbers re + im I.
struct ComplexSlicePair {
    ImaginaryUnit unit_i;
    ImaginaryUnit unit_j;
    std::vector<std::complex<double>> f_coeffs;
    std::vector<std::complex<double>> g_coeffs;

    TruncatedSeries recombine() const;
    /// F(z) + G(z) J at z = x + y I.
    Quaternion eval(std::complex<double> z) const;
};

/// Throws DomainError unless |<I, J>| < 1e-12.
ComplexSlicePair split_coeffs(const TruncatedSeries& f, const ImaginaryUnit& unit_i,
                              const ImaginaryUnit& unit_j);

}  // namespace qnehari
