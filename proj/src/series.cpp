#include "qnehari/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qnehari/error.hpp"

namespace qnehari {

TruncatedSeries TruncatedSeries::monomial(std::size_t n, const Quaternion& c) {
    std::vector<Quaternion> coeffs(n + 1);
    coeffs[n] = c;
    return TruncatedSeries(std::move(coeffs));
}

std::ptrdiff_t TruncatedSeries::degree() const {
    for (std::size_t n = coeffs_.size(); n-- > 0;)
        if (coeffs_[n] != Quaternion{}) return static_cast<std::ptrdiff_t>(n);
    return -1;
}

Quaternion& TruncatedSeries::at(std::size_t n) {
    if (n >= coeffs_.size()) coeffs_.resize(n + 1);
    return coeffs_[n];
}

TruncatedSeries TruncatedSeries::truncated(std::size_t bound) const {
    if (coeffs_.size() <= bound + 1) return *this;
    return TruncatedSeries({coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(bound + 1)});
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t n = 0; n < o.coeffs_.size(); ++n) coeffs_[n] += o.coeffs_[n];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t n = 0; n < o.coeffs_.size(); ++n) coeffs_[n] -= o.coeffs_[n];
    return *this;
}

TruncatedSeries TruncatedSeries::scaled_right(const Quaternion& c) const {
    std::vector<Quaternion> out(coeffs_.size());
    std::transform(coeffs_.begin(), coeffs_.end(), out.begin(),
                   [&](const Quaternion& a) { return hamilton_mul(a, c); });
    return TruncatedSeries(std::move(out));
}

TruncatedSeries TruncatedSeries::scaled(double s) const {
    std::vector<Quaternion> out(coeffs_);
    for (auto& a : out) a *= s;
    return TruncatedSeries(std::move(out));
}

TruncatedSeries star_mul(const TruncatedSeries& f, const TruncatedSeries& g, std::size_t degree_bound) {
    if (f.empty() || g.empty()) return {};
    const std::size_t nf = f.size();
    const std::size_t ng = g.size();
    const std::size_t len = std::min(nf + ng - 1, degree_bound + 1);
    std::vector<Quaternion> out(len);
    const auto& a = f.coeffs();
    const auto& b = g.coeffs();
    for (std::size_t k = 0; k < nf && k < len; ++k) {
        if (a[k] == Quaternion{}) continue;
        const std::size_t top = std::min(ng, len - k);
        for (std::size_t m = 0; m < top; ++m) out[k + m] += hamilton_mul(a[k], b[m]);
    }
    return TruncatedSeries(std::move(out));
}

TruncatedSeries regular_conj(const TruncatedSeries& f) {
    std::vector<Quaternion> out(f.size());
    std::transform(f.coeffs().begin(), f.coeffs().end(), out.begin(), conj_q);
    return TruncatedSeries(std::move(out));
}

TruncatedSeries symmetrize(const TruncatedSeries& f, std::size_t degree_bound) {
    return star_mul(f, regular_conj(f), degree_bound);
}

StarInverse star_inv(const TruncatedSeries& f, std::size_t degree_bound) {
    const Quaternion a0 = f[0];
    const double abs_a0 = a0.norm();
    if (abs_a0 == 0.0) throw NotInvertibleError("star_inv: constant coefficient is zero");

    const Quaternion a0_inv = inv_q(a0);
    std::vector<Quaternion> b(degree_bound + 1);
    b[0] = a0_inv;
    for (std::size_t n = 1; n <= degree_bound; ++n) {
        Quaternion acc;
        const std::size_t top = std::min(n, f.size() - 1);
        for (std::size_t k = 1; k <= top; ++k) acc += hamilton_mul(f[k], b[n - k]);
        b[n] = -hamilton_mul(a0_inv, acc);
    }

    StarInverse result;
    result.inverse = TruncatedSeries(std::move(b));

    double log_cond = 0.0;
    double partial = 0.0;
    for (std::size_t n = 1; n <= degree_bound; ++n) {
        partial += f[n].norm() / abs_a0;
        log_cond += std::log(std::max(1.0, partial));
    }
    result.condition = std::exp(std::min(log_cond, 700.0));

    const TruncatedSeries check = star_mul(f, result.inverse, degree_bound);
    for (std::size_t n = 1; n < check.size(); ++n)
        result.residual = std::max(result.residual, check[n].norm());
    if (result.residual > kStarInverseWarnResidual) {
        std::ostringstream msg;
        msg << "star_inv: residual " << result.residual << " exceeds " << kStarInverseWarnResidual
            << " (condition estimate " << result.condition << ")";
        result.warning = msg.str();
    }
    return result;
}

TruncatedSeries cullen_derive(const TruncatedSeries& f) {
    if (f.size() <= 1) return {};
    std::vector<Quaternion> out(f.size() - 1);
    for (std::size_t n = 1; n < f.size(); ++n) out[n - 1] = f[n] * static_cast<double>(n);
    return TruncatedSeries(std::move(out));
}

Quaternion eval(const TruncatedSeries& f, const Quaternion& q) {
    const auto& a = f.coeffs();
    Quaternion acc;
    for (std::size_t n = a.size(); n-- > 0;) acc = hamilton_mul(q, acc) + a[n];
    return acc;
}

double SliceParts::norm_sq_at(const ImaginaryUnit& unit) const {
    const Quaternion c = hamilton_mul(b, conj_q(a));
    return std::max(0.0, a.norm_sq() + b.norm_sq() - 2.0 * imag_dot(unit.value(), c));
}

double SliceParts::max_norm() const {
    const Quaternion c = hamilton_mul(b, conj_q(a));
    return std::sqrt(a.norm_sq() + b.norm_sq() + 2.0 * c.imag_norm());
}

SliceParts slice_parts(const TruncatedSeries& f, std::complex<double> z) {
    const auto& a = f.coeffs();
    std::complex<double> c0, c1, c2, c3;
    for (std::size_t n = a.size(); n-- > 0;) {
        c0 = c0 * z + a[n].x0;
        c1 = c1 * z + a[n].x1;
        c2 = c2 * z + a[n].x2;
        c3 = c3 * z + a[n].x3;
    }
    return {{c0.real(), c1.real(), c2.real(), c3.real()}, {c0.imag(), c1.imag(), c2.imag(), c3.imag()}};
}

Quaternion eval_via_transform(const TruncatedSeries& f, const TruncatedSeries& g, const Quaternion& q) {
    const Quaternion fq = eval(f, q);
    if (fq.norm() < kTransformZero) return {};
    const Quaternion moved = hamilton_mul(hamilton_mul(inv_q(fq), q), fq);
    return hamilton_mul(fq, eval(g, moved));
}

Quaternion rep_formula(const Quaternion& v_plus, const Quaternion& v_minus, const ImaginaryUnit& unit_i,
                       const ImaginaryUnit& unit_j) {
    const Quaternion ji = hamilton_mul(unit_j.value(), unit_i.value());
    return (v_plus + v_minus) * 0.5 + hamilton_mul(ji, v_minus - v_plus) * 0.5;
}

TruncatedSeries ComplexSlicePair::recombine() const {
    const Quaternion& u = unit_i.value();
    const Quaternion& v = unit_j.value();
    std::vector<Quaternion> out(f_coeffs.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const Quaternion c = Quaternion(f_coeffs[n].real()) + u * f_coeffs[n].imag();
        const Quaternion d = Quaternion(g_coeffs[n].real()) + u * g_coeffs[n].imag();
        out[n] = c + hamilton_mul(d, v);
    }
    return TruncatedSeries(std::move(out));
}

Quaternion ComplexSlicePair::eval(std::complex<double> z) const {
    std::complex<double> fz, gz;
    for (std::size_t n = f_coeffs.size(); n-- > 0;) {
        fz = fz * z + f_coeffs[n];
        gz = gz * z + g_coeffs[n];
    }
    return slice_point(fz, unit_i) + hamilton_mul(slice_point(gz, unit_i), unit_j.value());
}

ComplexSlicePair split_coeffs(const TruncatedSeries& f, const ImaginaryUnit& unit_i,
                              const ImaginaryUnit& unit_j) {
    if (std::abs(imag_dot(unit_i.value(), unit_j.value())) >= kTolerance)
        throw DomainError("split_coeffs: J must be orthogonal to I");
    // Orthonormal frame (I, J, K = IJ); a = c0 + c1 I + (d0 + d1 I) J.
    const Quaternion& u = unit_i.value();
    const Quaternion& v = unit_j.value();
    const Quaternion w = hamilton_mul(u, v);
    ComplexSlicePair out{unit_i, unit_j, {}, {}};
    out.f_coeffs.reserve(f.size());
    out.g_coeffs.reserve(f.size());
    for (const auto& a : f.coeffs()) {
        out.f_coeffs.emplace_back(a.x0, imag_dot(a, u));
        out.g_coeffs.emplace_back(imag_dot(a, v), imag_dot(a, w));
    }
    return out;
}

}  // namespace qnehari
