#include "qnehari/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "qnehari/error.hpp"
#include "qnehari/hardy.hpp"
#include "qnehari/rng.hpp"

namespace qnehari {

QuatMatrix::QuatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw DomainError("QuatMatrix: dimensions must be positive");
}

std::vector<Quaternion> QuatMatrix::apply(std::span<const Quaternion> v) const {
    if (v.size() != cols_) throw DomainError("QuatMatrix::apply: dimension mismatch");
    std::vector<Quaternion> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Quaternion acc;
        const Quaternion* row = &data_[r * cols_];
        for (std::size_t c = 0; c < cols_; ++c) acc += hamilton_mul(row[c], v[c]);
        out[r] = acc;
    }
    return out;
}

std::vector<Quaternion> QuatMatrix::apply_adjoint(std::span<const Quaternion> v) const {
    if (v.size() != rows_) throw DomainError("QuatMatrix::apply_adjoint: dimension mismatch");
    std::vector<Quaternion> out(cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const Quaternion* row = &data_[r * cols_];
        for (std::size_t c = 0; c < cols_; ++c) out[c] += hamilton_mul(conj_q(row[c]), v[r]);
    }
    return out;
}

bool QuatMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Quaternion& q) { return q.is_finite(); });
}

bool QuatMatrix::in_complex_slice() const {
    return std::all_of(data_.begin(), data_.end(), [](const Quaternion& q) { return q.x2 == 0.0 && q.x3 == 0.0; });
}

std::vector<Quaternion> hankel_symbol(const TruncatedSeries& b, std::size_t length) {
    std::vector<Quaternion> alpha(length);
    for (std::size_t n = 0; n < length; ++n) alpha[n] = conj_q(b[n]);
    return alpha;
}

HankelSymbolPair HankelSymbolPair::from_series(const TruncatedSeries& b, std::size_t n) {
    return {hankel_symbol(b, 2 * n - 1), b};
}

HankelSymbolPair HankelSymbolPair::from_alpha(std::vector<Quaternion> alpha) {
    std::vector<Quaternion> coeffs(alpha.size());
    std::transform(alpha.begin(), alpha.end(), coeffs.begin(), conj_q);
    return {std::move(alpha), TruncatedSeries(std::move(coeffs))};
}

QuatMatrix hankel_matrix(std::span<const Quaternion> alpha, std::size_t n) {
    if (n == 0) throw DomainError("hankel_matrix: truncation must be positive");
    if (alpha.size() < 2 * n - 1)
        throw DomainError("hankel_matrix: symbol needs 2N - 1 terms for an N x N truncation");
    QuatMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = alpha[r + c];
    return m;
}

QuatMatrix mult_matrix(const TruncatedSeries& phi, std::size_t n) {
    if (n == 0) throw DomainError("mult_matrix: truncation must be positive");
    QuatMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c <= r; ++c) m(r, c) = phi[r - c];
    return m;
}

Eigen::MatrixXcd complex_embedding(const QuatMatrix& a, EmbeddingSlice slice) {
    using cd = std::complex<double>;
    Eigen::MatrixXcd out(2 * a.rows(), 2 * a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            const Quaternion& q = a(r, c);
            // slice i: q = (x0 + x1 i) + (x2 + x3 i) j
            // slice j: q = (x0 + x2 j) + (x3 + x1 j) k
            const cd z = slice == EmbeddingSlice::i ? cd(q.x0, q.x1) : cd(q.x0, q.x2);
            const cd w = slice == EmbeddingSlice::i ? cd(q.x2, q.x3) : cd(q.x3, q.x1);
            const auto R = static_cast<Eigen::Index>(2 * r);
            const auto C = static_cast<Eigen::Index>(2 * c);
            out(R, C) = z;
            out(R, C + 1) = w;
            out(R + 1, C) = -std::conj(w);
            out(R + 1, C + 1) = std::conj(z);
        }
    }
    return out;
}

namespace {

double lanczos_top_singular_value(const Eigen::MatrixXcd& a) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    const Eigen::Index max_steps = std::min<Eigen::Index>({m, n, 800});

    Eigen::MatrixXcd u_basis(m, max_steps);
    Eigen::MatrixXcd v_basis(n, max_steps + 1);
    std::vector<double> alphas, betas;

    std::mt19937_64 rng(0x5eed);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = {standard_normal(rng), standard_normal(rng)};
    v_basis.col(0) = v / v.norm();

    double sigma = 0.0;
    double previous = -1.0;
    int stable = 0;
    for (Eigen::Index k = 0; k < max_steps; ++k) {
        Eigen::VectorXcd u = a * v_basis.col(k);
        if (k > 0) u -= betas.back() * u_basis.col(k - 1);
        // Full reorthogonalization, applied twice.
        for (int pass = 0; pass < 2 && k > 0; ++pass)
            u -= u_basis.leftCols(k) * (u_basis.leftCols(k).adjoint() * u);
        const double alpha = u.norm();
        alphas.push_back(alpha);
        if (alpha == 0.0) break;
        u_basis.col(k) = u / alpha;

        Eigen::VectorXcd w = a.adjoint() * u_basis.col(k) - alpha * v_basis.col(k);
        for (int pass = 0; pass < 2; ++pass)
            w -= v_basis.leftCols(k + 1) * (v_basis.leftCols(k + 1).adjoint() * w);
        const double beta = w.norm();
        betas.push_back(beta);

        const auto steps = static_cast<Eigen::Index>(alphas.size());
        const bool last = k + 1 == max_steps || beta <= 1e-14 * std::max(sigma, alpha);
        if (steps > 60 && steps % 10 != 0 && !last) {
            v_basis.col(k + 1) = w / beta;
            continue;
        }
        Eigen::MatrixXd bidiag = Eigen::MatrixXd::Zero(steps, steps);
        for (Eigen::Index i = 0; i < steps; ++i) {
            bidiag(i, i) = alphas[static_cast<std::size_t>(i)];
            if (i + 1 < steps) bidiag(i, i + 1) = betas[static_cast<std::size_t>(i)];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(bidiag, Eigen::ComputeFullU);
        sigma = svd.singularValues()(0);
        const double residual = beta * std::abs(svd.matrixU()(steps - 1, 0));

        if (beta <= 1e-14 * sigma || residual <= 1e-13 * sigma) break;
        if (std::abs(sigma - previous) <= 1e-15 * sigma) {
            if (++stable >= 3) break;
        } else {
            stable = 0;
        }
        previous = sigma;
        v_basis.col(k + 1) = w / beta;
    }
    return sigma;
}

}  // namespace

double spectral_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    if (std::min(m.rows(), m.cols()) <= static_cast<Eigen::Index>(kDenseSvdLimit)) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
        return svd.singularValues()(0);
    }
    return lanczos_top_singular_value(m);
}

double op_norm(const QuatMatrix& a) {
    if (!a.all_finite()) throw DomainError("op_norm: matrix has non-finite entries");
    if (a.in_complex_slice()) {
        // The embedding is block diagonal with copies of Z and conj(Z).
        Eigen::MatrixXcd z(a.rows(), a.cols());
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < a.cols(); ++c)
                z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {a(r, c).x0, a(r, c).x1};
        return spectral_norm(z);
    }
    return spectral_norm(complex_embedding(a));
}

Quaternion hankel_bilinear(const TruncatedSeries& b, const TruncatedSeries& f, const TruncatedSeries& g) {
    // Coefficients of f * g past deg b do not reach the inner product.
    const std::ptrdiff_t deg_b = b.degree();
    if (deg_b < 0) return {};
    return h2_inner(star_mul(f, g, static_cast<std::size_t>(deg_b)), b);
}

Quaternion hankel_pairing(const QuatMatrix& gamma, const TruncatedSeries& f, const TruncatedSeries& g) {
    std::vector<Quaternion> fv(gamma.cols());
    for (std::size_t k = 0; k < fv.size(); ++k) fv[k] = f[k];
    const auto image = gamma.apply(fv);
    Quaternion s;
    for (std::size_t k = 0; k < image.size(); ++k) s += hamilton_mul(image[k], g[k]);
    return s;
}

std::vector<double> hankel_norm_estimate(const TruncatedSeries& b, std::span<const std::size_t> ladder) {
    std::vector<double> out;
    out.reserve(ladder.size());
    for (std::size_t n : ladder) {
        const auto pair = HankelSymbolPair::from_series(b, n);
        out.push_back(op_norm(hankel_matrix(pair.alpha, n)));
    }
    return out;
}

namespace {

double vec_norm(std::span<const Quaternion> v) {
    double s = 0.0;
    for (const auto& q : v) s += q.norm_sq();
    return std::sqrt(s);
}

}  // namespace

BilinearSup bilinear_sup(const TruncatedSeries& b, std::size_t n, std::size_t trials, std::size_t power_iters,
                         std::uint64_t seed) {
    BilinearSup best;
    best.n = n;
    best.trials = trials;
    if (b.degree() < 0 || n == 0) return best;

    const auto pair = HankelSymbolPair::from_series(b, n);
    const QuatMatrix gamma = hankel_matrix(pair.alpha, n);
    std::mt19937_64 rng(seed);

    auto random_unit_vector = [&]() {
        std::vector<Quaternion> v(n);
        for (auto& q : v) q = {standard_normal(rng), standard_normal(rng), standard_normal(rng), standard_normal(rng)};
        const double nv = vec_norm(v);
        for (auto& q : v) q *= 1.0 / nv;
        return v;
    };
    auto record = [&](std::vector<Quaternion> f, std::vector<Quaternion> g) {
        TruncatedSeries fs(std::move(f));
        TruncatedSeries gs(std::move(g));
        const double denom = h2_norm(fs) * h2_norm(gs);
        if (!(denom > 0.0)) return;
        const double value = hankel_bilinear(b, fs, gs).norm() / denom;
        if (value > best.value) {
            best.value = value;
            best.best_f = std::move(fs);
            best.best_g = std::move(gs);
        }
    };

    for (std::size_t t = 0; t < trials; ++t) {
        auto f = random_unit_vector();
        record(f, random_unit_vector());

        for (std::size_t it = 0; it < power_iters; ++it) {
            auto next = gamma.apply_adjoint(gamma.apply(f));
            const double nn = vec_norm(next);
            if (!(nn > 0.0)) break;
            for (auto& q : next) q *= 1.0 / nn;
            f = std::move(next);
        }
        // For fixed f the form is sum_k h_k g_k with h = Gamma f; g = conj(h) is optimal.
        auto h = gamma.apply(f);
        for (auto& q : h) q = conj_q(q);
        record(std::move(f), std::move(h));
    }
    return best;
}

TruncatedSeries StarDecomposition::sum(std::size_t degree_bound) const {
    TruncatedSeries out;
    for (const auto& [f, g] : terms) out += star_mul(f, g, degree_bound);
    return out;
}

double StarDecomposition::norm_upper() const {
    double s = 0.0;
    for (const auto& [f, g] : terms) s += h2_norm(f) * h2_norm(g);
    return s;
}

Quaternion lambda_b(const TruncatedSeries& b, const StarDecomposition& d) {
    Quaternion s;
    for (const auto& [f, g] : d.terms) s += hankel_bilinear(b, f, g);
    return s;
}

void write_matrix_csv(std::ostream& os, const QuatMatrix& a) {
    os << "row,col,x0,x1,x2,x3\n";
    os.precision(17);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            const auto& q = a(r, c);
            os << r << ',' << c << ',' << q.x0 << ',' << q.x1 << ',' << q.x2 << ',' << q.x3 << '\n';
        }
}

}  // namespace qnehari
