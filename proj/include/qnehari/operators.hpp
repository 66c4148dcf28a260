#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qnehari/quat.hpp"
#include "qnehari/series.hpp"

namespace qnehari {

/// Dense quaternion matrix acting on right-module column vectors:
/// (A v)(j) = sum_k A(j, k) v(k).
class QuatMatrix {
public:
    QuatMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Quaternion& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Quaternion& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Quaternion> apply(std::span<const Quaternion> v) const;
    /// A^* v with (A^*)(k, j) = conj(A(j, k)).
    std::vector<Quaternion> apply_adjoint(std::span<const Quaternion> v) const;

    bool all_finite() const;
    /// True when every entry lies in the slice L_i (no j, k components).
    bool in_complex_slice() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Quaternion> data_;
};

/// alpha(n) = conj(b(n)) for n < length, zero past the degree of b.
std::vector<Quaternion> hankel_symbol(const TruncatedSeries& b, std::size_t length);

struct HankelSymbolPair {
    std::vector<Quaternion> alpha;
    TruncatedSeries b;

    /// Symbol long enough for an N x N truncation.
    static HankelSymbolPair from_series(const TruncatedSeries& b, std::size_t n);
    static HankelSymbolPair from_alpha(std::vector<Quaternion> alpha);
};

/// Entry (j, k) = alpha(j + k). Throws DomainError if alpha has fewer than 2N - 1 terms.
QuatMatrix hankel_matrix(std::span<const Quaternion> alpha, std::size_t n);

/// Lower-triangular Toeplitz truncation of the star-multiplication operator
/// M_phi: entry (n, k) = phi(n - k) for n >= k.
QuatMatrix mult_matrix(const TruncatedSeries& phi, std::size_t n);

/// Which imaginary unit plays the role of the complex i in the embedding.
enum class EmbeddingSlice { i, j };

/// Each entry z + w J' (z, w complex in the chosen slice) becomes the block
/// [[z, w], [-conj w, conj z]]; an isometric *-homomorphism into C^{2x2}.
Eigen::MatrixXcd complex_embedding(const QuatMatrix& a, EmbeddingSlice slice = EmbeddingSlice::i);

/// Largest singular value of a complex matrix: dense SVD up to kDenseSvdLimit
/// columns, Golub-Kahan-Lanczos with full reorthogonalization beyond.
double spectral_norm(const Eigen::MatrixXcd& m);

inline constexpr std::size_t kDenseSvdLimit = 1024;

/// Operator norm on l^2(N, H) through the complex embedding. Matrices with all
/// entries in L_i reduce to their complex part. Throws DomainError on non-finite entries.
double op_norm(const QuatMatrix& a);

/// T_b(f, g) = <f * g, b>.
Quaternion hankel_bilinear(const TruncatedSeries& b, const TruncatedSeries& f, const TruncatedSeries& g);

/// The same form through the matrix: sum_k (Gamma_alpha f)(k) g_k.
Quaternion hankel_pairing(const QuatMatrix& gamma, const TruncatedSeries& f, const TruncatedSeries& g);

/// op_norm(hankel_matrix(alpha(b), N)) for each N of the ladder.
std::vector<double> hankel_norm_estimate(const TruncatedSeries& b, std::span<const std::size_t> ladder);

inline const std::vector<std::size_t> kDefaultLadder{32, 64, 128, 256, 512};

struct BilinearSup {
    /// Largest |T_b(f, g)| / (||f|| ||g||) found; a lower bound for the sup.
    double value = 0.0;
    std::size_t trials = 0;
    std::size_t n = 0;
    TruncatedSeries best_f;
    TruncatedSeries best_g;
};

/// Random search over normalized random polynomials of degree < N, each start
/// refined by power iteration on Gamma^* Gamma with g chosen optimally for f.
/// Every candidate value is evaluated through hankel_bilinear.
BilinearSup bilinear_sup(const TruncatedSeries& b, std::size_t n, std::size_t trials,
                         std::size_t power_iters, std::uint64_t seed);

/// Explicit decomposition h = sum_j f_j * g_j of an element of the weak product.
struct StarDecomposition {
    std::vector<std::pair<TruncatedSeries, TruncatedSeries>> terms;

    TruncatedSeries sum(std::size_t degree_bound = kDefaultDegreeBound) const;
    /// sum_j ||f_j|| ||g_j||, an upper bound for the weak product norm of sum().
    double norm_upper() const;
};

/// Lambda_b(h) = <h, b> evaluated term by term as sum_j T_b(f_j, g_j).
Quaternion lambda_b(const TruncatedSeries& b, const StarDecomposition& d);

/// Debug dump: one row `row,col,x0,x1,x2,x3` per entry.
void write_matrix_csv(std::ostream& os, const QuatMatrix& a);

}  // namespace qnehari
