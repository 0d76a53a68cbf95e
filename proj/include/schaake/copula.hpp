#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace schaake {

/// m x d matrix of quantile levels in (0, 1); row = training day, column = hour.
class PitHistory {
public:
    /// Throws std::invalid_argument unless m >= 2 and every entry lies in (0, 1).
    explicit PitHistory(Eigen::MatrixXd levels);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(levels_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(levels_.cols()); }
    const Eigen::MatrixXd& levels() const noexcept { return levels_; }

private:
    Eigen::MatrixXd levels_;
};

/// m x d integer matrix whose columns are permutations of 1..m.
class RankMatrix {
public:
    using Storage = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    /// Throws std::invalid_argument if a column is not a permutation of 1..m.
    explicit RankMatrix(Storage ranks);

    /// Every column equal to 1..m.
    static RankMatrix identity(std::size_t m, std::size_t d);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(ranks_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(ranks_.cols()); }
    int operator()(std::size_t t, std::size_t h) const noexcept {
        return ranks_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(h));
    }
    const Storage& ranks() const noexcept { return ranks_; }

    friend bool operator==(const RankMatrix& a, const RankMatrix& b) { return a.ranks_ == b.ranks_; }

private:
    Storage ranks_;
};

/// Symmetric positive semi-definite matrix with unit diagonal.
class CorrelationMatrix {
public:
    /// Validates symmetry, unit diagonal, entries in [-1, 1] and PSD (to 1e-8).
    explicit CorrelationMatrix(Eigen::MatrixXd sigma);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(sigma_.rows()); }
    const Eigen::MatrixXd& matrix() const noexcept { return sigma_; }
    double operator()(std::size_t i, std::size_t j) const noexcept {
        return sigma_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

private:
    Eigen::MatrixXd sigma_;
};

/// Ranks 1..n of a sequence; ties broken by position (earlier first).
std::vector<int> stable_ranks(std::span<const double> values);

/// Column-wise stable ranks of the PIT history.
RankMatrix empirical_rank_matrix(const PitHistory& history);

/**
 * Value of the empirical copula defined by a rank matrix at the grid point
 * (i_1/m, ..., i_d/m): the fraction of rows with rank <= i_h in every column.
 */
double empirical_copula(const RankMatrix& ranks, std::span<const int> grid);

/// Spearman correlation of every column pair (average ranks for ties).
Eigen::MatrixXd spearman_matrix(const Eigen::MatrixXd& data);

/// Clip eigenvalues at `floor` and rescale to unit diagonal.
Eigen::MatrixXd repair_correlation(const Eigen::MatrixXd& sigma, double floor = 1e-8);

/**
 * Gaussian copula correlation by rank correlation: pairwise Spearman rho
 * mapped through 2 sin(pi rho / 6), then repaired to PSD.
 * Throws NumericalError on a column with no variation.
 */
CorrelationMatrix fit_gaussian_copula(const PitHistory& history);

/**
 * Draw m vectors from N(0, sigma) and rank each column. Uses a Cholesky
 * factor, or a clipped eigendecomposition when the matrix is singular.
 * Deterministic in the seed.
 */
RankMatrix sample_gaussian_rank_matrix(const CorrelationMatrix& sigma, std::size_t m,
                                       std::uint64_t seed);

/// Columns drawn as independent uniform random permutations.
RankMatrix random_rank_matrix(std::size_t m, std::size_t d, std::uint64_t seed);

void write_rank_matrix_csv(std::ostream& out, const RankMatrix& ranks);
RankMatrix read_rank_matrix_csv(std::istream& in, const std::string& source);

}  // namespace schaake
