#include "schaake/copula.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "schaake/csv_io.hpp"
#include "schaake/errors.hpp"
#include "schaake/rng.hpp"

namespace schaake {

PitHistory::PitHistory(Eigen::MatrixXd levels) : levels_(std::move(levels)) {
    if (levels_.rows() < 2) throw std::invalid_argument("PIT history needs at least 2 rows");
    if (levels_.cols() < 1) throw std::invalid_argument("PIT history needs at least 1 column");
    for (Eigen::Index i = 0; i < levels_.size(); ++i) {
        const double u = levels_.data()[i];
        if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("PIT values must lie strictly inside (0, 1)");
    }
}

RankMatrix::RankMatrix(Storage ranks) : ranks_(std::move(ranks)) {
    const auto m = ranks_.rows();
    if (m < 1 || ranks_.cols() < 1) throw std::invalid_argument("rank matrix must be non-empty");
    std::vector<char> seen(static_cast<std::size_t>(m));
    for (Eigen::Index h = 0; h < ranks_.cols(); ++h) {
        std::fill(seen.begin(), seen.end(), 0);
        for (Eigen::Index t = 0; t < m; ++t) {
            const int r = ranks_(t, h);
            if (r < 1 || r > m || seen[static_cast<std::size_t>(r - 1)]) {
                throw std::invalid_argument("rank matrix column " + std::to_string(h + 1) +
                                            " is not a permutation of 1..m");
            }
            seen[static_cast<std::size_t>(r - 1)] = 1;
        }
    }
}

RankMatrix RankMatrix::identity(std::size_t m, std::size_t d) {
    Storage r(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    for (Eigen::Index t = 0; t < r.rows(); ++t) r.row(t).setConstant(static_cast<int>(t + 1));
    return RankMatrix(std::move(r));
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {
    const auto d = sigma_.rows();
    if (d < 1 || sigma_.cols() != d) throw std::invalid_argument("correlation matrix must be square");
    for (Eigen::Index i = 0; i < d; ++i) {
        if (std::abs(sigma_(i, i) - 1.0) > 1e-10) throw std::invalid_argument("correlation diagonal must be 1");
        for (Eigen::Index j = 0; j < d; ++j) {
            const double v = sigma_(i, j);
            if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-10) {
                throw std::invalid_argument("correlation entries must lie in [-1, 1]");
            }
            if (std::abs(v - sigma_(j, i)) > 1e-10) throw std::invalid_argument("correlation matrix must be symmetric");
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma_, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-8) {
        throw std::invalid_argument("correlation matrix is not positive semi-definite");
    }
}

std::vector<int> stable_ranks(std::span<const double> values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<int> ranks(values.size());
    for (std::size_t r = 0; r < idx.size(); ++r) ranks[idx[r]] = static_cast<int>(r + 1);
    return ranks;
}

RankMatrix empirical_rank_matrix(const PitHistory& history) {
    const auto& u = history.levels();
    RankMatrix::Storage r(u.rows(), u.cols());
    std::vector<double> col(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index h = 0; h < u.cols(); ++h) {
        for (Eigen::Index t = 0; t < u.rows(); ++t) col[static_cast<std::size_t>(t)] = u(t, h);
        const auto ranks = stable_ranks(col);
        for (Eigen::Index t = 0; t < u.rows(); ++t) r(t, h) = ranks[static_cast<std::size_t>(t)];
    }
    return RankMatrix(std::move(r));
}

double empirical_copula(const RankMatrix& ranks, std::span<const int> grid) {
    if (grid.size() != ranks.cols()) throw std::invalid_argument("empirical_copula: grid dimension mismatch");
    std::size_t count = 0;
    for (std::size_t t = 0; t < ranks.rows(); ++t) {
        bool inside = true;
        for (std::size_t h = 0; h < ranks.cols() && inside; ++h) inside = ranks(t, h) <= grid[h];
        count += inside ? 1 : 0;
    }
    return static_cast<double>(count) / static_cast<double>(ranks.rows());
}

namespace {

// Ranks with ties replaced by their average.
std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

Eigen::MatrixXd spearman_matrix(const Eigen::MatrixXd& data) {
    const auto m = data.rows();
    const auto d = data.cols();
    Eigen::MatrixXd ranks(m, d);
    std::vector<double> col(static_cast<std::size_t>(m));
    for (Eigen::Index h = 0; h < d; ++h) {
        for (Eigen::Index t = 0; t < m; ++t) col[static_cast<std::size_t>(t)] = data(t, h);
        const auto r = average_ranks(col);
        for (Eigen::Index t = 0; t < m; ++t) ranks(t, h) = r[static_cast<std::size_t>(t)];
    }
    const Eigen::RowVectorXd mean = ranks.colwise().mean();
    const Eigen::MatrixXd centered = ranks.rowwise() - mean;
    const Eigen::MatrixXd cov = centered.transpose() * centered;
    const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
    for (Eigen::Index h = 0; h < d; ++h) {
        if (!(sd(h) > 0.0)) {
            throw NumericalError("rank correlation undefined: column " + std::to_string(h + 1) + " has no variation");
        }
    }
    Eigen::MatrixXd rho = cov.array() / (sd * sd.transpose()).array();
    rho = (0.5 * (rho + rho.transpose())).eval();
    rho.diagonal().setOnes();
    return rho;
}

Eigen::MatrixXd repair_correlation(const Eigen::MatrixXd& sigma, double floor) {
    // A successful Cholesky of sigma - floor*I already shows every eigenvalue is >= floor.
    const Eigen::MatrixXd shifted = sigma - floor * Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols());
    if (Eigen::LLT<Eigen::MatrixXd>(shifted).info() == Eigen::Success) return sigma;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed during correlation repair");
    if (eig.eigenvalues().minCoeff() >= floor) return sigma;
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd fixed = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    const Eigen::VectorXd inv_sd = fixed.diagonal().cwiseSqrt().cwiseInverse();
    fixed = inv_sd.asDiagonal() * fixed * inv_sd.asDiagonal();
    fixed = (0.5 * (fixed + fixed.transpose())).eval();
    fixed.diagonal().setOnes();
    return fixed;
}

CorrelationMatrix fit_gaussian_copula(const PitHistory& history) {
    const Eigen::MatrixXd rho_s = spearman_matrix(history.levels());
    Eigen::MatrixXd sigma = (rho_s.array() * (std::numbers::pi / 6.0)).sin() * 2.0;
    sigma.diagonal().setOnes();
    sigma = sigma.cwiseMax(-1.0).cwiseMin(1.0);
    return CorrelationMatrix(repair_correlation(sigma));
}

RankMatrix sample_gaussian_rank_matrix(const CorrelationMatrix& sigma, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample_gaussian_rank_matrix: m must be positive");
    const auto d = static_cast<Eigen::Index>(sigma.dim());

    Eigen::MatrixXd factor;
    Eigen::LLT<Eigen::MatrixXd> llt(sigma.matrix());
    if (llt.info() == Eigen::Success) {
        factor = llt.matrixL();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma.matrix());
        if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of correlation failed");
        Eigen::VectorXd lambda = eig.eigenvalues();
        const double top = lambda.maxCoeff();
        if (lambda.minCoeff() < -1e-8 * std::max(1.0, top)) {
            throw NumericalError("correlation matrix is not positive semi-definite");
        }
        for (Eigen::Index i = 0; i < d; ++i) lambda(i) = lambda(i) > 1e-10 * top ? std::sqrt(lambda(i)) : 0.0;
        factor = eig.eigenvectors() * lambda.asDiagonal();
    }

    SplitMix64 rng(seed);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(m), d);
    for (Eigen::Index t = 0; t < z.rows(); ++t) {
        for (Eigen::Index h = 0; h < d; ++h) z(t, h) = rng.normal();
    }
    const Eigen::MatrixXd x = z * factor.transpose();

    RankMatrix::Storage r(x.rows(), d);
    std::vector<double> col(m);
    for (Eigen::Index h = 0; h < d; ++h) {
        for (Eigen::Index t = 0; t < x.rows(); ++t) col[static_cast<std::size_t>(t)] = x(t, h);
        const auto ranks = stable_ranks(col);
        for (Eigen::Index t = 0; t < x.rows(); ++t) r(t, h) = ranks[static_cast<std::size_t>(t)];
    }
    return RankMatrix(std::move(r));
}

RankMatrix random_rank_matrix(std::size_t m, std::size_t d, std::uint64_t seed) {
    if (m < 1 || d < 1) throw std::invalid_argument("random_rank_matrix: empty shape");
    SplitMix64 rng(seed);
    RankMatrix::Storage r(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    std::vector<int> perm(m);
    for (Eigen::Index h = 0; h < r.cols(); ++h) {
        std::iota(perm.begin(), perm.end(), 1);
        rng.shuffle(std::span<int>(perm));
        for (Eigen::Index t = 0; t < r.rows(); ++t) r(t, h) = perm[static_cast<std::size_t>(t)];
    }
    return RankMatrix(std::move(r));
}

void write_rank_matrix_csv(std::ostream& out, const RankMatrix& ranks) {
    for (std::size_t h = 0; h < ranks.cols(); ++h) out << (h ? "," : "") << 'h' << (h + 1);
    out << '\n';
    for (std::size_t t = 0; t < ranks.rows(); ++t) {
        for (std::size_t h = 0; h < ranks.cols(); ++h) out << (h ? "," : "") << ranks(t, h);
        out << '\n';
    }
}

RankMatrix read_rank_matrix_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    std::vector<int> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = csv::trim(line);
        if (text.empty()) continue;
        const auto fields = csv::split(text);
        if (width == 0) {
            width = fields.size();
            // Optional header row h1..hd.
            if (!fields.empty() && !fields[0].empty() && fields[0][0] == 'h') continue;
        }
        if (fields.size() != width) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(width) + " columns");
        }
        for (const auto f : fields) {
            long long v = 0;
            if (!csv::parse_int(f, v)) {
                throw DataError(source + ":" + std::to_string(line_no) + ": invalid rank '" + std::string(f) + "'");
            }
            values.push_back(static_cast<int>(v));
        }
    }
    if (width == 0 || values.empty()) throw DataError(source + ": empty rank matrix");
    const auto rows = static_cast<Eigen::Index>(values.size() / width);
    RankMatrix::Storage r = Eigen::Map<RankMatrix::Storage>(values.data(), rows, static_cast<Eigen::Index>(width));
    try {
        return RankMatrix(std::move(r));
    } catch (const std::invalid_argument& e) {
        throw DataError(source + ": " + e.what());
    }
}

}  // namespace schaake
