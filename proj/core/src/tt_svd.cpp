#include <cmath>
#include <optional>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ttrnn/error.hpp"
#include "ttrnn/tt_format.hpp"

namespace ttrnn {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

// Number of leading singular values to keep so that the discarded tail has
// Frobenius norm <= delta. Always keeps at least one.
std::size_t rank_for_tolerance(const Eigen::VectorXd& s, double delta) {
    const std::size_t n = static_cast<std::size_t>(s.size());
    double tail = 0.0;
    std::size_t keep = n;
    while (keep > 1) {
        const double v = s(static_cast<Eigen::Index>(keep - 1));
        if (tail + v * v > delta * delta) break;
        tail += v * v;
        --keep;
    }
    return keep;
}

TTSvdResult decompose(const DenseTensor& t, std::optional<std::span<const std::size_t>> max_ranks,
                      double delta) {
    const auto& dims = t.shape().dims();
    const std::size_t n_cores = dims.size();
    if (n_cores == 0 || t.size() == 0) {
        throw Error(ErrorKind::InvalidRank, "tt_svd needs a tensor of order >= 1");
    }
    if (max_ranks) {
        if (max_ranks->size() != n_cores + 1) {
            throw Error(ErrorKind::InvalidRank, "max_ranks must have N+1 entries");
        }
        if ((*max_ranks)[0] != 1 || (*max_ranks)[n_cores] != 1) {
            throw Error(ErrorKind::InvalidRank, "boundary ranks must be 1");
        }
        for (std::size_t r : *max_ranks) {
            if (r == 0) throw Error(ErrorKind::InvalidRank, "ranks must be positive");
        }
    }

    std::vector<DenseTensor> cores;
    cores.reserve(n_cores);
    double discarded_sq = 0.0;

    // Remainder C holds (R_{n-1} * K_n * rest) entries in Little-Endian order, which is
    // exactly the column-major layout of the (R_{n-1} K_n) x rest unfolding.
    std::vector<double> remainder(t.data().begin(), t.data().end());
    std::size_t r_prev = 1;
    std::size_t rest = t.size();

    for (std::size_t n = 0; n + 1 < n_cores; ++n) {
        const std::size_t k = dims[n];
        rest /= k;
        const std::size_t rows = r_prev * k;
        Eigen::Map<const Matrix> c(remainder.data(), static_cast<Eigen::Index>(rows),
                                   static_cast<Eigen::Index>(rest));
        Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& s = svd.singularValues();

        std::size_t r = static_cast<std::size_t>(s.size());
        if (max_ranks) {
            r = std::min(r, (*max_ranks)[n + 1]);
        } else {
            r = rank_for_tolerance(s, delta);
        }
        for (Eigen::Index i = static_cast<Eigen::Index>(r); i < s.size(); ++i) {
            discarded_sq += s(i) * s(i);
        }

        const auto ri = static_cast<Eigen::Index>(r);
        Matrix u = svd.matrixU().leftCols(ri);
        cores.emplace_back(Shape{r_prev, k, r}, std::vector<double>(u.data(), u.data() + u.size()));

        Matrix next = s.head(ri).asDiagonal() * svd.matrixV().leftCols(ri).transpose();
        remainder.assign(next.data(), next.data() + next.size());
        r_prev = r;
    }
    cores.emplace_back(Shape{r_prev, dims.back(), 1}, std::move(remainder));
    return TTSvdResult{TTVector(std::move(cores)), std::sqrt(discarded_sq)};
}

}  // namespace

TTSvdResult tt_svd_detailed(const DenseTensor& t, std::span<const std::size_t> max_ranks) {
    return decompose(t, max_ranks, 0.0);
}

TTSvdResult tt_svd_detailed(const DenseTensor& t, double tolerance) {
    if (!(tolerance >= 0.0)) {
        throw Error(ErrorKind::InvalidRank, "tolerance must be non-negative");
    }
    const std::size_t n = t.order();
    const double per_step = n > 1 ? tolerance / std::sqrt(static_cast<double>(n - 1)) : 0.0;
    const double delta = per_step * std::sqrt(frobenius_norm_sq(t));
    return decompose(t, std::nullopt, delta);
}

TTVector tt_svd(const DenseTensor& t, std::span<const std::size_t> max_ranks) {
    return tt_svd_detailed(t, max_ranks).tt;
}

TTVector tt_svd(const DenseTensor& t, double tolerance) {
    return tt_svd_detailed(t, tolerance).tt;
}

}  // namespace ttrnn
