#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ttrnn/tensor.hpp"

namespace ttrnn {

/// Tensor-Train (MPS) representation: core n has shape (R_{n-1}, K_n, R_n) with R_0 = R_N = 1.
class TTVector {
public:
    TTVector() = default;
    /// Throws RankMismatch if the cores are not 3rd order or do not chain.
    explicit TTVector(std::vector<DenseTensor> cores);

    std::size_t num_cores() const noexcept { return cores_.size(); }
    const std::vector<DenseTensor>& cores() const noexcept { return cores_; }
    const DenseTensor& core(std::size_t n) const { return cores_[n]; }

    /// (R_0, ..., R_N)
    std::vector<std::size_t> ranks() const;
    /// (K_1, ..., K_N)
    std::vector<std::size_t> mode_sizes() const;
    std::size_t parameter_count() const noexcept;

private:
    std::vector<DenseTensor> cores_;
};

/// Matrix-Product-Operator representation of an M x P matrix with P = prod(I_n),
/// M = prod(J_n). Core n has shape (R_{n-1}, I_n, J_n, R_n).
class TTMatrix {
public:
    TTMatrix() = default;
    /// Throws RankMismatch if the cores are not 4th order or do not chain.
    explicit TTMatrix(std::vector<DenseTensor> cores);

    std::size_t num_cores() const noexcept { return cores_.size(); }
    const std::vector<DenseTensor>& cores() const noexcept { return cores_; }
    std::vector<DenseTensor>& mutable_cores() noexcept { return cores_; }
    const DenseTensor& core(std::size_t n) const { return cores_[n]; }

    std::vector<std::size_t> in_dims() const;
    std::vector<std::size_t> out_dims() const;
    std::vector<std::size_t> ranks() const;
    std::size_t in_size() const noexcept;   // P
    std::size_t out_size() const noexcept;  // M
    std::size_t parameter_count() const noexcept;

    friend bool operator==(const TTMatrix&, const TTMatrix&) = default;

private:
    std::vector<DenseTensor> cores_;
};

/// Full tensor of shape (K_1..K_N) via the contraction chain G1 x G2 x ... x GN.
DenseTensor tt_reconstruct(const TTVector& v);

/// Same tensor evaluated entry by entry as the product of core slices G1(k1)...GN(kN).
/// Slow; kept as an independent path for verification.
DenseTensor tt_reconstruct_slices(const TTVector& v);

/// Order-2N tensor W with modes (I_1, J_1, ..., I_N, J_N).
DenseTensor mpo_reconstruct(const TTMatrix& w);

/// The M x P matrix W of y = W x. Rows enumerate (j_1..j_N) and columns (i_1..i_N),
/// both Little-Endian.
DenseTensor mpo_to_matrix(const TTMatrix& w);

struct TTSvdResult {
    TTVector tt;
    /// sqrt of the sum of squared discarded singular values over all unfoldings.
    double truncation_error = 0.0;
};

/// Sequential-SVD construction. `max_ranks` is (R_0..R_N) with R_0 = R_N = 1; each
/// internal rank is further capped by the unfolding dimensions. Throws InvalidRank.
TTSvdResult tt_svd_detailed(const DenseTensor& t, std::span<const std::size_t> max_ranks);

/// Tolerance mode: relative Frobenius error budget `tolerance`, split evenly as
/// tolerance / sqrt(N-1) per unfolding.
TTSvdResult tt_svd_detailed(const DenseTensor& t, double tolerance);

TTVector tt_svd(const DenseTensor& t, std::span<const std::size_t> max_ranks);
TTVector tt_svd(const DenseTensor& t, double tolerance);

/// Full-rank bound for each internal rank: R_n <= min(prod K_{<=n}, prod K_{>n}).
std::vector<std::size_t> tt_max_ranks(std::span<const std::size_t> mode_sizes);

/// sum_n I_n * J_n * R_{n-1} * R_n. Throws LengthMismatch or InvalidRank.
std::size_t tt_param_count(std::span<const std::size_t> in_dims,
                           std::span<const std::size_t> out_dims,
                           std::span<const std::size_t> ranks);

/// Expands a rank list: a single value r becomes (1, r, ..., r, 1); a full list of
/// length N+1 is returned unchanged after validation.
std::vector<std::size_t> expand_ranks(std::span<const std::size_t> ranks, std::size_t num_cores);

// Text serialization. Header line, then one line of Little-Endian core data per core,
// written in shortest round-trip decimal form.
void write_tt_matrix(std::ostream& os, const TTMatrix& w);
TTMatrix read_tt_matrix(std::istream& is);
void write_tt_vector(std::ostream& os, const TTVector& v);
TTVector read_tt_vector(std::istream& is);

// Dense tensor file: "tensor <order> <dims...>" then the data on one line.
void write_dense_tensor(std::ostream& os, const DenseTensor& t);
DenseTensor read_dense_tensor(std::istream& is);

}  // namespace ttrnn
