#include "ttrnn/tt_format.hpp"

#include <numeric>

#include "ttrnn/error.hpp"

namespace ttrnn {

namespace {

void check_chain(const std::vector<DenseTensor>& cores, std::size_t order) {
    if (cores.empty()) {
        throw Error(ErrorKind::RankMismatch, "a tensor train needs at least one core");
    }
    for (std::size_t n = 0; n < cores.size(); ++n) {
        if (cores[n].order() != order) {
            throw Error(ErrorKind::RankMismatch, "core " + std::to_string(n + 1) + " has order " +
                                                     std::to_string(cores[n].order()) +
                                                     ", expected " + std::to_string(order));
        }
    }
    if (cores.front().shape()[0] != 1 || cores.back().shape()[order - 1] != 1) {
        throw Error(ErrorKind::RankMismatch, "boundary ranks R_0 and R_N must be 1");
    }
    for (std::size_t n = 0; n + 1 < cores.size(); ++n) {
        if (cores[n].shape()[order - 1] != cores[n + 1].shape()[0]) {
            throw Error(ErrorKind::RankMismatch, "trailing rank of core " + std::to_string(n + 1) +
                                                     " does not match leading rank of core " +
                                                     std::to_string(n + 2));
        }
    }
}

std::size_t product(const std::vector<std::size_t>& v) {
    return std::accumulate(v.begin(), v.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

TTVector::TTVector(std::vector<DenseTensor> cores) : cores_(std::move(cores)) {
    check_chain(cores_, 3);
}

std::vector<std::size_t> TTVector::ranks() const {
    std::vector<std::size_t> r;
    r.reserve(cores_.size() + 1);
    for (const auto& c : cores_) r.push_back(c.shape()[0]);
    r.push_back(cores_.empty() ? 1 : cores_.back().shape()[2]);
    return r;
}

std::vector<std::size_t> TTVector::mode_sizes() const {
    std::vector<std::size_t> k;
    for (const auto& c : cores_) k.push_back(c.shape()[1]);
    return k;
}

std::size_t TTVector::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : cores_) n += c.size();
    return n;
}

TTMatrix::TTMatrix(std::vector<DenseTensor> cores) : cores_(std::move(cores)) {
    check_chain(cores_, 4);
}

std::vector<std::size_t> TTMatrix::in_dims() const {
    std::vector<std::size_t> d;
    for (const auto& c : cores_) d.push_back(c.shape()[1]);
    return d;
}

std::vector<std::size_t> TTMatrix::out_dims() const {
    std::vector<std::size_t> d;
    for (const auto& c : cores_) d.push_back(c.shape()[2]);
    return d;
}

std::vector<std::size_t> TTMatrix::ranks() const {
    std::vector<std::size_t> r;
    for (const auto& c : cores_) r.push_back(c.shape()[0]);
    r.push_back(cores_.empty() ? 1 : cores_.back().shape()[3]);
    return r;
}

std::size_t TTMatrix::in_size() const noexcept { return product(in_dims()); }
std::size_t TTMatrix::out_size() const noexcept { return product(out_dims()); }

std::size_t TTMatrix::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& c : cores_) n += c.size();
    return n;
}

DenseTensor tt_reconstruct(const TTVector& v) {
    if (v.num_cores() == 0) throw Error(ErrorKind::RankMismatch, "empty tensor train");
    DenseTensor acc = v.core(0);
    for (std::size_t n = 1; n < v.num_cores(); ++n) {
        acc = contract(acc, acc.order(), v.core(n), 1);
    }
    return reshape(std::move(acc), Shape(v.mode_sizes()));
}

DenseTensor tt_reconstruct_slices(const TTVector& v) {
    if (v.num_cores() == 0) throw Error(ErrorKind::RankMismatch, "empty tensor train");
    const Shape shape(v.mode_sizes());
    DenseTensor out(shape);
    std::vector<double> row, next;
    for (std::size_t off = 0; off < out.size(); ++off) {
        const auto k = shape.unravel(off);
        row.assign(1, 1.0);
        for (std::size_t n = 0; n < v.num_cores(); ++n) {
            const auto& g = v.core(n);
            const std::size_t r0 = g.shape()[0], kn = g.shape()[1], r1 = g.shape()[2];
            next.assign(r1, 0.0);
            for (std::size_t b = 0; b < r1; ++b)
                for (std::size_t a = 0; a < r0; ++a) next[b] += row[a] * g[a + r0 * (k[n] + kn * b)];
            row.swap(next);
        }
        out[off] = row[0];
    }
    return out;
}

DenseTensor mpo_reconstruct(const TTMatrix& w) {
    if (w.num_cores() == 0) throw Error(ErrorKind::RankMismatch, "empty MPO");
    DenseTensor acc = w.core(0);
    for (std::size_t n = 1; n < w.num_cores(); ++n) {
        acc = contract(acc, acc.order(), w.core(n), 1);
    }
    std::vector<std::size_t> dims;
    for (std::size_t n = 0; n < w.num_cores(); ++n) {
        dims.push_back(w.core(n).shape()[1]);
        dims.push_back(w.core(n).shape()[2]);
    }
    return reshape(std::move(acc), Shape(std::move(dims)));
}

DenseTensor mpo_to_matrix(const TTMatrix& w) {
    const DenseTensor full = mpo_reconstruct(w);
    const std::size_t n = w.num_cores();
    // (I1,J1,...,IN,JN) -> (J1..JN, I1..IN)
    std::vector<std::size_t> perm;
    for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k + 1);
    for (std::size_t k = 0; k < n; ++k) perm.push_back(2 * k);
    return reshape(permute(full, perm), Shape{w.out_size(), w.in_size()});
}

std::vector<std::size_t> tt_max_ranks(std::span<const std::size_t> mode_sizes) {
    const std::size_t n = mode_sizes.size();
    std::vector<std::size_t> r(n + 1, 1);
    for (std::size_t k = 1; k < n; ++k) {
        std::size_t left = 1, right = 1;
        for (std::size_t i = 0; i < k; ++i) left *= mode_sizes[i];
        for (std::size_t i = k; i < n; ++i) right *= mode_sizes[i];
        r[k] = std::min(left, right);
    }
    return r;
}

std::size_t tt_param_count(std::span<const std::size_t> in_dims,
                           std::span<const std::size_t> out_dims,
                           std::span<const std::size_t> ranks) {
    if (in_dims.size() != out_dims.size() || ranks.size() != in_dims.size() + 1) {
        throw Error(ErrorKind::LengthMismatch,
                    "need N in-dims, N out-dims and N+1 ranks; got " +
                        std::to_string(in_dims.size()) + ", " + std::to_string(out_dims.size()) +
                        ", " + std::to_string(ranks.size()));
    }
    if (ranks.front() != 1 || ranks.back() != 1) {
        throw Error(ErrorKind::InvalidRank, "boundary ranks R_0 and R_N must be 1");
    }
    std::size_t total = 0;
    for (std::size_t n = 0; n < in_dims.size(); ++n) {
        total += in_dims[n] * out_dims[n] * ranks[n] * ranks[n + 1];
    }
    return total;
}

std::vector<std::size_t> expand_ranks(std::span<const std::size_t> ranks, std::size_t num_cores) {
    std::vector<std::size_t> out;
    if (ranks.size() == 1 && num_cores != 0) {
        out.assign(num_cores + 1, ranks[0]);
        out.front() = out.back() = 1;
    } else if (ranks.size() == num_cores + 1) {
        out.assign(ranks.begin(), ranks.end());
        if (out.front() != 1 || out.back() != 1) {
            throw Error(ErrorKind::InvalidRank, "boundary ranks R_0 and R_N must be 1");
        }
    } else {
        throw Error(ErrorKind::InvalidRank, "expected 1 or " + std::to_string(num_cores + 1) +
                                                " ranks, got " + std::to_string(ranks.size()));
    }
    for (std::size_t r : out) {
        if (r == 0) throw Error(ErrorKind::InvalidRank, "ranks must be positive");
    }
    return out;
}

}  // namespace ttrnn
