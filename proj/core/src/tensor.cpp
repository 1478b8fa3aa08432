#include "ttrnn/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ttrnn/error.hpp"

namespace ttrnn {

namespace {

void check_dims(const std::vector<std::size_t>& dims) {
    for (std::size_t d : dims) {
        if (d == 0) {
            throw Error(ErrorKind::ShapeMismatch, "mode sizes must be positive");
        }
    }
}

void check_same_shape(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) {
        throw Error(ErrorKind::ShapeMismatch,
                    "element-wise operation on " + a.shape().to_string() + " and " +
                        b.shape().to_string());
    }
}

}  // namespace

Shape::Shape(std::initializer_list<std::size_t> dims) : dims_(dims) { check_dims(dims_); }

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) { check_dims(dims_); }

std::size_t Shape::count() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t Shape::offset(std::span<const std::size_t> index) const {
    if (index.size() != dims_.size()) {
        throw Error(ErrorKind::ModeIndexOutOfRange, "index order does not match tensor order");
    }
    std::size_t off = 0;
    std::size_t stride = 1;
    for (std::size_t n = 0; n < dims_.size(); ++n) {
        if (index[n] >= dims_[n]) {
            throw Error(ErrorKind::ModeIndexOutOfRange,
                        "index " + std::to_string(index[n]) + " out of range for mode " +
                            std::to_string(n + 1));
        }
        off += index[n] * stride;
        stride *= dims_[n];
    }
    return off;
}

std::vector<std::size_t> Shape::unravel(std::size_t offset) const {
    std::vector<std::size_t> index(dims_.size());
    for (std::size_t n = 0; n < dims_.size(); ++n) {
        index[n] = offset % dims_[n];
        offset /= dims_[n];
    }
    return index;
}

std::string Shape::to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t n = 0; n < dims_.size(); ++n) {
        if (n) os << ',';
        os << dims_[n];
    }
    os << ')';
    return os.str();
}

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)), data_(shape_.count(), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.count()) {
        throw Error(ErrorKind::ElementCountMismatch,
                    "data length " + std::to_string(data_.size()) + " does not match shape " +
                        shape_.to_string());
    }
}

DenseTensor DenseTensor::scalar(double value) { return DenseTensor(Shape{}, {value}); }

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
    check_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
    check_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

DenseTensor& DenseTensor::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(double s, DenseTensor t) { return t *= s; }

DenseTensor reshape(DenseTensor t, Shape new_shape) {
    if (new_shape.count() != t.size()) {
        throw Error(ErrorKind::ElementCountMismatch,
                    "cannot reshape " + t.shape().to_string() + " to " + new_shape.to_string());
    }
    t.shape_ = std::move(new_shape);
    return t;
}

DenseTensor contract(const DenseTensor& a, std::size_t n, const DenseTensor& b, std::size_t m) {
    if (n < 1 || n > a.order() || m < 1 || m > b.order()) {
        throw Error(ErrorKind::ModeIndexOutOfRange,
                    "contraction modes (" + std::to_string(n) + "," + std::to_string(m) +
                        ") out of range for orders " + std::to_string(a.order()) + " and " +
                        std::to_string(b.order()));
    }
    const auto& ad = a.shape().dims();
    const auto& bd = b.shape().dims();
    const std::size_t k_size = ad[n - 1];
    if (k_size != bd[m - 1]) {
        throw Error(ErrorKind::ModeSizeMismatch,
                    "mode " + std::to_string(n) + " of " + a.shape().to_string() +
                        " does not match mode " + std::to_string(m) + " of " +
                        b.shape().to_string());
    }

    // View a as (a_pre, K, a_post) and b as (b_pre, K, b_post) in Little-Endian order.
    auto prod = [](auto first, auto last) {
        return std::accumulate(first, last, std::size_t{1}, std::multiplies<>());
    };
    const std::size_t a_pre = prod(ad.begin(), ad.begin() + (n - 1));
    const std::size_t a_post = prod(ad.begin() + n, ad.end());
    const std::size_t b_pre = prod(bd.begin(), bd.begin() + (m - 1));
    const std::size_t b_post = prod(bd.begin() + m, bd.end());

    std::vector<std::size_t> out_dims;
    out_dims.reserve(ad.size() + bd.size() - 2);
    for (std::size_t i = 0; i < ad.size(); ++i)
        if (i != n - 1) out_dims.push_back(ad[i]);
    for (std::size_t i = 0; i < bd.size(); ++i)
        if (i != m - 1) out_dims.push_back(bd[i]);

    DenseTensor c{Shape(std::move(out_dims))};
    const auto A = a.data();
    const auto B = b.data();
    auto C = c.data();
    const std::size_t a_block = a_pre * k_size;
    const std::size_t b_block = b_pre * k_size;
    const std::size_t a_count = a_pre * a_post;

    for (std::size_t bq = 0; bq < b_post; ++bq) {
        for (std::size_t bp = 0; bp < b_pre; ++bp) {
            double* out = &C[a_count * (bp + b_pre * bq)];
            const double* bcol = &B[bp + b_block * bq];
            for (std::size_t k = 0; k < k_size; ++k) {
                const double bv = bcol[b_pre * k];
                if (bv == 0.0) continue;
                for (std::size_t aq = 0; aq < a_post; ++aq) {
                    const double* arow = &A[a_pre * k + a_block * aq];
                    double* orow = out + a_pre * aq;
                    for (std::size_t ap = 0; ap < a_pre; ++ap) orow[ap] += arow[ap] * bv;
                }
            }
        }
    }
    return c;
}

DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> perm) {
    const auto& dims = t.shape().dims();
    if (perm.size() != dims.size()) {
        throw Error(ErrorKind::ModeIndexOutOfRange, "permutation length does not match order");
    }
    std::vector<bool> seen(dims.size(), false);
    std::vector<std::size_t> out_dims(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        if (perm[k] >= dims.size() || seen[perm[k]]) {
            throw Error(ErrorKind::ModeIndexOutOfRange, "invalid permutation");
        }
        seen[perm[k]] = true;
        out_dims[k] = dims[perm[k]];
    }

    // Stride in the source tensor for each output mode.
    std::vector<std::size_t> src_stride(dims.size());
    {
        std::vector<std::size_t> stride(dims.size());
        std::size_t s = 1;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            stride[i] = s;
            s *= dims[i];
        }
        for (std::size_t k = 0; k < perm.size(); ++k) src_stride[k] = stride[perm[k]];
    }

    DenseTensor out{Shape(out_dims)};
    std::vector<std::size_t> idx(dims.size(), 0);
    std::size_t src = 0;
    const auto in = t.data();
    auto dst = out.data();
    for (std::size_t off = 0; off < out.size(); ++off) {
        dst[off] = in[src];
        for (std::size_t k = 0; k < idx.size(); ++k) {
            ++idx[k];
            src += src_stride[k];
            if (idx[k] < out_dims[k]) break;
            src -= src_stride[k] * out_dims[k];
            idx[k] = 0;
        }
    }
    return out;
}

double frobenius_norm_sq(const DenseTensor& t) noexcept {
    double s = 0.0;
    for (double v : t.data()) s += v * v;
    return s;
}

DenseTensor matmul(const DenseTensor& a, const DenseTensor& b) {
    if (a.order() != 2 || b.order() != 2) {
        throw Error(ErrorKind::ShapeMismatch, "matmul expects order-2 tensors");
    }
    return contract(a, 2, b, 1);
}

}  // namespace ttrnn
