#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ttrnn {

/// Ordered mode sizes of an N-way array. Order 0 is a scalar.
class Shape {
public:
    Shape() = default;
    Shape(std::initializer_list<std::size_t> dims);
    explicit Shape(std::vector<std::size_t> dims);

    std::size_t order() const noexcept { return dims_.size(); }
    std::size_t operator[](std::size_t n) const { return dims_[n]; }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    /// Product of all mode sizes (1 for a scalar).
    std::size_t count() const noexcept;

    /// Little-Endian linear offset of a 0-based multi-index: the first index varies fastest.
    std::size_t offset(std::span<const std::size_t> index) const;

    /// Inverse of offset().
    std::vector<std::size_t> unravel(std::size_t offset) const;

    std::string to_string() const;

    friend bool operator==(const Shape&, const Shape&) = default;

private:
    std::vector<std::size_t> dims_;
};

/// Dense double-precision N-way array stored in Little-Endian (first-index-fastest) order.
class DenseTensor {
public:
    DenseTensor() : data_(1, 0.0) {}
    explicit DenseTensor(Shape shape);
    DenseTensor(Shape shape, std::vector<double> data);

    static DenseTensor scalar(double value);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.order(); }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    double& operator[](std::size_t offset) { return data_[offset]; }
    double operator[](std::size_t offset) const { return data_[offset]; }

    /// Element access by 0-based multi-index.
    double& at(std::span<const std::size_t> index) { return data_[shape_.offset(index)]; }
    double at(std::span<const std::size_t> index) const { return data_[shape_.offset(index)]; }
    double& at(std::initializer_list<std::size_t> index) {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }
    double at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    DenseTensor& operator+=(const DenseTensor& other);
    DenseTensor& operator-=(const DenseTensor& other);
    DenseTensor& operator*=(double s) noexcept;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    friend DenseTensor reshape(DenseTensor t, Shape new_shape);

    Shape shape_;
    std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(double s, DenseTensor t);

/// Replaces the shape metadata; the data buffer is untouched, so tensorization and
/// matricization round-trip bit-exactly. Throws ElementCountMismatch.
DenseTensor reshape(DenseTensor t, Shape new_shape);

/// (m,n) contraction: sums mode `n` of `a` against mode `m` of `b` (both 1-based).
/// Result modes are a's remaining modes followed by b's remaining modes; when both
/// inputs are vectors the result is an order-0 tensor holding the inner product.
DenseTensor contract(const DenseTensor& a, std::size_t n, const DenseTensor& b, std::size_t m);

/// Reorders modes: result mode k is input mode perm[k] (0-based).
DenseTensor permute(const DenseTensor& t, std::span<const std::size_t> perm);

double frobenius_norm_sq(const DenseTensor& t) noexcept;

/// Matrix product for order-2 tensors (rows x cols, column-major by construction).
DenseTensor matmul(const DenseTensor& a, const DenseTensor& b);

}  // namespace ttrnn
