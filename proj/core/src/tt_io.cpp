#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ttrnn/error.hpp"
#include "ttrnn/text.hpp"
#include "ttrnn/tt_format.hpp"

namespace ttrnn {

namespace {

void write_values(std::ostream& os, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ' ';
        os << text::format_double(values[i]);
    }
    os << '\n';
}

std::vector<double> read_values(std::istream& is, std::size_t count) {
    std::vector<double> v;
    v.reserve(count);
    std::string tok;
    for (std::size_t i = 0; i < count; ++i) {
        if (!(is >> tok)) {
            throw Error(ErrorKind::ParseError, "truncated tensor data: expected " +
                                                   std::to_string(count) + " values");
        }
        v.push_back(text::parse_double(tok));
    }
    return v;
}

void expect_token(std::istream& is, const std::string& want) {
    std::string tok;
    if (!(is >> tok) || tok != want) {
        throw Error(ErrorKind::ParseError, "expected '" + want + "', found '" + tok + "'");
    }
}

std::vector<std::size_t> read_sizes(std::istream& is, std::size_t count) {
    std::vector<std::size_t> v(count);
    std::string tok;
    for (auto& x : v) {
        if (!(is >> tok)) throw Error(ErrorKind::ParseError, "truncated header");
        x = text::parse_size(tok);
    }
    return v;
}

void write_sizes(std::ostream& os, const char* label, const std::vector<std::size_t>& v) {
    os << ' ' << label;
    for (std::size_t x : v) os << ' ' << x;
}

}  // namespace

void write_tt_matrix(std::ostream& os, const TTMatrix& w) {
    os << "ttmatrix " << w.num_cores();
    write_sizes(os, "in", w.in_dims());
    write_sizes(os, "out", w.out_dims());
    write_sizes(os, "ranks", w.ranks());
    os << '\n';
    for (const auto& core : w.cores()) write_values(os, core.data());
}

TTMatrix read_tt_matrix(std::istream& is) {
    expect_token(is, "ttmatrix");
    const std::size_t n = read_sizes(is, 1)[0];
    if (n == 0) throw Error(ErrorKind::ParseError, "ttmatrix with zero cores");
    expect_token(is, "in");
    const auto in = read_sizes(is, n);
    expect_token(is, "out");
    const auto out = read_sizes(is, n);
    expect_token(is, "ranks");
    const auto ranks = read_sizes(is, n + 1);
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < n; ++k) {
        Shape shape{ranks[k], in[k], out[k], ranks[k + 1]};
        auto data = read_values(is, shape.count());
        cores.emplace_back(std::move(shape), std::move(data));
    }
    return TTMatrix(std::move(cores));
}

void write_tt_vector(std::ostream& os, const TTVector& v) {
    os << "ttvector " << v.num_cores();
    write_sizes(os, "modes", v.mode_sizes());
    write_sizes(os, "ranks", v.ranks());
    os << '\n';
    for (const auto& core : v.cores()) write_values(os, core.data());
}

TTVector read_tt_vector(std::istream& is) {
    expect_token(is, "ttvector");
    const std::size_t n = read_sizes(is, 1)[0];
    if (n == 0) throw Error(ErrorKind::ParseError, "ttvector with zero cores");
    expect_token(is, "modes");
    const auto modes = read_sizes(is, n);
    expect_token(is, "ranks");
    const auto ranks = read_sizes(is, n + 1);
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < n; ++k) {
        Shape shape{ranks[k], modes[k], ranks[k + 1]};
        auto data = read_values(is, shape.count());
        cores.emplace_back(std::move(shape), std::move(data));
    }
    return TTVector(std::move(cores));
}

void write_dense_tensor(std::ostream& os, const DenseTensor& t) {
    os << "tensor " << t.order();
    for (std::size_t d : t.shape().dims()) os << ' ' << d;
    os << '\n';
    write_values(os, t.data());
}

DenseTensor read_dense_tensor(std::istream& is) {
    expect_token(is, "tensor");
    const std::size_t order = read_sizes(is, 1)[0];
    Shape shape(read_sizes(is, order));
    auto data = read_values(is, shape.count());
    return DenseTensor(std::move(shape), std::move(data));
}

}  // namespace ttrnn
