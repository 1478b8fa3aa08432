#include "ttrnn/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "ttrnn/error.hpp"
#include "ttrnn/text.hpp"

namespace ttrnn {

namespace {

constexpr const char* kMagic = "ttrnn-checkpoint";
constexpr int kVersion = 1;

void write_list(std::ostream& os, const char* key, const std::vector<std::size_t>& v) {
    os << key;
    for (std::size_t x : v) os << ' ' << x;
    os << '\n';
}

std::string next_token(std::istream& is) {
    std::string tok;
    if (!(is >> tok)) throw Error(ErrorKind::ParseError, "truncated checkpoint");
    return tok;
}

void expect(std::istream& is, const std::string& key) {
    const std::string tok = next_token(is);
    if (tok != key) {
        throw Error(ErrorKind::ParseError, "checkpoint: expected '" + key + "', found '" + tok + "'");
    }
}

std::vector<std::size_t> read_list(std::istream& is, const std::string& key, std::size_t n) {
    expect(is, key);
    std::vector<std::size_t> v(n);
    for (auto& x : v) x = text::parse_size(next_token(is));
    return v;
}

}  // namespace

void write_checkpoint(std::ostream& os, const TTRNNModel& model, const CheckpointMeta& meta) {
    const ModelDims dims = model.dims();
    os << kMagic << ' ' << kVersion << '\n';
    os << "cores " << dims.input_dims.size() << '\n';
    write_list(os, "input_dims", dims.input_dims);
    write_list(os, "hidden_dims", dims.hidden_dims);
    write_list(os, "ranks", dims.ranks);
    os << "seed " << meta.seed << '\n';
    os << "epoch " << meta.epoch << '\n';
    write_tt_matrix(os, model.input_layer.weights);
    os << "bias\n";
    write_dense_tensor(os, model.input_layer.bias);
    os << "feedback\n";
    write_dense_tensor(os, model.feedback);
    os << "head_weights\n";
    write_dense_tensor(os, model.head_weights);
    os << "head_bias\n";
    write_dense_tensor(os, model.head_bias);
}

Checkpoint read_checkpoint(std::istream& is) {
    expect(is, kMagic);
    if (text::parse_size(next_token(is)) != static_cast<std::size_t>(kVersion)) {
        throw Error(ErrorKind::ParseError, "unsupported checkpoint version");
    }
    expect(is, "cores");
    const std::size_t n = text::parse_size(next_token(is));
    ModelDims dims;
    dims.input_dims = read_list(is, "input_dims", n);
    dims.hidden_dims = read_list(is, "hidden_dims", n);
    dims.ranks = read_list(is, "ranks", n + 1);
    Checkpoint ck;
    expect(is, "seed");
    ck.meta.seed = text::parse_size(next_token(is));
    expect(is, "epoch");
    ck.meta.epoch = text::parse_size(next_token(is));

    ck.model.input_layer.weights = read_tt_matrix(is);
    expect(is, "bias");
    ck.model.input_layer.bias = read_dense_tensor(is);
    expect(is, "feedback");
    ck.model.feedback = read_dense_tensor(is);
    expect(is, "head_weights");
    ck.model.head_weights = read_dense_tensor(is);
    expect(is, "head_bias");
    ck.model.head_bias = read_dense_tensor(is);

    ck.model.validate();
    const ModelDims stored = ck.model.dims();
    if (stored.input_dims != dims.input_dims || stored.hidden_dims != dims.hidden_dims ||
        stored.ranks != dims.ranks) {
        throw Error(ErrorKind::ShapeMismatch, "checkpoint header disagrees with stored cores");
    }
    return ck;
}

void save_checkpoint(const std::string& path, const TTRNNModel& model, const CheckpointMeta& meta) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::IOFailure, "cannot write " + path);
    write_checkpoint(os, model, meta);
    if (!os) throw Error(ErrorKind::IOFailure, "write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::IOFailure, "cannot read " + path);
    return read_checkpoint(is);
}

}  // namespace ttrnn
