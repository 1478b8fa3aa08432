#include "ttrnn/config.hpp"

#include <fstream>
#include <sstream>

#include "ttrnn/error.hpp"
#include "ttrnn/text.hpp"
#include "ttrnn/tt_format.hpp"

namespace ttrnn {

KeyValueConfig KeyValueConfig::parse(std::string_view content) {
    KeyValueConfig kv;
    std::size_t lineno = 0;
    for (auto line : text::split(content, '\n')) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidConfig,
                        "line " + std::to_string(lineno) + ": expected key = value");
        }
        kv.set(std::string(text::trim(line.substr(0, eq))), std::string(text::trim(line.substr(eq + 1))));
    }
    return kv;
}

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::IOFailure, "cannot read config " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

void KeyValueConfig::set(std::string key, std::string value) {
    if (key.empty()) throw Error(ErrorKind::InvalidConfig, "empty key");
    values_[std::move(key)] = std::move(value);
}

void KeyValueConfig::set_assignment(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw Error(ErrorKind::InvalidConfig, "expected key=value, got '" + std::string(assignment) + "'");
    }
    set(std::string(text::trim(assignment.substr(0, eq))),
        std::string(text::trim(assignment.substr(eq + 1))));
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::to_string() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

namespace {

template <typename F>
auto convert(const std::string& key, const std::string& value, F&& f) {
    try {
        return f(value);
    } catch (const Error& e) {
        throw Error(ErrorKind::InvalidConfig, key + ": " + e.what());
    }
}

}  // namespace

RunConfig RunConfig::from(const KeyValueConfig& kv) {
    RunConfig c;
    for (const auto& [key, value] : kv.entries()) {
        auto as_double = [&] { return convert(key, value, [](const std::string& v) { return text::parse_double(v); }); };
        auto as_size = [&] { return convert(key, value, [](const std::string& v) { return text::parse_size(v); }); };
        auto as_list = [&] { return convert(key, value, [](const std::string& v) { return text::parse_size_list(v); }); };

        if (key == "manifest") c.manifest = value;
        else if (key == "target") c.target = value;
        else if (key == "split") c.split = as_double();
        else if (key == "seed") c.seed = as_size();
        else if (key == "out") c.out_dir = value;
        else if (key == "init") c.init = value;
        else if (key == "epochs") c.train.epochs = as_size();
        else if (key == "batch_size") c.train.batch_size = as_size();
        else if (key == "learning_rate") c.train.learning_rate = as_double();
        else if (key == "seq_len") c.train.seq_len = as_size();
        else if (key == "ranks") c.train.ranks = as_list();
        else if (key == "input_dims") c.input_dims = as_list();
        else if (key == "hidden_dims") c.hidden_dims = as_list();
        else if (key == "synth.days") c.synth.days = as_size();
        else if (key == "synth.components") c.synth.components_per_class = as_size();
        else if (key == "synth.signal_strength") c.synth.signal_strength = as_double();
        else if (key == "synth.signal_driver") c.synth.signal_driver = value;
        else if (key == "synth.target_vol") c.synth.target_vol = as_double();
        else if (key == "synth.start_date") c.synth.start_date = value;
        else throw Error(ErrorKind::InvalidConfig, "unknown key '" + key + "'");
    }
    c.synth.target = c.target;
    c.train.seed = c.seed;
    c.validate();
    return c;
}

KeyValueConfig RunConfig::resolved() const {
    KeyValueConfig kv;
    kv.set("manifest", manifest);
    kv.set("target", target);
    kv.set("split", text::format_double(split));
    kv.set("seed", std::to_string(seed));
    kv.set("out", out_dir);
    kv.set("init", init);
    kv.set("epochs", std::to_string(train.epochs));
    kv.set("batch_size", std::to_string(train.batch_size));
    kv.set("learning_rate", text::format_double(train.learning_rate));
    kv.set("seq_len", std::to_string(train.seq_len));
    kv.set("ranks", text::join(model_dims().ranks));
    kv.set("input_dims", text::join(input_dims));
    kv.set("hidden_dims", text::join(hidden_dims));
    kv.set("synth.days", std::to_string(synth.days));
    kv.set("synth.components", std::to_string(synth.components_per_class));
    kv.set("synth.signal_strength", text::format_double(synth.signal_strength));
    kv.set("synth.signal_driver", synth.signal_driver);
    kv.set("synth.target_vol", text::format_double(synth.target_vol));
    kv.set("synth.start_date", synth.start_date);
    return kv;
}

ModelDims RunConfig::model_dims() const {
    ModelDims d;
    d.input_dims = input_dims;
    d.hidden_dims = hidden_dims;
    try {
        d.ranks = expand_ranks(train.ranks, input_dims.size());
    } catch (const Error& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
    }
    return d;
}

void RunConfig::validate() const {
    if (!(split > 0.0 && split < 1.0)) throw Error(ErrorKind::InvalidConfig, "split must lie in (0, 1)");
    if (init != "random" && init != "zero") {
        throw Error(ErrorKind::InvalidConfig, "init must be 'random' or 'zero'");
    }
    if (out_dir.empty()) throw Error(ErrorKind::InvalidConfig, "out must not be empty");
    train.validate();
    model_dims().validate();
    if (manifest.empty()) synth.validate();
}

}  // namespace ttrnn
