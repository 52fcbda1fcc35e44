#include "sketchsearch/neural_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "binary_io.hpp"
#include "sketchsearch/error.hpp"
#include "sketchsearch/random.hpp"

namespace sketchsearch {

namespace {

using detail::ByteReader;
using detail::ByteWriter;

constexpr char kMagic[5] = {'P', 'S', 'D', 'W', '1'};

enum class LayerKind : std::uint32_t {
    Conv1d = 1,
    BiLstm = 2,
    MaskedMeanPool = 3,
    Dense = 4,
    Softmax = 5,
};

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorCode::ModelFormat, what); }

void expect_size(const std::vector<float>& v, std::size_t n, const char* what) {
    if (v.size() != n) {
        format_error(std::string(what) + " has " + std::to_string(v.size()) + " values, expected " +
                     std::to_string(n));
    }
}

// Time-major activations: steps x width.
struct Activations {
    std::size_t steps = 0;
    std::size_t width = 0;
    std::vector<float> data;

    float* row(std::size_t t) { return data.data() + t * width; }
    const float* row(std::size_t t) const { return data.data() + t * width; }
};

Activations run_conv(const Conv1dLayer& layer, const Activations& in) {
    Activations out{in.steps, layer.out_channels, std::vector<float>(in.steps * layer.out_channels)};
    const auto k = static_cast<std::ptrdiff_t>(layer.kernel_width);
    const std::ptrdiff_t left = (k - 1) / 2;
    for (std::size_t t = 0; t < in.steps; ++t) {
        float* o = out.row(t);
        for (std::uint32_t oc = 0; oc < layer.out_channels; ++oc) {
            float acc = layer.bias[oc];
            const float* w = layer.weights.data() + static_cast<std::size_t>(oc) * layer.in_channels * layer.kernel_width;
            for (std::ptrdiff_t j = 0; j < k; ++j) {
                const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t) + j - left;
                if (src < 0 || src >= static_cast<std::ptrdiff_t>(in.steps)) continue;
                const float* x = in.row(static_cast<std::size_t>(src));
                for (std::uint32_t ic = 0; ic < layer.in_channels; ++ic) {
                    acc += w[static_cast<std::size_t>(ic) * layer.kernel_width + static_cast<std::size_t>(j)] * x[ic];
                }
            }
            o[oc] = layer.relu ? std::max(acc, 0.0f) : acc;
        }
    }
    return out;
}

float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }

void run_direction(const LstmDirection& dir, std::size_t input_size, std::size_t hidden, const Activations& in,
                   bool reverse, Activations& out, std::size_t offset) {
    std::vector<float> h(hidden, 0.0f);
    std::vector<float> c(hidden, 0.0f);
    std::vector<float> gates(4 * hidden);
    for (std::size_t n = 0; n < in.steps; ++n) {
        const std::size_t t = reverse ? in.steps - 1 - n : n;
        const float* x = in.row(t);
        for (std::size_t g = 0; g < 4 * hidden; ++g) {
            float acc = dir.bias[g];
            const float* wi = dir.input_weights.data() + g * input_size;
            for (std::size_t i = 0; i < input_size; ++i) acc += wi[i] * x[i];
            const float* wh = dir.recurrent_weights.data() + g * hidden;
            for (std::size_t i = 0; i < hidden; ++i) acc += wh[i] * h[i];
            gates[g] = acc;
        }
        for (std::size_t j = 0; j < hidden; ++j) {
            const float ig = sigmoid(gates[j]);
            const float fg = sigmoid(gates[hidden + j]);
            const float cg = std::tanh(gates[2 * hidden + j]);
            const float og = sigmoid(gates[3 * hidden + j]);
            c[j] = fg * c[j] + ig * cg;
            h[j] = og * std::tanh(c[j]);
        }
        std::copy(h.begin(), h.end(), out.row(t) + offset);
    }
}

Activations run_bilstm(const BiLstmLayer& layer, const Activations& in) {
    const std::size_t hidden = layer.hidden_size;
    Activations out{in.steps, 2 * hidden, std::vector<float>(in.steps * 2 * hidden)};
    run_direction(layer.forward, layer.input_size, hidden, in, false, out, 0);
    run_direction(layer.backward, layer.input_size, hidden, in, true, out, hidden);
    return out;
}

std::vector<float> run_pool(const Activations& in, std::size_t valid_steps) {
    std::vector<float> out(in.width, 0.0f);
    const std::size_t n = std::min(valid_steps, in.steps);
    for (std::size_t t = 0; t < n; ++t) {
        const float* x = in.row(t);
        for (std::size_t i = 0; i < in.width; ++i) out[i] += x[i];
    }
    if (n > 0) {
        for (auto& v : out) v /= static_cast<float>(n);
    }
    return out;
}

std::vector<float> run_dense(const DenseLayer& layer, const std::vector<float>& in) {
    std::vector<float> out(layer.outputs);
    for (std::uint32_t o = 0; o < layer.outputs; ++o) {
        float acc = layer.bias[o];
        const float* w = layer.weights.data() + static_cast<std::size_t>(o) * layer.inputs;
        for (std::uint32_t i = 0; i < layer.inputs; ++i) acc += w[i] * in[i];
        out[o] = acc;
    }
    return out;
}

void check_direction(const LstmDirection& d, std::size_t in, std::size_t hidden, const char* which) {
    expect_size(d.input_weights, 4 * hidden * in, which);
    expect_size(d.recurrent_weights, 4 * hidden * hidden, which);
    expect_size(d.bias, 4 * hidden, which);
}

void put_floats(ByteWriter& w, const std::vector<float>& values) {
    for (float f : values) w.f32(f);
}

std::vector<float> get_floats(ByteReader& r, std::size_t n) {
    r.expect_items(n, 4);
    std::vector<float> out(n);
    for (auto& f : out) f = r.f32();
    return out;
}

std::vector<float> random_block(Rng& rng, std::size_t n, float scale) {
    std::vector<float> v(n);
    for (auto& x : v) x = static_cast<float>(rng.uniform(-scale, scale));
    return v;
}

std::vector<Layer> architecture(const NeuralHyperparameters& hp, Rng* rng, float scale) {
    if (hp.conv_channels.size() != hp.conv_kernels.size()) {
        throw Error(ErrorCode::InvalidInput, "conv channel and kernel lists differ in length");
    }
    auto block = [&](std::size_t n) { return rng ? random_block(*rng, n, scale) : std::vector<float>(n, 0.0f); };
    std::vector<Layer> layers;
    std::uint32_t width = kInputFeatures;
    for (std::size_t i = 0; i < hp.conv_channels.size(); ++i) {
        Conv1dLayer conv{width, hp.conv_channels[i], hp.conv_kernels[i], true, {}, {}};
        conv.weights = block(std::size_t{conv.out_channels} * conv.in_channels * conv.kernel_width);
        conv.bias = block(conv.out_channels);
        width = conv.out_channels;
        layers.emplace_back(std::move(conv));
    }
    for (std::uint32_t i = 0; i < hp.lstm_layers; ++i) {
        BiLstmLayer lstm{width, hp.lstm_hidden, {}, {}};
        const std::size_t h = hp.lstm_hidden;
        for (auto* dir : {&lstm.forward, &lstm.backward}) {
            dir->input_weights = block(4 * h * width);
            dir->recurrent_weights = block(4 * h * h);
            dir->bias = block(4 * h);
        }
        width = 2 * hp.lstm_hidden;
        layers.emplace_back(std::move(lstm));
    }
    layers.emplace_back(MaskedMeanPoolLayer{});
    DenseLayer dense{width, static_cast<std::uint32_t>(kCategoryCount), {}, {}};
    dense.weights = block(std::size_t{dense.inputs} * dense.outputs);
    dense.bias = block(dense.outputs);
    layers.emplace_back(std::move(dense));
    layers.emplace_back(SoftmaxLayer{});
    return layers;
}

std::vector<Category> default_order() { return {kAllCategories.begin(), kAllCategories.end()}; }

}  // namespace

NeuralModel::NeuralModel(std::vector<Layer> layers, std::vector<Category> logit_order)
    : layers_(std::move(layers)), logit_order_(std::move(logit_order)) {
    validate();
}

void NeuralModel::validate() const {
    if (logit_order_.size() != kCategoryCount) format_error("logit order must list 23 categories");
    std::array<bool, kCategoryCount> seen{};
    for (auto c : logit_order_) {
        if (seen[index_of(c)]) format_error("category listed twice in logit order: " + std::string(name(c)));
        seen[index_of(c)] = true;
    }
    if (layers_.empty()) format_error("model has no layers");

    std::size_t width = kInputFeatures;
    bool pooled = false;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& layer = layers_[i];
        const std::string where = "layer " + std::to_string(i) + ": ";
        if (const auto* conv = std::get_if<Conv1dLayer>(&layer)) {
            if (pooled) format_error(where + "conv1d after pooling");
            if (conv->in_channels != width) format_error(where + "conv1d input width mismatch");
            if (conv->kernel_width == 0 || conv->out_channels == 0) format_error(where + "empty conv1d");
            expect_size(conv->weights, std::size_t{conv->out_channels} * conv->in_channels * conv->kernel_width,
                        "conv1d weights");
            expect_size(conv->bias, conv->out_channels, "conv1d bias");
            width = conv->out_channels;
        } else if (const auto* lstm = std::get_if<BiLstmLayer>(&layer)) {
            if (pooled) format_error(where + "bi-lstm after pooling");
            if (lstm->input_size != width) format_error(where + "bi-lstm input width mismatch");
            if (lstm->hidden_size == 0) format_error(where + "bi-lstm hidden size is zero");
            check_direction(lstm->forward, width, lstm->hidden_size, "bi-lstm forward");
            check_direction(lstm->backward, width, lstm->hidden_size, "bi-lstm backward");
            width = 2 * std::size_t{lstm->hidden_size};
        } else if (std::holds_alternative<MaskedMeanPoolLayer>(layer)) {
            if (pooled) format_error(where + "second pooling layer");
            pooled = true;
        } else if (const auto* dense = std::get_if<DenseLayer>(&layer)) {
            if (!pooled) format_error(where + "dense layer before pooling");
            if (dense->inputs != width) format_error(where + "dense input width mismatch");
            expect_size(dense->weights, std::size_t{dense->inputs} * dense->outputs, "dense weights");
            expect_size(dense->bias, dense->outputs, "dense bias");
            width = dense->outputs;
        } else {
            if (i + 1 != layers_.size()) format_error(where + "softmax must be the last layer");
        }
    }
    if (!pooled) format_error("model never pools over time");
    if (width != kCategoryCount) format_error("final output width is " + std::to_string(width) + ", expected 23");
}

std::array<double, kCategoryCount> NeuralModel::logits(const EncodedSketch& encoded) const {
    if (encoded.empty()) throw Error(ErrorCode::InvalidInput, "encoded sketch is empty");
    Activations seq{encoded.size(), kInputFeatures, {}};
    seq.data.reserve(encoded.size() * kInputFeatures);
    for (const auto& s : encoded) {
        seq.data.push_back(static_cast<float>(s.dx));
        seq.data.push_back(static_cast<float>(s.dy));
        seq.data.push_back(static_cast<float>(s.pen_lift));
    }
    const std::size_t valid = encoded.size();
    std::vector<float> vec;
    for (const auto& layer : layers_) {
        if (const auto* conv = std::get_if<Conv1dLayer>(&layer)) {
            seq = run_conv(*conv, seq);
        } else if (const auto* lstm = std::get_if<BiLstmLayer>(&layer)) {
            seq = run_bilstm(*lstm, seq);
        } else if (std::holds_alternative<MaskedMeanPoolLayer>(layer)) {
            vec = run_pool(seq, valid);
        } else if (const auto* dense = std::get_if<DenseLayer>(&layer)) {
            vec = run_dense(*dense, vec);
        }
    }
    std::array<double, kCategoryCount> out{};
    for (std::size_t i = 0; i < kCategoryCount; ++i) out[index_of(logit_order_[i])] = vec[i];
    return out;
}

ElementPrediction NeuralModel::classify(const EncodedSketch& encoded) const {
    return make_prediction(softmax(logits(encoded)));
}

NeuralModel NeuralModel::zeros(const NeuralHyperparameters& hp) {
    return NeuralModel(architecture(hp, nullptr, 0.0f), default_order());
}

NeuralModel NeuralModel::random(std::uint64_t seed, const NeuralHyperparameters& hp, float scale) {
    Rng rng(seed);
    return NeuralModel(architecture(hp, &rng, scale), default_order());
}

std::vector<std::uint8_t> serialize_model(const NeuralModel& model) {
    model.validate();
    ByteWriter w;
    w.raw(kMagic, sizeof kMagic);
    std::string manifest;
    for (auto c : model.logit_order()) {
        manifest += name(c);
        manifest += '\n';
    }
    w.u32(static_cast<std::uint32_t>(manifest.size()));
    w.raw(manifest.data(), manifest.size());
    w.u32(kInputFeatures);
    w.u32(static_cast<std::uint32_t>(model.layers().size()));
    for (const auto& layer : model.layers()) {
        if (const auto* conv = std::get_if<Conv1dLayer>(&layer)) {
            w.u32(static_cast<std::uint32_t>(LayerKind::Conv1d));
            w.u32(conv->in_channels);
            w.u32(conv->out_channels);
            w.u32(conv->kernel_width);
            w.u32(conv->relu ? 1 : 0);
        } else if (const auto* lstm = std::get_if<BiLstmLayer>(&layer)) {
            w.u32(static_cast<std::uint32_t>(LayerKind::BiLstm));
            w.u32(lstm->input_size);
            w.u32(lstm->hidden_size);
        } else if (std::holds_alternative<MaskedMeanPoolLayer>(layer)) {
            w.u32(static_cast<std::uint32_t>(LayerKind::MaskedMeanPool));
        } else if (const auto* dense = std::get_if<DenseLayer>(&layer)) {
            w.u32(static_cast<std::uint32_t>(LayerKind::Dense));
            w.u32(dense->inputs);
            w.u32(dense->outputs);
        } else {
            w.u32(static_cast<std::uint32_t>(LayerKind::Softmax));
        }
    }
    for (const auto& layer : model.layers()) {
        if (const auto* conv = std::get_if<Conv1dLayer>(&layer)) {
            put_floats(w, conv->weights);
            put_floats(w, conv->bias);
        } else if (const auto* lstm = std::get_if<BiLstmLayer>(&layer)) {
            for (const auto* dir : {&lstm->forward, &lstm->backward}) {
                put_floats(w, dir->input_weights);
                put_floats(w, dir->recurrent_weights);
                put_floats(w, dir->bias);
            }
        } else if (const auto* dense = std::get_if<DenseLayer>(&layer)) {
            put_floats(w, dense->weights);
            put_floats(w, dense->bias);
        }
    }
    return w.take();
}

NeuralModel deserialize_model(const std::vector<std::uint8_t>& bytes) {
    ByteReader r(bytes.data(), bytes.size(), ErrorCode::ModelFormat, "weights file");
    const std::string magic = r.text(sizeof kMagic);
    if (magic != std::string(kMagic, sizeof kMagic)) {
        if (magic.rfind("PSDW", 0) == 0) {
            throw Error(ErrorCode::VersionMismatch, "weights file version " + magic + " is not supported (expected PSDW1)");
        }
        format_error("not a weights file (bad magic)");
    }
    const std::uint32_t manifest_len = r.u32();
    const std::string manifest = r.text(manifest_len);
    std::vector<Category> order;
    std::istringstream lines(manifest);
    for (std::string line; std::getline(lines, line);) {
        if (line.empty()) continue;
        const auto c = parse_category(line);
        if (!c) format_error("unknown category in manifest: " + line);
        order.push_back(*c);
    }
    if (r.u32() != kInputFeatures) format_error("unsupported input feature count");
    const std::uint32_t count = r.u32();
    if (count > 4096) format_error("implausible layer count");

    std::vector<Layer> layers;
    for (std::uint32_t i = 0; i < count; ++i) {
        switch (static_cast<LayerKind>(r.u32())) {
            case LayerKind::Conv1d: {
                Conv1dLayer conv;
                conv.in_channels = r.u32();
                conv.out_channels = r.u32();
                conv.kernel_width = r.u32();
                conv.relu = r.u32() != 0;
                layers.emplace_back(std::move(conv));
                break;
            }
            case LayerKind::BiLstm: {
                BiLstmLayer lstm;
                lstm.input_size = r.u32();
                lstm.hidden_size = r.u32();
                layers.emplace_back(std::move(lstm));
                break;
            }
            case LayerKind::MaskedMeanPool: layers.emplace_back(MaskedMeanPoolLayer{}); break;
            case LayerKind::Dense: {
                DenseLayer dense;
                dense.inputs = r.u32();
                dense.outputs = r.u32();
                layers.emplace_back(std::move(dense));
                break;
            }
            case LayerKind::Softmax: layers.emplace_back(SoftmaxLayer{}); break;
            default: format_error("unknown layer kind in layer " + std::to_string(i));
        }
    }
    for (auto& layer : layers) {
        if (auto* conv = std::get_if<Conv1dLayer>(&layer)) {
            conv->weights = get_floats(r, std::size_t{conv->out_channels} * conv->in_channels * conv->kernel_width);
            conv->bias = get_floats(r, conv->out_channels);
        } else if (auto* lstm = std::get_if<BiLstmLayer>(&layer)) {
            const std::size_t h = lstm->hidden_size;
            for (auto* dir : {&lstm->forward, &lstm->backward}) {
                dir->input_weights = get_floats(r, 4 * h * lstm->input_size);
                dir->recurrent_weights = get_floats(r, 4 * h * h);
                dir->bias = get_floats(r, 4 * h);
            }
        } else if (auto* dense = std::get_if<DenseLayer>(&layer)) {
            dense->weights = get_floats(r, std::size_t{dense->inputs} * dense->outputs);
            dense->bias = get_floats(r, dense->outputs);
        }
    }
    if (!r.at_end()) format_error("trailing bytes after the last parameter block");
    return NeuralModel(std::move(layers), std::move(order));
}

void save_model(const NeuralModel& model, const std::string& path) {
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write weights file " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

NeuralModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open weights file " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

NeuralRecognizer::NeuralRecognizer(NeuralModel model, double spacing) : model_(std::move(model)), spacing_(spacing) {
    model_.validate();
}

ElementPrediction NeuralRecognizer::classify(const StrokeSequence& sketch) const {
    return model_.classify(delta_encode(resample(normalize(sketch), spacing_)));
}

}  // namespace sketchsearch
