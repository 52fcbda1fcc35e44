#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sketchsearch/category.hpp"
#include "sketchsearch/prediction.hpp"
#include "sketchsearch/stroke.hpp"

namespace sketchsearch {

/// 1-D convolution over time with "same" padding. Weights are laid out
/// [out_channels][in_channels][kernel_width], row-major.
struct Conv1dLayer {
    std::uint32_t in_channels = 0;
    std::uint32_t out_channels = 0;
    std::uint32_t kernel_width = 0;
    bool relu = false;
    std::vector<float> weights;
    std::vector<float> bias;
};

/// Gate rows are ordered input, forget, cell, output.
/// input_weights is [4*hidden][input], recurrent_weights is [4*hidden][hidden].
struct LstmDirection {
    std::vector<float> input_weights;
    std::vector<float> recurrent_weights;
    std::vector<float> bias;
};

/// Forward and backward outputs are concatenated per step: [fwd, bwd].
struct BiLstmLayer {
    std::uint32_t input_size = 0;
    std::uint32_t hidden_size = 0;
    LstmDirection forward;
    LstmDirection backward;
};

/// Mean over the valid time steps; turns the sequence into one vector.
struct MaskedMeanPoolLayer {};

/// weights is [outputs][inputs].
struct DenseLayer {
    std::uint32_t inputs = 0;
    std::uint32_t outputs = 0;
    std::vector<float> weights;
    std::vector<float> bias;
};

struct SoftmaxLayer {};

using Layer = std::variant<Conv1dLayer, BiLstmLayer, MaskedMeanPoolLayer, DenseLayer, SoftmaxLayer>;

/// Step features fed to the first layer: (dx, dy, pen_lift).
inline constexpr std::uint32_t kInputFeatures = 3;

struct NeuralHyperparameters {
    std::vector<std::uint32_t> conv_channels{48, 64, 96};
    std::vector<std::uint32_t> conv_kernels{5, 5, 3};
    std::uint32_t lstm_layers = 3;
    std::uint32_t lstm_hidden = 128;
};

class NeuralModel {
public:
    NeuralModel() = default;
    NeuralModel(std::vector<Layer> layers, std::vector<Category> logit_order);

    /// Throws ModelFormat when shapes do not chain, the last width is not 23,
    /// or the logit order is not a permutation of the 23 categories.
    void validate() const;

    /// Logits in Category index order (the file's logit order is undone).
    std::array<double, kCategoryCount> logits(const EncodedSketch& encoded) const;
    ElementPrediction classify(const EncodedSketch& encoded) const;

    const std::vector<Layer>& layers() const { return layers_; }
    const std::vector<Category>& logit_order() const { return logit_order_; }

    static NeuralModel zeros(const NeuralHyperparameters& hp = {});
    static NeuralModel random(std::uint64_t seed, const NeuralHyperparameters& hp = {}, float scale = 0.2f);

private:
    std::vector<Layer> layers_;
    std::vector<Category> logit_order_;
};

/// Weights container: magic "PSDW1", little-endian. See docs/formats.md.
std::vector<std::uint8_t> serialize_model(const NeuralModel& model);
NeuralModel deserialize_model(const std::vector<std::uint8_t>& bytes);
void save_model(const NeuralModel& model, const std::string& path);
NeuralModel load_model(const std::string& path);

/// normalize -> resample -> delta_encode -> forward pass.
class NeuralRecognizer final : public Recognizer {
public:
    explicit NeuralRecognizer(NeuralModel model, double spacing = kDefaultSpacing);

    ElementPrediction classify(const StrokeSequence& sketch) const override;
    std::string_view backend() const override { return "neural"; }

    const NeuralModel& model() const { return model_; }

private:
    NeuralModel model_;
    double spacing_;
};

}  // namespace sketchsearch
