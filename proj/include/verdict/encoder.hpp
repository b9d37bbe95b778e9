#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "verdict/matrix.hpp"
#include "verdict/rng.hpp"
#include "verdict/tokenizer.hpp"

namespace verdict {

struct ModelConfig {
    int vocab_size = 0;
    int max_len = 64;
    int d_model = 64;
    int n_heads = 4;
    int n_layers = 2;
    int d_ff = 128;
    int n_classes = 2;
    double dropout_rate = 0.1;

    void validate() const;  // throws ConfigError
};

// One encoder block's parameters. Attention projections are square with
// per-output biases; both layer norms carry gain and bias.
struct LayerParams {
    Matrix wq, bq, wk, bk, wv, bv, wo, bo;
    Matrix ln1_g, ln1_b, ln2_g, ln2_b;
    Matrix w1, b1, w2, b2;
};

struct ParamSet {
    Matrix token_embeddings;     // vocab_size x d_model
    Matrix position_embeddings;  // max_len x d_model
    std::vector<LayerParams> layers;
    Matrix head_w;  // d_model x n_classes
    Matrix head_b;  // 1 x n_classes

    static ParamSet zeros_like(const ModelConfig& cfg);
};

// Canonical tensor traversal order; used by the optimizer, the checkpoint
// writer and the gradient check so they all agree on layout.
std::vector<Matrix*> tensor_list(ParamSet& p);
std::vector<const Matrix*> tensor_list(const ParamSet& p);
std::vector<std::string> tensor_names(const ModelConfig& cfg);

struct Prediction {
    std::vector<double> probabilities;
    int label_index = 0;  // argmax, ties to the lowest index
};

// Activations retained for the backward pass. Shapes cover only the first
// true_length positions: PAD keys get zero attention weight and nothing else
// couples positions, so the padded region can never reach the CLS output.
struct LayerTape {
    Matrix x_in;                     // L x d
    Matrix q, k, v;                  // L x d
    std::vector<Matrix> attn;        // per head, L x L softmax rows
    Matrix ctx;                      // L x d, heads concatenated
    Matrix attn_drop;                // L x d dropout scales (empty if inactive)
    Matrix ln1_xhat;                 // L x d
    std::vector<double> ln1_inv_std; // per position
    Matrix y;                        // L x d, first sublayer output
    Matrix ffn_pre;                  // L x d_ff
    Matrix ffn_act;                  // L x d_ff
    Matrix ffn_drop;                 // L x d
    Matrix ln2_xhat;                 // L x d
    std::vector<double> ln2_inv_std;
};

struct ActivationTape {
    std::vector<std::int32_t> ids;  // first true_length token ids
    Matrix emb_drop;                // L x d dropout scales (empty if inactive)
    std::vector<LayerTape> layers;
    std::vector<double> pooled;  // CLS hidden state
    std::vector<double> probs;
};

struct ClassifierModel {
    ModelConfig config;
    std::int64_t seed = 0;
    ParamSet params;
    // Dropout stream; advanced by training-mode forwards, reset by init/load.
    Rng dropout_rng{0};
};

// Deterministic initialization: weight matrices uniform in
// +-sqrt(6/(fan_in+fan_out)), embeddings uniform with std 0.02, gains 1,
// biases 0.
ClassifierModel init_model(const ModelConfig& config, std::int64_t seed);

// train_mode enables dropout (driven by the model's PRNG stream) and is the
// only thing that mutates the model. Throws InputError on id/shape mismatch.
Prediction forward(ClassifierModel& model, const TokenSequence& seq, bool train_mode,
                   ActivationTape* tape = nullptr);

// Inference-mode forward; never touches the dropout stream.
Prediction predict(const ClassifierModel& model, const TokenSequence& seq);

// Mean cross-entropy over the batch plus exact analytic gradients for every
// parameter. Dropout follows the model's config, as in forward(train_mode).
double loss_and_grad(ClassifierModel& model,
                     const std::vector<std::pair<TokenSequence, int>>& batch,
                     ParamSet* grads);

// Checkpoint container: version byte, config header, seed, then raw 64-bit
// little-endian tensors in tensor_list order.
void save_checkpoint(const ClassifierModel& model, const std::string& path);
ClassifierModel load_checkpoint(const std::string& path);

}  // namespace verdict
