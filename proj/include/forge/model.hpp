#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "forge/rng.hpp"

namespace forge {

struct ModelConfig {
    int layers = 2;
    int heads = 4;
    int hidden = 128;
    int intermediate = 512;
    int vocab_size = 0;  // includes the pad token
    int seq_len = 512;
    uint64_t seed = 0;
};

// The full-scale reference configuration, recorded for documentation only;
// this artifact never instantiates it.
ModelConfig reference_7b_config();

struct GenerationConfig {
    double temperature = 1.0;
    bool greedy = true;
    int beams = 1;
    int top_k = 50;
    int max_new_tokens = 16;
    std::optional<int> stop_id;
    uint64_t seed = 0;
};

struct LayerParams {
    Eigen::VectorXd ln1_g, ln1_b;
    Eigen::MatrixXd w_qkv;   // hidden x 3*hidden
    Eigen::VectorXd b_qkv;
    Eigen::MatrixXd w_out;   // hidden x hidden
    Eigen::VectorXd b_out;
    Eigen::VectorXd ln2_g, ln2_b;
    Eigen::MatrixXd w_fc;    // hidden x intermediate
    Eigen::VectorXd b_fc;
    Eigen::MatrixXd w_proj;  // intermediate x hidden
    Eigen::VectorXd b_proj;
};

struct ForwardCache;

// Pre-LN decoder-only transformer with learned positional embeddings and an
// untied LM head, in double precision. Forward/backward are exact and
// deterministic; padding is never fed through the network (records are
// cropped to their attention-mask prefix), so losses and gradients cannot
// depend on padding-region ids.
class Model {
public:
    explicit Model(const ModelConfig& cfg);

    const ModelConfig& config() const { return cfg_; }

    // A named view over one parameter tensor and its gradient buffer.
    struct ParamRef {
        std::string name;
        double* value;
        double* grad;
        size_t size;
        bool decay;  // participates in weight decay
    };
    std::vector<ParamRef> param_refs();
    size_t num_params() const;

    // logits (n x vocab) for a sequence of n token ids, n <= seq_len.
    Eigen::MatrixXd forward(std::span<const int> ids, ForwardCache* cache = nullptr) const;

    // Accumulates parameter gradients for the cached forward pass.
    void backward(const ForwardCache& cache, const Eigen::MatrixXd& dlogits);

    void zero_grads();

    Eigen::MatrixXd wte, wpe, w_head;
    Eigen::VectorXd lnf_g, lnf_b;
    std::vector<LayerParams> layers;

    // Gradient buffers, same shapes.
    Eigen::MatrixXd g_wte, g_wpe, g_w_head;
    Eigen::VectorXd g_lnf_g, g_lnf_b;
    std::vector<LayerParams> g_layers;

private:
    ModelConfig cfg_;
};

// Mean token-level cross-entropy over positions with loss_mask = 1 only.
// Positions with mask 0 contribute nothing to the value or the gradient.
double masked_clm_loss(const Eigen::MatrixXd& logits, std::span<const int> targets,
                       std::span<const int> loss_mask);

// d(loss)/d(logits) for the same quantity.
Eigen::MatrixXd masked_clm_loss_grad(const Eigen::MatrixXd& logits,
                                     std::span<const int> targets,
                                     std::span<const int> loss_mask);

// One decode step: temperature scaling, then top-k filtering, then argmax
// (greedy) or seeded sampling. Under greedy the first two stages cannot
// change the argmax, so they are inert by construction.
int select_next(const Eigen::VectorXd& logits, const GenerationConfig& gcfg, Rng& rng);

// Autoregressive decoding; returns the newly generated ids. Stops at
// max_new_tokens, at stop_id, or at the model's sequence length.
std::vector<int> generate(const Model& model, std::span<const int> prompt_ids,
                          const GenerationConfig& gcfg);

void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace forge
