#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oclab/tensor.hpp"

namespace oclab {

// Byte-level tokenizer: ids 0..255 are raw bytes, 256/257 are BOS/EOS.
// Encoding raw text never produces BOS/EOS.
struct ByteTokenizer {
    static constexpr int kBos = 256;
    static constexpr int kEos = 257;
    static constexpr int kVocab = 258;

    static std::vector<int> encode(std::string_view text);
    static std::string decode(const std::vector<int>& ids);  // drops BOS/EOS
};

struct TransformerConfig {
    int d_model = 64;
    int n_layers = 2;
    int n_heads = 4;
    int d_ff = 256;
    int max_seq = 512;
    uint64_t seed = 42;

    void validate() const;
    int head_dim() const { return d_model / n_heads; }
};

// Decoder-only pre-norm transformer with learned positional embeddings and
// tied input/output token embeddings.
struct LMParams {
    struct Block {
        Tensor ln1_g, ln1_b;
        Tensor wq, bq, wk, bk, wv, bv, wo, bo;
        Tensor ln2_g, ln2_b;
        Tensor w1, b1, w2, b2;
    };

    TransformerConfig config;
    Tensor tok_emb;  // [258, d_model], also the output projection
    Tensor pos_emb;  // [max_seq, d_model]
    std::vector<Block> blocks;
    Tensor lnf_g, lnf_b;

    // Canonical flattening order; checkpoints and Adam state rely on it.
    std::vector<const Tensor*> param_list() const;
    std::vector<Tensor*> param_list();
    int64_t param_count() const;

    static int64_t param_count(const TransformerConfig& cfg);
};

// Fresh parameters: weights N(0, 0.02^2), biases zero, layernorm gains one,
// all drawn from streams derived from cfg.seed.
LMParams init_learner(const TransformerConfig& cfg);

// Per-update forward context: registers every parameter as a tape leaf once,
// then builds one loss subgraph per example so gradients accumulate across a
// batch on the shared leaves.
class TapedModel {
  public:
    TapedModel(Tape& tape, const LMParams& params);

    // Mean NLL per target token of `target` given `prompt`; returns loss node.
    int loss(const std::vector<int>& prompt, const std::vector<int>& target);
    const std::vector<int>& leaf_ids() const { return leaves_; }

  private:
    Tape& tape_;
    const LMParams& params_;
    std::vector<int> leaves_;

    int forward_logits(const std::vector<int>& input);
    friend Tensor logits_matrix(const LMParams&, const std::vector<int>&);
};

// Single-example training loss on an external tape (fresh leaf set).
int train_forward(const LMParams& params, const std::vector<int>& prompt,
                  const std::vector<int>& target, Tape& tape);

// --- forward-only scoring (no gradients kept) ---

// log p(target[i] | prompt, target[<i]) per target token.
std::vector<double> token_logprobs(const LMParams& params, const std::vector<int>& prompt,
                                   const std::vector<int>& target);

// Mean negative log-likelihood per target token. Target must be non-empty.
double nll(const LMParams& params, const std::vector<int>& prompt, const std::vector<int>& target);

// Sum of token log-probs; 0.0 for an empty candidate.
double seq_logprob(const LMParams& params, const std::vector<int>& context,
                   const std::vector<int>& candidate);

// Geometric mean of token probabilities: exp(-nll).
double target_confidence(const LMParams& params, const std::vector<int>& prompt,
                         const std::vector<int>& target);

// String convenience overloads (byte-encode, then score).
double nll(const LMParams& params, std::string_view prompt, std::string_view target);
double seq_logprob(const LMParams& params, std::string_view context, std::string_view candidate);
double target_confidence(const LMParams& params, std::string_view prompt, std::string_view target);

// Full next-token logit matrix for an explicit input id sequence (tests use
// this for causality checks).
Tensor logits_matrix(const LMParams& params, const std::vector<int>& input);

}  // namespace oclab
