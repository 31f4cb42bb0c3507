#include "oclab/learner.hpp"

#include <cmath>

#include "oclab/rng.hpp"

namespace oclab {

namespace {
constexpr double kMaskFill = -1e30;
constexpr double kInitStd = 0.02;
}  // namespace

std::vector<int> ByteTokenizer::encode(std::string_view text) {
    std::vector<int> ids;
    ids.reserve(text.size());
    for (unsigned char c : text) ids.push_back(static_cast<int>(c));
    return ids;
}

std::string ByteTokenizer::decode(const std::vector<int>& ids) {
    std::string out;
    out.reserve(ids.size());
    for (int id : ids) {
        if (id < 0 || id >= kVocab) throw InputError("decode: id out of range");
        if (id < 256) out.push_back(static_cast<char>(id));
    }
    return out;
}

void TransformerConfig::validate() const {
    if (d_model <= 0 || n_layers <= 0 || n_heads <= 0 || d_ff <= 0 || max_seq <= 0)
        throw ConfigError("TransformerConfig: dimensions must be positive");
    if (d_model % n_heads != 0)
        throw ConfigError("TransformerConfig: d_model must be divisible by n_heads");
}

std::vector<const Tensor*> LMParams::param_list() const {
    std::vector<const Tensor*> out = {&tok_emb, &pos_emb};
    for (const Block& b : blocks) {
        out.push_back(&b.ln1_g);
        out.push_back(&b.ln1_b);
        out.push_back(&b.wq);
        out.push_back(&b.bq);
        out.push_back(&b.wk);
        out.push_back(&b.bk);
        out.push_back(&b.wv);
        out.push_back(&b.bv);
        out.push_back(&b.wo);
        out.push_back(&b.bo);
        out.push_back(&b.ln2_g);
        out.push_back(&b.ln2_b);
        out.push_back(&b.w1);
        out.push_back(&b.b1);
        out.push_back(&b.w2);
        out.push_back(&b.b2);
    }
    out.push_back(&lnf_g);
    out.push_back(&lnf_b);
    return out;
}

std::vector<Tensor*> LMParams::param_list() {
    std::vector<Tensor*> out;
    for (const Tensor* t : static_cast<const LMParams*>(this)->param_list())
        out.push_back(const_cast<Tensor*>(t));
    return out;
}

int64_t LMParams::param_count() const {
    int64_t n = 0;
    for (const Tensor* t : param_list()) n += static_cast<int64_t>(t->data.size());
    return n;
}

int64_t LMParams::param_count(const TransformerConfig& cfg) {
    int64_t d = cfg.d_model, f = cfg.d_ff, L = cfg.n_layers, S = cfg.max_seq;
    int64_t per_block = 4 * d * d + 2 * d * f + 9 * d + f;
    return ByteTokenizer::kVocab * d + S * d + L * per_block + 2 * d;
}

namespace {

Tensor gauss_tensor(int r, int c, Rng& rng, double std) {
    Tensor t(r, c);
    for (auto& v : t.data) v = std * rng.next_gauss();
    return t;
}

}  // namespace

LMParams init_learner(const TransformerConfig& cfg) {
    cfg.validate();
    LMParams p;
    p.config = cfg;
    int d = cfg.d_model, f = cfg.d_ff;

    Rng r_tok = Rng::derive(cfg.seed, "tok_emb");
    Rng r_pos = Rng::derive(cfg.seed, "pos_emb");
    p.tok_emb = gauss_tensor(ByteTokenizer::kVocab, d, r_tok, kInitStd);
    p.pos_emb = gauss_tensor(cfg.max_seq, d, r_pos, kInitStd);

    p.blocks.resize(cfg.n_layers);
    for (int l = 0; l < cfg.n_layers; ++l) {
        LMParams::Block& b = p.blocks[l];
        Rng rw = Rng::derive(cfg.seed, "block", static_cast<uint64_t>(l));
        b.ln1_g = Tensor::full(1, d, 1.0);
        b.ln1_b = Tensor::zeros(1, d);
        b.wq = gauss_tensor(d, d, rw, kInitStd);
        b.bq = Tensor::zeros(1, d);
        b.wk = gauss_tensor(d, d, rw, kInitStd);
        b.bk = Tensor::zeros(1, d);
        b.wv = gauss_tensor(d, d, rw, kInitStd);
        b.bv = Tensor::zeros(1, d);
        b.wo = gauss_tensor(d, d, rw, kInitStd);
        b.bo = Tensor::zeros(1, d);
        b.ln2_g = Tensor::full(1, d, 1.0);
        b.ln2_b = Tensor::zeros(1, d);
        b.w1 = gauss_tensor(d, f, rw, kInitStd);
        b.b1 = Tensor::zeros(1, f);
        b.w2 = gauss_tensor(f, d, rw, kInitStd);
        b.b2 = Tensor::zeros(1, d);
    }
    p.lnf_g = Tensor::full(1, d, 1.0);
    p.lnf_b = Tensor::zeros(1, d);
    return p;
}

TapedModel::TapedModel(Tape& tape, const LMParams& params) : tape_(tape), params_(params) {
    for (const Tensor* t : params_.param_list()) leaves_.push_back(tape_.leaf(*t));
}

namespace {

// Leaf index layout mirrors LMParams::param_list().
struct LeafIndex {
    int tok, pos;
    struct B {
        int ln1_g, ln1_b, wq, bq, wk, bk, wv, bv, wo, bo, ln2_g, ln2_b, w1, b1, w2, b2;
    };
    std::vector<B> blocks;
    int lnf_g, lnf_b;
};

LeafIndex leaf_index(const std::vector<int>& ids, int n_layers) {
    LeafIndex ix;
    size_t k = 0;
    ix.tok = ids[k++];
    ix.pos = ids[k++];
    ix.blocks.resize(n_layers);
    for (int l = 0; l < n_layers; ++l) {
        auto& b = ix.blocks[l];
        b.ln1_g = ids[k++];
        b.ln1_b = ids[k++];
        b.wq = ids[k++];
        b.bq = ids[k++];
        b.wk = ids[k++];
        b.bk = ids[k++];
        b.wv = ids[k++];
        b.bv = ids[k++];
        b.wo = ids[k++];
        b.bo = ids[k++];
        b.ln2_g = ids[k++];
        b.ln2_b = ids[k++];
        b.w1 = ids[k++];
        b.b1 = ids[k++];
        b.w2 = ids[k++];
        b.b2 = ids[k++];
    }
    ix.lnf_g = ids[k++];
    ix.lnf_b = ids[k++];
    return ix;
}

std::vector<uint8_t> causal_mask(int t) {
    std::vector<uint8_t> m(static_cast<size_t>(t) * t, 0);
    for (int r = 0; r < t; ++r)
        for (int c = r + 1; c < t; ++c) m[static_cast<size_t>(r) * t + c] = 1;
    return m;
}

}  // namespace

int TapedModel::forward_logits(const std::vector<int>& input) {
    const TransformerConfig& cfg = params_.config;
    int t = static_cast<int>(input.size());
    if (t > cfg.max_seq)
        throw LengthError("sequence of " + std::to_string(t) + " exceeds max_seq " +
                          std::to_string(cfg.max_seq));
    LeafIndex ix = leaf_index(leaves_, cfg.n_layers);

    int h = tape_.add(tape_.embed_lookup(ix.tok, input), tape_.slice_rows(ix.pos, 0, t));
    std::vector<uint8_t> mask = causal_mask(t);
    int dh = cfg.head_dim();
    double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

    for (int l = 0; l < cfg.n_layers; ++l) {
        const auto& b = ix.blocks[l];
        int x = tape_.layernorm_rows(h, b.ln1_g, b.ln1_b);
        int q = tape_.add_rowvec(tape_.matmul(x, b.wq), b.bq);
        int k = tape_.add_rowvec(tape_.matmul(x, b.wk), b.bk);
        int v = tape_.add_rowvec(tape_.matmul(x, b.wv), b.bv);
        int merged = -1;
        for (int hd = 0; hd < cfg.n_heads; ++hd) {
            int qh = tape_.slice_cols(q, hd * dh, (hd + 1) * dh);
            int kh = tape_.slice_cols(k, hd * dh, (hd + 1) * dh);
            int vh = tape_.slice_cols(v, hd * dh, (hd + 1) * dh);
            int scores = tape_.scale(tape_.matmul(qh, kh, false, true), inv_sqrt_dh);
            int masked = tape_.masked_fill(scores, mask, kMaskFill);
            int attn = tape_.softmax_rows(masked);
            int ctx = tape_.matmul(attn, vh);
            merged = (hd == 0) ? ctx : tape_.concat_cols(merged, ctx);
        }
        int att_out = tape_.add_rowvec(tape_.matmul(merged, b.wo), b.bo);
        h = tape_.add(h, att_out);
        int y = tape_.layernorm_rows(h, b.ln2_g, b.ln2_b);
        int u = tape_.gelu(tape_.add_rowvec(tape_.matmul(y, b.w1), b.b1));
        int mlp = tape_.add_rowvec(tape_.matmul(u, b.w2), b.b2);
        h = tape_.add(h, mlp);
    }
    int hf = tape_.layernorm_rows(h, ix.lnf_g, ix.lnf_b);
    return tape_.matmul(hf, ix.tok, false, true);  // tied output projection
}

int TapedModel::loss(const std::vector<int>& prompt, const std::vector<int>& target) {
    if (target.empty()) throw InputError("loss: empty target");
    for (int id : prompt)
        if (id < 0 || id >= ByteTokenizer::kVocab) throw InputError("loss: bad prompt id");
    for (int id : target)
        if (id < 0 || id >= ByteTokenizer::kVocab) throw InputError("loss: bad target id");

    std::vector<int> full;
    full.reserve(1 + prompt.size() + target.size());
    full.push_back(ByteTokenizer::kBos);
    full.insert(full.end(), prompt.begin(), prompt.end());
    full.insert(full.end(), target.begin(), target.end());

    std::vector<int> input(full.begin(), full.end() - 1);
    int logits = forward_logits(input);

    std::vector<std::pair<int, int>> targets;
    int p = static_cast<int>(prompt.size());
    for (size_t r = p; r + 1 < full.size(); ++r)
        targets.emplace_back(static_cast<int>(r), full[r + 1]);
    return tape_.cross_entropy_mean(logits, targets);
}

int train_forward(const LMParams& params, const std::vector<int>& prompt,
                  const std::vector<int>& target, Tape& tape) {
    TapedModel m(tape, params);
    return m.loss(prompt, target);
}

Tensor logits_matrix(const LMParams& params, const std::vector<int>& input) {
    Tape tape;
    TapedModel m(tape, params);
    return tape.value(m.forward_logits(input));
}

std::vector<double> token_logprobs(const LMParams& params, const std::vector<int>& prompt,
                                   const std::vector<int>& target) {
    if (target.empty()) return {};
    std::vector<int> full;
    full.reserve(1 + prompt.size() + target.size());
    full.push_back(ByteTokenizer::kBos);
    full.insert(full.end(), prompt.begin(), prompt.end());
    full.insert(full.end(), target.begin(), target.end());
    std::vector<int> input(full.begin(), full.end() - 1);

    Tensor logits = logits_matrix(params, input);
    std::vector<double> out;
    out.reserve(target.size());
    int p = static_cast<int>(prompt.size());
    for (size_t r = p; r + 1 < full.size(); ++r) {
        const double* row = &logits.data[r * static_cast<size_t>(logits.cols)];
        double mx = row[0];
        for (int c = 1; c < logits.cols; ++c) mx = std::max(mx, row[c]);
        double sum = 0.0;
        for (int c = 0; c < logits.cols; ++c) sum += std::exp(row[c] - mx);
        out.push_back(row[full[r + 1]] - mx - std::log(sum));
    }
    return out;
}

double nll(const LMParams& params, const std::vector<int>& prompt, const std::vector<int>& target) {
    if (target.empty()) throw InputError("nll: empty target");
    std::vector<double> lps = token_logprobs(params, prompt, target);
    double s = 0.0;
    for (double v : lps) s += v;
    return -s / static_cast<double>(lps.size());
}

double seq_logprob(const LMParams& params, const std::vector<int>& context,
                   const std::vector<int>& candidate) {
    if (candidate.empty()) return 0.0;
    std::vector<double> lps = token_logprobs(params, context, candidate);
    double s = 0.0;
    for (double v : lps) s += v;
    return s;
}

double target_confidence(const LMParams& params, const std::vector<int>& prompt,
                         const std::vector<int>& target) {
    return std::exp(-nll(params, prompt, target));
}

double nll(const LMParams& params, std::string_view prompt, std::string_view target) {
    return nll(params, ByteTokenizer::encode(prompt), ByteTokenizer::encode(target));
}

double seq_logprob(const LMParams& params, std::string_view context, std::string_view candidate) {
    return seq_logprob(params, ByteTokenizer::encode(context), ByteTokenizer::encode(candidate));
}

double target_confidence(const LMParams& params, std::string_view prompt, std::string_view target) {
    return target_confidence(params, ByteTokenizer::encode(prompt), ByteTokenizer::encode(target));
}

}  // namespace oclab
