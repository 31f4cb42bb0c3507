#include <doctest.h>

#include "oclab/checkpoint.hpp"
#include "oclab/learner.hpp"
#include "oclab/rng.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace oclab;

namespace {

TransformerConfig tiny_config(uint64_t seed = 42) {
    TransformerConfig cfg;
    cfg.d_model = 16;
    cfg.n_layers = 2;
    cfg.n_heads = 2;
    cfg.d_ff = 32;
    cfg.max_seq = 48;
    cfg.seed = seed;
    return cfg;
}

std::vector<int> bytes(std::string_view s) { return ByteTokenizer::encode(s); }

}  // namespace

TEST_CASE("tokenizer maps bytes to ids and round-trips") {
    auto ids = bytes("ab");
    REQUIRE(ids.size() == 2);
    CHECK(ids[0] == 97);
    CHECK(ids[1] == 98);

    std::string all;
    for (int b = 0; b < 256; ++b) all.push_back(static_cast<char>(b));
    auto enc = ByteTokenizer::encode(all);
    REQUIRE(enc.size() == 256);
    for (int b = 0; b < 256; ++b) {
        CHECK(enc[b] == b);  // raw text never yields BOS/EOS
    }
    CHECK(ByteTokenizer::decode(enc) == all);

    std::vector<int> with_specials = {ByteTokenizer::kBos, 104, 105, ByteTokenizer::kEos};
    CHECK(ByteTokenizer::decode(with_specials) == "hi");
    CHECK_THROWS_AS((void)ByteTokenizer::decode({258}), InputError);
}

TEST_CASE("parameter count matches the closed form") {
    TransformerConfig cfg;  // defaults
    LMParams p = init_learner(cfg);

    // independent component-by-component count for the default config
    const int64_t d = 64, L = 2, f = 256, V = 258, S = 512;
    int64_t per_layer = 2 * d            // ln1 gain+bias
                        + 4 * d * d      // wq wk wv wo
                        + 4 * d          // their biases
                        + 2 * d          // ln2 gain+bias
                        + d * f + f      // w1, b1
                        + f * d + d;     // w2, b2
    int64_t want = V * d + S * d + L * per_layer + 2 * d;
    CHECK(want == 149376);
    CHECK(LMParams::param_count(cfg) == want);
    CHECK(p.param_count() == want);

    int64_t total = 0;
    for (const Tensor* t : p.param_list()) total += static_cast<int64_t>(t->size());
    CHECK(total == want);

    auto cfg2 = tiny_config();
    LMParams p2 = init_learner(cfg2);
    int64_t total2 = 0;
    for (const Tensor* t : p2.param_list()) total2 += static_cast<int64_t>(t->size());
    CHECK(p2.param_count() == total2);
    CHECK(LMParams::param_count(cfg2) == total2);
}

TEST_CASE("initialization is seed-deterministic with zero biases and unit gains") {
    auto cfg = tiny_config(7);
    LMParams a = init_learner(cfg);
    LMParams b = init_learner(cfg);
    auto la = a.param_list();
    auto lb = b.param_list();
    REQUIRE(la.size() == lb.size());
    for (size_t i = 0; i < la.size(); ++i) CHECK(la[i]->data == lb[i]->data);

    cfg.seed = 8;
    LMParams c = init_learner(cfg);
    CHECK(a.tok_emb.data != c.tok_emb.data);

    for (const auto& blk : a.blocks) {
        for (double v : blk.ln1_g.data) CHECK(v == 1.0);
        for (double v : blk.ln2_g.data) CHECK(v == 1.0);
        for (double v : blk.bq.data) CHECK(v == 0.0);
        for (double v : blk.b1.data) CHECK(v == 0.0);
    }
    for (double v : a.lnf_g.data) CHECK(v == 1.0);
    for (double v : a.lnf_b.data) CHECK(v == 0.0);

    double s2 = 0;
    for (double v : a.tok_emb.data) s2 += v * v;
    double std_est = std::sqrt(s2 / a.tok_emb.size());
    CHECK(std_est > 0.015);
    CHECK(std_est < 0.025);
}

TEST_CASE("zeroed tied embeddings give exactly uniform predictions") {
    auto cfg = tiny_config();
    LMParams p = init_learner(cfg);
    for (auto& v : p.tok_emb.data) v = 0.0;

    double want = std::log(258.0);
    CHECK(nll(p, "abc", "xyz") == doctest::Approx(want).epsilon(1e-12));
    CHECK(target_confidence(p, "abc", "xyz") == doctest::Approx(1.0 / 258.0).epsilon(1e-12));
}

TEST_CASE("confidence is exp of negative mean nll") {
    auto cfg = tiny_config(3);
    LMParams p = init_learner(cfg);
    for (auto [prompt, target] : {std::pair<const char*, const char*>{"the cat", " sat"},
                                  {"", "alone"},
                                  {"q", "werty"}}) {
        double n = nll(p, prompt, target);
        double c = target_confidence(p, prompt, target);
        CHECK(std::abs(c - std::exp(-n)) <= 1e-12);
    }
}

TEST_CASE("sequence log-probability is minus length times mean nll") {
    auto cfg = tiny_config(5);
    LMParams p = init_learner(cfg);
    std::string ctx = "once upon";
    std::string cand = " a time";
    double lp = seq_logprob(p, ctx, cand);
    double n = nll(p, ctx, cand);
    CHECK(std::abs(lp - (-(double)cand.size() * n)) <= 1e-9);

    CHECK(seq_logprob(p, std::vector<int>{104}, std::vector<int>{}) == 0.0);
}

TEST_CASE("token logprobs agree with the aggregate scores") {
    auto cfg = tiny_config(9);
    LMParams p = init_learner(cfg);
    auto prompt = bytes("north");
    auto target = bytes(" wind");
    auto lps = token_logprobs(p, prompt, target);
    REQUIRE(lps.size() == target.size());
    double sum = 0;
    for (double v : lps) {
        CHECK(v <= 0.0);
        sum += v;
    }
    CHECK(std::abs(sum - seq_logprob(p, prompt, target)) <= 1e-9);
    CHECK(std::abs(-sum / target.size() - nll(p, prompt, target)) <= 1e-12);
}

TEST_CASE("training loss equals the forward-only nll") {
    auto cfg = tiny_config(11);
    LMParams p = init_learner(cfg);
    Rng rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
        std::string prompt, target;
        int pl = 1 + int(rng.below(8));
        int tl = 1 + int(rng.below(8));
        for (int i = 0; i < pl; ++i) prompt.push_back(char('a' + rng.below(26)));
        for (int i = 0; i < tl; ++i) target.push_back(char('a' + rng.below(26)));

        Tape tape;
        int loss = train_forward(p, bytes(prompt), bytes(target), tape);
        double forward_only = nll(p, bytes(prompt), bytes(target));
        CHECK(std::abs(tape.value(loss).data[0] - forward_only) <= 1e-12);
    }
}

TEST_CASE("training loss rejects empty targets and bad ids") {
    auto cfg = tiny_config();
    LMParams p = init_learner(cfg);
    Tape tape;
    CHECK_THROWS_AS((void)train_forward(p, {104}, {}, tape), InputError);
    CHECK_THROWS_AS((void)train_forward(p, {-1}, {104}, tape), InputError);
    CHECK_THROWS_AS((void)train_forward(p, {104}, {300}, tape), InputError);
}

TEST_CASE("sequences past max_seq are rejected") {
    auto cfg = tiny_config();
    cfg.max_seq = 8;
    LMParams p = init_learner(cfg);
    CHECK_THROWS_AS((void)nll(p, "0123456789", "ab"), LengthError);
}

TEST_CASE("logits depend only on the causal prefix") {
    auto cfg = tiny_config(21);
    LMParams p = init_learner(cfg);
    std::vector<int> in1 = {ByteTokenizer::kBos, 10, 20, 30, 40};
    std::vector<int> in2 = {ByteTokenizer::kBos, 10, 20, 30, 99};
    Tensor l1 = logits_matrix(p, in1);
    Tensor l2 = logits_matrix(p, in2);
    REQUIRE(l1.rows == 5);
    REQUIRE(l1.cols == 258);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 258; ++c) CHECK(l1.at(r, c) == l2.at(r, c));

    bool last_differs = false;
    for (int c = 0; c < 258; ++c) last_differs = last_differs || (l1.at(4, c) != l2.at(4, c));
    CHECK(last_differs);
}

TEST_CASE("config validation rejects impossible dimensions") {
    TransformerConfig cfg;
    cfg.d_model = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TransformerConfig{};
    cfg.n_heads = 3;  // 64 % 3 != 0
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("checkpoints round-trip every parameter bitwise") {
    auto cfg = tiny_config(77);
    LMParams p = init_learner(cfg);
    // make the values unmistakably non-fresh
    p.tok_emb.at(0, 0) = 0.123456789;
    p.blocks[1].w2.at(3, 3) = -9.875;

    namespace fs = std::filesystem;
    auto path = (fs::temp_directory_path() / "oclab_ckpt_test.bin").string();
    save_checkpoint(path, p);
    LMParams q = load_checkpoint(path);

    CHECK(q.config.d_model == cfg.d_model);
    CHECK(q.config.n_layers == cfg.n_layers);
    CHECK(q.config.n_heads == cfg.n_heads);
    CHECK(q.config.d_ff == cfg.d_ff);
    CHECK(q.config.max_seq == cfg.max_seq);
    CHECK(q.config.seed == cfg.seed);

    auto lp = p.param_list();
    auto lq = q.param_list();
    REQUIRE(lp.size() == lq.size());
    for (size_t i = 0; i < lp.size(); ++i) CHECK(lp[i]->data == lq[i]->data);

    SUBCASE("corrupted magic is rejected") {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXX", 4);
        f.close();
        CHECK_THROWS_AS((void)load_checkpoint(path), FormatError);
    }
    SUBCASE("truncated payload is rejected") {
        auto sz = fs::file_size(path);
        fs::resize_file(path, sz - 16);
        CHECK_THROWS_AS((void)load_checkpoint(path), FormatError);
    }
    fs::remove(path);
}

TEST_CASE("batched taped model shares leaves across examples") {
    auto cfg = tiny_config(31);
    LMParams p = init_learner(cfg);
    Tape tape;
    TapedModel model(tape, p);
    size_t leaves = tape.size();
    CHECK(leaves == p.param_list().size());

    int l1 = model.loss(bytes("aa"), bytes("bb"));
    int l2 = model.loss(bytes("cc"), bytes("dd"));
    CHECK(l1 != l2);
    // no extra leaves were registered for the second example
    CHECK(model.leaf_ids().size() == leaves);

    // gradients from a combined loss accumulate on the shared parameter leaves
    int total = tape.add(l1, l2);
    auto grads = tape.backward(total);
    bool any = false;
    for (double g : grads[model.leaf_ids()[0]].data) any = any || (g != 0.0);
    CHECK(any);
}
