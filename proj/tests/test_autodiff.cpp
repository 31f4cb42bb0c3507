#include <doctest.h>

#include "oclab/adam.hpp"
#include "oclab/rng.hpp"
#include "oclab/tensor.hpp"

#include <cmath>
#include <functional>
#include <vector>

using namespace oclab;

namespace {

Tensor gauss(int r, int c, Rng& rng, double scale = 1.0) {
    Tensor t(r, c);
    for (auto& x : t.data) x = rng.next_gauss() * scale;
    return t;
}

// Sum of all entries as a tape scalar: ones_row * m * ones_col.
int tape_sum(Tape& t, int m) {
    const Tensor& v = t.value(m);
    int ones_r = t.leaf(Tensor::full(1, v.rows, 1.0));
    int ones_c = t.leaf(Tensor::full(v.cols, 1, 1.0));
    return t.matmul(t.matmul(ones_r, m), ones_c);
}

// Builder registers params (in order) as the first leaves and returns loss id.
using Builder = std::function<int(Tape&, const std::vector<Tensor>&)>;

double eval_loss(const Builder& build, const std::vector<Tensor>& params) {
    Tape t;
    int loss = build(t, params);
    return t.value(loss).data[0];
}

// Central finite differences against backward() for every param entry.
void check_grads(const Builder& build, const std::vector<Tensor>& params, double tol = 1e-6) {
    Tape t;
    int loss = build(t, params);
    REQUIRE(t.value(loss).rows == 1);
    REQUIRE(t.value(loss).cols == 1);
    auto grads = t.backward(loss);

    const double h = 1e-5;
    for (size_t p = 0; p < params.size(); ++p) {
        for (size_t i = 0; i < params[p].data.size(); ++i) {
            auto pp = params;
            pp[p].data[i] += h;
            double up = eval_loss(build, pp);
            pp[p].data[i] -= 2 * h;
            double dn = eval_loss(build, pp);
            double fd = (up - dn) / (2 * h);
            double an = grads[p].data.empty() ? 0.0 : grads[p].data[i];
            double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-3});
            CAPTURE(p);
            CAPTURE(i);
            CAPTURE(fd);
            CAPTURE(an);
            CHECK(rel < tol);
        }
    }
}

Tensor naive_gemm(const Tensor& a, bool ta, const Tensor& b, bool tb) {
    int m = ta ? a.cols : a.rows;
    int k = ta ? a.rows : a.cols;
    int n = tb ? b.rows : b.cols;
    Tensor c(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int l = 0; l < k; ++l) {
                double av = ta ? a.at(l, i) : a.at(i, l);
                double bv = tb ? b.at(j, l) : b.at(l, j);
                s += av * bv;
            }
            c.at(i, j) = s;
        }
    return c;
}

}  // namespace

TEST_CASE("gemm matches naive reference for all transpose combinations") {
    Rng rng(5);
    for (int ta = 0; ta < 2; ++ta)
        for (int tb = 0; tb < 2; ++tb) {
            Tensor a = ta ? gauss(7, 3, rng) : gauss(3, 7, rng);
            Tensor b = tb ? gauss(4, 7, rng) : gauss(7, 4, rng);
            Tensor got = gemm(a, ta, b, tb);
            Tensor want = naive_gemm(a, ta, b, tb);
            REQUIRE(got.same_shape(want));
            for (size_t i = 0; i < got.size(); ++i)
                CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
        }
}

TEST_CASE("scalar gelu matches the erf definition and its derivative matches fd") {
    for (double x : {-4.0, -1.5, -0.3, 0.0, 1e-8, 0.7, 2.0, 5.0}) {
        double want = 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
        CHECK(std::abs(gelu_scalar(x) - want) <= 1e-12);

        double h = 1e-6;
        double fd = (gelu_scalar(x + h) - gelu_scalar(x - h)) / (2 * h);
        double an = gelu_grad_scalar(x);
        CHECK(std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-3}) < 1e-6);
    }
}

TEST_CASE("mlp gradient check: matmul, add_rowvec, gelu, layernorm, cross entropy") {
    Rng rng(42);
    std::vector<Tensor> params = {
        gauss(4, 8, rng),          // x
        gauss(8, 16, rng, 0.3),    // w1
        gauss(1, 16, rng, 0.1),    // b1
        Tensor::full(1, 16, 1.0),  // ln gain
        Tensor::full(1, 16, 0.0),  // ln bias
        gauss(16, 10, rng, 0.3),   // w2
        gauss(1, 10, rng, 0.1),    // b2
    };
    std::vector<std::pair<int, int>> targets = {{0, 3}, {1, 9}, {2, 0}, {3, 5}};

    Builder build = [&](Tape& t, const std::vector<Tensor>& ps) {
        std::vector<int> ids;
        for (const auto& p : ps) ids.push_back(t.leaf(p));
        int h = t.matmul(ids[0], ids[1]);
        h = t.add_rowvec(h, ids[2]);
        h = t.gelu(h);
        h = t.layernorm_rows(h, ids[3], ids[4]);
        int logits = t.add_rowvec(t.matmul(h, ids[5]), ids[6]);
        return t.cross_entropy_mean(logits, targets);
    };
    check_grads(build, params);
}

TEST_CASE("structural op gradient check: mul, sub, add, scale, masked_fill, softmax, slices") {
    Rng rng(7);
    std::vector<Tensor> params = {gauss(4, 6, rng), gauss(4, 6, rng), gauss(4, 6, rng),
                                  gauss(4, 6, rng)};
    std::vector<uint8_t> mask(24, 0);
    mask[1] = mask[7] = mask[13] = mask[22] = 1;

    Builder build = [&](Tape& t, const std::vector<Tensor>& ps) {
        std::vector<int> ids;
        for (const auto& p : ps) ids.push_back(t.leaf(p));
        int y = t.mul(ids[0], ids[1]);
        y = t.sub(y, ids[2]);
        y = t.scale(y, 1.7);
        y = t.masked_fill(y, mask, -50.0);
        y = t.softmax_rows(y);
        int top = t.slice_rows(y, 0, 2);
        int bot = t.slice_rows(y, 2, 4);
        y = t.concat_rows(bot, top);
        int left = t.slice_cols(y, 0, 3);
        int right = t.slice_cols(y, 3, 6);
        y = t.concat_cols(right, left);
        y = t.add(y, ids[3]);
        return tape_sum(t, y);
    };
    check_grads(build, params);
}

TEST_CASE("matmul gradient check under every transpose combination") {
    Rng rng(11);
    for (int ta = 0; ta < 2; ++ta)
        for (int tb = 0; tb < 2; ++tb) {
            std::vector<Tensor> params = {ta ? gauss(5, 3, rng) : gauss(3, 5, rng),
                                          tb ? gauss(4, 5, rng) : gauss(5, 4, rng)};
            Builder build = [&](Tape& t, const std::vector<Tensor>& ps) {
                int a = t.leaf(ps[0]);
                int b = t.leaf(ps[1]);
                return tape_sum(t, t.matmul(a, b, ta != 0, tb != 0));
            };
            check_grads(build, params);
        }
}

TEST_CASE("embed_lookup gradients accumulate over repeats; untouched rows get exact zero") {
    Rng rng(3);
    std::vector<Tensor> params = {gauss(20, 6, rng)};
    std::vector<int> ids = {3, 7, 3, 19};

    Builder build = [&](Tape& t, const std::vector<Tensor>& ps) {
        int table = t.leaf(ps[0]);
        int y = t.embed_lookup(table, ids);
        y = t.gelu(y);
        return tape_sum(t, y);
    };
    check_grads(build, params);

    Tape t;
    int loss = build(t, params);
    auto grads = t.backward(loss);
    for (int r = 0; r < 20; ++r) {
        bool used = (r == 3 || r == 7 || r == 19);
        bool nonzero = false;
        for (int c = 0; c < 6; ++c) nonzero = nonzero || (grads[0].at(r, c) != 0.0);
        CHECK(nonzero == used);
    }
}

TEST_CASE("softmax rows sum to one and tolerate large negative fills") {
    Tape t;
    Tensor x(2, 4);
    x.data = {1.0, 2.0, 3.0, 4.0, 100.0, 100.0, 100.0, 100.0};
    std::vector<uint8_t> mask = {0, 1, 0, 0, 0, 0, 0, 1};
    int y = t.softmax_rows(t.masked_fill(t.leaf(x), mask, -1e30));
    const Tensor& v = t.value(y);
    for (int r = 0; r < 2; ++r) {
        double s = 0;
        for (int c = 0; c < 4; ++c) s += v.at(r, c);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(v.at(0, 1) == 0.0);
    CHECK(v.at(1, 3) == 0.0);
    CHECK(v.at(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cross_entropy_mean matches a manual logsumexp computation") {
    Tape t;
    Tensor logits(2, 3);
    logits.data = {0.2, -1.1, 0.7, 3.0, 0.0, -2.0};
    int l = t.leaf(logits);
    int loss = t.cross_entropy_mean(l, {{0, 2}, {1, 1}});

    auto nll_row = [&](int r, int k) {
        double mx = -1e300;
        for (int c = 0; c < 3; ++c) mx = std::max(mx, logits.at(r, c));
        double s = 0;
        for (int c = 0; c < 3; ++c) s += std::exp(logits.at(r, c) - mx);
        return (mx + std::log(s)) - logits.at(r, k);
    };
    double want = 0.5 * (nll_row(0, 2) + nll_row(1, 1));
    CHECK(std::abs(t.value(loss).data[0] - want) <= 1e-12);
}

TEST_CASE("uniform logits give cross entropy ln(V)") {
    Tape t;
    int l = t.leaf(Tensor::full(3, 17, 0.42));
    int loss = t.cross_entropy_mean(l, {{0, 0}, {1, 8}, {2, 16}});
    CHECK(t.value(loss).data[0] == doctest::Approx(std::log(17.0)).epsilon(1e-14));
}

TEST_CASE("adjoints accumulate when a node feeds multiple consumers") {
    Tape t;
    int a = t.leaf(Tensor::full(2, 2, 1.5));
    int y = t.add(a, a);
    int loss = tape_sum(t, y);
    auto grads = t.backward(loss);
    for (double g : grads[a].data) CHECK(g == 2.0);
}

TEST_CASE("adam follows the bias-corrected reference trace") {
    std::vector<double> p = {1.0};
    AdamState st(1, 0.1);
    double m = 0, v = 0, x = 1.0;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    std::vector<double> gs = {0.5, -0.25, 0.125};
    for (int k = 0; k < 3; ++k) {
        adam_apply(p, {gs[k]}, st);
        m = b1 * m + (1 - b1) * gs[k];
        v = b2 * v + (1 - b2) * gs[k] * gs[k];
        double mh = m / (1 - std::pow(b1, k + 1));
        double vh = v / (1 - std::pow(b2, k + 1));
        x -= 0.1 * mh / (std::sqrt(vh) + eps);
        CHECK(std::abs(p[0] - x) <= 1e-15);
    }
    CHECK(st.step == 3);

    std::vector<double> bad = {std::nan("")};
    CHECK_THROWS_AS(adam_apply(p, bad, st), NumericError);
    std::vector<double> wrong_size = {1.0, 2.0};
    CHECK_THROWS_AS(adam_apply(p, wrong_size, st), ShapeError);
}

TEST_CASE("flatten and unflatten round-trip bitwise") {
    Rng rng(23);
    Tensor a = gauss(3, 4, rng), b = gauss(1, 1, rng), c = gauss(1, 7, rng);
    auto flat = flatten_params({&a, &b, &c});
    REQUIRE(flat.size() == 12 + 1 + 7);

    Tensor a2(3, 4), b2(1, 1), c2(1, 7);
    unflatten_params(flat, {&a2, &b2, &c2});
    CHECK(a2.data == a.data);
    CHECK(b2.data == b.data);
    CHECK(c2.data == c.data);

    flat.push_back(0.0);
    CHECK_THROWS_AS(unflatten_params(flat, {&a2, &b2, &c2}), ShapeError);
}

TEST_CASE("shape and input errors fire on malformed graphs") {
    Tape t;
    int a = t.leaf(Tensor::zeros(2, 3));
    int b = t.leaf(Tensor::zeros(4, 5));
    CHECK_THROWS_AS((void)t.matmul(a, b), ShapeError);
    CHECK_THROWS_AS((void)t.add(a, b), ShapeError);
    CHECK_THROWS_AS((void)t.add_rowvec(a, b), ShapeError);
    CHECK_THROWS_AS((void)t.slice_rows(a, 1, 5), ShapeError);
    CHECK_THROWS_AS((void)t.slice_cols(a, -1, 2), ShapeError);
    CHECK_THROWS_AS((void)t.concat_rows(a, b), ShapeError);
    CHECK_THROWS_AS((void)t.concat_cols(a, b), ShapeError);
    CHECK_THROWS_AS((void)t.masked_fill(a, std::vector<uint8_t>(5, 0), 0.0), ShapeError);
    CHECK_THROWS_AS((void)t.cross_entropy_mean(a, {}), UsageError);
    CHECK_THROWS_AS((void)t.cross_entropy_mean(a, {{2, 0}}), InputError);
    CHECK_THROWS_AS((void)t.embed_lookup(a, {0, 2}), InputError);
    CHECK_THROWS_AS((void)t.scale(a, std::nan("")), NumericError);
    CHECK_THROWS_AS((void)t.value(99), UsageError);
    CHECK_THROWS_AS(t.backward(a), ShapeError);
}

TEST_CASE("each op appends exactly one node") {
    Tape t;
    int a = t.leaf(Tensor::full(2, 2, 1.0));
    CHECK(t.size() == 1);
    int y = t.add(a, a);
    CHECK(t.size() == 2);
    y = t.gelu(y);
    CHECK(t.size() == 3);
    y = t.softmax_rows(y);
    CHECK(t.size() == 4);
    (void)y;
}

TEST_CASE("identical graphs produce bitwise identical losses and gradients") {
    Rng rng(99);
    std::vector<Tensor> params = {gauss(4, 8, rng), gauss(8, 4, rng)};
    Builder build = [&](Tape& t, const std::vector<Tensor>& ps) {
        int a = t.leaf(ps[0]);
        int b = t.leaf(ps[1]);
        int y = t.gelu(t.matmul(a, b));
        return t.cross_entropy_mean(y, {{0, 1}, {3, 2}});
    };
    Tape t1, t2;
    int l1 = build(t1, params);
    int l2 = build(t2, params);
    CHECK(t1.value(l1).data[0] == t2.value(l2).data[0]);
    auto g1 = t1.backward(l1);
    auto g2 = t2.backward(l2);
    REQUIRE(g1.size() == g2.size());
    for (size_t i = 0; i < 2; ++i) CHECK(g1[i].data == g2[i].data);
}
