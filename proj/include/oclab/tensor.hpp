#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oclab/errors.hpp"

namespace oclab {

// Dense row-major f64 matrix. Scalars are 1x1, row vectors 1xN.
// Values are immutable once handed to a Tape.
struct Tensor {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {
        if (r < 0 || c < 0) throw ShapeError("Tensor: negative dimension");
    }

    static Tensor zeros(int r, int c) { return Tensor(r, c); }
    static Tensor full(int r, int c, double v) {
        Tensor t(r, c);
        for (auto& x : t.data) x = v;
        return t;
    }
    static Tensor row(std::vector<double> v) {
        Tensor t;
        t.rows = 1;
        t.cols = static_cast<int>(v.size());
        t.data = std::move(v);
        return t;
    }

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return data.size(); }
    bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
    std::string shape_str() const;
};

enum class Op {
    kLeaf,
    kMatmul,
    kAdd,
    kAddRowVec,
    kMul,
    kSub,
    kScale,
    kSoftmaxRows,
    kLayernormRows,
    kGelu,
    kEmbedLookup,
    kSliceRows,
    kConcatRows,
    kSliceCols,
    kConcatCols,
    kMaskedFill,
    kCrossEntropyMean,
};

struct TapeNode {
    Op op = Op::kLeaf;
    std::vector<int> inputs;
    Tensor out;
    // Op attributes (meaning depends on op).
    double scalar = 0.0;           // kScale factor, kMaskedFill fill value, kLayernormRows eps
    int i0 = 0, i1 = 0;            // kSliceRows/kSliceCols range, kMatmul transpose flags
    std::vector<int> ids;          // kEmbedLookup token ids
    std::vector<uint8_t> mask;     // kMaskedFill positions (1 = filled)
    std::vector<std::pair<int, int>> targets;  // kCrossEntropyMean (row, token)
};

// Reverse-mode tape. Ops append one node each; backward walks the record in
// reverse and accumulates adjoints additively, so shared subexpressions and
// repeated leaf usage come out right.
class Tape {
  public:
    // Registers a value node (parameter or constant input).
    int leaf(Tensor t);

    const Tensor& value(int id) const { return node(id).out; }
    size_t size() const { return nodes_.size(); }

    // effective op(a) [m,k] x op(b) [k,n] -> [m,n]; trans_a/trans_b transpose inputs.
    int matmul(int a, int b, bool trans_a = false, bool trans_b = false);
    int add(int a, int b);
    // a [m,n] + b [1,n] broadcast over rows.
    int add_rowvec(int a, int b);
    int sub(int a, int b);
    int mul(int a, int b);
    int scale(int a, double s);
    int softmax_rows(int a);
    // x [m,d], gain [1,d], bias [1,d].
    int layernorm_rows(int x, int gain, int bias, double eps = 1e-5);
    int gelu(int a);
    // table [V,d], ids in [0,V) -> [len(ids),d].
    int embed_lookup(int table, const std::vector<int>& ids);
    int slice_rows(int a, int from, int to);
    int concat_rows(int a, int b);
    int slice_cols(int a, int from, int to);
    int concat_cols(int a, int b);
    // mask size rows*cols; 1 marks positions replaced by fill value.
    int masked_fill(int a, const std::vector<uint8_t>& mask, double fill);
    // Mean over (row, token) pairs of -log softmax(logits[row])[token]. Scalar out.
    int cross_entropy_mean(int logits, const std::vector<std::pair<int, int>>& targets);

    // Adjoints for every node reachable from loss (others stay empty).
    // loss must be scalar (1x1).
    std::vector<Tensor> backward(int loss) const;

  private:
    std::vector<TapeNode> nodes_;

    const TapeNode& node(int id) const;
    int push(TapeNode n);
    void check_finite(const Tensor& t, const char* where) const;
};

// C = op(A) * op(B) without a tape (plain helper, used by backward too).
Tensor gemm(const Tensor& a, bool trans_a, const Tensor& b, bool trans_b);

// Scalar GELU and its derivative (exact erf form).
double gelu_scalar(double x);
double gelu_grad_scalar(double x);

}  // namespace oclab
