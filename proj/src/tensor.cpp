#include "oclab/tensor.hpp"

#include <cmath>

namespace oclab {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244008443621048490;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;
}  // namespace

std::string Tensor::shape_str() const {
    return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

double gelu_scalar(double x) {
    return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2));
}

double gelu_grad_scalar(double x) {
    return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) + x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

Tensor gemm(const Tensor& a, bool trans_a, const Tensor& b, bool trans_b) {
    int m = trans_a ? a.cols : a.rows;
    int ka = trans_a ? a.rows : a.cols;
    int kb = trans_b ? b.cols : b.rows;
    int n = trans_b ? b.rows : b.cols;
    if (ka != kb)
        throw ShapeError("matmul: inner dimensions differ: " + a.shape_str() + (trans_a ? "^T" : "") +
                         " x " + b.shape_str() + (trans_b ? "^T" : ""));
    Tensor c(m, n);
    if (!trans_a && !trans_b) {
        for (int i = 0; i < m; ++i) {
            const double* arow = &a.data[static_cast<size_t>(i) * ka];
            double* crow = &c.data[static_cast<size_t>(i) * n];
            for (int k = 0; k < ka; ++k) {
                double av = arow[k];
                if (av == 0.0) continue;
                const double* brow = &b.data[static_cast<size_t>(k) * n];
                for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
            }
        }
    } else if (!trans_a && trans_b) {
        for (int i = 0; i < m; ++i) {
            const double* arow = &a.data[static_cast<size_t>(i) * ka];
            double* crow = &c.data[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) {
                const double* brow = &b.data[static_cast<size_t>(j) * ka];
                double acc = 0.0;
                for (int k = 0; k < ka; ++k) acc += arow[k] * brow[k];
                crow[j] = acc;
            }
        }
    } else if (trans_a && !trans_b) {
        for (int k = 0; k < ka; ++k) {
            const double* arow = &a.data[static_cast<size_t>(k) * m];
            const double* brow = &b.data[static_cast<size_t>(k) * n];
            for (int i = 0; i < m; ++i) {
                double av = arow[i];
                if (av == 0.0) continue;
                double* crow = &c.data[static_cast<size_t>(i) * n];
                for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
            }
        }
    } else {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < ka; ++k) acc += a.at(k, i) * b.at(j, k);
                c.at(i, j) = acc;
            }
    }
    return c;
}

const TapeNode& Tape::node(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes_.size()))
        throw UsageError("Tape: invalid node id " + std::to_string(id));
    return nodes_[id];
}

void Tape::check_finite(const Tensor& t, const char* where) const {
    for (double v : t.data)
        if (!std::isfinite(v)) throw NumericError(std::string(where) + ": non-finite value produced");
}

int Tape::push(TapeNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Tensor t) {
    check_finite(t, "leaf");
    TapeNode n;
    n.op = Op::kLeaf;
    n.out = std::move(t);
    return push(std::move(n));
}

int Tape::matmul(int a, int b, bool trans_a, bool trans_b) {
    TapeNode n;
    n.op = Op::kMatmul;
    n.inputs = {a, b};
    n.i0 = trans_a ? 1 : 0;
    n.i1 = trans_b ? 1 : 0;
    n.out = gemm(value(a), trans_a, value(b), trans_b);
    check_finite(n.out, "matmul");
    return push(std::move(n));
}

int Tape::add(int a, int b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (!ta.same_shape(tb))
        throw ShapeError("add: shape mismatch " + ta.shape_str() + " vs " + tb.shape_str());
    TapeNode n;
    n.op = Op::kAdd;
    n.inputs = {a, b};
    n.out = ta;
    for (size_t i = 0; i < n.out.data.size(); ++i) n.out.data[i] += tb.data[i];
    check_finite(n.out, "add");
    return push(std::move(n));
}

int Tape::add_rowvec(int a, int b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (tb.rows != 1 || tb.cols != ta.cols)
        throw ShapeError("add_rowvec: want [1x" + std::to_string(ta.cols) + "], got " + tb.shape_str());
    TapeNode n;
    n.op = Op::kAddRowVec;
    n.inputs = {a, b};
    n.out = ta;
    for (int r = 0; r < ta.rows; ++r)
        for (int c = 0; c < ta.cols; ++c) n.out.at(r, c) += tb.data[c];
    check_finite(n.out, "add_rowvec");
    return push(std::move(n));
}

int Tape::sub(int a, int b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (!ta.same_shape(tb))
        throw ShapeError("sub: shape mismatch " + ta.shape_str() + " vs " + tb.shape_str());
    TapeNode n;
    n.op = Op::kSub;
    n.inputs = {a, b};
    n.out = ta;
    for (size_t i = 0; i < n.out.data.size(); ++i) n.out.data[i] -= tb.data[i];
    check_finite(n.out, "sub");
    return push(std::move(n));
}

int Tape::mul(int a, int b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (!ta.same_shape(tb))
        throw ShapeError("mul: shape mismatch " + ta.shape_str() + " vs " + tb.shape_str());
    TapeNode n;
    n.op = Op::kMul;
    n.inputs = {a, b};
    n.out = ta;
    for (size_t i = 0; i < n.out.data.size(); ++i) n.out.data[i] *= tb.data[i];
    check_finite(n.out, "mul");
    return push(std::move(n));
}

int Tape::scale(int a, double s) {
    if (!std::isfinite(s)) throw NumericError("scale: non-finite factor");
    TapeNode n;
    n.op = Op::kScale;
    n.inputs = {a};
    n.scalar = s;
    n.out = value(a);
    for (auto& v : n.out.data) v *= s;
    check_finite(n.out, "scale");
    return push(std::move(n));
}

int Tape::softmax_rows(int a) {
    TapeNode n;
    n.op = Op::kSoftmaxRows;
    n.inputs = {a};
    n.out = value(a);
    for (int r = 0; r < n.out.rows; ++r) {
        double* row = &n.out.data[static_cast<size_t>(r) * n.out.cols];
        double mx = row[0];
        for (int c = 1; c < n.out.cols; ++c) mx = std::max(mx, row[c]);
        double sum = 0.0;
        for (int c = 0; c < n.out.cols; ++c) {
            row[c] = std::exp(row[c] - mx);
            sum += row[c];
        }
        for (int c = 0; c < n.out.cols; ++c) row[c] /= sum;
    }
    check_finite(n.out, "softmax_rows");
    return push(std::move(n));
}

int Tape::layernorm_rows(int x, int gain, int bias, double eps) {
    const Tensor& tx = value(x);
    const Tensor& tg = value(gain);
    const Tensor& tb = value(bias);
    if (tg.rows != 1 || tg.cols != tx.cols || tb.rows != 1 || tb.cols != tx.cols)
        throw ShapeError("layernorm_rows: gain/bias must be [1x" + std::to_string(tx.cols) + "]");
    if (eps <= 0) throw InputError("layernorm_rows: eps must be positive");
    TapeNode n;
    n.op = Op::kLayernormRows;
    n.inputs = {x, gain, bias};
    n.scalar = eps;
    n.out = Tensor(tx.rows, tx.cols);
    int d = tx.cols;
    for (int r = 0; r < tx.rows; ++r) {
        const double* in = &tx.data[static_cast<size_t>(r) * d];
        double* out = &n.out.data[static_cast<size_t>(r) * d];
        double mean = 0.0;
        for (int c = 0; c < d; ++c) mean += in[c];
        mean /= d;
        double var = 0.0;
        for (int c = 0; c < d; ++c) {
            double dv = in[c] - mean;
            var += dv * dv;
        }
        var /= d;
        double inv = 1.0 / std::sqrt(var + eps);
        for (int c = 0; c < d; ++c) out[c] = (in[c] - mean) * inv * tg.data[c] + tb.data[c];
    }
    check_finite(n.out, "layernorm_rows");
    return push(std::move(n));
}

int Tape::gelu(int a) {
    TapeNode n;
    n.op = Op::kGelu;
    n.inputs = {a};
    n.out = value(a);
    for (auto& v : n.out.data) v = gelu_scalar(v);
    check_finite(n.out, "gelu");
    return push(std::move(n));
}

int Tape::embed_lookup(int table, const std::vector<int>& ids) {
    const Tensor& tt = value(table);
    for (int id : ids)
        if (id < 0 || id >= tt.rows)
            throw InputError("embed_lookup: id " + std::to_string(id) + " outside table of " +
                             std::to_string(tt.rows) + " rows");
    TapeNode n;
    n.op = Op::kEmbedLookup;
    n.inputs = {table};
    n.ids = ids;
    n.out = Tensor(static_cast<int>(ids.size()), tt.cols);
    for (size_t r = 0; r < ids.size(); ++r)
        for (int c = 0; c < tt.cols; ++c) n.out.at(static_cast<int>(r), c) = tt.at(ids[r], c);
    return push(std::move(n));
}

int Tape::slice_rows(int a, int from, int to) {
    const Tensor& ta = value(a);
    if (from < 0 || to > ta.rows || from >= to)
        throw ShapeError("slice_rows: bad range [" + std::to_string(from) + "," + std::to_string(to) +
                         ") for " + ta.shape_str());
    TapeNode n;
    n.op = Op::kSliceRows;
    n.inputs = {a};
    n.i0 = from;
    n.i1 = to;
    n.out = Tensor(to - from, ta.cols);
    for (int r = from; r < to; ++r)
        for (int c = 0; c < ta.cols; ++c) n.out.at(r - from, c) = ta.at(r, c);
    return push(std::move(n));
}

int Tape::concat_rows(int a, int b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (ta.cols != tb.cols)
        throw ShapeError("concat_rows: column mismatch " + ta.shape_str() + " vs " + tb.shape_str());
    TapeNode n;
    n.op = Op::kConcatRows;
    n.inputs = {a, b};
    n.out = Tensor(ta.rows + tb.rows, ta.cols);
    std::copy(ta.data.begin(), ta.data.end(), n.out.data.begin());
    std::copy(tb.data.begin(), tb.data.end(), n.out.data.begin() + ta.data.size());
    return push(std::move(n));
}

int Tape::slice_cols(int a, int from, int to) {
    const Tensor& ta = value(a);
    if (from < 0 || to > ta.cols || from >= to)
        throw ShapeError("slice_cols: bad range [" + std::to_string(from) + "," + std::to_string(to) +
                         ") for " + ta.shape_str());
    TapeNode n;
    n.op = Op::kSliceCols;
    n.inputs = {a};
    n.i0 = from;
    n.i1 = to;
    n.out = Tensor(ta.rows, to - from);
    for (int r = 0; r < ta.rows; ++r)
        for (int c = from; c < to; ++c) n.out.at(r, c - from) = ta.at(r, c);
    return push(std::move(n));
}

int Tape::concat_cols(int a, int b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (ta.rows != tb.rows)
        throw ShapeError("concat_cols: row mismatch " + ta.shape_str() + " vs " + tb.shape_str());
    TapeNode n;
    n.op = Op::kConcatCols;
    n.inputs = {a, b};
    n.out = Tensor(ta.rows, ta.cols + tb.cols);
    for (int r = 0; r < ta.rows; ++r) {
        for (int c = 0; c < ta.cols; ++c) n.out.at(r, c) = ta.at(r, c);
        for (int c = 0; c < tb.cols; ++c) n.out.at(r, ta.cols + c) = tb.at(r, c);
    }
    return push(std::move(n));
}

int Tape::masked_fill(int a, const std::vector<uint8_t>& mask, double fill) {
    const Tensor& ta = value(a);
    if (mask.size() != ta.data.size())
        throw ShapeError("masked_fill: mask size " + std::to_string(mask.size()) + " vs tensor " +
                         ta.shape_str());
    if (!std::isfinite(fill)) throw NumericError("masked_fill: non-finite fill");
    TapeNode n;
    n.op = Op::kMaskedFill;
    n.inputs = {a};
    n.mask = mask;
    n.scalar = fill;
    n.out = ta;
    for (size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) n.out.data[i] = fill;
    return push(std::move(n));
}

int Tape::cross_entropy_mean(int logits, const std::vector<std::pair<int, int>>& targets) {
    const Tensor& tl = value(logits);
    if (targets.empty()) throw UsageError("cross_entropy_mean: no targets");
    for (auto [r, t] : targets)
        if (r < 0 || r >= tl.rows || t < 0 || t >= tl.cols)
            throw InputError("cross_entropy_mean: target (" + std::to_string(r) + "," +
                             std::to_string(t) + ") outside " + tl.shape_str());
    TapeNode n;
    n.op = Op::kCrossEntropyMean;
    n.inputs = {logits};
    n.targets = targets;
    double total = 0.0;
    for (auto [r, t] : targets) {
        const double* row = &tl.data[static_cast<size_t>(r) * tl.cols];
        double mx = row[0];
        for (int c = 1; c < tl.cols; ++c) mx = std::max(mx, row[c]);
        double sum = 0.0;
        for (int c = 0; c < tl.cols; ++c) sum += std::exp(row[c] - mx);
        total += std::log(sum) + mx - row[t];
    }
    n.out = Tensor(1, 1);
    n.out.data[0] = total / static_cast<double>(targets.size());
    check_finite(n.out, "cross_entropy_mean");
    return push(std::move(n));
}

std::vector<Tensor> Tape::backward(int loss) const {
    const TapeNode& ln = node(loss);
    if (ln.out.rows != 1 || ln.out.cols != 1)
        throw ShapeError("backward: loss must be scalar, got " + ln.out.shape_str());

    std::vector<Tensor> adj(nodes_.size());
    adj[loss] = Tensor::full(1, 1, 1.0);

    auto ensure = [&](int id) -> Tensor& {
        if (adj[id].data.empty()) adj[id] = Tensor(nodes_[id].out.rows, nodes_[id].out.cols);
        return adj[id];
    };

    for (int id = loss; id >= 0; --id) {
        if (adj[id].data.empty()) continue;
        const TapeNode& n = nodes_[id];
        const Tensor& g = adj[id];
        switch (n.op) {
            case Op::kLeaf:
                break;
            case Op::kMatmul: {
                bool ta = n.i0 != 0, tb = n.i1 != 0;
                const Tensor& va = nodes_[n.inputs[0]].out;
                const Tensor& vb = nodes_[n.inputs[1]].out;
                Tensor da = ta ? (tb ? gemm(vb, true, g, true) : gemm(vb, false, g, true))
                               : (tb ? gemm(g, false, vb, false) : gemm(g, false, vb, true));
                Tensor db = tb ? (ta ? gemm(g, true, va, true) : gemm(g, true, va, false))
                               : (ta ? gemm(va, false, g, false) : gemm(va, true, g, false));
                Tensor& aa = ensure(n.inputs[0]);
                for (size_t i = 0; i < aa.data.size(); ++i) aa.data[i] += da.data[i];
                Tensor& ab = ensure(n.inputs[1]);
                for (size_t i = 0; i < ab.data.size(); ++i) ab.data[i] += db.data[i];
                break;
            }
            case Op::kAdd: {
                for (int k = 0; k < 2; ++k) {
                    Tensor& a = ensure(n.inputs[k]);
                    for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += g.data[i];
                }
                break;
            }
            case Op::kAddRowVec: {
                Tensor& a = ensure(n.inputs[0]);
                for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += g.data[i];
                Tensor& b = ensure(n.inputs[1]);
                for (int r = 0; r < g.rows; ++r)
                    for (int c = 0; c < g.cols; ++c) b.data[c] += g.at(r, c);
                break;
            }
            case Op::kSub: {
                Tensor& a = ensure(n.inputs[0]);
                for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += g.data[i];
                Tensor& b = ensure(n.inputs[1]);
                for (size_t i = 0; i < b.data.size(); ++i) b.data[i] -= g.data[i];
                break;
            }
            case Op::kMul: {
                const Tensor& va = nodes_[n.inputs[0]].out;
                const Tensor& vb = nodes_[n.inputs[1]].out;
                Tensor& a = ensure(n.inputs[0]);
                for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += g.data[i] * vb.data[i];
                Tensor& b = ensure(n.inputs[1]);
                for (size_t i = 0; i < b.data.size(); ++i) b.data[i] += g.data[i] * va.data[i];
                break;
            }
            case Op::kScale: {
                Tensor& a = ensure(n.inputs[0]);
                for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += g.data[i] * n.scalar;
                break;
            }
            case Op::kSoftmaxRows: {
                Tensor& a = ensure(n.inputs[0]);
                const Tensor& y = n.out;
                for (int r = 0; r < y.rows; ++r) {
                    const double* yr = &y.data[static_cast<size_t>(r) * y.cols];
                    const double* gr = &g.data[static_cast<size_t>(r) * y.cols];
                    double dot = 0.0;
                    for (int c = 0; c < y.cols; ++c) dot += yr[c] * gr[c];
                    double* ar = &a.data[static_cast<size_t>(r) * y.cols];
                    for (int c = 0; c < y.cols; ++c) ar[c] += yr[c] * (gr[c] - dot);
                }
                break;
            }
            case Op::kLayernormRows: {
                const Tensor& vx = nodes_[n.inputs[0]].out;
                const Tensor& vg = nodes_[n.inputs[1]].out;
                Tensor& ax = ensure(n.inputs[0]);
                Tensor& ag = ensure(n.inputs[1]);
                Tensor& ab = ensure(n.inputs[2]);
                int d = vx.cols;
                for (int r = 0; r < vx.rows; ++r) {
                    const double* in = &vx.data[static_cast<size_t>(r) * d];
                    const double* gr = &g.data[static_cast<size_t>(r) * d];
                    double mean = 0.0;
                    for (int c = 0; c < d; ++c) mean += in[c];
                    mean /= d;
                    double var = 0.0;
                    for (int c = 0; c < d; ++c) {
                        double dv = in[c] - mean;
                        var += dv * dv;
                    }
                    var /= d;
                    double inv = 1.0 / std::sqrt(var + n.scalar);
                    // xhat = (x - mean) * inv; dxhat = dy * gain
                    double m1 = 0.0, m2 = 0.0;
                    for (int c = 0; c < d; ++c) {
                        double xhat = (in[c] - mean) * inv;
                        double dxhat = gr[c] * vg.data[c];
                        m1 += dxhat;
                        m2 += dxhat * xhat;
                        ag.data[c] += gr[c] * xhat;
                        ab.data[c] += gr[c];
                    }
                    m1 /= d;
                    m2 /= d;
                    double* ar = &ax.data[static_cast<size_t>(r) * d];
                    for (int c = 0; c < d; ++c) {
                        double xhat = (in[c] - mean) * inv;
                        double dxhat = gr[c] * vg.data[c];
                        ar[c] += inv * (dxhat - m1 - xhat * m2);
                    }
                }
                break;
            }
            case Op::kGelu: {
                const Tensor& vx = nodes_[n.inputs[0]].out;
                Tensor& a = ensure(n.inputs[0]);
                for (size_t i = 0; i < a.data.size(); ++i)
                    a.data[i] += g.data[i] * gelu_grad_scalar(vx.data[i]);
                break;
            }
            case Op::kEmbedLookup: {
                Tensor& a = ensure(n.inputs[0]);
                int d = n.out.cols;
                for (size_t r = 0; r < n.ids.size(); ++r)
                    for (int c = 0; c < d; ++c) a.at(n.ids[r], c) += g.at(static_cast<int>(r), c);
                break;
            }
            case Op::kSliceRows: {
                Tensor& a = ensure(n.inputs[0]);
                for (int r = n.i0; r < n.i1; ++r)
                    for (int c = 0; c < a.cols; ++c) a.at(r, c) += g.at(r - n.i0, c);
                break;
            }
            case Op::kConcatRows: {
                const Tensor& va = nodes_[n.inputs[0]].out;
                Tensor& a = ensure(n.inputs[0]);
                Tensor& b = ensure(n.inputs[1]);
                for (size_t i = 0; i < va.data.size(); ++i) a.data[i] += g.data[i];
                for (size_t i = 0; i < b.data.size(); ++i) b.data[i] += g.data[va.data.size() + i];
                break;
            }
            case Op::kSliceCols: {
                Tensor& a = ensure(n.inputs[0]);
                for (int r = 0; r < g.rows; ++r)
                    for (int c = n.i0; c < n.i1; ++c) a.at(r, c) += g.at(r, c - n.i0);
                break;
            }
            case Op::kConcatCols: {
                const Tensor& va = nodes_[n.inputs[0]].out;
                Tensor& a = ensure(n.inputs[0]);
                Tensor& b = ensure(n.inputs[1]);
                for (int r = 0; r < g.rows; ++r) {
                    for (int c = 0; c < va.cols; ++c) a.at(r, c) += g.at(r, c);
                    for (int c = 0; c < b.cols; ++c) b.at(r, c) += g.at(r, va.cols + c);
                }
                break;
            }
            case Op::kMaskedFill: {
                Tensor& a = ensure(n.inputs[0]);
                for (size_t i = 0; i < a.data.size(); ++i)
                    if (!n.mask[i]) a.data[i] += g.data[i];
                break;
            }
            case Op::kCrossEntropyMean: {
                const Tensor& vl = nodes_[n.inputs[0]].out;
                Tensor& a = ensure(n.inputs[0]);
                double gbar = g.data[0] / static_cast<double>(n.targets.size());
                for (auto [r, t] : n.targets) {
                    const double* row = &vl.data[static_cast<size_t>(r) * vl.cols];
                    double mx = row[0];
                    for (int c = 1; c < vl.cols; ++c) mx = std::max(mx, row[c]);
                    double sum = 0.0;
                    for (int c = 0; c < vl.cols; ++c) sum += std::exp(row[c] - mx);
                    double* ar = &a.data[static_cast<size_t>(r) * vl.cols];
                    for (int c = 0; c < vl.cols; ++c) ar[c] += gbar * (std::exp(row[c] - mx) / sum);
                    ar[t] -= gbar;
                }
                break;
            }
        }
    }
    return adj;
}

}  // namespace oclab
