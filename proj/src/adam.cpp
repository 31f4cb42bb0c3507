#include "oclab/adam.hpp"

#include <cmath>

#include "oclab/errors.hpp"

namespace oclab {

void adam_apply(std::vector<double>& params, const std::vector<double>& grads, AdamState& state) {
    if (params.size() != grads.size())
        throw ShapeError("adam_apply: params/grads size mismatch");
    if (state.m.size() != params.size() || state.v.size() != params.size())
        throw ShapeError("adam_apply: state size mismatch");
    for (double gv : grads)
        if (!std::isfinite(gv)) throw NumericError("adam_apply: non-finite gradient");

    state.step += 1;
    double t = static_cast<double>(state.step);
    double bc1 = 1.0 - std::pow(state.beta1, t);
    double bc2 = 1.0 - std::pow(state.beta2, t);
    for (size_t i = 0; i < params.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        double mhat = state.m[i] / bc1;
        double vhat = state.v[i] / bc2;
        params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

std::vector<double> flatten_params(const std::vector<const Tensor*>& params) {
    size_t total = 0;
    for (const Tensor* t : params) total += t->data.size();
    std::vector<double> flat;
    flat.reserve(total);
    for (const Tensor* t : params) flat.insert(flat.end(), t->data.begin(), t->data.end());
    return flat;
}

void unflatten_params(const std::vector<double>& flat, const std::vector<Tensor*>& params) {
    size_t total = 0;
    for (Tensor* t : params) total += t->data.size();
    if (flat.size() != total)
        throw ShapeError("unflatten_params: flat size " + std::to_string(flat.size()) +
                         " != expected " + std::to_string(total));
    size_t off = 0;
    for (Tensor* t : params) {
        std::copy(flat.begin() + off, flat.begin() + off + t->data.size(), t->data.begin());
        off += t->data.size();
    }
}

}  // namespace oclab
