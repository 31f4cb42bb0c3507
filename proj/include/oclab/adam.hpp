#pragma once

#include <cstdint>
#include <vector>

#include "oclab/tensor.hpp"

namespace oclab {

// Adam with bias correction over a flat parameter vector.
struct AdamState {
    double lr = 5e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int64_t step = 0;  // completed updates
    std::vector<double> m;
    std::vector<double> v;

    explicit AdamState(size_t n = 0, double lr_ = 5e-5) : lr(lr_), m(n, 0.0), v(n, 0.0) {}
};

// One update in place. params/grads/state sizes must agree.
void adam_apply(std::vector<double>& params, const std::vector<double>& grads, AdamState& state);

// Concatenate tensors into one flat vector (row-major, list order).
std::vector<double> flatten_params(const std::vector<const Tensor*>& params);

// Inverse of flatten_params; shapes come from the destination tensors.
// Exact round-trip: unflatten(flatten(p)) == p bitwise.
void unflatten_params(const std::vector<double>& flat, const std::vector<Tensor*>& params);

}  // namespace oclab
