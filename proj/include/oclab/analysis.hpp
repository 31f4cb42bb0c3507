#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oclab/learner.hpp"
#include "oclab/stream.hpp"

namespace oclab::analysis {

// Weight-space line between two checkpoints plus a seeded perpendicular axis,
// evaluated on a frozen slice of the stream. Grid statistics quantify how
// rugged the surface is around the trajectory.

std::vector<double> flatten(const LMParams& p);

// unflatten(flat(start) + a * (flat(end) - flat(start))
//           + b * ||flat(end) - flat(start)|| * d_perp)
LMParams interp_point(const LMParams& start, const LMParams& end,
                      const std::vector<double>& d_perp, double a, double b);

// Seeded Gaussian direction, norm-matched to the trajectory per parameter
// block, Gram-Schmidt orthogonalized against it, unit length. Blocks the
// trajectory never moved stay exactly zero. DegenerateError when the
// trajectory is zero.
std::vector<double> make_perp_direction(const LMParams& start, const LMParams& end,
                                        uint64_t seed);

struct EvalSet {
    std::vector<std::string> instance_texts;
    std::vector<std::string> abstract_texts;
};

// Frozen slice: the first max(1, floor(frac * n)) examples in dataset order,
// taken before any stream shuffling so every strategy sees the same slice.
EvalSet landscape_eval_set(const std::vector<stream::StreamExample>& dataset,
                           double frac = 0.1);

struct LandscapeConfig {
    int a_samples = 21;
    double a_min = -0.5, a_max = 1.5;
    int b_samples = 7;
    double b_min = -0.3, b_max = 0.3;
    uint64_t perp_seed = 42;

    void validate() const;  // ConfigError
};

struct LandscapeCell {
    double a = 0.0, b = 0.0;
    double loss = 0.0;
    bool error = false;  // non-finite loss, excluded from statistics
};

struct LandscapeStats {
    double variance = 0.0;
    double cv = 0.0;  // stddev / mean over finite cells
    // Chord-gap summary along the on-trajectory row (b = 0, a in [0, 1]):
    // gap(a) = linear chord between the endpoint losses minus the measured
    // loss. Positive gaps are improvements, negative ones adverse bulges.
    double improved_nats_mean = 0.0;
    double improved_nats_max = 0.0;
    double adverse_nats_mean = 0.0;
    int error_cells = 0;
};

// Statistics over finite cells only; zeros when none are finite.
LandscapeStats landscape_stats(const std::vector<LandscapeCell>& cells);

struct LandscapeGrid {
    std::vector<double> a_axis;
    std::vector<double> b_axis;
    // row-major: index = ai * b_axis.size() + bi
    std::vector<LandscapeCell> instance_cells;
    std::vector<LandscapeCell> abstract_cells;
    LandscapeStats instance_stats;
    LandscapeStats abstract_stats;
    uint64_t perp_seed = 0;
};

// Mean NLL over the eval set at every grid point, for the paragraph texts and
// their abstractions separately. Deterministic given the config.
LandscapeGrid landscape(const LMParams& start, const LMParams& end, const EvalSet& eval_set,
                        const LandscapeConfig& cfg = {});

// CSV: a,b,loss_kind,loss,cell_error_flag (loss empty on error cells).
std::string grid_csv(const LandscapeGrid& grid);

// JSON object keyed by loss kind with variance, cv, the chord-gap stats, and
// the error-cell count.
std::string stats_json(const LandscapeGrid& grid);

struct AlignmentReport {
    // effective first-update gradient per batch, flattened
    std::vector<std::vector<double>> grads;
    std::vector<double> grad_norms;
    std::vector<double> pairwise_cosines;  // (i, j), i < j, lexicographic
    double mean_cosine = 0.0;
    double cosine_variance = 0.0;  // population
};

// Gradient each batch would apply in its first update at a fixed checkpoint:
// the mean instance NLL for plain tuning, the alpha-weighted combination of
// abstract and instance NLL otherwise. alpha = 0 reduces to plain tuning
// exactly. Requires at least two batches; replay strategies have no
// fixed-checkpoint first update and are rejected.
AlignmentReport grad_alignment(const LMParams& ckpt,
                               const std::vector<std::vector<stream::StreamExample>>& batches,
                               stream::StrategyKind kind, double alpha);

}  // namespace oclab::analysis
