#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oclab/adam.hpp"
#include "oclab/learner.hpp"
#include "oclab/rng.hpp"

namespace oclab::stream {

// One streamable training example. instance_text is always trained on;
// abstract_text is consulted only by the abstraction-augmented strategy and
// may be empty for strategies that never read it.
struct StreamExample {
    std::string id;
    std::string instance_text;
    std::string abstract_text;
};

struct StreamConfig {
    int batch_size = 4;
    uint64_t shuffle_seed = 42;
    int64_t eval_interval = 10;  // stream steps between evaluation snapshots

    void validate() const;
};

// Seeded permutation of [0, dataset_size) chunked into batches of batch_size;
// the last batch may be short. Every index appears exactly once.
std::vector<std::vector<size_t>> make_stream(size_t dataset_size, const StreamConfig& cfg);

// Reservoir-sampled store of past examples: after t >= capacity offers every
// offered item is resident with probability capacity/t.
class ReservoirBuffer {
  public:
    explicit ReservoirBuffer(size_t capacity);

    // Appends while below capacity; afterwards replaces a uniformly chosen
    // resident with probability capacity/(seen+1). One rng draw per offer
    // once the buffer is full, none before.
    void offer(const StreamExample& ex, Rng& rng);

    // m residents uniformly without replacement. Replay is disabled until
    // the buffer reaches full capacity: WarmupError before that.
    std::vector<StreamExample> sample(size_t m, Rng& rng) const;

    bool full() const { return items_.size() == capacity_; }
    size_t capacity() const { return capacity_; }
    uint64_t seen() const { return seen_; }
    const std::vector<StreamExample>& items() const { return items_; }

  private:
    size_t capacity_;
    uint64_t seen_ = 0;
    std::vector<StreamExample> items_;
};

enum class StrategyKind { kSft, kEr, kAat };

struct StrategyConfig {
    StrategyKind kind = StrategyKind::kSft;
    double alpha = 0.0;           // abstraction loss weight, AAT only
    int n = 1;                    // local replay count, updates per stream step
    size_t buffer_capacity = 50;  // ER only, supported sizes 50 and 100
    double lr = 5e-5;

    void validate() const;
};

// Learner parameters plus optimizer state; step functions advance both.
struct TrainState {
    LMParams params;
    AdamState adam;
    int64_t updates = 0;  // completed optimizer updates
};

TrainState make_train_state(LMParams params, double lr);

enum class LossKind { kInstance, kAbstract, kCombined, kReplayAugmented };

const char* loss_kind_name(LossKind kind);

struct TraceRow {
    int64_t step;  // 1-based stream step (batch index)
    int j;         // update index within the step, 0..n-1
    LossKind kind;
    double value;
};

// n Adam updates on the mean per-example instance NLL of the batch.
std::vector<TraceRow> step_sft(TrainState& st, const std::vector<StreamExample>& batch,
                               int n, int64_t stream_step);

// Update 0 optimizes alpha * mean(abstract NLL) + (1 - alpha) * mean(instance
// NLL); updates 1..n-1 optimize the instance mean alone. alpha == 0 is
// exactly step_sft (the abstract forward is skipped, so abstractions may be
// absent); alpha > 0 requires a non-empty abstract_text on every batch item
// (InputError otherwise).
std::vector<TraceRow> step_aat(TrainState& st, const std::vector<StreamExample>& batch,
                               double alpha, int n, int64_t stream_step);

// Replay is sampled before the current batch is offered, so an item can
// never be replayed in its own step. Update 0 optimizes the unweighted mean
// over current + replayed examples once warmup is complete (instance-only
// and identical to step_sft before that); updates 1..n-1 use the current
// batch alone. All offers happen after the last update.
std::vector<TraceRow> step_er(TrainState& st, const std::vector<StreamExample>& batch,
                              ReservoirBuffer& buf, int n, size_t replay_size, Rng& rng,
                              int64_t stream_step);

// step is the 1-based stream step; the learner snapshot is immutable.
using EvalHook = std::function<void(int64_t step, const LMParams&)>;

struct RunResult {
    LMParams start_params;  // checkpoint before step 1
    LMParams final_params;  // checkpoint after the last step
    std::vector<TraceRow> trace;
    std::vector<std::vector<size_t>> batches;  // stream order actually used
    // fnv1a64 over the flattened parameter vector after each stream step;
    // equal hashes across runs mean bit-identical trajectories
    std::vector<uint64_t> param_hashes;
    int64_t total_updates = 0;
};

// Drives the full stream: batches in order, one strategy step per batch,
// eval_hook at every stream step divisible by eval_interval. ER randomness
// comes from a per-step counter-derived stream keyed by shuffle_seed, so
// strategies under one master seed see the same permutation.
RunResult run_stream(const std::vector<StreamExample>& dataset, const StreamConfig& scfg,
                     const StrategyConfig& strat, LMParams learner,
                     const EvalHook& hook = nullptr);

// Serialized run description (the train command's input). Keys outside the
// documented schema are rejected, as are keys that cannot take effect for
// the chosen strategy or dataset kind.
struct RunConfig {
    std::string strategy = "sft";  // sft | er | aat
    double alpha = 0.0;
    int n = 1;
    size_t buffer_capacity = 50;
    double lr = 5e-5;
    int batch_size = 4;
    int64_t eval_interval = 10;
    uint64_t seed = 42;
    std::string dataset_path;
    double tau = 0.05;
    std::string dataset_kind = "rcb";        // rcb | nab
    std::string abstraction_level = "mask";  // rcb datasets: mask | category | random
    std::string bank_dir = "data/rcb";       // rcb datasets: relation bank for queries
    double nab_split_ratio = 0.9;            // nab datasets
    // fixed independently of the run seed so seed sweeps reorder one split
    uint64_t nab_split_seed = 42;
    TransformerConfig learner;  // "learner" object; seed always = run seed

    StrategyConfig strategy_config() const;
    StreamConfig stream_config() const;
};

RunConfig load_run_config(const std::string& path);

// Loss trace CSV: step,j,loss_kind,value.
std::string trace_csv(const std::vector<TraceRow>& trace);

}  // namespace oclab::stream
