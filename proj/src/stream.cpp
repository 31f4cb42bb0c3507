#include "oclab/stream.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "oclab/errors.hpp"
#include "oclab/tensor.hpp"

namespace oclab::stream {

namespace {

using nlohmann::ordered_json;

// mean over examples of the per-example (per-token mean) NLL; one loss node
int batch_mean_loss(Tape& tape, TapedModel& model,
                    const std::vector<const std::string*>& texts) {
    int acc = -1;
    for (const std::string* t : texts) {
        int l = model.loss({}, ByteTokenizer::encode(*t));
        acc = acc < 0 ? l : tape.add(acc, l);
    }
    return tape.scale(acc, 1.0 / static_cast<double>(texts.size()));
}

double apply_update(TrainState& st, Tape& tape, const TapedModel& model, int loss,
                    int64_t stream_step, int j) {
    double value = tape.value(loss).data[0];
    if (!std::isfinite(value))
        throw NumericError("step " + std::to_string(stream_step) + " update " +
                           std::to_string(j) + ": non-finite loss");

    std::vector<Tensor> grads = tape.backward(loss);
    std::vector<double> flat_g;
    flat_g.reserve(static_cast<size_t>(st.params.param_count()));
    for (int id : model.leaf_ids()) {
        const Tensor& g = grads[id];
        if (g.data.empty())  // leaf unreachable from this loss: zero gradient
            flat_g.insert(flat_g.end(), tape.value(id).size(), 0.0);
        else
            flat_g.insert(flat_g.end(), g.data.begin(), g.data.end());
    }

    const LMParams& cp = st.params;
    std::vector<double> flat_p = flatten_params(cp.param_list());
    adam_apply(flat_p, flat_g, st.adam);
    unflatten_params(flat_p, st.params.param_list());
    st.updates += 1;
    return value;
}

std::vector<const std::string*> instance_texts(const std::vector<StreamExample>& batch) {
    std::vector<const std::string*> out;
    out.reserve(batch.size());
    for (const auto& ex : batch) out.push_back(&ex.instance_text);
    return out;
}

void require_batch(const std::vector<StreamExample>& batch, int n) {
    if (batch.empty()) throw InputError("training step on an empty batch");
    if (n < 1) throw InputError("local replay count must be >= 1");
}

uint64_t params_hash(const LMParams& p) {
    std::vector<double> flat = flatten_params(p.param_list());
    return fnv1a64(flat.data(), flat.size() * sizeof(double));
}

}  // namespace

void StreamConfig::validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (eval_interval < 1) throw ConfigError("eval_interval must be >= 1");
}

std::vector<std::vector<size_t>> make_stream(size_t dataset_size, const StreamConfig& cfg) {
    cfg.validate();
    if (dataset_size == 0) throw InputError("cannot stream an empty dataset");

    std::vector<size_t> order(dataset_size);
    std::iota(order.begin(), order.end(), size_t{0});
    Rng rng = Rng::derive(cfg.shuffle_seed, "stream_order");
    rng.shuffle(order);

    std::vector<std::vector<size_t>> batches;
    size_t b = static_cast<size_t>(cfg.batch_size);
    for (size_t at = 0; at < order.size(); at += b) {
        size_t end = std::min(at + b, order.size());
        batches.emplace_back(order.begin() + at, order.begin() + end);
    }
    return batches;
}

ReservoirBuffer::ReservoirBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("reservoir capacity must be >= 1");
}

void ReservoirBuffer::offer(const StreamExample& ex, Rng& rng) {
    if (items_.size() < capacity_) {
        items_.push_back(ex);
    } else {
        // slot uniform over [0, seen]; lands inside the buffer with
        // probability capacity/(seen+1)
        uint64_t slot = rng.below(seen_ + 1);
        if (slot < capacity_) items_[static_cast<size_t>(slot)] = ex;
    }
    seen_ += 1;
}

std::vector<StreamExample> ReservoirBuffer::sample(size_t m, Rng& rng) const {
    if (!full())
        throw WarmupError("replay disabled until the buffer reaches capacity (" +
                          std::to_string(items_.size()) + "/" + std::to_string(capacity_) +
                          ")");
    if (m > items_.size())
        throw InputError("cannot sample " + std::to_string(m) + " of " +
                         std::to_string(items_.size()) + " residents");

    std::vector<size_t> idx(items_.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::vector<StreamExample> out;
    out.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        size_t j = i + static_cast<size_t>(rng.below(idx.size() - i));
        std::swap(idx[i], idx[j]);
        out.push_back(items_[idx[i]]);
    }
    return out;
}

void StrategyConfig::validate() const {
    if (n < 1 || n > 5) throw ConfigError("local replay count n must be in [1, 5]");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ConfigError("abstraction weight alpha must be in [0, 1]");
    if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be positive");
    if (kind == StrategyKind::kEr && buffer_capacity != 50 && buffer_capacity != 100)
        throw ConfigError("supported replay buffer capacities are 50 and 100");
}

TrainState make_train_state(LMParams params, double lr) {
    size_t n = static_cast<size_t>(params.param_count());
    TrainState st{std::move(params), AdamState(n, lr), 0};
    return st;
}

const char* loss_kind_name(LossKind kind) {
    switch (kind) {
        case LossKind::kInstance: return "instance";
        case LossKind::kAbstract: return "abstract";
        case LossKind::kCombined: return "combined";
        case LossKind::kReplayAugmented: return "replay_augmented";
    }
    return "?";
}

std::vector<TraceRow> step_sft(TrainState& st, const std::vector<StreamExample>& batch,
                               int n, int64_t stream_step) {
    require_batch(batch, n);
    std::vector<TraceRow> trace;
    for (int j = 0; j < n; ++j) {
        Tape tape;
        TapedModel model(tape, st.params);
        int loss = batch_mean_loss(tape, model, instance_texts(batch));
        double v = apply_update(st, tape, model, loss, stream_step, j);
        trace.push_back({stream_step, j, LossKind::kInstance, v});
    }
    return trace;
}

std::vector<TraceRow> step_aat(TrainState& st, const std::vector<StreamExample>& batch,
                               double alpha, int n, int64_t stream_step) {
    require_batch(batch, n);
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InputError("abstraction weight alpha must be in [0, 1]");
    // the degenerate case must stay bit-identical to plain training, so the
    // abstract forward is skipped entirely
    if (alpha == 0.0) return step_sft(st, batch, n, stream_step);

    std::vector<const std::string*> abstracts;
    abstracts.reserve(batch.size());
    for (const auto& ex : batch) {
        if (ex.abstract_text.empty())
            throw InputError("batch item '" + ex.id + "' lacks abstraction text");
        abstracts.push_back(&ex.abstract_text);
    }

    std::vector<TraceRow> trace;
    {
        Tape tape;
        TapedModel model(tape, st.params);
        int inst = batch_mean_loss(tape, model, instance_texts(batch));
        int abs_ = batch_mean_loss(tape, model, abstracts);
        int comb = tape.add(tape.scale(abs_, alpha), tape.scale(inst, 1.0 - alpha));
        double vi = tape.value(inst).data[0];
        double va = tape.value(abs_).data[0];
        double vc = apply_update(st, tape, model, comb, stream_step, 0);
        trace.push_back({stream_step, 0, LossKind::kInstance, vi});
        trace.push_back({stream_step, 0, LossKind::kAbstract, va});
        trace.push_back({stream_step, 0, LossKind::kCombined, vc});
    }
    for (int j = 1; j < n; ++j) {
        Tape tape;
        TapedModel model(tape, st.params);
        int loss = batch_mean_loss(tape, model, instance_texts(batch));
        double v = apply_update(st, tape, model, loss, stream_step, j);
        trace.push_back({stream_step, j, LossKind::kInstance, v});
    }
    return trace;
}

std::vector<TraceRow> step_er(TrainState& st, const std::vector<StreamExample>& batch,
                              ReservoirBuffer& buf, int n, size_t replay_size, Rng& rng,
                              int64_t stream_step) {
    require_batch(batch, n);
    // sample strictly before offering: an item never replays in its own step
    std::vector<StreamExample> replay;
    if (buf.full()) replay = buf.sample(replay_size, rng);

    std::vector<TraceRow> trace;
    for (int j = 0; j < n; ++j) {
        Tape tape;
        TapedModel model(tape, st.params);
        std::vector<const std::string*> texts = instance_texts(batch);
        LossKind kind = LossKind::kInstance;
        if (j == 0 && !replay.empty()) {
            for (const auto& ex : replay) texts.push_back(&ex.instance_text);
            kind = LossKind::kReplayAugmented;
        }
        int loss = batch_mean_loss(tape, model, texts);
        double v = apply_update(st, tape, model, loss, stream_step, j);
        trace.push_back({stream_step, j, kind, v});
    }

    for (const auto& ex : batch) buf.offer(ex, rng);
    return trace;
}

RunResult run_stream(const std::vector<StreamExample>& dataset, const StreamConfig& scfg,
                     const StrategyConfig& strat, LMParams learner, const EvalHook& hook) {
    scfg.validate();
    strat.validate();
    if (dataset.empty()) throw InputError("cannot stream an empty dataset");

    RunResult result;
    result.batches = make_stream(dataset.size(), scfg);
    TrainState st = make_train_state(std::move(learner), strat.lr);
    result.start_params = st.params;

    ReservoirBuffer buf(strat.kind == StrategyKind::kEr ? strat.buffer_capacity : 1);

    for (size_t bi = 0; bi < result.batches.size(); ++bi) {
        int64_t step = static_cast<int64_t>(bi) + 1;
        std::vector<StreamExample> batch;
        batch.reserve(result.batches[bi].size());
        for (size_t idx : result.batches[bi]) batch.push_back(dataset[idx]);

        std::vector<TraceRow> rows;
        switch (strat.kind) {
            case StrategyKind::kSft:
                rows = step_sft(st, batch, strat.n, step);
                break;
            case StrategyKind::kAat:
                rows = step_aat(st, batch, strat.alpha, strat.n, step);
                break;
            case StrategyKind::kEr: {
                Rng rng = Rng::derive(scfg.shuffle_seed, "er_step", static_cast<uint64_t>(step));
                rows = step_er(st, batch, buf, strat.n,
                               static_cast<size_t>(scfg.batch_size), rng, step);
                break;
            }
        }
        result.trace.insert(result.trace.end(), rows.begin(), rows.end());
        result.param_hashes.push_back(params_hash(st.params));
        if (hook && step % scfg.eval_interval == 0) hook(step, st.params);
    }

    result.final_params = std::move(st.params);
    result.total_updates = st.updates;
    return result;
}

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

}  // namespace

StrategyConfig RunConfig::strategy_config() const {
    StrategyConfig s;
    if (strategy == "sft")
        s.kind = StrategyKind::kSft;
    else if (strategy == "er")
        s.kind = StrategyKind::kEr;
    else if (strategy == "aat")
        s.kind = StrategyKind::kAat;
    else
        throw ConfigError("unknown strategy '" + strategy + "'");
    s.alpha = alpha;
    s.n = n;
    s.buffer_capacity = buffer_capacity;
    s.lr = lr;
    s.validate();
    return s;
}

StreamConfig RunConfig::stream_config() const {
    StreamConfig s;
    s.batch_size = batch_size;
    s.shuffle_seed = seed;
    s.eval_interval = eval_interval;
    s.validate();
    return s;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open run config " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const ordered_json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(path + ": run config must be a JSON object");

    reject_unknown_keys(doc,
                        {"strategy", "alpha", "n", "buffer_capacity", "lr", "batch_size",
                         "eval_interval", "seed", "dataset_path", "tau", "dataset_kind",
                         "abstraction_level", "bank_dir", "nab_split_ratio",
                         "nab_split_seed", "learner"},
                        path);

    RunConfig cfg;
    auto require_string = [&](const char* key) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_string() || it->get<std::string>().empty())
            throw ConfigError(path + ": missing required string key '" + std::string(key) +
                              "'");
        return it->get<std::string>();
    };
    cfg.strategy = require_string("strategy");
    cfg.dataset_path = require_string("dataset_path");

    try {
        if (doc.contains("alpha")) cfg.alpha = doc["alpha"].get<double>();
        if (doc.contains("n")) cfg.n = doc["n"].get<int>();
        if (doc.contains("buffer_capacity"))
            cfg.buffer_capacity = doc["buffer_capacity"].get<size_t>();
        if (doc.contains("lr")) cfg.lr = doc["lr"].get<double>();
        if (doc.contains("batch_size")) cfg.batch_size = doc["batch_size"].get<int>();
        if (doc.contains("eval_interval"))
            cfg.eval_interval = doc["eval_interval"].get<int64_t>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<uint64_t>();
        if (doc.contains("tau")) cfg.tau = doc["tau"].get<double>();
        if (doc.contains("dataset_kind"))
            cfg.dataset_kind = doc["dataset_kind"].get<std::string>();
        if (doc.contains("abstraction_level"))
            cfg.abstraction_level = doc["abstraction_level"].get<std::string>();
        if (doc.contains("bank_dir")) cfg.bank_dir = doc["bank_dir"].get<std::string>();
        if (doc.contains("nab_split_ratio"))
            cfg.nab_split_ratio = doc["nab_split_ratio"].get<double>();
        if (doc.contains("nab_split_seed"))
            cfg.nab_split_seed = doc["nab_split_seed"].get<uint64_t>();
    } catch (const ordered_json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    // keys that cannot take effect are configuration mistakes
    if (doc.contains("alpha") && cfg.strategy != "aat")
        throw ConfigError(path + ": 'alpha' is only meaningful for strategy aat");
    if (doc.contains("buffer_capacity") && cfg.strategy != "er")
        throw ConfigError(path + ": 'buffer_capacity' is only meaningful for strategy er");
    if (cfg.dataset_kind != "rcb" && cfg.dataset_kind != "nab")
        throw ConfigError(path + ": dataset_kind must be rcb or nab");
    if (doc.contains("abstraction_level") && cfg.dataset_kind != "rcb")
        throw ConfigError(path + ": 'abstraction_level' applies to rcb datasets only");
    if (cfg.abstraction_level != "mask" && cfg.abstraction_level != "category" &&
        cfg.abstraction_level != "random")
        throw ConfigError(path + ": abstraction_level must be mask, category, or random");
    if (doc.contains("bank_dir") && cfg.dataset_kind != "rcb")
        throw ConfigError(path + ": 'bank_dir' applies to rcb datasets only");
    if (cfg.bank_dir.empty()) throw ConfigError(path + ": bank_dir must not be empty");
    if (doc.contains("nab_split_ratio") && cfg.dataset_kind != "nab")
        throw ConfigError(path + ": 'nab_split_ratio' applies to nab datasets only");
    if (doc.contains("nab_split_seed") && cfg.dataset_kind != "nab")
        throw ConfigError(path + ": 'nab_split_seed' applies to nab datasets only");
    if (!(cfg.nab_split_ratio > 0.0 && cfg.nab_split_ratio < 1.0))
        throw ConfigError(path + ": nab_split_ratio must lie strictly inside (0, 1)");
    if (!(cfg.tau >= 0.0 && cfg.tau <= 1.0))
        throw ConfigError(path + ": tau must be in [0, 1]");

    if (doc.contains("learner")) {
        const ordered_json& l = doc["learner"];
        if (!l.is_object()) throw ConfigError(path + ": 'learner' must be an object");
        reject_unknown_keys(l, {"d_model", "n_layers", "n_heads", "d_ff", "max_seq"},
                            path + ": learner");
        try {
            if (l.contains("d_model")) cfg.learner.d_model = l["d_model"].get<int>();
            if (l.contains("n_layers")) cfg.learner.n_layers = l["n_layers"].get<int>();
            if (l.contains("n_heads")) cfg.learner.n_heads = l["n_heads"].get<int>();
            if (l.contains("d_ff")) cfg.learner.d_ff = l["d_ff"].get<int>();
            if (l.contains("max_seq")) cfg.learner.max_seq = l["max_seq"].get<int>();
        } catch (const ordered_json::exception& e) {
            throw ConfigError(path + ": learner: " + e.what());
        }
    }
    cfg.learner.seed = cfg.seed;
    cfg.learner.validate();

    cfg.strategy_config();  // surfaces strategy/range violations at load time
    cfg.stream_config();
    return cfg;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream out;
    out << "step,j,loss_kind,value\n";
    char buf[64];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof(buf), "%.17g", r.value);
        out << r.step << "," << r.j << "," << loss_kind_name(r.kind) << "," << buf << "\n";
    }
    return out.str();
}

}  // namespace oclab::stream
