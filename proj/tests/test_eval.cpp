#include "oclab/eval.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"

#include "oclab/adam.hpp"
#include "oclab/errors.hpp"
#include "oclab/learner.hpp"
#include "oclab/rng.hpp"
#include "oclab/stream.hpp"
#include "oclab/tensor.hpp"

using namespace oclab;
using namespace oclab::eval;

namespace {

std::string data_dir() {
    const char* d = std::getenv("OCLAB_DATA_DIR");
    REQUIRE(d != nullptr);
    return d;
}

TransformerConfig tiny_config(uint64_t seed = 42) {
    TransformerConfig cfg;
    cfg.d_model = 16;
    cfg.n_layers = 2;
    cfg.n_heads = 2;
    cfg.d_ff = 32;
    cfg.max_seq = 96;
    cfg.seed = seed;
    return cfg;
}

EvalItem item(std::string id, EvalKind kind, int64_t first_seen) {
    EvalItem it;
    it.id = std::move(id);
    it.kind = kind;
    it.first_seen_step = first_seen;
    return it;
}

// three instances of one entailed triangle, small enough for model scoring
rcb::Dataset tiny_rcb_dataset(const rcb::Bank& bank) {
    rcb::BuildConfig cfg;
    cfg.seed = 42;
    cfg.only = {"gen_sibling_triangle"};
    cfg.count_overrides["gen_sibling_triangle"] = 3;
    return rcb::build_dataset(bank, cfg);
}

// one Adam loop on a single prompt/target pair
void overfit_pair(LMParams& p, const std::string& prompt, const std::string& target,
                  int steps, double lr) {
    const LMParams& cp = p;
    auto prompt_ids = ByteTokenizer::encode(prompt);
    auto target_ids = ByteTokenizer::encode(target);
    auto mut = p.param_list();
    AdamState st(static_cast<size_t>(p.param_count()), lr);
    for (int s = 0; s < steps; ++s) {
        Tape tape;
        TapedModel model(tape, p);
        int loss = model.loss(prompt_ids, target_ids);
        auto grads = tape.backward(loss);
        std::vector<double> flat_g;
        for (int id : model.leaf_ids())
            for (double g : grads[id].data) flat_g.push_back(g);
        std::vector<double> flat_p = flatten_params(cp.param_list());
        adam_apply(flat_p, flat_g, st);
        unflatten_params(flat_p, mut);
    }
}

// ---- independent recount of every metric, straight from the definitions ----

struct BruteRow {
    std::string id;
    int64_t step;
    bool correct;
};

bool brute_at(const std::vector<BruteRow>& rows, const std::string& id, int64_t step) {
    for (const BruteRow& r : rows)
        if (r.id == id && r.step == step) return r.correct;
    REQUIRE_MESSAGE(false, "missing row");
    return false;
}

bool brute_ever_before(const std::vector<BruteRow>& rows, const std::string& id, int64_t step) {
    for (const BruteRow& r : rows)
        if (r.id == id && r.step < step && r.correct) return true;
    return false;
}

bool brute_match(EvalKind k, KindFilter f) {
    if (f == KindFilter::kAll) return true;
    bool known = k == EvalKind::kRcbKnownEdge || k == EvalKind::kNabKnown;
    return f == KindFilter::kKnown ? known : !known;
}

std::optional<double> brute_acc_online(const std::vector<EvalItem>& items,
                                       const std::vector<BruteRow>& rows, int64_t i, int64_t k,
                                       KindFilter f) {
    int64_t num = 0, den = 0;
    for (const EvalItem& it : items) {
        if (!brute_match(it.kind, f)) continue;
        if (it.first_seen_step > i - k && it.first_seen_step <= i) {
            ++den;
            if (brute_at(rows, it.id, i)) ++num;
        }
    }
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> brute_forgetting(const std::vector<EvalItem>& items,
                                       const std::vector<BruteRow>& rows, int64_t i, int64_t k,
                                       KindFilter f) {
    int64_t num = 0, den = 0;
    for (const EvalItem& it : items) {
        if (!brute_match(it.kind, f)) continue;
        if (it.first_seen_step <= i - k && brute_ever_before(rows, it.id, i)) {
            ++den;
            if (!brute_at(rows, it.id, i)) ++num;
        }
    }
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> brute_acc_cumul(const std::vector<EvalItem>& items,
                                      const std::vector<BruteRow>& rows, int64_t i,
                                      KindFilter f) {
    int64_t num = 0, den = 0;
    for (const EvalItem& it : items) {
        if (!brute_match(it.kind, f)) continue;
        if (it.first_seen_step <= i) {
            ++den;
            if (brute_at(rows, it.id, i)) ++num;
        }
    }
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

void check_same(const std::optional<double>& got, const std::optional<double>& want) {
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(*got == *want);
}

}  // namespace

TEST_CASE("ledger enforces the evaluation interval and row uniqueness") {
    EvalLedger led(10);
    CHECK(led.eval_interval() == 10);
    CHECK_THROWS_AS(led.record("a", 7, true), InputError);
    CHECK_THROWS_AS(led.record("a", 0, true), InputError);
    CHECK_THROWS_AS(led.record("a", -10, true), InputError);
    CHECK_THROWS_AS(EvalLedger(0), InputError);

    led.record("a", 10, true);
    CHECK_THROWS_AS(led.record("a", 10, false), InputError);
    led.record("a", 20, false);

    CHECK(led.correct_at("a", 10));
    CHECK_FALSE(led.correct_at("a", 20));
    CHECK(led.has_row("a", 10));
    CHECK_FALSE(led.has_row("a", 30));
    CHECK_FALSE(led.has_row("b", 10));
    CHECK_THROWS_AS(led.correct_at("b", 10), InputError);
    CHECK_THROWS_AS(led.correct_at("a", 30), InputError);

    CHECK(led.steps() == std::set<int64_t>{10, 20});
}

TEST_CASE("ever-correct is strict at the current step and never reverts") {
    EvalLedger led(10);
    led.record("a", 10, false);
    led.record("a", 20, true);
    led.record("a", 30, false);

    CHECK_FALSE(led.ever_correct_before("a", 10));
    CHECK_FALSE(led.ever_correct_before("a", 20));  // first success is at 20 itself
    CHECK(led.ever_correct_before("a", 30));
    CHECK(led.ever_correct_before("a", 40));  // a later failure does not revert it
    CHECK(led.last_correct_step("a") == 20);

    led.record("a", 40, true);
    CHECK(led.last_correct_step("a") == 40);

    led.record("b", 10, false);
    CHECK(led.last_correct_step("b") == -1);
    CHECK_FALSE(led.ever_correct_before("b", 20));
    CHECK(led.last_correct_step("missing") == -1);
    CHECK_FALSE(led.ever_correct_before("missing", 50));
}

TEST_CASE("online accuracy covers exactly the items since the previous evaluation") {
    std::vector<EvalItem> items = {
        item("A", EvalKind::kRcbKnownEdge, 1),  item("B", EvalKind::kRcbUnknownEdge, 1),
        item("C", EvalKind::kRcbKnownEdge, 12), item("D", EvalKind::kRcbUnknownEdge, 15),
        item("E", EvalKind::kRcbKnownEdge, 22),
    };
    EvalLedger led(10);
    led.record("A", 10, true);
    led.record("B", 10, false);
    led.record("A", 20, true);
    led.record("B", 20, false);
    led.record("C", 20, true);
    led.record("D", 20, false);
    for (const char* id : {"A", "C", "E"}) led.record(id, 30, true);
    for (const char* id : {"B", "D"}) led.record(id, 30, false);

    check_same(acc_online(items, led, 10, KindFilter::kAll), 0.5);
    check_same(acc_online(items, led, 10, KindFilter::kKnown), 1.0);
    check_same(acc_online(items, led, 10, KindFilter::kUnknown), 0.0);

    // only C and D arrived in (10, 20]
    check_same(acc_online(items, led, 20, KindFilter::kAll), 0.5);
    check_same(acc_online(items, led, 20, KindFilter::kKnown), 1.0);
    check_same(acc_online(items, led, 20, KindFilter::kUnknown), 0.0);

    check_same(acc_online(items, led, 30, KindFilter::kAll), 1.0);
    check_same(acc_online(items, led, 30, KindFilter::kKnown), 1.0);
    check_same(acc_online(items, led, 30, KindFilter::kUnknown), std::nullopt);
}

TEST_CASE("online window is half-open at the previous evaluation step") {
    std::vector<EvalItem> items = {
        item("edge", EvalKind::kRcbKnownEdge, 10),
        item("late", EvalKind::kRcbKnownEdge, 11),
    };
    EvalLedger led(10);
    led.record("edge", 10, true);
    led.record("edge", 20, false);
    led.record("late", 20, true);

    // fs=10 belongs to the step-10 window, not the step-20 one
    check_same(acc_online(items, led, 10, KindFilter::kAll), 1.0);
    check_same(acc_online(items, led, 20, KindFilter::kAll), 1.0);
}

TEST_CASE("forgetting counts regressed items among the ever-correct history") {
    std::vector<EvalItem> items = {
        item("H1", EvalKind::kRcbKnownEdge, 1), item("H2", EvalKind::kRcbKnownEdge, 2),
        item("H3", EvalKind::kRcbKnownEdge, 3), item("H4", EvalKind::kRcbKnownEdge, 4),
        item("H5", EvalKind::kRcbKnownEdge, 5), item("N", EvalKind::kRcbKnownEdge, 15),
    };
    EvalLedger led(10);
    led.record("H1", 10, true);
    led.record("H2", 10, true);
    led.record("H3", 10, true);
    led.record("H4", 10, false);
    led.record("H5", 10, false);

    led.record("H1", 20, false);  // regressed
    led.record("H2", 20, true);
    led.record("H3", 20, true);
    led.record("H4", 20, false);  // never correct: out of the denominator
    led.record("H5", 20, true);   // first correct now: in neither set
    led.record("N", 20, false);   // too recent to be history

    // three ever-correct historical items, one of them now wrong
    check_same(forgetting(items, led, 20, KindFilter::kAll), 1.0 / 3.0);

    // no history exists at the first evaluation
    check_same(forgetting(items, led, 10, KindFilter::kAll), std::nullopt);
    // nothing of this kind has history
    check_same(forgetting(items, led, 20, KindFilter::kUnknown), std::nullopt);
}

TEST_CASE("cumulative accuracy spans everything introduced so far") {
    std::vector<EvalItem> items = {
        item("A", EvalKind::kRcbKnownEdge, 1),
        item("B", EvalKind::kRcbUnknownEdge, 1),
        item("C", EvalKind::kRcbKnownEdge, 12),
    };
    EvalLedger led(10);
    led.record("A", 10, true);
    led.record("B", 10, false);
    led.record("A", 20, false);
    led.record("B", 20, true);
    led.record("C", 20, true);

    check_same(acc_cumul(items, led, 10, KindFilter::kAll), 0.5);
    check_same(acc_cumul(items, led, 10, KindFilter::kKnown), 1.0);
    check_same(acc_cumul(items, led, 20, KindFilter::kAll), 2.0 / 3.0);
    check_same(acc_cumul(items, led, 20, KindFilter::kKnown), 0.5);
    check_same(acc_cumul(items, led, 20, KindFilter::kUnknown), 1.0);

    std::vector<EvalItem> late = {item("Z", EvalKind::kNabUnknown, 25)};
    EvalLedger led2(10);
    CHECK_FALSE(acc_cumul(late, led2, 20, KindFilter::kAll).has_value());
}

TEST_CASE("metrics equal a direct recount on randomized ledgers") {
    Rng rng(2024);
    static const EvalKind kKinds[] = {EvalKind::kRcbKnownEdge, EvalKind::kRcbUnknownEdge,
                                      EvalKind::kNabKnown, EvalKind::kNabUnknown};
    static const KindFilter kFilters[] = {KindFilter::kKnown, KindFilter::kUnknown,
                                          KindFilter::kAll};
    for (int trial = 0; trial < 120; ++trial) {
        const int64_t k = 5 * (1 + static_cast<int64_t>(rng.below(3)));
        const int64_t horizon = k * (2 + static_cast<int64_t>(rng.below(6)));
        const size_t n_items = 3 + rng.below(30);

        std::vector<EvalItem> items;
        std::vector<double> bias;
        for (size_t j = 0; j < n_items; ++j) {
            items.push_back(item("it" + std::to_string(j), kKinds[rng.below(4)],
                                 1 + static_cast<int64_t>(rng.below(
                                         static_cast<uint64_t>(horizon)))));
            bias.push_back(rng.next_double());
        }

        EvalLedger led(k);
        std::vector<BruteRow> rows;
        for (int64_t step = k; step <= horizon; step += k) {
            for (size_t j = 0; j < n_items; ++j) {
                if (items[j].first_seen_step > step) continue;
                bool ok = rng.next_double() < bias[j];
                led.record(items[j].id, step, ok);
                rows.push_back({items[j].id, step, ok});
            }
        }

        for (int64_t step = k; step <= horizon; step += k) {
            for (KindFilter f : kFilters) {
                check_same(acc_online(items, led, step, f),
                           brute_acc_online(items, rows, step, k, f));
                check_same(forgetting(items, led, step, f),
                           brute_forgetting(items, rows, step, k, f));
                check_same(acc_cumul(items, led, step, f),
                           brute_acc_cumul(items, rows, step, f));
            }
        }
    }
}

TEST_CASE("metric log emits every metric and kind per step and marks absent cells") {
    std::vector<EvalItem> items = {item("A", EvalKind::kRcbKnownEdge, 1)};
    EvalLedger led(10);
    led.record("A", 10, true);

    auto log = metric_log(items, led);
    REQUIRE(log.size() == 9);

    const std::string want =
        "step,metric,kind,value,absent_flag\n"
        "10,acc_online,known,1,0\n"
        "10,acc_online,unknown,,1\n"
        "10,acc_online,all,1,0\n"
        "10,forgetting,known,,1\n"
        "10,forgetting,unknown,,1\n"
        "10,forgetting,all,,1\n"
        "10,acc_cumul,known,1,0\n"
        "10,acc_cumul,unknown,,1\n"
        "10,acc_cumul,all,1,0\n";
    CHECK(metrics_csv(log) == want);
}

TEST_CASE("summary averages present cells and reads final cumulative values") {
    std::vector<MetricRow> log = {
        {10, "acc_online", "unknown", 0.5},
        {20, "acc_online", "unknown", std::nullopt},
        {30, "acc_online", "unknown", 1.0},
        {10, "acc_online", "known", std::nullopt},
        {20, "forgetting", "unknown", 0.25},
        {30, "forgetting", "unknown", 0.75},
        {10, "acc_cumul", "unknown", 0.25},
        {30, "acc_cumul", "unknown", 0.625},
        {30, "acc_cumul", "known", 1.0},
        {30, "acc_cumul", "all", std::nullopt},
    };
    SummaryRow row = summarize(log);
    check_same(row.acc_online_unknown, 0.75);
    CHECK_FALSE(row.acc_online_known.has_value());
    check_same(row.f_unknown, 0.5);
    CHECK_FALSE(row.f_known.has_value());
    check_same(row.acc_cumul_unknown, 0.625);
    check_same(row.acc_cumul_known, 1.0);
    CHECK_FALSE(row.acc_cumul_all.has_value());

    CHECK(summary_csv_header() ==
          "run,acc_online_unknown,acc_online_known,f_unknown,f_known,"
          "acc_cumul_unknown,acc_cumul_known,acc_cumul_all\n");
    CHECK(summary_csv_row("run_a", row) == "run_a,0.75,,0.5,,0.625,1,\n");
}

TEST_CASE("edge correctness thresholds the geometric-mean confidence") {
    auto bank = rcb::load_bank(data_dir() + "/rcb");
    auto ds = tiny_rcb_dataset(bank);
    LMParams p = init_learner(tiny_config(5));

    std::vector<rcb::Triple> edges;
    for (const auto& inst : ds.instances) {
        for (const auto& e : inst.known_edges) edges.push_back(e);
        edges.push_back(inst.unknown_edge);
    }
    REQUIRE(edges.size() == 9);

    for (const auto& e : edges) {
        CHECK(rcb_correct(p, e, bank, 0.0));
        CHECK_FALSE(rcb_correct(p, e, bank, 1.0));

        auto [prompt, completion] = rcb::edge_query(e, bank);
        CHECK(rcb_correct(p, e, bank, 0.05) ==
              (target_confidence(p, prompt, completion) > 0.05));

        // a pass at a high bar implies a pass at every lower bar
        for (double hi : {0.01, 0.05, 0.2}) {
            if (rcb_correct(p, e, bank, hi)) CHECK(rcb_correct(p, e, bank, hi / 10.0));
        }
    }

    rcb::Triple bogus{"unheard_of_relation", "Ann", "Bea"};
    CHECK_THROWS_AS(rcb_correct(p, bogus, bank, 0.05), ConfigError);
}

TEST_CASE("an overfit edge clears a strict threshold and a fresh model does not") {
    auto bank = rcb::load_bank(data_dir() + "/rcb");
    auto ds = tiny_rcb_dataset(bank);
    auto [prompt, completion] = rcb::edge_query(ds.instances[0].unknown_edge, bank);

    TransformerConfig cfg;
    cfg.d_model = 32;
    cfg.n_layers = 1;
    cfg.n_heads = 2;
    cfg.d_ff = 64;
    cfg.max_seq = 128;
    cfg.seed = 7;
    LMParams p = init_learner(cfg);

    CHECK(target_confidence(p, prompt, completion) < 0.05);
    CHECK_FALSE(rcb_correct_prompt(p, prompt, completion, 0.05));

    overfit_pair(p, prompt, completion, 250, 3e-3);
    CHECK(target_confidence(p, prompt, completion) > 0.9);
    CHECK(rcb_correct_prompt(p, prompt, completion, 0.9));
}

TEST_CASE("narrative correctness matches the continuation comparison") {
    auto items = nab::load_nab(data_dir() + "/nab/nab_sample.jsonl");
    TransformerConfig cfg;
    cfg.d_model = 16;
    cfg.n_layers = 1;
    cfg.n_heads = 2;
    cfg.d_ff = 32;
    cfg.max_seq = 512;
    cfg.seed = 3;
    LMParams p = init_learner(cfg);
    for (size_t i : {size_t(0), size_t(17), size_t(42)}) {
        CHECK(nab_correct(p, items[i]) == nab::eval_pair(p, items[i]));
    }
}

TEST_CASE("step evaluation scores only the introduced pool") {
    LMParams p = init_learner(tiny_config(9));

    EvalItem a = item("a", EvalKind::kRcbKnownEdge, 1);
    a.query_prompt = "Ada is the mother of ";
    a.target = "Bea";
    EvalItem b = item("b", EvalKind::kRcbUnknownEdge, 2);
    b.query_prompt = "Cal is the mother of ";
    b.target = "Dee";
    EvalItem c = item("c", EvalKind::kNabUnknown, 3);
    c.nab_item = nab::NabItem{"p1", "Look before you leap", "One two", "three", "four",
                              nab::Split::kUnknown};
    std::vector<EvalItem> items = {a, b, c};

    EvalLedger led(1);
    evaluate_step(items, p, 0.0, 1, led);
    CHECK(led.has_row("a", 1));
    CHECK_FALSE(led.has_row("b", 1));
    CHECK_FALSE(led.has_row("c", 1));
    CHECK(led.correct_at("a", 1));  // everything passes at a zero bar

    evaluate_step(items, p, 0.0, 3, led);
    CHECK(led.has_row("a", 3));
    CHECK(led.has_row("b", 3));
    CHECK(led.has_row("c", 3));
    CHECK(led.correct_at("b", 3));
    CHECK(led.correct_at("c", 3) == nab::eval_pair(p, c.nab_item));

    // a strict bar flips graph items with an untrained model
    EvalLedger strict(1);
    evaluate_step(items, p, 0.99, 3, strict);
    CHECK_FALSE(strict.correct_at("a", 3));
    CHECK_FALSE(strict.correct_at("b", 3));
    CHECK(strict.correct_at("c", 3) == nab::eval_pair(p, c.nab_item));
}

TEST_CASE("graph items inherit the step of the batch that introduces them") {
    auto bank = rcb::load_bank(data_dir() + "/rcb");
    auto ds = tiny_rcb_dataset(bank);
    REQUIRE(ds.instances.size() == 3);

    stream::StreamConfig scfg;
    scfg.batch_size = 2;
    scfg.shuffle_seed = 42;
    auto batches = stream::make_stream(ds.instances.size(), scfg);
    REQUIRE(batches.size() == 2);

    auto items = rcb_eval_items(ds.instances, bank, batches);
    REQUIRE(items.size() == 9);  // two known edges and one unknown per instance

    std::vector<int64_t> step_of(ds.instances.size());
    for (size_t b = 0; b < batches.size(); ++b)
        for (size_t idx : batches[b]) step_of[idx] = static_cast<int64_t>(b) + 1;

    size_t pos = 0;
    for (size_t idx = 0; idx < ds.instances.size(); ++idx) {
        const auto& inst = ds.instances[idx];
        for (size_t e = 0; e < inst.known_edges.size(); ++e, ++pos) {
            CHECK(items[pos].id == inst.id + ":k" + std::to_string(e));
            CHECK(items[pos].kind == EvalKind::kRcbKnownEdge);
            CHECK(items[pos].first_seen_step == step_of[idx]);
            auto [prompt, completion] = rcb::edge_query(inst.known_edges[e], bank);
            CHECK(items[pos].query_prompt == prompt);
            CHECK(items[pos].target == completion);
        }
        CHECK(items[pos].id == inst.id + ":u");
        CHECK(items[pos].kind == EvalKind::kRcbUnknownEdge);
        CHECK(items[pos].first_seen_step == step_of[idx]);
        auto [prompt, completion] = rcb::edge_query(inst.unknown_edge, bank);
        CHECK(items[pos].query_prompt == prompt);
        CHECK(items[pos].target == completion);
        ++pos;
    }

    // a stream that skips an instance is rejected
    CHECK_THROWS_AS(rcb_eval_items(ds.instances, bank, {batches[0]}), InputError);
}

TEST_CASE("narrative items enter at their proverb's earliest stream step") {
    auto items = nab::load_nab(data_dir() + "/nab/nab_sample.jsonl");
    nab::split_known_unknown(items, 0.9, 42);

    std::vector<size_t> known_order;
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].split == nab::Split::kKnown) known_order.push_back(i);
    REQUIRE(known_order.size() == 45);

    stream::StreamConfig scfg;
    scfg.batch_size = 5;
    scfg.shuffle_seed = 16;
    auto batches = stream::make_stream(known_order.size(), scfg);
    REQUIRE(batches.size() == 9);

    auto eitems = nab_eval_items(items, known_order, batches);
    REQUIRE(eitems.size() == items.size());

    std::vector<int64_t> step_of_pos(known_order.size());
    for (size_t b = 0; b < batches.size(); ++b)
        for (size_t pos : batches[b]) step_of_pos[pos] = static_cast<int64_t>(b) + 1;
    std::map<std::string, int64_t> earliest;
    std::map<size_t, int64_t> step_of_item;
    for (size_t pos = 0; pos < known_order.size(); ++pos) {
        size_t idx = known_order[pos];
        step_of_item[idx] = step_of_pos[pos];
        auto [it, fresh] = earliest.emplace(items[idx].proverb_id, step_of_pos[pos]);
        if (!fresh) it->second = std::min(it->second, step_of_pos[pos]);
    }

    int unknowns = 0;
    for (size_t i = 0; i < items.size(); ++i) {
        CHECK(eitems[i].id == "nab:" + std::to_string(i));
        CHECK(eitems[i].nab_item.context == items[i].context);
        if (items[i].split == nab::Split::kKnown) {
            CHECK(eitems[i].kind == EvalKind::kNabKnown);
            CHECK(eitems[i].first_seen_step == step_of_item[i]);
        } else {
            CHECK(eitems[i].kind == EvalKind::kNabUnknown);
            CHECK(eitems[i].first_seen_step == earliest[items[i].proverb_id]);
            ++unknowns;
        }
    }
    CHECK(unknowns == 5);

    // streaming an unknown narrative is rejected
    std::vector<size_t> bad = known_order;
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].split == nab::Split::kUnknown) {
            bad[0] = i;
            break;
        }
    CHECK_THROWS_AS(nab_eval_items(items, bad, batches), InputError);

    // every known narrative must appear in some batch
    CHECK_THROWS_AS(nab_eval_items(items, known_order, {batches[0]}), InputError);

    // an unknown narrative with no streamed siblings has no entry step
    std::vector<nab::NabItem> lone = {items[0]};
    lone[0].split = nab::Split::kUnknown;
    CHECK_THROWS_AS(nab_eval_items(lone, {}, {}), InputError);
}
