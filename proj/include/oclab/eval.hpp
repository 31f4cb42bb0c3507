#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oclab/learner.hpp"
#include "oclab/nab.hpp"
#include "oclab/rcb.hpp"

namespace oclab::eval {

enum class EvalKind { kRcbKnownEdge, kRcbUnknownEdge, kNabKnown, kNabUnknown };

// metric reporting splits by known vs unknown regardless of benchmark
bool is_known_kind(EvalKind k);
const char* eval_kind_name(EvalKind k);

// One evaluable prediction target. RCB items carry a query prompt and the
// target entity; NAB items carry the full continuation pair.
struct EvalItem {
    std::string id;
    EvalKind kind;
    int64_t first_seen_step = 0;  // stream step of the batch that introduced it
    // rcb payload
    std::string query_prompt;
    std::string target;
    // nab payload
    nab::NabItem nab_item;
};

// Results per (item, evaluation step). Rows may only be recorded at steps
// divisible by the evaluation interval, once per pair; ever-correct state is
// derived and monotone.
class EvalLedger {
  public:
    explicit EvalLedger(int64_t eval_interval);

    void record(const std::string& item_id, int64_t step, bool correct);

    bool correct_at(const std::string& item_id, int64_t step) const;
    bool has_row(const std::string& item_id, int64_t step) const;
    // strictly-before semantics: a first success at step i does not count as
    // ever-correct at i itself
    bool ever_correct_before(const std::string& item_id, int64_t step) const;
    // -1 when the item was never correct
    int64_t last_correct_step(const std::string& item_id) const;

    int64_t eval_interval() const { return k_; }
    const std::set<int64_t>& steps() const { return steps_; }

  private:
    struct PerItem {
        std::map<int64_t, bool> by_step;
        int64_t first_correct = -1;
        int64_t last_correct = -1;
    };
    int64_t k_;
    std::map<std::string, PerItem> items_;
    std::set<int64_t> steps_;
};

// Correct iff the geometric-mean token probability of the target under the
// relation's query prompt strictly exceeds tau.
bool rcb_correct(const LMParams& params, const rcb::Triple& edge, const rcb::Bank& bank,
                 double tau);
bool rcb_correct_prompt(const LMParams& params, const std::string& prompt,
                        const std::string& target, double tau);

// Delegates to the continuation comparison rule (ties incorrect).
bool nab_correct(const LMParams& params, const nab::NabItem& item);

enum class KindFilter { kKnown, kUnknown, kAll };

// Accuracy over items introduced since the previous evaluation:
// first_seen in (i-k, i]. Empty window -> absent.
std::optional<double> acc_online(const std::vector<EvalItem>& items, const EvalLedger& led,
                                 int64_t i, KindFilter f);

// Share of historical items (first_seen <= i-k) that were ever correct
// before i but are incorrect at i, over those ever correct before i.
// Empty denominator -> absent.
std::optional<double> forgetting(const std::vector<EvalItem>& items, const EvalLedger& led,
                                 int64_t i, KindFilter f);

// Accuracy at i over everything introduced so far (first_seen <= i).
std::optional<double> acc_cumul(const std::vector<EvalItem>& items, const EvalLedger& led,
                                int64_t i, KindFilter f);

// One eval item per known edge and one for the unknown edge of every
// instance; first_seen_step comes from the batch that streams the instance.
// batches hold dataset indices as produced by the stream module.
std::vector<EvalItem> rcb_eval_items(const std::vector<rcb::RcbInstance>& instances,
                                     const rcb::Bank& bank,
                                     const std::vector<std::vector<size_t>>& batches);

// known_order[j] is the index into items of the j-th streamed example;
// batches hold positions in known_order. Unknown narratives join the pool at
// the earliest stream step of any known narrative of their proverb (their
// abstraction first enters the stream there).
std::vector<EvalItem> nab_eval_items(const std::vector<nab::NabItem>& items,
                                     const std::vector<size_t>& known_order,
                                     const std::vector<std::vector<size_t>>& batches);

// Scores every item with first_seen <= step against the snapshot and records
// one ledger row each.
void evaluate_step(const std::vector<EvalItem>& items, const LMParams& params, double tau,
                   int64_t step, EvalLedger& ledger);

struct MetricRow {
    int64_t step;
    std::string metric;  // acc_online | forgetting | acc_cumul
    std::string kind;    // known | unknown | all
    std::optional<double> value;
};

// All three metrics at all three kind filters for every listed step.
std::vector<MetricRow> metric_log(const std::vector<EvalItem>& items, const EvalLedger& led);

// CSV: step,metric,kind,value,absent_flag (value empty when absent).
std::string metrics_csv(const std::vector<MetricRow>& rows);

// Step-averaged online accuracy and forgetting (uniform over evaluation
// steps, absent cells skipped) plus final-step cumulative accuracy.
struct SummaryRow {
    std::optional<double> acc_online_unknown, acc_online_known;
    std::optional<double> f_unknown, f_known;
    std::optional<double> acc_cumul_unknown, acc_cumul_known, acc_cumul_all;
};

SummaryRow summarize(const std::vector<MetricRow>& log);

std::string summary_csv_header();
std::string summary_csv_row(const std::string& run_label, const SummaryRow& row);

}  // namespace oclab::eval
