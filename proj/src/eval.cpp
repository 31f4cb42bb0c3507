#include "oclab/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

#include "oclab/errors.hpp"

namespace oclab::eval {

bool is_known_kind(EvalKind k) {
    return k == EvalKind::kRcbKnownEdge || k == EvalKind::kNabKnown;
}

const char* eval_kind_name(EvalKind k) {
    switch (k) {
        case EvalKind::kRcbKnownEdge: return "rcb_known_edge";
        case EvalKind::kRcbUnknownEdge: return "rcb_unknown_edge";
        case EvalKind::kNabKnown: return "nab_known";
        case EvalKind::kNabUnknown: return "nab_unknown";
    }
    throw InputError("bad eval kind");
}

EvalLedger::EvalLedger(int64_t eval_interval) : k_(eval_interval) {
    if (k_ <= 0) throw InputError("eval interval must be positive");
}

void EvalLedger::record(const std::string& item_id, int64_t step, bool correct) {
    if (step <= 0 || step % k_ != 0) {
        throw InputError("ledger row at step " + std::to_string(step) +
                         " violates the interval " + std::to_string(k_));
    }
    PerItem& it = items_[item_id];
    if (!it.by_step.emplace(step, correct).second) {
        throw InputError("duplicate ledger row for " + item_id + " at step " +
                         std::to_string(step));
    }
    if (correct) {
        if (it.first_correct < 0 || step < it.first_correct) it.first_correct = step;
        it.last_correct = std::max(it.last_correct, step);
    }
    steps_.insert(step);
}

bool EvalLedger::has_row(const std::string& item_id, int64_t step) const {
    auto it = items_.find(item_id);
    return it != items_.end() && it->second.by_step.count(step) > 0;
}

bool EvalLedger::correct_at(const std::string& item_id, int64_t step) const {
    auto it = items_.find(item_id);
    if (it == items_.end()) throw InputError("no ledger rows for " + item_id);
    auto row = it->second.by_step.find(step);
    if (row == it->second.by_step.end()) {
        throw InputError("no ledger row for " + item_id + " at step " + std::to_string(step));
    }
    return row->second;
}

bool EvalLedger::ever_correct_before(const std::string& item_id, int64_t step) const {
    auto it = items_.find(item_id);
    if (it == items_.end()) return false;
    return it->second.first_correct >= 0 && it->second.first_correct < step;
}

int64_t EvalLedger::last_correct_step(const std::string& item_id) const {
    auto it = items_.find(item_id);
    return it == items_.end() ? -1 : it->second.last_correct;
}

bool rcb_correct_prompt(const LMParams& params, const std::string& prompt,
                        const std::string& target, double tau) {
    return target_confidence(params, prompt, target) > tau;
}

bool rcb_correct(const LMParams& params, const rcb::Triple& edge, const rcb::Bank& bank,
                 double tau) {
    auto [prompt, completion] = rcb::edge_query(edge, bank);
    return rcb_correct_prompt(params, prompt, completion, tau);
}

bool nab_correct(const LMParams& params, const nab::NabItem& item) {
    return nab::eval_pair(params, item);
}

namespace {

bool kind_matches(EvalKind k, KindFilter f) {
    switch (f) {
        case KindFilter::kKnown: return is_known_kind(k);
        case KindFilter::kUnknown: return !is_known_kind(k);
        case KindFilter::kAll: return true;
    }
    throw InputError("bad kind filter");
}

const char* filter_name(KindFilter f) {
    switch (f) {
        case KindFilter::kKnown: return "known";
        case KindFilter::kUnknown: return "unknown";
        case KindFilter::kAll: return "all";
    }
    throw InputError("bad kind filter");
}

}  // namespace

std::optional<double> acc_online(const std::vector<EvalItem>& items, const EvalLedger& led,
                                 int64_t i, KindFilter f) {
    const int64_t k = led.eval_interval();
    int64_t correct = 0, count = 0;
    for (const EvalItem& it : items) {
        if (!kind_matches(it.kind, f)) continue;
        if (it.first_seen_step <= i - k || it.first_seen_step > i) continue;
        ++count;
        if (led.correct_at(it.id, i)) ++correct;
    }
    if (count == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(count);
}

std::optional<double> forgetting(const std::vector<EvalItem>& items, const EvalLedger& led,
                                 int64_t i, KindFilter f) {
    const int64_t k = led.eval_interval();
    int64_t forgotten = 0, eligible = 0;
    for (const EvalItem& it : items) {
        if (!kind_matches(it.kind, f)) continue;
        if (it.first_seen_step > i - k) continue;  // not yet historical
        if (!led.ever_correct_before(it.id, i)) continue;
        ++eligible;
        if (!led.correct_at(it.id, i)) ++forgotten;
    }
    if (eligible == 0) return std::nullopt;
    return static_cast<double>(forgotten) / static_cast<double>(eligible);
}

std::optional<double> acc_cumul(const std::vector<EvalItem>& items, const EvalLedger& led,
                                int64_t i, KindFilter f) {
    int64_t correct = 0, count = 0;
    for (const EvalItem& it : items) {
        if (!kind_matches(it.kind, f)) continue;
        if (it.first_seen_step > i) continue;
        ++count;
        if (led.correct_at(it.id, i)) ++correct;
    }
    if (count == 0) return std::nullopt;
    return static_cast<double>(correct) / static_cast<double>(count);
}

std::vector<EvalItem> rcb_eval_items(const std::vector<rcb::RcbInstance>& instances,
                                     const rcb::Bank& bank,
                                     const std::vector<std::vector<size_t>>& batches) {
    std::vector<int64_t> step_of(instances.size(), -1);
    for (size_t b = 0; b < batches.size(); ++b) {
        for (size_t idx : batches[b]) {
            if (idx >= instances.size()) throw InputError("batch index out of range");
            step_of[idx] = static_cast<int64_t>(b) + 1;
        }
    }
    std::vector<EvalItem> out;
    for (size_t idx = 0; idx < instances.size(); ++idx) {
        const rcb::RcbInstance& inst = instances[idx];
        if (step_of[idx] < 0) {
            throw InputError("instance " + inst.id + " missing from the stream");
        }
        for (size_t e = 0; e < inst.known_edges.size(); ++e) {
            EvalItem it;
            it.id = inst.id + ":k" + std::to_string(e);
            it.kind = EvalKind::kRcbKnownEdge;
            it.first_seen_step = step_of[idx];
            auto [prompt, completion] = rcb::edge_query(inst.known_edges[e], bank);
            it.query_prompt = prompt;
            it.target = completion;
            out.push_back(std::move(it));
        }
        EvalItem u;
        u.id = inst.id + ":u";
        u.kind = EvalKind::kRcbUnknownEdge;
        u.first_seen_step = step_of[idx];
        auto [prompt, completion] = rcb::edge_query(inst.unknown_edge, bank);
        u.query_prompt = prompt;
        u.target = completion;
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<EvalItem> nab_eval_items(const std::vector<nab::NabItem>& items,
                                     const std::vector<size_t>& known_order,
                                     const std::vector<std::vector<size_t>>& batches) {
    std::vector<int64_t> step_of_pos(known_order.size(), -1);
    for (size_t b = 0; b < batches.size(); ++b) {
        for (size_t pos : batches[b]) {
            if (pos >= known_order.size()) throw InputError("batch index out of range");
            step_of_pos[pos] = static_cast<int64_t>(b) + 1;
        }
    }
    std::unordered_map<std::string, int64_t> proverb_first;
    std::vector<int64_t> step_of_item(items.size(), -1);
    for (size_t pos = 0; pos < known_order.size(); ++pos) {
        size_t idx = known_order[pos];
        if (idx >= items.size()) throw InputError("known index out of range");
        if (items[idx].split != nab::Split::kKnown) {
            throw InputError("streamed narrative is not in the known split");
        }
        if (step_of_pos[pos] < 0) {
            throw InputError("known narrative missing from the stream");
        }
        step_of_item[idx] = step_of_pos[pos];
        auto [it, inserted] =
            proverb_first.emplace(items[idx].proverb_id, step_of_pos[pos]);
        if (!inserted) it->second = std::min(it->second, step_of_pos[pos]);
    }
    std::vector<EvalItem> out;
    for (size_t idx = 0; idx < items.size(); ++idx) {
        const nab::NabItem& ni = items[idx];
        EvalItem it;
        it.id = "nab:" + std::to_string(idx);
        it.nab_item = ni;
        if (ni.split == nab::Split::kKnown) {
            it.kind = EvalKind::kNabKnown;
            it.first_seen_step = step_of_item[idx];
        } else {
            it.kind = EvalKind::kNabUnknown;
            auto fs = proverb_first.find(ni.proverb_id);
            if (fs == proverb_first.end()) {
                throw InputError("proverb " + ni.proverb_id + " has no streamed narratives");
            }
            it.first_seen_step = fs->second;
        }
        out.push_back(std::move(it));
    }
    return out;
}

void evaluate_step(const std::vector<EvalItem>& items, const LMParams& params, double tau,
                   int64_t step, EvalLedger& ledger) {
    for (const EvalItem& it : items) {
        if (it.first_seen_step > step) continue;
        bool ok;
        switch (it.kind) {
            case EvalKind::kRcbKnownEdge:
            case EvalKind::kRcbUnknownEdge:
                ok = rcb_correct_prompt(params, it.query_prompt, it.target, tau);
                break;
            case EvalKind::kNabKnown:
            case EvalKind::kNabUnknown:
                ok = nab_correct(params, it.nab_item);
                break;
            default:
                throw InputError("bad eval kind");
        }
        ledger.record(it.id, step, ok);
    }
}

std::vector<MetricRow> metric_log(const std::vector<EvalItem>& items, const EvalLedger& led) {
    static const KindFilter kFilters[] = {KindFilter::kKnown, KindFilter::kUnknown,
                                          KindFilter::kAll};
    std::vector<MetricRow> rows;
    for (int64_t step : led.steps()) {
        for (KindFilter f : kFilters) {
            rows.push_back({step, "acc_online", filter_name(f), acc_online(items, led, step, f)});
        }
        for (KindFilter f : kFilters) {
            rows.push_back({step, "forgetting", filter_name(f), forgetting(items, led, step, f)});
        }
        for (KindFilter f : kFilters) {
            rows.push_back({step, "acc_cumul", filter_name(f), acc_cumul(items, led, step, f)});
        }
    }
    return rows;
}

namespace {

std::string fmt_value(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

}  // namespace

std::string metrics_csv(const std::vector<MetricRow>& rows) {
    std::string out = "step,metric,kind,value,absent_flag\n";
    for (const MetricRow& r : rows) {
        out += std::to_string(r.step);
        out += ',';
        out += r.metric;
        out += ',';
        out += r.kind;
        out += ',';
        out += fmt_value(r.value);
        out += ',';
        out += r.value ? '0' : '1';
        out += '\n';
    }
    return out;
}

namespace {

// Uniform mean over evaluation steps, absent cells skipped; absent when every
// cell is absent.
std::optional<double> step_average(const std::vector<MetricRow>& log, const std::string& metric,
                                   const std::string& kind) {
    double sum = 0.0;
    int64_t n = 0;
    for (const MetricRow& r : log) {
        if (r.metric != metric || r.kind != kind || !r.value) continue;
        sum += *r.value;
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::optional<double> final_value(const std::vector<MetricRow>& log, const std::string& metric,
                                  const std::string& kind) {
    int64_t last = -1;
    for (const MetricRow& r : log) last = std::max(last, r.step);
    for (const MetricRow& r : log) {
        if (r.step == last && r.metric == metric && r.kind == kind) return r.value;
    }
    return std::nullopt;
}

}  // namespace

SummaryRow summarize(const std::vector<MetricRow>& log) {
    SummaryRow row;
    row.acc_online_unknown = step_average(log, "acc_online", "unknown");
    row.acc_online_known = step_average(log, "acc_online", "known");
    row.f_unknown = step_average(log, "forgetting", "unknown");
    row.f_known = step_average(log, "forgetting", "known");
    row.acc_cumul_unknown = final_value(log, "acc_cumul", "unknown");
    row.acc_cumul_known = final_value(log, "acc_cumul", "known");
    row.acc_cumul_all = final_value(log, "acc_cumul", "all");
    return row;
}

std::string summary_csv_header() {
    return "run,acc_online_unknown,acc_online_known,f_unknown,f_known,"
           "acc_cumul_unknown,acc_cumul_known,acc_cumul_all\n";
}

std::string summary_csv_row(const std::string& run_label, const SummaryRow& row) {
    std::string out = run_label;
    for (const auto* v : {&row.acc_online_unknown, &row.acc_online_known, &row.f_unknown,
                          &row.f_known, &row.acc_cumul_unknown, &row.acc_cumul_known,
                          &row.acc_cumul_all}) {
        out += ',';
        out += fmt_value(*v);
    }
    out += '\n';
    return out;
}

}  // namespace oclab::eval
