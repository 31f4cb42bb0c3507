#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oclab/learner.hpp"

namespace oclab::nab {

enum class Split { kKnown, kUnknown };

// One narrative continuation task: a shared context and two endings, tied to
// the proverb whose motif the narrative instantiates.
struct NabItem {
    std::string proverb_id;
    std::string proverb;
    std::string context;
    std::string correct_ending;
    std::string distractor_ending;
    Split split = Split::kKnown;
};

// Load and validate a JSONL file with records
// {proverb_id, proverb, context, correct_ending, distractor_ending}.
// Rejected with a line-numbered FormatError: parse failures, unknown or
// missing keys, empty fields, correct == distractor, duplicate
// (proverb_id, context), one proverb_id carrying two proverb texts, leading
// whitespace on an ending or trailing whitespace on a context, and items
// whose scored sequence would not fit the learner window
// (|context| + 1 + |ending| > max_seq for either ending).
std::vector<NabItem> load_nab(const std::string& path, int max_seq = TransformerConfig{}.max_seq);

// Flag each item in place. Per proverb, floor(ratio * m) of its m narratives
// stay known and the rest become unknown, chosen by a stream derived from
// (seed, proverb_id) so the draw is independent of file order across
// proverbs. Every proverb must end up with at least one narrative on each
// side; SplitError otherwise (covers ratio 1.0 and single-narrative
// proverbs).
void split_known_unknown(std::vector<NabItem>& items, double ratio, uint64_t seed);

struct TrainingExample {
    std::string instance_text;  // context ++ " " ++ correct_ending
    std::string abstract_text;  // the proverb, shared across the narratives
};

// Known items only; an unknown-split item is held out from training and
// asking for its example is a UsageError.
TrainingExample make_training_example(const NabItem& item);

// True iff the correct ending is strictly more likely than the distractor
// given the context (the shared " " separator is part of the conditioning
// prefix). An exact tie counts as incorrect.
bool eval_pair(const LMParams& params, const NabItem& item);

}  // namespace oclab::nab
