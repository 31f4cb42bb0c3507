#include "oclab/nab.hpp"

#include <fstream>
#include <map>
#include <set>
#include <utility>

#include "json.hpp"

#include "oclab/errors.hpp"
#include "oclab/rng.hpp"

namespace oclab::nab {

namespace {

using nlohmann::ordered_json;

const char* const kFields[] = {"proverb_id", "proverb", "context", "correct_ending",
                               "distractor_ending"};

std::string field(const ordered_json& rec, const char* key, const std::string& where) {
    auto it = rec.find(key);
    if (it == rec.end() || !it->is_string())
        throw FormatError(where + ": missing string field '" + key + "'");
    std::string v = it->get<std::string>();
    if (v.empty()) throw FormatError(where + ": empty field '" + key + "'");
    return v;
}

}  // namespace

std::vector<NabItem> load_nab(const std::string& path, int max_seq) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);

    std::vector<NabItem> items;
    std::map<std::string, std::string> proverb_text;  // id -> canonical text
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::string where = path + ":" + std::to_string(lineno);
        ordered_json rec;
        try {
            rec = ordered_json::parse(line);
        } catch (const ordered_json::exception& e) {
            throw FormatError(where + ": " + e.what());
        }
        if (!rec.is_object()) throw FormatError(where + ": record is not an object");
        for (const auto& [key, value] : rec.items()) {
            (void)value;
            bool known = false;
            for (const char* f : kFields) known = known || key == f;
            if (!known) throw FormatError(where + ": unknown key '" + key + "'");
        }

        NabItem item;
        item.proverb_id = field(rec, "proverb_id", where);
        item.proverb = field(rec, "proverb", where);
        item.context = field(rec, "context", where);
        item.correct_ending = field(rec, "correct_ending", where);
        item.distractor_ending = field(rec, "distractor_ending", where);

        if (item.correct_ending == item.distractor_ending)
            throw FormatError(where + ": correct and distractor endings are identical");
        if (item.context.back() == ' ')
            throw FormatError(where + ": context ends with whitespace");
        for (const std::string* e : {&item.correct_ending, &item.distractor_ending})
            if (e->front() == ' ')
                throw FormatError(where + ": ending starts with whitespace");

        // scored sequence is context ++ " " ++ ending; the model input holds
        // |context| + 1 + |ending| ids after the BOS shift
        for (const std::string* e : {&item.correct_ending, &item.distractor_ending}) {
            size_t need = item.context.size() + 1 + e->size();
            if (need > static_cast<size_t>(max_seq))
                throw FormatError(where + ": item needs " + std::to_string(need) +
                                  " tokens but max_seq is " + std::to_string(max_seq));
        }

        auto [pit, fresh] = proverb_text.emplace(item.proverb_id, item.proverb);
        if (!fresh && pit->second != item.proverb)
            throw FormatError(where + ": proverb_id '" + item.proverb_id +
                              "' carries two different proverb texts");
        if (!seen.insert({item.proverb_id, item.context}).second)
            throw FormatError(where + ": duplicate (proverb_id, context)");

        items.push_back(std::move(item));
    }
    return items;
}

void split_known_unknown(std::vector<NabItem>& items, double ratio, uint64_t seed) {
    std::map<std::string, std::vector<size_t>> groups;
    for (size_t i = 0; i < items.size(); ++i)
        groups[items[i].proverb_id].push_back(i);

    for (auto& [pid, idx] : groups) {
        size_t m = idx.size();
        if (m < 2)
            throw SplitError("proverb '" + pid + "' has a single narrative; " +
                             "it cannot appear in both splits");
        auto known = static_cast<size_t>(ratio * static_cast<double>(m));
        if (known >= m)
            throw SplitError("ratio " + std::to_string(ratio) + " leaves proverb '" +
                             pid + "' with no unknown narratives");
        if (known == 0)
            throw SplitError("ratio " + std::to_string(ratio) + " leaves proverb '" +
                             pid + "' with no known narratives");
        Rng rng = Rng::derive(seed, "nab_split:" + pid);
        rng.shuffle(idx);
        for (size_t j = 0; j < idx.size(); ++j)
            items[idx[j]].split = j < m - known ? Split::kUnknown : Split::kKnown;
    }
}

TrainingExample make_training_example(const NabItem& item) {
    if (item.split != Split::kKnown)
        throw UsageError("training example requested for unknown-split narrative of '" +
                         item.proverb_id + "'");
    return {item.context + " " + item.correct_ending, item.proverb};
}

bool eval_pair(const LMParams& params, const NabItem& item) {
    std::string prefix = item.context + " ";
    double correct = seq_logprob(params, prefix, item.correct_ending);
    double distractor = seq_logprob(params, prefix, item.distractor_ending);
    return correct > distractor;
}

}  // namespace oclab::nab
