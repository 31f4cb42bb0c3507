#include "oclab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oclab/checkpoint.hpp"
#include "oclab/errors.hpp"
#include "oclab/eval.hpp"
#include "oclab/mathx.hpp"
#include "oclab/nab.hpp"
#include "oclab/rcb.hpp"
#include "oclab/rng.hpp"
#include "oclab/stream.hpp"

namespace oclab::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* const kArtifactVersion = "0.1.0";

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to " + path.string());
}

std::string hex64(uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

ordered_json parse_json_object(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(path + ": expected a JSON object");
    return doc;
}

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

// Run labels and stable artifact names come from the directory leaf.
std::string dir_leaf(const std::string& dir) {
    std::string s = dir;
    while (s.size() > 1 && s.back() == '/') s.pop_back();
    std::string leaf = fs::path(s).filename().string();
    return leaf.empty() ? s : leaf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += '"';
    return out;
}

// The manifest is written before any long computation so a failed run still
// records what it was asked to do and what data it saw.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const ordered_json& config,
                    const std::vector<std::pair<std::string, uint64_t>>& inputs) {
    ordered_json m;
    m["artifact_version"] = kArtifactVersion;
    m["command"] = command;
    m["config"] = config;
    ordered_json in = ordered_json::object();
    for (const auto& [path, hash] : inputs) in[path] = "fnv1a64:" + hex64(hash);
    m["inputs"] = in;
    write_text_file(out_dir / "manifest.json", m.dump(2) + "\n");
}

ordered_json run_config_json(const stream::RunConfig& cfg) {
    ordered_json j;
    j["strategy"] = cfg.strategy;
    j["alpha"] = cfg.alpha;
    j["n"] = cfg.n;
    j["buffer_capacity"] = cfg.buffer_capacity;
    j["lr"] = cfg.lr;
    j["batch_size"] = cfg.batch_size;
    j["eval_interval"] = cfg.eval_interval;
    j["seed"] = cfg.seed;
    j["dataset_path"] = cfg.dataset_path;
    j["tau"] = cfg.tau;
    j["dataset_kind"] = cfg.dataset_kind;
    j["abstraction_level"] = cfg.abstraction_level;
    j["bank_dir"] = cfg.bank_dir;
    j["nab_split_ratio"] = cfg.nab_split_ratio;
    j["nab_split_seed"] = cfg.nab_split_seed;
    ordered_json l;
    l["d_model"] = cfg.learner.d_model;
    l["n_layers"] = cfg.learner.n_layers;
    l["n_heads"] = cfg.learner.n_heads;
    l["d_ff"] = cfg.learner.d_ff;
    l["max_seq"] = cfg.learner.max_seq;
    l["seed"] = cfg.learner.seed;
    j["learner"] = l;
    return j;
}

// Rebuilds a RunConfig from a manifest's effective-config snapshot. The
// snapshot carries every knob, so keys are read unconditionally; it is not
// required to pass the presence-scoping rules a user-written config must.
stream::RunConfig run_config_from_json(const ordered_json& j, const std::string& where) {
    stream::RunConfig cfg;
    try {
        cfg.strategy = j.at("strategy").get<std::string>();
        cfg.alpha = j.at("alpha").get<double>();
        cfg.n = j.at("n").get<int>();
        cfg.buffer_capacity = j.at("buffer_capacity").get<size_t>();
        cfg.lr = j.at("lr").get<double>();
        cfg.batch_size = j.at("batch_size").get<int>();
        cfg.eval_interval = j.at("eval_interval").get<int64_t>();
        cfg.seed = j.at("seed").get<uint64_t>();
        cfg.dataset_path = j.at("dataset_path").get<std::string>();
        cfg.tau = j.at("tau").get<double>();
        cfg.dataset_kind = j.at("dataset_kind").get<std::string>();
        cfg.abstraction_level = j.at("abstraction_level").get<std::string>();
        cfg.bank_dir = j.at("bank_dir").get<std::string>();
        cfg.nab_split_ratio = j.at("nab_split_ratio").get<double>();
        cfg.nab_split_seed = j.at("nab_split_seed").get<uint64_t>();
        const ordered_json& l = j.at("learner");
        cfg.learner.d_model = l.at("d_model").get<int>();
        cfg.learner.n_layers = l.at("n_layers").get<int>();
        cfg.learner.n_heads = l.at("n_heads").get<int>();
        cfg.learner.d_ff = l.at("d_ff").get<int>();
        cfg.learner.max_seq = l.at("max_seq").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    cfg.learner.seed = cfg.seed;
    return cfg;
}

ordered_json load_train_manifest(const std::string& run_dir) {
    ordered_json m = parse_json_object(run_dir + "/manifest.json");
    if (!m.contains("command") || m["command"] != "train")
        throw ConfigError(run_dir + ": manifest.json does not describe a training run");
    if (!m.contains("config")) throw ConfigError(run_dir + ": manifest has no config snapshot");
    return m;
}

std::vector<std::pair<std::string, uint64_t>> train_input_hashes(const stream::RunConfig& cfg) {
    std::vector<std::pair<std::string, uint64_t>> inputs;
    inputs.emplace_back(cfg.dataset_path, hash_file(cfg.dataset_path));
    if (cfg.dataset_kind == "rcb") {
        for (const char* name :
             {"relations.json", "rules.json", "typologies.json", "entity_pool.json"}) {
            std::string p = cfg.bank_dir + "/" + name;
            inputs.emplace_back(p, hash_file(p));
        }
    }
    return inputs;
}

// The dataset exactly as the stream sees it: one example per training item
// in file order, abstraction text chosen by the configured level.
struct MaterializedData {
    std::vector<stream::StreamExample> examples;
    std::vector<rcb::RcbInstance> rcb_instances;
    std::vector<nab::NabItem> nab_items;
    std::vector<size_t> nab_known_order;
};

MaterializedData materialize(const stream::RunConfig& cfg) {
    MaterializedData data;
    if (cfg.dataset_kind == "rcb") {
        data.rcb_instances = rcb::load_dataset(cfg.dataset_path);
        data.examples.reserve(data.rcb_instances.size());
        for (const rcb::RcbInstance& inst : data.rcb_instances) {
            const std::string& abstract_text = cfg.abstraction_level == "mask"
                                                   ? inst.abstract_mask
                                               : cfg.abstraction_level == "category"
                                                   ? inst.abstract_category
                                                   : inst.abstract_random;
            data.examples.push_back({inst.id, inst.paragraph, abstract_text});
        }
    } else {
        data.nab_items = nab::load_nab(cfg.dataset_path, cfg.learner.max_seq);
        nab::split_known_unknown(data.nab_items, cfg.nab_split_ratio, cfg.nab_split_seed);
        for (size_t i = 0; i < data.nab_items.size(); ++i) {
            if (data.nab_items[i].split != nab::Split::kKnown) continue;
            data.nab_known_order.push_back(i);
            nab::TrainingExample te = nab::make_training_example(data.nab_items[i]);
            data.examples.push_back(
                {"nab:" + std::to_string(i), te.instance_text, te.abstract_text});
        }
    }
    return data;
}

struct TrainOutcome {
    eval::SummaryRow summary;
    int64_t steps = 0;
    int64_t updates = 0;
};

// Shared by cmd_train and sweep points; throws on failure, leaving whatever
// artifacts were already written (the manifest in particular) in place.
TrainOutcome train_run(const std::string& config_path, const fs::path& out_dir) {
    stream::RunConfig cfg = stream::load_run_config(config_path);
    fs::create_directories(out_dir);
    write_manifest(out_dir, "train", run_config_json(cfg), train_input_hashes(cfg));

    MaterializedData data = materialize(cfg);
    stream::StreamConfig scfg = cfg.stream_config();
    std::vector<std::vector<size_t>> batches = stream::make_stream(data.examples.size(), scfg);
    std::vector<eval::EvalItem> items =
        cfg.dataset_kind == "rcb"
            ? eval::rcb_eval_items(data.rcb_instances, rcb::load_bank(cfg.bank_dir), batches)
            : eval::nab_eval_items(data.nab_items, data.nab_known_order, batches);

    eval::EvalLedger ledger(cfg.eval_interval);
    auto hook = [&](int64_t step, const LMParams& params) {
        eval::evaluate_step(items, params, cfg.tau, step, ledger);
    };
    stream::RunResult res = stream::run_stream(data.examples, scfg, cfg.strategy_config(),
                                               init_learner(cfg.learner), hook);
    if (res.batches != batches) throw Error("stream order diverged from the precomputed plan");

    write_text_file(out_dir / "trace.csv", stream::trace_csv(res.trace));
    std::vector<eval::MetricRow> log = eval::metric_log(items, ledger);
    write_text_file(out_dir / "metrics.csv", eval::metrics_csv(log));

    TrainOutcome outcome;
    outcome.summary = eval::summarize(log);
    outcome.steps = static_cast<int64_t>(res.batches.size());
    outcome.updates = res.total_updates;
    write_text_file(out_dir / "summary.csv",
                    eval::summary_csv_header() +
                        eval::summary_csv_row(dir_leaf(out_dir.string()), outcome.summary));

    std::string hashes = "step,param_hash\n";
    for (size_t i = 0; i < res.param_hashes.size(); ++i)
        hashes += std::to_string(i + 1) + ",fnv1a64:" + hex64(res.param_hashes[i]) + "\n";
    write_text_file(out_dir / "param_hashes.csv", hashes);

    save_checkpoint((out_dir / "checkpoint_start.bin").string(), res.start_params);
    save_checkpoint((out_dir / "checkpoint_final.bin").string(), res.final_params);
    return outcome;
}

std::string svg_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_coord(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};
constexpr int kPaletteSize = 8;

void append_text(std::string& svg, double x, double y, const std::string& anchor, int size,
                 const std::string& content, const std::string& transform = "") {
    svg += "<text x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(y) + "\" text-anchor=\"" +
           anchor + "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) + "\"";
    if (!transform.empty()) svg += " transform=\"" + transform + "\"";
    svg += ">" + svg_escape(content) + "</text>\n";
}

void append_line(std::string& svg, double x1, double y1, double x2, double y2,
                 const std::string& stroke, double width) {
    svg += "<line x1=\"" + fmt_coord(x1) + "\" y1=\"" + fmt_coord(y1) + "\" x2=\"" +
           fmt_coord(x2) + "\" y2=\"" + fmt_coord(y2) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"" + fmt_coord(width) + "\"/>\n";
}

struct Range {
    double lo = 0.0, hi = 1.0;
};

Range padded_range(double lo, double hi, bool seen) {
    if (!seen) return {0.0, 1.0};
    if (hi - lo < 1e-12) {
        double pad = std::max(0.5, 0.1 * std::abs(lo));
        return {lo - pad, hi + pad};
    }
    double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string heat_color(double t) {
    // Blue through near-white to red; t in [0, 1].
    auto lerp = [](int a, int b, double u) {
        return static_cast<int>(std::lround(a + (b - a) * u));
    };
    int r, g, b;
    if (t < 0.5) {
        double u = t * 2.0;
        r = lerp(33, 247, u);
        g = lerp(102, 247, u);
        b = lerp(172, 247, u);
    } else {
        double u = t * 2.0 - 1.0;
        r = lerp(247, 178, u);
        g = lerp(247, 24, u);
        b = lerp(247, 43, u);
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

struct GenConfig {
    uint64_t seed = 42;
    std::string bank_dir = "data/rcb";
    rcb::BuildConfig build;
};

GenConfig load_gen_config(const std::string& path) {
    ordered_json doc = parse_json_object(path);
    reject_unknown_keys(doc, {"seed", "bank_dir", "only", "count_overrides"}, path);
    GenConfig cfg;
    try {
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<uint64_t>();
        if (doc.contains("bank_dir")) cfg.bank_dir = doc["bank_dir"].get<std::string>();
        if (doc.contains("only")) cfg.build.only = doc["only"].get<std::vector<std::string>>();
        if (doc.contains("count_overrides"))
            cfg.build.count_overrides =
                doc["count_overrides"].get<std::map<std::string, int>>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (cfg.bank_dir.empty()) throw ConfigError(path + ": bank_dir must not be empty");
    cfg.build.seed = cfg.seed;
    return cfg;
}

ordered_json gen_config_json(const GenConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.seed;
    j["bank_dir"] = cfg.bank_dir;
    j["only"] = cfg.build.only;
    j["count_overrides"] = cfg.build.count_overrides;
    return j;
}

int fail(const std::string& command, const std::exception& e) {
    std::cerr << "oclab " << command << ": " << e.what() << "\n";
    return 1;
}

}  // namespace

uint64_t hash_file(const std::string& path) {
    std::string bytes = read_text_file(path);
    return fnv1a64(bytes.data(), bytes.size());
}

std::string resolve_out(const std::string& out_flag, const std::string& default_leaf) {
    if (!out_flag.empty() && fs::path(out_flag).is_absolute()) return out_flag;
    const char* env = std::getenv("OCLAB_OUT");
    fs::path root = (env != nullptr && *env != '\0') ? fs::path(env) : fs::path("runs");
    return (root / (out_flag.empty() ? default_leaf : out_flag)).string();
}

int cmd_gen_rcb(const std::string& config_path, const std::string& out_flag) {
    try {
        GenConfig cfg = load_gen_config(config_path);
        rcb::Bank bank = rcb::load_bank(cfg.bank_dir);
        std::vector<std::pair<std::string, uint64_t>> inputs;
        for (const char* name :
             {"relations.json", "rules.json", "typologies.json", "entity_pool.json"}) {
            std::string p = cfg.bank_dir + "/" + name;
            inputs.emplace_back(p, hash_file(p));
        }
        fs::path out = resolve_out(out_flag, "gen_rcb");
        fs::create_directories(out);
        write_manifest(out, "gen-rcb", gen_config_json(cfg), inputs);

        rcb::Dataset ds = rcb::build_dataset(bank, cfg.build);
        rcb::write_dataset(ds, (out / "dataset.jsonl").string(), (out / "stats.csv").string());
        std::cout << "gen-rcb: " << ds.instances.size() << " instances -> "
                  << (out / "dataset.jsonl").string() << "\n";
        for (const rcb::DomainStats& s : ds.stats)
            if (s.domain == "total")
                std::cout << "gen-rcb: total instances " << s.instances << ", derivable "
                          << s.derivable << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail("gen-rcb", e);
    }
}

int cmd_train(const std::string& config_path, const std::string& out_flag) {
    try {
        fs::path out = resolve_out(out_flag, "train");
        TrainOutcome outcome = train_run(config_path, out);
        std::cout << "train: " << outcome.steps << " steps, " << outcome.updates
                  << " updates -> " << out.string() << "\n";
        std::cout << eval::summary_csv_header()
                  << eval::summary_csv_row(dir_leaf(out.string()), outcome.summary);
        return 0;
    } catch (const std::exception& e) {
        return fail("train", e);
    }
}

namespace {

// Axes are enumerated in a fixed canonical order regardless of their order
// in the config, seed innermost, so seed groups stay contiguous and labels
// are stable across rewordings of the same sweep.
const char* const kAxisOrder[] = {"strategy", "abstraction_level", "alpha", "n", "seed"};

struct SweepAxis {
    std::string name;
    std::vector<ordered_json> values;
};

std::string axis_value_label(const ordered_json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

struct SweepPoint {
    std::string name;                       // directory leaf under points/
    std::vector<std::string> group_parts;   // non-seed axis assignments
    ordered_json config;
    bool ok = false;
    std::string error;
    eval::SummaryRow summary;
};

}  // namespace

int cmd_sweep(const std::string& config_path, const std::string& out_flag) {
    try {
        ordered_json doc = parse_json_object(config_path);
        reject_unknown_keys(doc, {"base", "axes"}, config_path);
        if (!doc.contains("base") || !doc["base"].is_object())
            throw ConfigError(config_path + ": missing 'base' run config object");
        if (!doc.contains("axes") || !doc["axes"].is_object())
            throw ConfigError(config_path + ": missing 'axes' object");
        const std::set<std::string> allowed = {"alpha", "n", "seed", "abstraction_level",
                                               "strategy"};
        reject_unknown_keys(doc["axes"], allowed, config_path + ": axes");
        std::vector<SweepAxis> axes;
        for (const char* name : kAxisOrder) {
            if (!doc["axes"].contains(name)) continue;
            const ordered_json& vals = doc["axes"][name];
            if (!vals.is_array() || vals.empty())
                throw ConfigError(config_path + ": axis '" + std::string(name) +
                                  "' must be a non-empty array");
            SweepAxis axis{name, {}};
            for (const ordered_json& v : vals) {
                if (v.is_object() || v.is_array() || v.is_null())
                    throw ConfigError(config_path + ": axis '" + std::string(name) +
                                      "' values must be scalars");
                axis.values.push_back(v);
            }
            axes.push_back(std::move(axis));
        }
        if (axes.empty()) throw ConfigError(config_path + ": at least one axis is required");

        // Input hashes come from the base dataset; every point shares it.
        std::vector<std::pair<std::string, uint64_t>> inputs;
        {
            const ordered_json& base = doc["base"];
            std::string ds = base.contains("dataset_path")
                                 ? base["dataset_path"].get<std::string>()
                                 : std::string();
            if (!ds.empty()) inputs.emplace_back(ds, hash_file(ds));
        }
        fs::path out = resolve_out(out_flag, "sweep");
        fs::create_directories(out / "points");
        write_manifest(out, "sweep", doc, inputs);

        std::vector<SweepPoint> points;
        std::vector<size_t> idx(axes.size(), 0);
        while (true) {
            SweepPoint p;
            p.config = doc["base"];
            std::vector<std::string> parts;
            for (size_t a = 0; a < axes.size(); ++a) {
                const ordered_json& v = axes[a].values[idx[a]];
                p.config[axes[a].name] = v;
                std::string part = axes[a].name + "=" + axis_value_label(v);
                parts.push_back(part);
                if (axes[a].name != "seed") p.group_parts.push_back(part);
            }
            p.name = parts.front();
            for (size_t i = 1; i < parts.size(); ++i) p.name += "_" + parts[i];
            points.push_back(std::move(p));
            size_t a = axes.size();
            while (a > 0 && ++idx[a - 1] == axes[a - 1].values.size()) idx[--a] = 0;
            if (a == 0) break;
        }

        for (SweepPoint& p : points) {
            fs::path pdir = out / "points" / p.name;
            fs::create_directories(pdir);
            fs::path pconfig = pdir / "config.json";
            write_text_file(pconfig, p.config.dump(2) + "\n");
            try {
                TrainOutcome outcome = train_run(pconfig.string(), pdir);
                p.ok = true;
                p.summary = outcome.summary;
                std::cout << "sweep point " << p.name << ": ok\n";
            } catch (const std::exception& e) {
                p.error = e.what();
                std::cout << "sweep point " << p.name << ": failed\n";
                std::cerr << "oclab sweep: point " << p.name << ": " << e.what() << "\n";
            }
        }

        std::string pts = "point,dir,status,error\n";
        for (const SweepPoint& p : points)
            pts += p.name + ",points/" + p.name + "," + (p.ok ? "ok" : "failed") + "," +
                   csv_quote(p.error) + "\n";
        write_text_file(out / "points.csv", pts);

        // Aggregate over seeds: a group is one assignment of the non-seed
        // axes; a metric is reported only when every succeeded run in the
        // group has it.
        std::vector<std::string> group_axes;
        for (const SweepAxis& a : axes)
            if (a.name != "seed") group_axes.push_back(a.name);
        std::vector<std::string> group_order;
        std::map<std::string, std::vector<const SweepPoint*>> groups;
        for (const SweepPoint& p : points) {
            std::string key;
            for (const std::string& part : p.group_parts) key += part + ";";
            if (!groups.count(key)) group_order.push_back(key);
            groups[key].push_back(&p);
        }
        const char* const metric_names[] = {"acc_online_unknown", "acc_online_known",
                                            "f_unknown",          "f_known",
                                            "acc_cumul_unknown",  "acc_cumul_known",
                                            "acc_cumul_all"};
        std::string agg;
        for (const std::string& a : group_axes) agg += a + ",";
        agg += "runs";
        for (const char* m : metric_names) agg += "," + std::string(m) + "_mean," +
                                                  std::string(m) + "_stddev";
        agg += "\n";
        for (const std::string& key : group_order) {
            const std::vector<const SweepPoint*>& members = groups[key];
            for (size_t i = 0; i < group_axes.size(); ++i) {
                const std::string& part = members.front()->group_parts[i];
                agg += part.substr(part.find('=') + 1) + ",";
            }
            std::vector<const SweepPoint*> ok_members;
            for (const SweepPoint* p : members)
                if (p->ok) ok_members.push_back(p);
            agg += std::to_string(ok_members.size());
            auto field = [](const eval::SummaryRow& s, int i) {
                const std::optional<double>* fields[] = {
                    &s.acc_online_unknown, &s.acc_online_known, &s.f_unknown,      &s.f_known,
                    &s.acc_cumul_unknown,  &s.acc_cumul_known,  &s.acc_cumul_all};
                return *fields[i];
            };
            for (int m = 0; m < 7; ++m) {
                std::vector<double> vals;
                bool complete = !ok_members.empty();
                for (const SweepPoint* p : ok_members) {
                    std::optional<double> v = field(p->summary, m);
                    if (!v) {
                        complete = false;
                        break;
                    }
                    vals.push_back(*v);
                }
                if (complete)
                    agg += "," + fmt17(mean_of(vals)) + "," + fmt17(sample_stddev(vals));
                else
                    agg += ",,";
            }
            agg += "\n";
        }
        write_text_file(out / "aggregate.csv", agg);

        size_t ok_count = 0;
        for (const SweepPoint& p : points) ok_count += p.ok ? 1 : 0;
        std::cout << "sweep: " << ok_count << "/" << points.size() << " points succeeded -> "
                  << out.string() << "\n";
        return ok_count == 0 ? 1 : 0;
    } catch (const std::exception& e) {
        return fail("sweep", e);
    }
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<PlotSeries>& series) {
    const double x0 = 70, y0 = 40, w = 550, h = 310;
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    bool seen = false;
    for (const PlotSeries& s : series)
        for (size_t i = 0; i < s.xs.size(); ++i) {
            if (!seen) {
                xlo = xhi = s.xs[i];
                ylo = yhi = s.ys[i];
                seen = true;
            }
            xlo = std::min(xlo, s.xs[i]);
            xhi = std::max(xhi, s.xs[i]);
            ylo = std::min(ylo, s.ys[i]);
            yhi = std::max(yhi, s.ys[i]);
        }
    Range xr = padded_range(xlo, xhi, seen);
    Range yr = padded_range(ylo, yhi, seen);
    auto sx = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * w; };
    auto sy = [&](double v) { return y0 + h - (v - yr.lo) / (yr.hi - yr.lo) * h; };

    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\" width=\"640\" "
        "height=\"400\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"#ffffff\"/>\n";
    append_text(svg, 320, 22, "middle", 15, title);
    append_line(svg, x0, y0 + h, x0 + w, y0 + h, "#000000", 1.0);
    append_line(svg, x0, y0, x0, y0 + h, "#000000", 1.0);
    for (int i = 0; i < 5; ++i) {
        double xv = xr.lo + (xr.hi - xr.lo) * (i / 4.0);
        double yv = yr.lo + (yr.hi - yr.lo) * (i / 4.0);
        append_line(svg, sx(xv), y0 + h, sx(xv), y0 + h + 5, "#000000", 1.0);
        append_text(svg, sx(xv), y0 + h + 18, "middle", 11, fmt_tick(xv));
        append_line(svg, x0 - 5, sy(yv), x0, sy(yv), "#000000", 1.0);
        append_text(svg, x0 - 8, sy(yv) + 4, "end", 11, fmt_tick(yv));
    }
    append_text(svg, x0 + w / 2, 392, "middle", 12, x_label);
    append_text(svg, 18, y0 + h / 2, "middle", 12, y_label,
                "rotate(-90 18 " + fmt_coord(y0 + h / 2) + ")");
    for (size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const std::string color = kPalette[si % kPaletteSize];
        if (!s.xs.empty()) {
            std::string pts;
            for (size_t i = 0; i < s.xs.size(); ++i) {
                if (i) pts += ' ';
                pts += fmt_coord(sx(s.xs[i])) + "," + fmt_coord(sy(s.ys[i]));
            }
            svg += "<polyline fill=\"none\" stroke=\"" + color +
                   "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        }
        double ly = y0 + 14 + 18.0 * static_cast<double>(si);
        append_line(svg, x0 + w - 150, ly - 4, x0 + w - 122, ly - 4, color, 2.0);
        append_text(svg, x0 + w - 116, ly, "start", 12, s.label);
    }
    svg += "</svg>\n";
    return svg;
}

std::string heatmap_svg(const std::string& title, const std::vector<double>& a_axis,
                        const std::vector<double>& b_axis,
                        const std::vector<analysis::LandscapeCell>& cells) {
    if (cells.size() != a_axis.size() * b_axis.size())
        throw InputError("heatmap cell count does not match the axes");
    const double x0 = 70, y0 = 40, w = 480, h = 330;
    const size_t na = a_axis.size(), nb = b_axis.size();
    double lo = 0.0, hi = 0.0;
    bool seen = false;
    for (const analysis::LandscapeCell& c : cells) {
        if (c.error) continue;
        if (!seen) {
            lo = hi = c.loss;
            seen = true;
        }
        lo = std::min(lo, c.loss);
        hi = std::max(hi, c.loss);
    }
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 420\" width=\"640\" "
        "height=\"420\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"#ffffff\"/>\n";
    append_text(svg, 320, 22, "middle", 15, title);
    const double cw = w / static_cast<double>(na), ch = h / static_cast<double>(nb);
    for (size_t ai = 0; ai < na; ++ai)
        for (size_t bi = 0; bi < nb; ++bi) {
            const analysis::LandscapeCell& c = cells[ai * nb + bi];
            std::string color = "#404040";
            if (!c.error) {
                double t = (seen && hi > lo) ? (c.loss - lo) / (hi - lo) : 0.5;
                color = heat_color(t);
            }
            double x = x0 + static_cast<double>(ai) * cw;
            double y = y0 + h - static_cast<double>(bi + 1) * ch;
            svg += "<rect x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(y) + "\" width=\"" +
                   fmt_coord(cw) + "\" height=\"" + fmt_coord(ch) + "\" fill=\"" + color +
                   "\"/>\n";
        }
    for (int i = 0; i < 5; ++i) {
        size_t ai = na < 2 ? 0 : static_cast<size_t>(std::lround(i * (na - 1) / 4.0));
        size_t bi = nb < 2 ? 0 : static_cast<size_t>(std::lround(i * (nb - 1) / 4.0));
        double x = x0 + (static_cast<double>(ai) + 0.5) * cw;
        double y = y0 + h - (static_cast<double>(bi) + 0.5) * ch;
        append_line(svg, x, y0 + h, x, y0 + h + 5, "#000000", 1.0);
        append_text(svg, x, y0 + h + 18, "middle", 11, fmt_tick(a_axis[ai]));
        append_line(svg, x0 - 5, y, x0, y, "#000000", 1.0);
        append_text(svg, x0 - 8, y + 4, "end", 11, fmt_tick(b_axis[bi]));
    }
    append_text(svg, x0 + w / 2, 410, "middle", 12, "a (along the trajectory)");
    append_text(svg, 18, y0 + h / 2, "middle", 12, "b (orthogonal direction)",
                "rotate(-90 18 " + fmt_coord(y0 + h / 2) + ")");
    append_text(svg, x0 + w + 10, y0 + 12, "start", 11,
                "max " + (seen ? fmt_tick(hi) : std::string("n/a")));
    append_text(svg, x0 + w + 10, y0 + h, "start", 11,
                "min " + (seen ? fmt_tick(lo) : std::string("n/a")));
    svg += "</svg>\n";
    return svg;
}

int cmd_landscape(const LandscapeArgs& args) {
    try {
        ordered_json manifest = load_train_manifest(args.run_dir);
        stream::RunConfig cfg =
            run_config_from_json(manifest["config"], args.run_dir + "/manifest.json");
        std::string start_path = args.run_dir + "/checkpoint_start.bin";
        std::string final_path = args.run_dir + "/checkpoint_final.bin";
        if (!fs::exists(start_path)) throw Error("missing checkpoint " + start_path);
        if (!fs::exists(final_path)) throw Error("missing checkpoint " + final_path);
        LMParams start = load_checkpoint(start_path);
        LMParams end = load_checkpoint(final_path);

        analysis::LandscapeConfig lcfg;
        lcfg.a_samples = args.a_samples;
        lcfg.a_min = args.a_min;
        lcfg.a_max = args.a_max;
        lcfg.b_samples = args.b_samples;
        lcfg.b_min = args.b_min;
        lcfg.b_max = args.b_max;
        lcfg.perp_seed = args.perp_seed;
        lcfg.validate();

        fs::path out = args.out_dir.empty() ? fs::path(args.run_dir) / "landscape"
                                            : fs::path(resolve_out(args.out_dir, "landscape"));
        fs::create_directories(out);
        ordered_json snapshot;
        snapshot["run_dir"] = args.run_dir;
        snapshot["a_samples"] = args.a_samples;
        snapshot["a_min"] = args.a_min;
        snapshot["a_max"] = args.a_max;
        snapshot["b_samples"] = args.b_samples;
        snapshot["b_min"] = args.b_min;
        snapshot["b_max"] = args.b_max;
        snapshot["perp_seed"] = args.perp_seed;
        snapshot["eval_frac"] = args.eval_frac;
        write_manifest(out, "landscape", snapshot,
                       {{start_path, hash_file(start_path)},
                        {final_path, hash_file(final_path)},
                        {cfg.dataset_path, hash_file(cfg.dataset_path)}});

        MaterializedData data = materialize(cfg);
        analysis::EvalSet eval_set = analysis::landscape_eval_set(data.examples, args.eval_frac);
        analysis::LandscapeGrid grid = analysis::landscape(start, end, eval_set, lcfg);

        write_text_file(out / "grid.csv", analysis::grid_csv(grid));
        write_text_file(out / "stats.json", analysis::stats_json(grid));
        write_text_file(out / "heatmap_instance.svg",
                        heatmap_svg("instance loss over the interpolation plane", grid.a_axis,
                                    grid.b_axis, grid.instance_cells));
        write_text_file(out / "heatmap_abstract.svg",
                        heatmap_svg("abstract loss over the interpolation plane", grid.a_axis,
                                    grid.b_axis, grid.abstract_cells));

        // Endpoint fidelity: the interpolated plane must reproduce the raw
        // checkpoint losses wherever (0, 0) and (1, 0) land on the grid.
        size_t a0 = grid.a_axis.size(), a1 = grid.a_axis.size(), b0 = grid.b_axis.size();
        for (size_t i = 0; i < grid.a_axis.size(); ++i) {
            if (grid.a_axis[i] == 0.0) a0 = i;
            if (grid.a_axis[i] == 1.0) a1 = i;
        }
        for (size_t i = 0; i < grid.b_axis.size(); ++i)
            if (grid.b_axis[i] == 0.0) b0 = i;
        if (a0 == grid.a_axis.size() || a1 == grid.a_axis.size() || b0 == grid.b_axis.size()) {
            std::cout << "landscape: endpoints are off-grid, fidelity check skipped\n";
        } else {
            auto mean_nll = [&](const LMParams& p, const std::vector<std::string>& texts) {
                double s = 0.0;
                for (const std::string& t : texts) s += nll(p, std::string_view{}, t);
                return s / static_cast<double>(texts.size());
            };
            double worst = 0.0;
            const size_t nb = grid.b_axis.size();
            struct Check {
                const std::vector<analysis::LandscapeCell>* cells;
                const std::vector<std::string>* texts;
                const LMParams* params;
                size_t ai;
            };
            for (const Check& c :
                 {Check{&grid.instance_cells, &eval_set.instance_texts, &start, a0},
                  Check{&grid.instance_cells, &eval_set.instance_texts, &end, a1},
                  Check{&grid.abstract_cells, &eval_set.abstract_texts, &start, a0},
                  Check{&grid.abstract_cells, &eval_set.abstract_texts, &end, a1}}) {
                const analysis::LandscapeCell& cell = (*c.cells)[c.ai * nb + b0];
                if (cell.error) throw Error("endpoint cell evaluated to a non-finite loss");
                worst = std::max(worst, std::abs(cell.loss - mean_nll(*c.params, *c.texts)));
            }
            std::cout << "landscape: endpoint max |delta| = " << fmt17(worst) << "\n";
            if (worst > 1e-9) {
                std::cerr << "oclab landscape: endpoint losses deviate from the checkpoints "
                             "(max |delta| "
                          << fmt17(worst) << " > 1e-9)\n";
                return 1;
            }
        }
        std::cout << "landscape: " << grid.instance_cells.size() << " cells per loss kind -> "
                  << out.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail("landscape", e);
    }
}

int cmd_grad_diag(const GradDiagArgs& args) {
    try {
        stream::StrategyKind kind;
        if (args.strategy == "sft")
            kind = stream::StrategyKind::kSft;
        else if (args.strategy == "aat")
            kind = stream::StrategyKind::kAat;
        else if (args.strategy == "er")
            kind = stream::StrategyKind::kEr;
        else
            throw UsageError("strategy must be sft, aat, or er");
        if (args.checkpoint != "start" && args.checkpoint != "final")
            throw UsageError("checkpoint must be start or final");
        if (args.num_batches < 2) throw UsageError("at least two batches are required");

        ordered_json manifest = load_train_manifest(args.run_dir);
        stream::RunConfig cfg =
            run_config_from_json(manifest["config"], args.run_dir + "/manifest.json");
        std::string ckpt_path = args.run_dir + "/checkpoint_" + args.checkpoint + ".bin";
        if (!fs::exists(ckpt_path)) throw Error("missing checkpoint " + ckpt_path);
        LMParams params = load_checkpoint(ckpt_path);

        MaterializedData data = materialize(cfg);
        std::vector<std::vector<size_t>> plan =
            stream::make_stream(data.examples.size(), cfg.stream_config());
        std::vector<std::vector<stream::StreamExample>> batches;
        for (const std::vector<size_t>& b : plan) {
            if (batches.size() == static_cast<size_t>(args.num_batches)) break;
            std::vector<stream::StreamExample> batch;
            for (size_t i : b) batch.push_back(data.examples[i]);
            batches.push_back(std::move(batch));
        }
        analysis::AlignmentReport rep =
            analysis::grad_alignment(params, batches, kind, args.alpha);

        ordered_json j;
        j["strategy"] = args.strategy;
        j["alpha"] = args.alpha;
        j["checkpoint"] = args.checkpoint;
        j["num_batches"] = batches.size();
        j["mean_cosine"] = rep.mean_cosine;
        j["cosine_variance"] = rep.cosine_variance;
        j["grad_norms"] = rep.grad_norms;
        j["pairwise_cosines"] = rep.pairwise_cosines;
        std::string out_path = args.out_path;
        if (out_path.empty()) {
            char alpha_part[32] = "";
            if (args.strategy == "aat")
                std::snprintf(alpha_part, sizeof(alpha_part), "_a%g", args.alpha);
            out_path = args.run_dir + "/grad_diag_" + args.strategy + alpha_part + "_" +
                       args.checkpoint + ".json";
        }
        write_text_file(out_path, j.dump(2) + "\n");
        std::cout << "grad-diag: mean pairwise cosine " << fmt17(rep.mean_cosine)
                  << " (variance " << fmt17(rep.cosine_variance) << ") over " << batches.size()
                  << " batches -> " << out_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail("grad-diag", e);
    }
}

namespace {

struct MetricSeries {
    std::vector<int64_t> steps;                 // full evaluation grid
    std::vector<std::optional<double>> values;  // parallel to steps
};

// One run's metrics.csv keyed by (metric, kind).
std::map<std::pair<std::string, std::string>, MetricSeries> load_metrics(
    const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "step,metric,kind,value,absent_flag")
        throw FormatError(path + ": unexpected metrics header");
    std::map<std::pair<std::string, std::string>, MetricSeries> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        size_t pos = 0;
        while (true) {
            size_t comma = line.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (fields.size() != 5)
            throw FormatError(path + ":" + std::to_string(lineno) + ": expected 5 fields");
        MetricSeries& s = out[{fields[1], fields[2]}];
        s.steps.push_back(std::stoll(fields[0]));
        s.values.push_back(fields[4] == "1" ? std::optional<double>{}
                                            : std::optional<double>{std::stod(fields[3])});
    }
    return out;
}

}  // namespace

int cmd_plot(const PlotArgs& args) {
    try {
        if (args.run_dirs.empty()) throw UsageError("at least one run directory is required");
        if (args.window < 1 || args.window % 2 == 0)
            throw UsageError("window must be an odd integer >= 1");
        struct RunMetrics {
            std::string label;
            std::map<std::pair<std::string, std::string>, MetricSeries> series;
        };
        std::vector<RunMetrics> runs;
        for (const std::string& dir : args.run_dirs)
            runs.push_back({dir_leaf(dir), load_metrics(dir + "/metrics.csv")});

        fs::path out = resolve_out(args.out_dir, "plot");
        fs::create_directories(out);
        {
            ordered_json snapshot;
            snapshot["runs"] = args.run_dirs;
            snapshot["window"] = args.window;
            std::vector<std::pair<std::string, uint64_t>> inputs;
            for (const std::string& dir : args.run_dirs) {
                std::string p = dir + "/metrics.csv";
                inputs.emplace_back(p, hash_file(p));
            }
            write_manifest(out, "plot", snapshot, inputs);
        }

        const std::pair<const char*, const char*> charts[] = {
            {"acc_online", "known"},  {"acc_online", "unknown"},
            {"forgetting", "known"},  {"forgetting", "unknown"}};
        for (const auto& [metric, kind] : charts) {
            const std::pair<std::string, std::string> key = {metric, kind};
            // All runs must share one evaluation grid; smoothing never
            // papers over runs evaluated at different cadences.
            bool have_ref = false;
            const MetricSeries* ref = nullptr;
            for (const RunMetrics& r : runs) {
                auto it = r.series.find(key);
                const MetricSeries* s = it == r.series.end() ? nullptr : &it->second;
                if (!have_ref) {
                    ref = s;
                    have_ref = true;
                } else if ((s == nullptr) != (ref == nullptr) ||
                           (s != nullptr && ref != nullptr && s->steps != ref->steps)) {
                    throw FormatError("evaluation step grids differ between runs for " +
                                      std::string(metric) + "/" + std::string(kind));
                }
            }
            std::vector<PlotSeries> series;
            for (const RunMetrics& r : runs) {
                PlotSeries ps;
                ps.label = r.label;
                auto it = r.series.find(key);
                if (it != r.series.end()) {
                    std::vector<double> ys;
                    for (size_t i = 0; i < it->second.steps.size(); ++i) {
                        if (!it->second.values[i]) continue;
                        ps.xs.push_back(static_cast<double>(it->second.steps[i]));
                        ys.push_back(*it->second.values[i]);
                    }
                    ps.ys = moving_average(ys, args.window);
                }
                series.push_back(std::move(ps));
            }
            std::string base = std::string("plot_") + metric + "_" + kind;
            std::string title = std::string(metric) + " (" + kind + ")";
            write_text_file(out / (base + ".svg"),
                            line_chart_svg(title, "stream step", metric, series));
            // Raw values are preserved beside the smoothed chart.
            std::string csv = "step";
            for (const RunMetrics& r : runs) csv += "," + r.label;
            csv += "\n";
            if (ref != nullptr) {
                for (size_t i = 0; i < ref->steps.size(); ++i) {
                    csv += std::to_string(ref->steps[i]);
                    for (const RunMetrics& r : runs) {
                        auto it = r.series.find(key);
                        csv += ",";
                        if (it != r.series.end()) csv += fmt_opt(it->second.values[i]);
                    }
                    csv += "\n";
                }
            }
            write_text_file(out / (base + ".csv"), csv);
        }
        std::cout << "plot: " << runs.size() << " run(s), window " << args.window << " -> "
                  << out.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        return fail("plot", e);
    }
}

int cmd_summarize(const std::vector<std::string>& run_dirs, const std::string& out_flag) {
    try {
        if (run_dirs.empty()) throw UsageError("at least one run directory is required");
        std::string combined = eval::summary_csv_header();
        std::vector<std::pair<std::string, uint64_t>> inputs;
        for (const std::string& dir : run_dirs) {
            std::string path = dir + "/summary.csv";
            std::string content = read_text_file(path);
            if (content.rfind(eval::summary_csv_header(), 0) != 0)
                throw FormatError(path + ": unexpected summary header");
            combined += content.substr(eval::summary_csv_header().size());
            inputs.emplace_back(path, hash_file(path));
        }
        std::cout << combined;
        if (!out_flag.empty()) {
            fs::path out = resolve_out(out_flag, "summary");
            fs::create_directories(out);
            ordered_json snapshot;
            snapshot["runs"] = run_dirs;
            write_manifest(out, "summarize", snapshot, inputs);
            write_text_file(out / "summary.csv", combined);
        }
        return 0;
    } catch (const std::exception& e) {
        return fail("summarize", e);
    }
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"desk-scale online continual learning laboratory"};
    app.require_subcommand(0, 1);

    auto* version = app.add_subcommand("version", "print the tool version");

    std::string gen_config, gen_out;
    auto* gen = app.add_subcommand("gen-rcb", "generate a relational closure dataset");
    gen->add_option("--config", gen_config, "generator config JSON")->required();
    gen->add_option("--out", gen_out, "output directory");

    std::string train_config, train_out;
    auto* train = app.add_subcommand("train", "run one online training stream");
    train->add_option("--config", train_config, "run config JSON")->required();
    train->add_option("--out", train_out, "output directory");

    std::string sweep_config, sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run a grid of training streams");
    sweep->add_option("--config", sweep_config, "sweep config JSON with base and axes")
        ->required();
    sweep->add_option("--out", sweep_out, "output directory");

    LandscapeArgs ls;
    auto* landscape =
        app.add_subcommand("landscape", "loss surface on the checkpoint interpolation plane");
    landscape->add_option("--run", ls.run_dir, "training run directory")->required();
    landscape->add_option("--out", ls.out_dir, "output directory (default <run>/landscape)");
    landscape->add_option("--a-samples", ls.a_samples, "grid points along the trajectory");
    landscape->add_option("--a-min", ls.a_min, "trajectory coordinate lower bound");
    landscape->add_option("--a-max", ls.a_max, "trajectory coordinate upper bound");
    landscape->add_option("--b-samples", ls.b_samples, "grid points along the orthogonal axis");
    landscape->add_option("--b-min", ls.b_min, "orthogonal coordinate lower bound");
    landscape->add_option("--b-max", ls.b_max, "orthogonal coordinate upper bound");
    landscape->add_option("--perp-seed", ls.perp_seed, "orthogonal direction seed");
    landscape->add_option("--eval-frac", ls.eval_frac, "frozen evaluation slice fraction");

    GradDiagArgs gd;
    auto* grad = app.add_subcommand("grad-diag", "per-batch gradient alignment at a checkpoint");
    grad->add_option("--run", gd.run_dir, "training run directory")->required();
    grad->add_option("--strategy", gd.strategy, "sft or aat (er is rejected)");
    auto* alpha_opt = grad->add_option("--alpha", gd.alpha, "abstraction weight, aat only");
    grad->add_option("--batches", gd.num_batches, "number of leading stream batches");
    grad->add_option("--checkpoint", gd.checkpoint, "start or final");
    grad->add_option("--out", gd.out_path, "output JSON path");

    PlotArgs pl;
    auto* plot = app.add_subcommand("plot", "charts of online accuracy and forgetting");
    plot->add_option("runs", pl.run_dirs, "training run directories")->required();
    plot->add_option("--window", pl.window, "odd moving-average window, 1 plots raw values");
    plot->add_option("--out", pl.out_dir, "output directory");

    std::vector<std::string> sum_dirs;
    std::string sum_out;
    auto* sum = app.add_subcommand("summarize", "merge run summary tables");
    sum->add_option("runs", sum_dirs, "training run directories")->required();
    sum->add_option("--out", sum_out, "output directory (default stdout only)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (version->parsed()) {
        std::cout << "oclab " << kArtifactVersion << "\n";
        return 0;
    }
    if (gen->parsed()) return cmd_gen_rcb(gen_config, gen_out);
    if (train->parsed()) return cmd_train(train_config, train_out);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out);
    if (landscape->parsed()) return cmd_landscape(ls);
    if (grad->parsed()) {
        if (alpha_opt->count() > 0 && gd.strategy != "aat") {
            std::cerr << "oclab grad-diag: --alpha is only meaningful for strategy aat\n";
            return 1;
        }
        return cmd_grad_diag(gd);
    }
    if (plot->parsed()) return cmd_plot(pl);
    if (sum->parsed()) return cmd_summarize(sum_dirs, sum_out);
    std::cout << app.help();
    return 0;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("oclab");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace oclab::cli
