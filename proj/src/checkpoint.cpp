#include "oclab/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

#include "oclab/adam.hpp"
#include "oclab/errors.hpp"

namespace oclab {

namespace {
constexpr char kMagic[4] = {'O', 'C', 'L', 'B'};
constexpr uint32_t kVersion = 1;

void write_u64(std::ofstream& f, uint64_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint64_t read_u64(std::ifstream& f) {
    uint64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}
}  // namespace

void save_checkpoint(const std::string& path, const LMParams& params) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw FormatError("save_checkpoint: cannot open " + path);

    nlohmann::ordered_json cfg = {
        {"d_model", params.config.d_model}, {"n_layers", params.config.n_layers},
        {"n_heads", params.config.n_heads}, {"d_ff", params.config.d_ff},
        {"max_seq", params.config.max_seq}, {"seed", params.config.seed},
    };
    std::string cfg_str = cfg.dump();

    f.write(kMagic, 4);
    uint32_t ver = kVersion;
    f.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
    write_u64(f, cfg_str.size());
    f.write(cfg_str.data(), static_cast<std::streamsize>(cfg_str.size()));

    std::vector<double> flat = flatten_params(params.param_list());
    write_u64(f, flat.size());
    f.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
    if (!f) throw FormatError("save_checkpoint: write failed for " + path);
}

LMParams load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("load_checkpoint: cannot open " + path);

    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("load_checkpoint: bad magic in " + path);
    uint32_t ver = 0;
    f.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    if (ver != kVersion)
        throw FormatError("load_checkpoint: unsupported version " + std::to_string(ver));

    uint64_t cfg_len = read_u64(f);
    std::string cfg_str(cfg_len, '\0');
    f.read(cfg_str.data(), static_cast<std::streamsize>(cfg_len));
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(cfg_str);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_checkpoint: bad config block: " + std::string(e.what()));
    }

    TransformerConfig tc;
    tc.d_model = cfg.at("d_model").get<int>();
    tc.n_layers = cfg.at("n_layers").get<int>();
    tc.n_heads = cfg.at("n_heads").get<int>();
    tc.d_ff = cfg.at("d_ff").get<int>();
    tc.max_seq = cfg.at("max_seq").get<int>();
    tc.seed = cfg.at("seed").get<uint64_t>();

    LMParams params = init_learner(tc);
    uint64_t n = read_u64(f);
    if (n != static_cast<uint64_t>(params.param_count()))
        throw FormatError("load_checkpoint: parameter count mismatch in " + path);
    std::vector<double> flat(n);
    f.read(reinterpret_cast<char*>(flat.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!f) throw FormatError("load_checkpoint: truncated file " + path);
    unflatten_params(flat, params.param_list());
    return params;
}

}  // namespace oclab
