#include "oclab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "oclab/errors.hpp"
#include "oclab/mathx.hpp"
#include "oclab/rng.hpp"
#include "oclab/tensor.hpp"

namespace oclab::analysis {

std::vector<double> flatten(const LMParams& p) { return flatten_params(p.param_list()); }

namespace {

std::vector<size_t> block_sizes(const LMParams& p) {
    std::vector<size_t> sizes;
    for (const Tensor* t : p.param_list()) sizes.push_back(t->data.size());
    return sizes;
}

LMParams unflatten_copy(const LMParams& like, const std::vector<double>& flat) {
    LMParams out = like;
    auto mut = out.param_list();
    unflatten_params(flat, mut);
    return out;
}

}  // namespace

LMParams interp_point(const LMParams& start, const LMParams& end,
                      const std::vector<double>& d_perp, double a, double b) {
    std::vector<double> s = flatten(start);
    std::vector<double> e = flatten(end);
    if (s.size() != e.size() || s.size() != d_perp.size()) {
        throw ShapeError("interpolation endpoints and direction disagree in length");
    }
    double norm_sq = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        double d = e[i] - s[i];
        norm_sq += d * d;
    }
    const double traj_norm = std::sqrt(norm_sq);
    std::vector<double> point(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        point[i] = s[i] + a * (e[i] - s[i]) + b * traj_norm * d_perp[i];
    }
    return unflatten_copy(start, point);
}

std::vector<double> make_perp_direction(const LMParams& start, const LMParams& end,
                                        uint64_t seed) {
    std::vector<double> s = flatten(start);
    std::vector<double> e = flatten(end);
    if (s.size() != e.size()) {
        throw ShapeError("direction endpoints disagree in length");
    }
    std::vector<double> diff(s.size());
    double total = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        diff[i] = e[i] - s[i];
        total += diff[i] * diff[i];
    }
    if (total == 0.0) throw DegenerateError("zero trajectory has no perpendicular");

    Rng rng = Rng::derive(seed, "perp_direction");
    std::vector<double> g(s.size());
    for (double& x : g) x = rng.next_gauss();

    // match each parameter block's norm to the trajectory's norm there, so
    // blocks the trajectory never touched contribute nothing
    size_t off = 0;
    for (size_t n : block_sizes(start)) {
        double dn = 0.0, gn = 0.0;
        for (size_t i = off; i < off + n; ++i) {
            dn += diff[i] * diff[i];
            gn += g[i] * g[i];
        }
        double factor = gn > 0.0 ? std::sqrt(dn / gn) : 0.0;
        for (size_t i = off; i < off + n; ++i) g[i] *= factor;
        off += n;
    }

    const double proj = dot(g, diff) / total;
    for (size_t i = 0; i < g.size(); ++i) g[i] -= proj * diff[i];

    const double gnorm = norm2(g);
    if (gnorm == 0.0) throw DegenerateError("direction collapsed onto the trajectory");
    for (double& x : g) x /= gnorm;
    return g;
}

EvalSet landscape_eval_set(const std::vector<stream::StreamExample>& dataset, double frac) {
    if (dataset.empty()) throw InputError("empty dataset has no eval slice");
    if (!(frac > 0.0) || frac > 1.0) throw InputError("eval slice fraction out of (0, 1]");
    size_t n = std::max<size_t>(1, static_cast<size_t>(frac * dataset.size()));
    EvalSet set;
    for (size_t i = 0; i < n; ++i) {
        if (dataset[i].instance_text.empty() || dataset[i].abstract_text.empty()) {
            throw InputError("eval slice example " + dataset[i].id + " lacks text");
        }
        set.instance_texts.push_back(dataset[i].instance_text);
        set.abstract_texts.push_back(dataset[i].abstract_text);
    }
    return set;
}

void LandscapeConfig::validate() const {
    if (a_samples < 2 || b_samples < 2) throw ConfigError("grid needs >= 2 samples per axis");
    if (!(a_min < a_max) || !(b_min < b_max)) throw ConfigError("grid axis range is empty");
    if (!std::isfinite(a_min) || !std::isfinite(a_max) || !std::isfinite(b_min) ||
        !std::isfinite(b_max)) {
        throw ConfigError("grid axis range must be finite");
    }
}

LandscapeStats landscape_stats(const std::vector<LandscapeCell>& cells) {
    LandscapeStats st;
    std::vector<double> finite;
    for (const LandscapeCell& c : cells) {
        if (c.error) {
            ++st.error_cells;
        } else {
            finite.push_back(c.loss);
        }
    }
    if (finite.empty()) return st;
    st.variance = variance_of(finite);
    double mean = mean_of(finite);
    st.cv = mean != 0.0 ? std::sqrt(st.variance) / mean : 0.0;

    // chord-gap summary needs both endpoints of the on-trajectory row
    const LandscapeCell* at0 = nullptr;
    const LandscapeCell* at1 = nullptr;
    for (const LandscapeCell& c : cells) {
        if (c.error || c.b != 0.0) continue;
        if (c.a == 0.0) at0 = &c;
        if (c.a == 1.0) at1 = &c;
    }
    if (at0 == nullptr || at1 == nullptr) return st;
    std::vector<double> improved, adverse;
    for (const LandscapeCell& c : cells) {
        if (c.error || c.b != 0.0 || c.a <= 0.0 || c.a >= 1.0) continue;
        double chord = (1.0 - c.a) * at0->loss + c.a * at1->loss;
        double gap = chord - c.loss;
        if (gap > 0.0) improved.push_back(gap);
        if (gap < 0.0) adverse.push_back(-gap);
    }
    if (!improved.empty()) {
        st.improved_nats_mean = mean_of(improved);
        st.improved_nats_max = *std::max_element(improved.begin(), improved.end());
    }
    if (!adverse.empty()) st.adverse_nats_mean = mean_of(adverse);
    return st;
}

namespace {

double mean_text_nll(const LMParams& p, const std::vector<std::string>& texts) {
    double sum = 0.0;
    for (const std::string& t : texts) sum += nll(p, std::string_view{}, t);
    return sum / static_cast<double>(texts.size());
}

LandscapeCell eval_cell(const LMParams& p, double a, double b,
                        const std::vector<std::string>& texts) {
    LandscapeCell cell;
    cell.a = a;
    cell.b = b;
    cell.loss = mean_text_nll(p, texts);
    cell.error = !std::isfinite(cell.loss);
    return cell;
}

}  // namespace

LandscapeGrid landscape(const LMParams& start, const LMParams& end, const EvalSet& eval_set,
                        const LandscapeConfig& cfg) {
    cfg.validate();
    if (eval_set.instance_texts.empty() || eval_set.abstract_texts.empty()) {
        throw InputError("landscape needs a non-empty eval set");
    }
    LandscapeGrid grid;
    grid.perp_seed = cfg.perp_seed;
    for (int i = 0; i < cfg.a_samples; ++i) {
        grid.a_axis.push_back(cfg.a_min + (cfg.a_max - cfg.a_min) *
                                              (static_cast<double>(i) / (cfg.a_samples - 1)));
    }
    for (int i = 0; i < cfg.b_samples; ++i) {
        grid.b_axis.push_back(cfg.b_min + (cfg.b_max - cfg.b_min) *
                                              (static_cast<double>(i) / (cfg.b_samples - 1)));
    }
    std::vector<double> d_perp = make_perp_direction(start, end, cfg.perp_seed);
    for (double a : grid.a_axis) {
        for (double b : grid.b_axis) {
            LMParams p = interp_point(start, end, d_perp, a, b);
            grid.instance_cells.push_back(eval_cell(p, a, b, eval_set.instance_texts));
            grid.abstract_cells.push_back(eval_cell(p, a, b, eval_set.abstract_texts));
        }
    }
    grid.instance_stats = landscape_stats(grid.instance_cells);
    grid.abstract_stats = landscape_stats(grid.abstract_cells);
    return grid;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_cells(std::string& out, const std::vector<LandscapeCell>& cells,
                  const char* kind) {
    for (const LandscapeCell& c : cells) {
        out += fmt(c.a);
        out += ',';
        out += fmt(c.b);
        out += ',';
        out += kind;
        out += ',';
        if (!c.error) out += fmt(c.loss);
        out += c.error ? ",1\n" : ",0\n";
    }
}

}  // namespace

std::string grid_csv(const LandscapeGrid& grid) {
    std::string out = "a,b,loss_kind,loss,cell_error_flag\n";
    append_cells(out, grid.instance_cells, "instance");
    append_cells(out, grid.abstract_cells, "abstract");
    return out;
}

std::string stats_json(const LandscapeGrid& grid) {
    auto pack = [](const LandscapeStats& st) {
        nlohmann::json j;
        j["variance"] = st.variance;
        j["cv"] = st.cv;
        j["improved_nats_mean"] = st.improved_nats_mean;
        j["improved_nats_max"] = st.improved_nats_max;
        j["adverse_nats_mean"] = st.adverse_nats_mean;
        j["error_cells"] = st.error_cells;
        return j;
    };
    nlohmann::json j;
    j["instance"] = pack(grid.instance_stats);
    j["abstract"] = pack(grid.abstract_stats);
    j["perp_seed"] = grid.perp_seed;
    return j.dump(2) + "\n";
}

namespace {

// mean NLL node over whole texts, mirroring the training-step loss graph
int batch_text_loss(Tape& tape, TapedModel& model, const std::vector<std::string>& texts) {
    int acc = -1;
    for (const std::string& t : texts) {
        int l = model.loss({}, ByteTokenizer::encode(t));
        acc = acc < 0 ? l : tape.add(acc, l);
    }
    return tape.scale(acc, 1.0 / static_cast<double>(texts.size()));
}

std::vector<double> first_update_grad(const LMParams& ckpt,
                                      const std::vector<stream::StreamExample>& batch,
                                      bool combined, double alpha) {
    if (batch.empty()) throw InputError("empty batch has no gradient");
    std::vector<std::string> inst, abs;
    for (const stream::StreamExample& ex : batch) {
        inst.push_back(ex.instance_text);
        if (combined) {
            if (ex.abstract_text.empty()) {
                throw InputError("example " + ex.id + " lacks an abstraction");
            }
            abs.push_back(ex.abstract_text);
        }
    }
    Tape tape;
    TapedModel model(tape, ckpt);
    int loss;
    if (combined) {
        int la = batch_text_loss(tape, model, abs);
        int li = batch_text_loss(tape, model, inst);
        loss = tape.add(tape.scale(la, alpha), tape.scale(li, 1.0 - alpha));
    } else {
        loss = batch_text_loss(tape, model, inst);
    }
    auto grads = tape.backward(loss);
    std::vector<double> flat;
    for (int id : model.leaf_ids()) {
        const Tensor& g = grads[id];
        if (g.data.empty())  // leaf unreachable from this loss: zero gradient
            flat.insert(flat.end(), tape.value(id).size(), 0.0);
        else
            flat.insert(flat.end(), g.data.begin(), g.data.end());
    }
    return flat;
}

}  // namespace

AlignmentReport grad_alignment(const LMParams& ckpt,
                               const std::vector<std::vector<stream::StreamExample>>& batches,
                               stream::StrategyKind kind, double alpha) {
    if (batches.size() < 2) throw InputError("alignment needs at least two batches");
    if (kind == stream::StrategyKind::kEr) {
        throw InputError("replay strategies have no fixed-checkpoint first update");
    }
    if (alpha < 0.0 || alpha > 1.0 || !std::isfinite(alpha)) {
        throw InputError("alpha out of [0, 1]");
    }
    const bool combined = kind == stream::StrategyKind::kAat && alpha != 0.0;

    AlignmentReport rep;
    for (const auto& batch : batches) {
        rep.grads.push_back(first_update_grad(ckpt, batch, combined, alpha));
        rep.grad_norms.push_back(norm2(rep.grads.back()));
    }
    for (size_t i = 0; i < rep.grads.size(); ++i) {
        for (size_t j = i + 1; j < rep.grads.size(); ++j) {
            double c = cosine_similarity(rep.grads[i], rep.grads[j]);
            rep.pairwise_cosines.push_back(std::clamp(c, -1.0, 1.0));
        }
    }
    rep.mean_cosine = mean_of(rep.pairwise_cosines);
    rep.cosine_variance = variance_of(rep.pairwise_cosines);
    return rep;
}

}  // namespace oclab::analysis
