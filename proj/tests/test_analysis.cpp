#include "oclab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "oclab/errors.hpp"
#include "oclab/learner.hpp"
#include "oclab/mathx.hpp"
#include "oclab/stream.hpp"

using namespace oclab;
using namespace oclab::analysis;

namespace {

TransformerConfig tiny_config(uint64_t seed = 42) {
    TransformerConfig cfg;
    cfg.d_model = 16;
    cfg.n_layers = 1;
    cfg.n_heads = 2;
    cfg.d_ff = 32;
    cfg.max_seq = 64;
    cfg.seed = seed;
    return cfg;
}

std::vector<stream::StreamExample> toy_dataset() {
    return {
        {"ex0", "Mara is Ivo's mother.", "[E1] is [E2]'s mother."},
        {"ex1", "Ovid is Ana's father.", "[E1] is [E2]'s father."},
        {"ex2", "Nola is Eri's sister.", "[E1] is [E2]'s sister."},
        {"ex3", "Hugo is Mia's uncle.", "[E1] is [E2]'s uncle."},
    };
}

// a second checkpoint a few gradient-free perturbations away
LMParams shifted_params(const LMParams& start, uint64_t seed, double scale) {
    std::vector<double> flat = flatten(start);
    Rng rng(seed);
    for (double& x : flat) x += scale * rng.next_gauss();
    LMParams out = start;
    auto mut = out.param_list();
    unflatten_params(flat, mut);
    return out;
}

double measured_loss(const LMParams& p, const std::vector<std::string>& texts) {
    double sum = 0.0;
    for (const auto& t : texts) sum += nll(p, std::string_view{}, t);
    return sum / static_cast<double>(texts.size());
}

}  // namespace

TEST_CASE("interpolation endpoints reproduce the checkpoints exactly") {
    LMParams a = init_learner(tiny_config(1));
    LMParams b = shifted_params(a, 99, 0.05);
    auto d = make_perp_direction(a, b, 7);

    std::vector<double> fa = flatten(a), fb = flatten(b);
    std::vector<double> f0 = flatten(interp_point(a, b, d, 0.0, 0.0));
    std::vector<double> f1 = flatten(interp_point(a, b, d, 1.0, 0.0));
    std::vector<double> fm = flatten(interp_point(a, b, d, 0.5, 0.0));
    REQUIRE(f0.size() == fa.size());
    for (size_t i = 0; i < fa.size(); ++i) {
        CHECK(f0[i] == fa[i]);
        CHECK(f1[i] == doctest::Approx(fb[i]).epsilon(1e-12));
        CHECK(fm[i] == doctest::Approx(0.5 * (fa[i] + fb[i])).epsilon(1e-12));
    }
}

TEST_CASE("interpolation rejects mismatched shapes") {
    LMParams a = init_learner(tiny_config(1));
    LMParams b = shifted_params(a, 99, 0.05);
    std::vector<double> short_dir(flatten(a).size() - 1, 0.0);
    CHECK_THROWS_AS(interp_point(a, b, short_dir, 0.5, 0.1), ShapeError);

    auto cfg2 = tiny_config(3);
    cfg2.d_model = 32;
    cfg2.d_ff = 64;
    LMParams wide = init_learner(cfg2);
    CHECK_THROWS_AS(make_perp_direction(a, wide, 7), ShapeError);
}

TEST_CASE("perpendicular direction is unit, orthogonal, and seed-dependent") {
    auto cfg = tiny_config(4);  // embeddings alone push this past 10^4 dims
    cfg.d_model = 32;
    cfg.d_ff = 128;
    cfg.max_seq = 128;
    LMParams a = init_learner(cfg);
    LMParams b = shifted_params(a, 5, 0.05);

    std::vector<double> fa = flatten(a), fb = flatten(b);
    std::vector<double> diff(fa.size());
    for (size_t i = 0; i < fa.size(); ++i) diff[i] = fb[i] - fa[i];

    auto d1 = make_perp_direction(a, b, 7);
    CHECK(std::abs(dot(d1, diff)) < 1e-10);
    CHECK(std::abs(norm2(d1) - 1.0) < 1e-12);

    auto d1_again = make_perp_direction(a, b, 7);
    CHECK(d1 == d1_again);

    auto d2 = make_perp_direction(a, b, 8);
    CHECK(std::abs(dot(d2, diff)) < 1e-10);
    CHECK(fa.size() >= 10000);  // the near-orthogonality bound assumes high dimension
    CHECK(std::abs(cosine_similarity(d1, d2)) < 0.5);

    CHECK_THROWS_AS(make_perp_direction(a, a, 7), DegenerateError);
}

TEST_CASE("untouched parameter blocks stay untouched off the trajectory") {
    LMParams a = init_learner(tiny_config(6));
    // move only the last block so every other block's trajectory is zero
    std::vector<double> flat = flatten(a);
    auto blocks = a.param_list();
    size_t last = blocks.back()->size();
    for (size_t i = flat.size() - last; i < flat.size(); ++i) flat[i] += 0.25;
    LMParams b = a;
    auto mut = b.param_list();
    unflatten_params(flat, mut);

    auto d = make_perp_direction(a, b, 11);
    for (size_t i = 0; i + last < d.size(); ++i) CHECK(d[i] == 0.0);
    double tail = 0.0;
    for (size_t i = d.size() - last; i < d.size(); ++i) tail += d[i] * d[i];
    CHECK(std::abs(std::sqrt(tail) - 1.0) < 1e-12);
}

TEST_CASE("eval slice freezes the leading fraction of the dataset") {
    auto ds = toy_dataset();
    EvalSet s = landscape_eval_set(ds, 0.5);
    REQUIRE(s.instance_texts.size() == 2);
    CHECK(s.instance_texts[0] == ds[0].instance_text);
    CHECK(s.abstract_texts[1] == ds[1].abstract_text);

    // floor, but never empty
    CHECK(landscape_eval_set(ds, 0.1).instance_texts.size() == 1);
    CHECK(landscape_eval_set(ds, 1.0).instance_texts.size() == 4);

    CHECK_THROWS_AS(landscape_eval_set({}, 0.1), InputError);
    CHECK_THROWS_AS(landscape_eval_set(ds, 0.0), InputError);
    CHECK_THROWS_AS(landscape_eval_set(ds, 1.5), InputError);
    auto missing = ds;
    missing[0].abstract_text.clear();
    CHECK_THROWS_AS(landscape_eval_set(missing, 0.5), InputError);
}

TEST_CASE("grid axes hit the endpoints and the trajectory row exactly") {
    LandscapeConfig cfg;
    cfg.validate();
    LMParams a = init_learner(tiny_config(8));
    LMParams b = shifted_params(a, 13, 0.02);
    EvalSet set = landscape_eval_set(toy_dataset(), 0.5);

    LandscapeConfig small = cfg;
    small.a_samples = 5;
    small.b_samples = 3;
    auto grid = landscape(a, b, set, small);
    REQUIRE(grid.a_axis.size() == 5);
    REQUIRE(grid.b_axis.size() == 3);
    CHECK(grid.a_axis.front() == -0.5);
    CHECK(grid.a_axis.back() == 1.5);
    CHECK(std::count(grid.a_axis.begin(), grid.a_axis.end(), 0.0) == 1);
    CHECK(std::count(grid.a_axis.begin(), grid.a_axis.end(), 1.0) == 1);
    CHECK(std::count(grid.b_axis.begin(), grid.b_axis.end(), 0.0) == 1);

    LandscapeConfig bad = cfg;
    bad.a_samples = 1;
    CHECK_THROWS_AS(landscape(a, b, set, bad), ConfigError);
    bad = cfg;
    bad.b_min = 0.3;
    bad.b_max = -0.3;
    CHECK_THROWS_AS(landscape(a, b, set, bad), ConfigError);
    CHECK_THROWS_AS(landscape(a, b, EvalSet{}, cfg), InputError);
}

TEST_CASE("default grid has 147 cells per kind and endpoint-faithful losses") {
    LMParams a = init_learner(tiny_config(9));
    LMParams b = shifted_params(a, 17, 0.02);
    EvalSet set = landscape_eval_set(toy_dataset(), 0.5);

    auto grid = landscape(a, b, set);
    REQUIRE(grid.a_axis.size() == 21);
    REQUIRE(grid.b_axis.size() == 7);
    REQUIRE(grid.instance_cells.size() == 147);
    REQUIRE(grid.abstract_cells.size() == 147);
    CHECK(grid.instance_stats.error_cells == 0);
    CHECK(grid.abstract_stats.error_cells == 0);

    double l0i = measured_loss(a, set.instance_texts);
    double l1i = measured_loss(b, set.instance_texts);
    double l0a = measured_loss(a, set.abstract_texts);
    double l1a = measured_loss(b, set.abstract_texts);
    int checked = 0;
    for (size_t i = 0; i < grid.instance_cells.size(); ++i) {
        const auto& c = grid.instance_cells[i];
        if (c.b != 0.0) continue;
        if (c.a == 0.0) {
            CHECK(std::abs(c.loss - l0i) < 1e-9);
            CHECK(std::abs(grid.abstract_cells[i].loss - l0a) < 1e-9);
            ++checked;
        }
        if (c.a == 1.0) {
            CHECK(std::abs(c.loss - l1i) < 1e-9);
            CHECK(std::abs(grid.abstract_cells[i].loss - l1a) < 1e-9);
            ++checked;
        }
    }
    CHECK(checked == 2);

    // determinism, and the perpendicular seed changes off-axis cells only
    auto again = landscape(a, b, set);
    for (size_t i = 0; i < grid.instance_cells.size(); ++i) {
        CHECK(grid.instance_cells[i].loss == again.instance_cells[i].loss);
    }
    LandscapeConfig other;
    other.perp_seed = 1234;
    auto reseeded = landscape(a, b, set, other);
    for (size_t i = 0; i < grid.instance_cells.size(); ++i) {
        if (grid.instance_cells[i].b == 0.0) {
            CHECK(reseeded.instance_cells[i].loss == grid.instance_cells[i].loss);
        }
    }
}

TEST_CASE("grid corners match direct loss at the interpolated parameters") {
    LMParams a = init_learner(tiny_config(10));
    LMParams b = shifted_params(a, 19, 0.02);
    EvalSet set = landscape_eval_set(toy_dataset(), 0.25);

    LandscapeConfig cfg;
    cfg.a_samples = 3;
    cfg.b_samples = 3;
    auto grid = landscape(a, b, set, cfg);
    auto d = make_perp_direction(a, b, cfg.perp_seed);

    for (size_t i : {size_t(0), grid.instance_cells.size() - 1}) {
        const auto& c = grid.instance_cells[i];
        LMParams p = interp_point(a, b, d, c.a, c.b);
        CHECK(c.loss == doctest::Approx(measured_loss(p, set.instance_texts)).epsilon(1e-12));
    }
}

TEST_CASE("a head zeroed on the whole path flattens the landscape") {
    // both checkpoints share zero token embeddings; the tied output head then
    // pins every logit to zero no matter where the grid wanders
    auto cfg = tiny_config(12);
    LMParams a = init_learner(cfg);
    auto blocks = a.param_list();
    std::vector<double> flat = flatten(a);
    size_t embed = blocks.front()->size();
    for (size_t i = 0; i < embed; ++i) flat[i] = 0.0;
    {
        auto mut = a.param_list();
        unflatten_params(flat, mut);
    }
    LMParams b = a;
    std::vector<double> fb = flatten(b);
    for (size_t i = embed; i < std::min(fb.size(), embed + 64); ++i) fb[i] += 0.5;
    {
        auto mut = b.param_list();
        unflatten_params(fb, mut);
    }

    EvalSet set = landscape_eval_set(toy_dataset(), 0.5);
    LandscapeConfig small;
    small.a_samples = 5;
    small.b_samples = 3;
    auto grid = landscape(a, b, set, small);

    const double uniform = std::log(258.0);
    for (const auto& c : grid.instance_cells) {
        CHECK(c.loss == doctest::Approx(uniform).epsilon(1e-12));
    }
    CHECK(grid.instance_stats.variance < 1e-24);
    CHECK(grid.instance_stats.cv < 1e-12);
    CHECK(grid.instance_stats.improved_nats_mean < 1e-12);
    CHECK(grid.instance_stats.adverse_nats_mean < 1e-12);
}

TEST_CASE("grid statistics equal a direct recount over the cell list") {
    LMParams a = init_learner(tiny_config(14));
    LMParams b = shifted_params(a, 23, 0.05);
    EvalSet set = landscape_eval_set(toy_dataset(), 0.5);
    LandscapeConfig cfg;
    cfg.a_samples = 9;
    cfg.b_samples = 3;
    auto grid = landscape(a, b, set, cfg);

    for (const auto* cells : {&grid.instance_cells, &grid.abstract_cells}) {
        const auto st = landscape_stats(*cells);
        std::vector<double> vals;
        for (const auto& c : *cells)
            if (!c.error) vals.push_back(c.loss);
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= static_cast<double>(vals.size());
        CHECK(st.variance == doctest::Approx(var).epsilon(1e-12));
        CHECK(st.cv == doctest::Approx(std::sqrt(var) / mean).epsilon(1e-12));

        double l0 = 0.0, l1 = 0.0;
        for (const auto& c : *cells) {
            if (c.b == 0.0 && c.a == 0.0) l0 = c.loss;
            if (c.b == 0.0 && c.a == 1.0) l1 = c.loss;
        }
        std::vector<double> imp, adv;
        for (const auto& c : *cells) {
            if (c.b != 0.0 || c.a <= 0.0 || c.a >= 1.0) continue;
            double gap = (1.0 - c.a) * l0 + c.a * l1 - c.loss;
            if (gap > 0.0) imp.push_back(gap);
            if (gap < 0.0) adv.push_back(-gap);
        }
        double want_imp = 0.0, want_max = 0.0, want_adv = 0.0;
        if (!imp.empty()) {
            for (double v : imp) want_imp += v;
            want_imp /= static_cast<double>(imp.size());
            want_max = *std::max_element(imp.begin(), imp.end());
        }
        if (!adv.empty()) {
            for (double v : adv) want_adv += v;
            want_adv /= static_cast<double>(adv.size());
        }
        CHECK(st.improved_nats_mean == doctest::Approx(want_imp).epsilon(1e-12));
        CHECK(st.improved_nats_max == doctest::Approx(want_max).epsilon(1e-12));
        CHECK(st.adverse_nats_mean == doctest::Approx(want_adv).epsilon(1e-12));
        // a nonzero trajectory of losses produces a nonzero chord-gap summary
        CHECK(st.improved_nats_mean + st.adverse_nats_mean > 0.0);
    }
}

TEST_CASE("error cells are counted and excluded from the statistics") {
    std::vector<LandscapeCell> cells = {
        {0.0, 0.0, 2.0, false},  {0.25, 0.0, 1.0, false},
        {0.5, 0.0, 3.0, false},  {0.75, 0.0, 0.0, true},
        {1.0, 0.0, 4.0, false},  {0.5, 0.1, 100.0, true},
    };
    auto st = landscape_stats(cells);
    CHECK(st.error_cells == 2);

    std::vector<double> vals = {2.0, 1.0, 3.0, 4.0};
    CHECK(st.variance == doctest::Approx(variance_of(vals)).epsilon(1e-12));
    CHECK(st.cv ==
          doctest::Approx(std::sqrt(variance_of(vals)) / mean_of(vals)).epsilon(1e-12));

    // chord from 2.0 to 4.0; the error cell at a = 0.75 contributes nothing
    // gaps: a=0.25 -> 2.5 - 1.0 = 1.5 improved; a=0.5 -> 3.0 - 3.0 = 0
    CHECK(st.improved_nats_mean == doctest::Approx(1.5));
    CHECK(st.improved_nats_max == doctest::Approx(1.5));
    CHECK(st.adverse_nats_mean == 0.0);

    // an error cell at an endpoint suppresses the chord-gap summary
    cells[0].error = true;
    auto st2 = landscape_stats(cells);
    CHECK(st2.error_cells == 3);
    CHECK(st2.improved_nats_mean == 0.0);
    CHECK(st2.improved_nats_max == 0.0);
    CHECK(st2.variance > 0.0);

    CHECK(landscape_stats({}).variance == 0.0);
    CHECK(landscape_stats({{0.0, 0.0, 1.0, true}}).error_cells == 1);
}

TEST_CASE("grid csv and stats json carry every cell and both kinds") {
    LMParams a = init_learner(tiny_config(15));
    LMParams b = shifted_params(a, 29, 0.03);
    EvalSet set = landscape_eval_set(toy_dataset(), 0.25);
    LandscapeConfig cfg;
    cfg.a_samples = 3;
    cfg.b_samples = 2;
    auto grid = landscape(a, b, set, cfg);

    std::string csv = grid_csv(grid);
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 1 + 2 * 6);
    CHECK(csv.rfind("a,b,loss_kind,loss,cell_error_flag\n", 0) == 0);
    CHECK(csv.find(",instance,") != std::string::npos);
    CHECK(csv.find(",abstract,") != std::string::npos);
    CHECK(csv.find(",1\n") == std::string::npos);  // no error cells here

    auto j = nlohmann::json::parse(stats_json(grid));
    for (const char* kind : {"instance", "abstract"}) {
        REQUIRE(j.contains(kind));
        for (const char* key : {"variance", "cv", "improved_nats_mean", "improved_nats_max",
                                "adverse_nats_mean", "error_cells"}) {
            CHECK(j[kind].contains(key));
        }
    }
    CHECK(j["instance"]["variance"].get<double>() ==
          doctest::Approx(grid.instance_stats.variance));
    CHECK(j["perp_seed"].get<uint64_t>() == cfg.perp_seed);

    // error cells leave the loss column empty and set the flag
    LandscapeGrid synth;
    synth.instance_cells = {{0.5, 0.25, 0.0, true}};
    std::string csv2 = grid_csv(synth);
    CHECK(csv2.find("0.5,0.25,instance,,1\n") != std::string::npos);
}

TEST_CASE("alignment report scores identical batches as fully aligned") {
    LMParams p = init_learner(tiny_config(20));
    auto ds = toy_dataset();
    std::vector<stream::StreamExample> batch = {ds[0], ds[1]};

    auto rep = grad_alignment(p, {batch, batch, batch}, stream::StrategyKind::kSft, 0.0);
    REQUIRE(rep.grads.size() == 3);
    REQUIRE(rep.pairwise_cosines.size() == 3);
    for (double c : rep.pairwise_cosines) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.mean_cosine == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.cosine_variance == doctest::Approx(0.0));
    for (double n : rep.grad_norms) CHECK(n > 0.0);
    CHECK(rep.grad_norms[0] == rep.grad_norms[1]);
}

TEST_CASE("alignment cosines stay within bounds and match a recount") {
    LMParams p = init_learner(tiny_config(21));
    auto ds = toy_dataset();
    std::vector<std::vector<stream::StreamExample>> batches = {
        {ds[0]}, {ds[1]}, {ds[2]}, {ds[3]}};

    auto rep = grad_alignment(p, batches, stream::StrategyKind::kSft, 0.0);
    REQUIRE(rep.grads.size() == 4);
    REQUIRE(rep.pairwise_cosines.size() == 6);
    size_t pos = 0;
    for (size_t i = 0; i < 4; ++i) {
        for (size_t j = i + 1; j < 4; ++j, ++pos) {
            double c = rep.pairwise_cosines[pos];
            CHECK(c >= -1.0);
            CHECK(c <= 1.0);
            CHECK(c == doctest::Approx(cosine_similarity(rep.grads[i], rep.grads[j]))
                           .epsilon(1e-12));
        }
    }
    CHECK(rep.mean_cosine == doctest::Approx(mean_of(rep.pairwise_cosines)));
    CHECK(rep.cosine_variance == doctest::Approx(variance_of(rep.pairwise_cosines)));
    for (size_t i = 0; i < 4; ++i) {
        CHECK(rep.grad_norms[i] == doctest::Approx(norm2(rep.grads[i])));
    }
}

TEST_CASE("zero-alpha alignment equals the plain-tuning report exactly") {
    LMParams p = init_learner(tiny_config(22));
    auto ds = toy_dataset();
    std::vector<std::vector<stream::StreamExample>> batches = {{ds[0], ds[1]}, {ds[2], ds[3]}};

    auto sft = grad_alignment(p, batches, stream::StrategyKind::kSft, 0.0);
    auto aat0 = grad_alignment(p, batches, stream::StrategyKind::kAat, 0.0);
    REQUIRE(sft.grads.size() == aat0.grads.size());
    for (size_t b = 0; b < sft.grads.size(); ++b) CHECK(sft.grads[b] == aat0.grads[b]);
    CHECK(sft.pairwise_cosines == aat0.pairwise_cosines);
    CHECK(sft.mean_cosine == aat0.mean_cosine);
}

TEST_CASE("combined gradients are the alpha blend of the pure gradients") {
    LMParams p = init_learner(tiny_config(23));
    auto ds = toy_dataset();
    std::vector<std::vector<stream::StreamExample>> batches = {{ds[0], ds[1]}, {ds[2], ds[3]}};

    auto instant = grad_alignment(p, batches, stream::StrategyKind::kSft, 0.0);
    auto abstract_only = grad_alignment(p, batches, stream::StrategyKind::kAat, 1.0);
    auto mixed = grad_alignment(p, batches, stream::StrategyKind::kAat, 0.3);

    for (size_t b = 0; b < batches.size(); ++b) {
        REQUIRE(mixed.grads[b].size() == instant.grads[b].size());
        double worst = 0.0;
        for (size_t i = 0; i < mixed.grads[b].size(); ++i) {
            double want = 0.3 * abstract_only.grads[b][i] + 0.7 * instant.grads[b][i];
            worst = std::max(worst, std::abs(mixed.grads[b][i] - want));
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("alignment rejects unusable inputs") {
    LMParams p = init_learner(tiny_config(24));
    auto ds = toy_dataset();
    std::vector<std::vector<stream::StreamExample>> one = {{ds[0]}};
    CHECK_THROWS_AS(grad_alignment(p, one, stream::StrategyKind::kSft, 0.0), InputError);

    std::vector<std::vector<stream::StreamExample>> two = {{ds[0]}, {ds[1]}};
    CHECK_THROWS_AS(grad_alignment(p, two, stream::StrategyKind::kEr, 0.0), InputError);
    CHECK_THROWS_AS(grad_alignment(p, two, stream::StrategyKind::kAat, 1.5), InputError);
    CHECK_THROWS_AS(grad_alignment(p, two, stream::StrategyKind::kAat, -0.1), InputError);

    auto noabs = ds;
    noabs[0].abstract_text.clear();
    std::vector<std::vector<stream::StreamExample>> missing = {{noabs[0]}, {ds[1]}};
    CHECK_THROWS_AS(grad_alignment(p, missing, stream::StrategyKind::kAat, 0.5), InputError);
    // plain tuning never reads the abstraction
    auto ok = grad_alignment(p, missing, stream::StrategyKind::kSft, 0.0);
    CHECK(ok.grads.size() == 2);

    std::vector<std::vector<stream::StreamExample>> empty_batch = {{}, {ds[1]}};
    CHECK_THROWS_AS(grad_alignment(p, empty_batch, stream::StrategyKind::kSft, 0.0),
                    InputError);
}

TEST_CASE("abstraction-weighted alignment on shared-shape batches is logged") {
    // same typology, masked abstractions identical across batches: the
    // directional prediction is higher mean cosine than instance-only tuning.
    // Logged here; the acceptance gate asserts it.
    LMParams p = init_learner(tiny_config(25));
    std::vector<std::vector<stream::StreamExample>> batches = {
        {{"b0e0", "Mara is Ivo's mother.", "[E1] is [E2]'s mother."},
         {"b0e1", "Pia is Rex's mother.", "[E1] is [E2]'s mother."}},
        {{"b1e0", "Lena is Tom's mother.", "[E1] is [E2]'s mother."},
         {"b1e1", "Faye is Gus's mother.", "[E1] is [E2]'s mother."}},
        {{"b2e0", "Ida is Leo's mother.", "[E1] is [E2]'s mother."},
         {"b2e1", "Nia is Kai's mother.", "[E1] is [E2]'s mother."}},
    };
    auto sft = grad_alignment(p, batches, stream::StrategyKind::kSft, 0.0);
    auto aat = grad_alignment(p, batches, stream::StrategyKind::kAat, 0.5);
    MESSAGE("mean cosine, instance-only: " << sft.mean_cosine
                                           << ", abstraction-weighted: " << aat.mean_cosine);
    for (double c : aat.pairwise_cosines) {
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
    }
}
