#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oclab/analysis.hpp"

namespace oclab::cli {

// Tool and artifact version, stamped into every run manifest.
extern const char* const kArtifactVersion;

// fnv1a64 over the raw bytes of the file, for manifest input stamps.
uint64_t hash_file(const std::string& path);

// Output directory resolution: an absolute --out is used verbatim; a
// relative one (or the command default when --out is omitted) lands under
// the output root, which is $OCLAB_OUT when set and "runs" otherwise.
std::string resolve_out(const std::string& out_flag, const std::string& default_leaf);

struct LandscapeArgs {
    std::string run_dir;
    std::string out_dir;  // default: <run_dir>/landscape
    int a_samples = 21;
    double a_min = -0.5, a_max = 1.5;
    int b_samples = 7;
    double b_min = -0.3, b_max = 0.3;
    uint64_t perp_seed = 42;
    double eval_frac = 0.1;
};

struct GradDiagArgs {
    std::string run_dir;
    std::string strategy = "aat";  // sft | aat
    double alpha = 0.5;            // aat only
    int num_batches = 8;
    std::string checkpoint = "final";  // start | final
    std::string out_path;              // default: <run_dir>/grad_diag_<...>.json
};

struct PlotArgs {
    std::vector<std::string> run_dirs;
    std::string out_dir;
    int window = 5;  // centered moving average, odd; 1 plots the raw series
};

// One named line on a chart; xs and ys run in parallel.
struct PlotSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};

// Self-contained SVG documents. Both emit a fixed text-node layout: title,
// one label per axis, five ticks per axis, then one legend entry per series
// (line chart) or a min/max loss pair (heatmap).
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<PlotSeries>& series);
std::string heatmap_svg(const std::string& title, const std::vector<double>& a_axis,
                        const std::vector<double>& b_axis,
                        const std::vector<analysis::LandscapeCell>& cells);

// Subcommand entry points. Each resolves its output directory, writes a
// manifest before any long computation, reports failures on stderr, and
// returns a process exit code instead of exiting.
int cmd_gen_rcb(const std::string& config_path, const std::string& out_flag);
int cmd_train(const std::string& config_path, const std::string& out_flag);
int cmd_sweep(const std::string& config_path, const std::string& out_flag);
int cmd_landscape(const LandscapeArgs& args);
int cmd_grad_diag(const GradDiagArgs& args);
int cmd_plot(const PlotArgs& args);
int cmd_summarize(const std::vector<std::string>& run_dirs, const std::string& out_flag);

// Full argument-vector entry point used by the binary; the overload without
// the program name is for in-process driving.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace oclab::cli
