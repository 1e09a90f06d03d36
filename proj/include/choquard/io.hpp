// SPDX-License-Identifier: Apache-2.0
//
// Serialization: radial profiles as annotated CSV, reports as JSON with a
// fixed key order and every float printed with 12 significant digits (so
// identical configs produce byte-identical files), and config parsing.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "choquard/bubbles.hpp"
#include "choquard/experiments.hpp"
#include "choquard/fit.hpp"
#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/spectrum.hpp"

namespace choquard {

/// %.12g rendering used for every float in JSON/CSV reports.
std::string fmt_g12(double x);

/// Profile file format: `# N=<int> mu=<float> tail_inner=<float>
/// tail_outer=<float>` then `r,value` rows. Absent tails are stored as the
/// sentinel 1e9. Grids must be log-uniform; node values are written with
/// 17 significant digits so read-back is exact.
std::string profile_to_csv(const RadialProfile& p, double mu);
std::pair<RadialProfile, double> profile_from_csv(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Bubble families as JSON:
/// {"N":..,"mu":..,"bubbles":[{"lambda":..,"xi":[..]}],"alpha":[..]}.
std::string family_to_json(const BubbleFamily& fam);
BubbleFamily family_from_json(const std::string& text);

/// Reports (JSON text, schema files under schemas/).
std::string constants_report_json(int dim, double mu);
std::string deficit_report_json(const DeficitReport& rep);
std::string residual_report_json(int dim, double mu, double dual_norm,
                                 double grad_norm);
std::string fit_report_json(const FitResult& fit);
std::string spectrum_report_json(int dim, double mu, const SpectrumResult& sp);
std::string sweep_report_json(const SweepResult& sweep);
std::string sweep_report_csv(const SweepResult& sweep);
std::string slope_report_json(const SlopeRecord& rec);
std::string kernel_test_report_json(int dim, double mu, int n, double max_rel_error,
                                    double tolerance);

/// Sweep configuration:
/// {"scenario":"single"|"multi", "N":.., "mu":.., "kappa":..,
///  "ratios":[..], "eps":[..], "perturbations":[..],
///  "grid":{"n":..,"r_min":..,"r_max":..}, "delta":.., "seed":..}.
/// Missing fields fall back to documented defaults; "scenario" defaults to
/// "multi" when kappa >= 2 or ratios are given, else "single".
struct SweepConfig {
    std::string scenario;
    int dim = 0;
    double mu = 0.0;
    int kappa = 1;
    std::vector<double> ratios;
    std::vector<double> eps;
    std::vector<std::string> perturbations;
    int n = 2048;
    double r_min = 1e-4;
    double r_max = 1e4;
    double delta = 0.1;
};
SweepConfig parse_sweep_config(const std::string& text);

}  // namespace choquard
