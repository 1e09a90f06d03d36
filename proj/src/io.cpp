// SPDX-License-Identifier: Apache-2.0
#include "choquard/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"

namespace choquard {

namespace {

constexpr double kTailSentinel = 1e9;  // stored tail power meaning "absent"

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, x);
    return std::string(buf);
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

// Minimal JSON emitter: insertion-ordered keys, floats via %.12g, no
// whitespace variation — reruns of the same config are byte-identical.
class JsonWriter {
  public:
    JsonWriter& begin_obj() { open('{'); return *this; }
    JsonWriter& end_obj() { s_ += '}'; depth_first_.pop_back(); return *this; }
    JsonWriter& begin_arr() { open('['); return *this; }
    JsonWriter& end_arr() { s_ += ']'; depth_first_.pop_back(); return *this; }
    JsonWriter& key(const char* k) {
        comma();
        s_ += '"';
        s_ += k;
        s_ += "\":";
        pending_ = true;
        return *this;
    }
    JsonWriter& value(double x) { raw(fmt("%.12g", x)); return *this; }
    JsonWriter& value(int x) { raw(std::to_string(x)); return *this; }
    JsonWriter& value(bool b) { raw(b ? "true" : "false"); return *this; }
    JsonWriter& value(const std::string& s) {
        raw("\"" + escape(s) + "\"");
        return *this;
    }
    JsonWriter& values(const std::vector<double>& xs) {
        begin_arr();
        for (const double x : xs) value(x);
        return end_arr();
    }
    std::string str() const { return s_; }

  private:
    void comma() {
        if (pending_) return;
        if (!depth_first_.empty()) {
            if (!depth_first_.back()) s_ += ',';
            depth_first_.back() = false;
        }
    }
    void open(char c) {
        comma();
        pending_ = false;
        s_ += c;
        depth_first_.push_back(true);
    }
    void raw(const std::string& v) {
        comma();
        pending_ = false;
        s_ += v;
    }
    std::string s_;
    std::vector<bool> depth_first_;
    bool pending_ = false;
};

double tail_to_file(const Tail& t) { return t.present ? t.power : kTailSentinel; }

Tail tail_from_file(double v) {
    if (std::fabs(v) >= 1e8) return Tail::none();
    return Tail{v, true};
}

}  // namespace

std::string fmt_g12(double x) { return fmt("%.12g", x); }

std::string profile_to_csv(const RadialProfile& p, double mu) {
    std::string out = "# N=" + std::to_string(p.grid().dim()) +
                      " mu=" + fmt("%.17g", mu) +
                      " tail_inner=" + fmt("%.17g", tail_to_file(p.inner())) +
                      " tail_outer=" + fmt("%.17g", tail_to_file(p.outer())) + "\n";
    for (int i = 0; i < p.grid().n(); ++i) {
        out += fmt("%.17g", p.grid().r()[static_cast<size_t>(i)]);
        out += ',';
        out += fmt("%.17g", p.values()[static_cast<size_t>(i)]);
        out += '\n';
    }
    return out;
}

std::pair<RadialProfile, double> profile_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int dim = 0;
    double mu = 0.0, tin = 0.0, tout = 0.0;
    bool have_header = false;
    std::vector<double> rs, vs;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(),
                            "# N=%d mu=%lf tail_inner=%lf tail_outer=%lf", &dim,
                            &mu, &tin, &tout) != 4) {
                throw ValidationError("profile CSV: malformed header line");
            }
            have_header = true;
            continue;
        }
        double r = 0.0, v = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &r, &v) != 2) {
            throw ValidationError("profile CSV: malformed data row: " + line);
        }
        rs.push_back(r);
        vs.push_back(v);
    }
    if (!have_header) throw ValidationError("profile CSV: missing `# N=...` header");
    const int n = static_cast<int>(rs.size());
    if (n < 16) throw ValidationError("profile CSV: needs at least 16 rows");
    if (!(rs.front() > 0.0) || !(rs.back() > rs.front())) {
        throw ValidationError("profile CSV: radii must be positive and increasing");
    }
    const double t0 = std::log(rs.front());
    const double h = (std::log(rs.back()) - t0) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double expect = t0 + h * i;
        if (std::fabs(std::log(rs[static_cast<size_t>(i)]) - expect) >
            1e-9 * std::max(1.0, std::fabs(expect))) {
            throw ValidationError("profile CSV: radii must be log-uniform");
        }
    }
    auto grid = std::make_shared<const RadialGrid>(dim, n, rs.front(), rs.back());
    return {RadialProfile(grid, std::move(vs), tail_from_file(tin),
                          tail_from_file(tout)),
            mu};
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << text;
    if (!out.good()) throw ValidationError("write failed: " + path);
}

std::string family_to_json(const BubbleFamily& fam) {
    JsonWriter w;
    w.begin_obj();
    w.key("N").value(fam.bubbles.front().dim);
    w.key("mu").value(fam.bubbles.front().mu);
    w.key("bubbles").begin_arr();
    for (const auto& b : fam.bubbles) {
        w.begin_obj();
        w.key("lambda").value(b.lambda);
        w.key("xi").values(b.xi);
        w.end_obj();
    }
    w.end_arr();
    w.key("alpha").begin_arr();
    for (size_t i = 0; i < fam.bubbles.size(); ++i) w.value(fam.coefficient(i));
    w.end_arr();
    w.end_obj();
    return w.str();
}

BubbleFamily family_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bubble family JSON: ") + e.what());
    }
    try {
        const int dim = j.at("N").get<int>();
        const double mu = j.at("mu").get<double>();
        std::vector<Bubble> bubbles;
        for (const auto& jb : j.at("bubbles")) {
            std::vector<double> xi;
            if (jb.contains("xi")) xi = jb.at("xi").get<std::vector<double>>();
            bubbles.push_back(Bubble{dim, mu, jb.at("lambda").get<double>(), xi});
        }
        std::vector<double> alpha;
        if (j.contains("alpha")) alpha = j.at("alpha").get<std::vector<double>>();
        return BubbleFamily{bubbles, alpha};
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bubble family JSON: ") + e.what());
    }
}

std::string constants_report_json(int dim, double mu) {
    const SharpConstants c = sharp_constants(dim, mu);
    const double gsq = bubble_grad_norm_sq(dim, mu);
    JsonWriter w;
    w.begin_obj();
    w.key("N").value(dim);
    w.key("mu").value(mu);
    w.key("two_star").value(c.two_star);
    w.key("two_star_mu").value(c.two_star_mu);
    w.key("C_hls").value(c.C_hls);
    w.key("S_sob").value(c.S_sob);
    w.key("S_hl").value(c.S_hl);
    w.key("A").value(bubble_prefactor(dim, mu));
    w.key("Q_tilde").value(riesz_prefactor(dim, mu));
    w.key("I_mu_half").value(riesz_identity_constant(dim, 0.5 * mu));
    w.key("grad_norm_sq_W").value(gsq);
    w.key("energy_W").value((0.5 - 0.5 / c.two_star_mu) * gsq);
    w.end_obj();
    return w.str();
}

std::string deficit_report_json(const DeficitReport& rep) {
    JsonWriter w;
    w.begin_obj();
    w.key("N").value(rep.constants.dim);
    w.key("mu").value(rep.constants.mu);
    w.key("grad_sq").value(rep.grad_sq);
    w.key("nl_integral").value(rep.nl_integral);
    w.key("nl_norm").value(rep.nl_norm);
    w.key("deficit").value(rep.deficit);
    w.key("deficit_relative")
        .value(rep.grad_sq > 0.0 ? rep.deficit / rep.grad_sq : 0.0);
    w.end_obj();
    return w.str();
}

std::string residual_report_json(int dim, double mu, double dual_norm,
                                 double grad_norm) {
    JsonWriter w;
    w.begin_obj();
    w.key("N").value(dim);
    w.key("mu").value(mu);
    w.key("dual_norm").value(dual_norm);
    w.key("grad_norm").value(grad_norm);
    w.end_obj();
    return w.str();
}

std::string fit_report_json(const FitResult& fit) {
    JsonWriter w;
    w.begin_obj();
    w.key("distance").value(fit.distance);
    w.key("alpha").begin_arr();
    for (size_t i = 0; i < fit.config.bubbles.size(); ++i)
        w.value(fit.config.coefficient(i));
    w.end_arr();
    w.key("lambda").begin_arr();
    for (const auto& b : fit.config.bubbles) w.value(b.lambda);
    w.end_arr();
    w.key("converged").value(fit.converged);
    w.key("orth_residuals").begin_arr();
    for (const auto& triple : fit.orth_residuals) {
        w.begin_arr();
        for (const double x : triple) w.value(x);
        w.end_arr();
    }
    w.end_arr();
    w.key("iterations").value(fit.iterations);
    w.key("degenerate").value(fit.degenerate);
    w.key("multistart_hits").value(fit.multistart_hits);
    w.key("gradient_norm").value(fit.gradient_norm);
    w.end_obj();
    return w.str();
}

std::string spectrum_report_json(int dim, double mu, const SpectrumResult& sp) {
    JsonWriter w;
    w.begin_obj();
    w.key("N").value(dim);
    w.key("mu").value(mu);
    w.key("l").value(sp.sector);
    w.key("eigenvalues").values(sp.eigenvalues);
    w.key("filtered").value(sp.filtered);
    w.key("deflated").value(sp.deflated);
    w.end_obj();
    return w.str();
}

namespace {

void sweep_row_json(JsonWriter& w, const StabilityReport& row) {
    w.begin_obj();
    w.key("scenario").value(row.scenario);
    w.key("perturbation").value(row.perturbation);
    w.key("eps").value(row.eps);
    w.key("lambdas").values(row.lambdas);
    w.key("lambdas_fit").values(row.lambdas_fit);
    w.key("q_max").value(row.q_max);
    w.key("delta_interacting").value(row.delta_interacting);
    w.key("deficit").value(row.deficit);
    w.key("dist_single").value(row.dist_single);
    w.key("dist_kappa").value(row.dist_kappa);
    w.key("residual_dual_norm").value(row.residual_dual_norm);
    w.key("lhs").value(row.lhs);
    w.key("nlprod").value(row.nlprod);
    w.key("grad_sq").value(row.grad_sq);
    w.key("window_lo").value(row.window_lo);
    w.key("window_hi").value(row.window_hi);
    w.key("interaction_integrals").values(row.interaction_integrals);
    w.key("converged").value(row.converged);
    w.end_obj();
}

}  // namespace

std::string sweep_report_json(const SweepResult& sweep) {
    JsonWriter w;
    w.begin_obj();
    w.key("scenario").value(sweep.scenario);
    w.key("N").value(sweep.dim);
    w.key("mu").value(sweep.mu);
    w.key("kappa").value(sweep.kappa);
    w.key("K_hat").value(sweep.K_hat);
    w.key("L_hat").value(sweep.L_hat);
    w.key("C_hat").value(sweep.C_hat);
    w.key("rows").begin_arr();
    for (const auto& row : sweep.rows) sweep_row_json(w, row);
    w.end_arr();
    w.end_obj();
    return w.str();
}

std::string sweep_report_csv(const SweepResult& sweep) {
    std::string out =
        "scenario,perturbation,eps,lambda_min,lambda_max,q_max,deficit,"
        "dist_single,dist_kappa,residual_dual_norm,lhs,nlprod,converged\n";
    for (const auto& row : sweep.rows) {
        double lmin = 0.0, lmax = 0.0;
        if (!row.lambdas.empty()) {
            lmin = *std::min_element(row.lambdas.begin(), row.lambdas.end());
            lmax = *std::max_element(row.lambdas.begin(), row.lambdas.end());
        }
        out += row.scenario + ',' + row.perturbation + ',' + fmt_g12(row.eps) +
               ',' + fmt_g12(lmin) + ',' + fmt_g12(lmax) + ',' +
               fmt_g12(row.q_max) + ',' + fmt_g12(row.deficit) + ',' +
               fmt_g12(row.dist_single) + ',' + fmt_g12(row.dist_kappa) + ',' +
               fmt_g12(row.residual_dual_norm) + ',' + fmt_g12(row.lhs) + ',' +
               fmt_g12(row.nlprod) + ',' + (row.converged ? "true" : "false") +
               '\n';
    }
    return out;
}

std::string slope_report_json(const SlopeRecord& rec) {
    JsonWriter w;
    w.begin_obj();
    w.key("N").value(rec.dim);
    w.key("p").value(rec.p);
    w.key("q").value(rec.q);
    w.key("expected").value(rec.expected);
    w.key("slope").value(rec.slope);
    w.key("log_case").value(rec.log_case);
    w.key("log_coefficient").value(rec.log_coefficient);
    w.key("ratios").values(rec.ratios);
    w.key("q_values").values(rec.q_values);
    w.key("integrals").values(rec.integrals);
    w.end_obj();
    return w.str();
}

std::string kernel_test_report_json(int dim, double mu, int n,
                                    double max_rel_error, double tolerance) {
    JsonWriter w;
    w.begin_obj();
    w.key("N").value(dim);
    w.key("mu").value(mu);
    w.key("n").value(n);
    w.key("max_rel_error").value(max_rel_error);
    w.key("tolerance").value(tolerance);
    w.key("pass").value(max_rel_error < tolerance);
    w.end_obj();
    return w.str();
}

SweepConfig parse_sweep_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("sweep config JSON: ") + e.what());
    }
    SweepConfig cfg;
    try {
        cfg.dim = j.at("N").get<int>();
        cfg.mu = j.at("mu").get<double>();
        if (j.contains("kappa")) cfg.kappa = j.at("kappa").get<int>();
        if (j.contains("ratios"))
            cfg.ratios = j.at("ratios").get<std::vector<double>>();
        if (j.contains("lambdas"))  // accepted alias
            cfg.ratios = j.at("lambdas").get<std::vector<double>>();
        if (j.contains("eps")) cfg.eps = j.at("eps").get<std::vector<double>>();
        if (j.contains("perturbations"))
            cfg.perturbations =
                j.at("perturbations").get<std::vector<std::string>>();
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("n")) cfg.n = g.at("n").get<int>();
            if (g.contains("r_min")) cfg.r_min = g.at("r_min").get<double>();
            if (g.contains("r_max")) cfg.r_max = g.at("r_max").get<double>();
        }
        if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
        if (j.contains("scenario"))
            cfg.scenario = j.at("scenario").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("sweep config JSON: ") + e.what());
    }
    if (cfg.scenario.empty())
        cfg.scenario =
            (cfg.kappa >= 2 || !cfg.ratios.empty()) ? "multi" : "single";
    if (cfg.scenario != "single" && cfg.scenario != "multi")
        throw ValidationError("sweep config: scenario must be single or multi");
    if (cfg.scenario == "multi" && cfg.kappa < 2) cfg.kappa = 2;
    if (cfg.eps.empty()) cfg.eps = {0.0, 1e-3, 1e-2, 1e-1};
    if (cfg.perturbations.empty()) cfg.perturbations = perturbation_ids();
    if (cfg.scenario == "multi" && cfg.ratios.empty())
        cfg.ratios = {1e2, 1e3, 1e4};
    return cfg;
}

}  // namespace choquard
