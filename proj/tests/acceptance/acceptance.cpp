#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "pcv/chain/chain.hpp"
#include "pcv/cli/experiments.hpp"
#include "pcv/dimer/radial.hpp"
#include "pcv/estimators/variance.hpp"
#include "pcv/galerkin/galerkin.hpp"
#include "pcv/numerics/linalg.hpp"

using namespace pcv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Least-squares slope and intercept of log y against log x.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

galerkin::TensorBasis basis(int kq, int kp) {
    galerkin::TensorBasis b;
    b.kq = kq;
    b.kp = kp;
    return b;
}

bool within(double a, double b, double tol) { return std::abs(a - b) <= tol; }

class Suite {
public:
    explicit Suite(fs::path out) : out_(std::move(out)) { fs::create_directories(out_); }

    const fs::path& out() const { return out_; }

    cli::ExperimentConfig base(const std::string& experiment, const std::string& dir) const {
        cli::ExperimentConfig c;
        c.experiment = experiment;
        c.seed = 20240611;
        c.output = (out_ / dir).string();
        c.run.acf = false;
        return c;
    }

    // Mobility sweep shared by criteria 4 and 5.
    const std::vector<cli::MobilityPoint>& mobility() {
        if (mobility_.empty()) {
            auto c = base("mobility", "mobility");
            c.run.dt = 0.02;
            c.run.n_steps = 1'000'000;
            c.run.burn_in = 0;
            c.mobility.bases = {"15x10", "5x3"};
            c.mobility.eta = {0.01, 0.02, 0.04, 0.08, 0.16};
            mobility_ = cli::run_mobility(c);
        }
        return mobility_;
    }

    // Equilibrium chain at b = 0.08 shared by criteria 10 and 11.
    const cli::ChainPoint& equilibrium_chain() {
        if (equilibrium_.observables.empty()) {
            auto c = base("chain", "chain_equilibrium");
            c.run.dt = 0.01;
            c.run.n_steps = 101'000'000;
            c.run.burn_in = 1'000'000;
            c.chain.n = {32};
            c.chain.b = {0.08};
            c.chain.t_deco_standard = 96.0;
            equilibrium_ = cli::run_chain(c).front();
        }
        return equilibrium_;
    }

    // Dimer sweeps shared by criteria 15 and 16: the singular solvent needs the smaller step.
    cli::ExperimentConfig dimer_config(bool singular) const {
        auto c = base("dimer", singular ? "dimer_coulomb" : "dimer_soft");
        c.dimer.nu = {0.0, 0.25, 0.5, 1.0};
        if (singular) {
            c.run.dt = 5e-4;
            c.run.n_steps = 20'200'000;
            c.run.burn_in = 200'000;
            c.dimer.solvent = {"coulomb"};
        } else {
            c.run.dt = 5e-3;
            c.run.n_steps = 20'200'000;
            c.run.burn_in = 200'000;
            c.dimer.solvent = {"none", "soft"};
        }
        return c;
    }

    const std::vector<cli::DimerPoint>& dimer() {
        if (dimer_.empty()) {
            for (bool singular : {false, true}) {
                for (auto& p : cli::run_dimer(dimer_config(singular))) dimer_.push_back(std::move(p));
            }
        }
        return dimer_;
    }

private:
    fs::path out_;
    std::vector<cli::MobilityPoint> mobility_;
    cli::ChainPoint equilibrium_;
    std::vector<cli::DimerPoint> dimer_;
};

Outcome galerkin_mobility(Suite&) {
    const auto t0 = Clock::now();
    const double d = galerkin::mobility(galerkin::solve(basis(15, 10)));
    const double secs = seconds_since(t0);
    return {within(d, 0.48, 0.03) && secs < 5.0, fmt::format("D = {:.6f} (target 0.48 +- 0.03), {:.2f} s", d, secs)};
}

Outcome galerkin_prefactor(Suite&) {
    const auto t0 = Clock::now();
    const double a = galerkin::cv_prefactor(galerkin::solve(basis(15, 10)));
    const double secs = seconds_since(t0);
    return {within(a, 0.53, 0.03) && secs < 10.0,
            fmt::format("alpha = {:.6f} (target 0.53 +- 0.03), {:.2f} s", a, secs)};
}

Outcome free_particle(Suite&) {
    double worst = 0.0;
    for (double gamma : {0.5, 1.0, 4.0}) {
        auto b = basis(5, 4);
        b.gamma = gamma;
        b.potential = galerkin::PeriodicPotential::flat();
        worst = std::max(worst, std::abs(galerkin::mobility(galerkin::solve(b)) - 1.0 / gamma));
    }
    return {worst < 1e-8, fmt::format("max |D - 1/gamma| = {:.3e}", worst)};
}

Outcome eta_scaling(Suite& s) {
    std::vector<double> eta, var;
    double alpha = 0.0;
    std::string rows;
    for (const auto& p : s.mobility()) {
        if (p.basis != "15x10") continue;
        eta.push_back(p.eta);
        var.push_back(p.modified.asym_variance);
        alpha = p.alpha;
        rows += fmt::format(" {}:{:.4e}", p.eta, p.modified.asym_variance);
    }
    for (double v : var) {
        if (!(v > 0.0)) return {false, "non-positive variance estimate:" + rows};
    }
    const auto [slope, intercept] = loglog_fit(eta, var);
    double log_ratio = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) log_ratio += std::log(var[i] / (eta[i] * eta[i]));
    const double prefactor = std::exp(log_ratio / static_cast<double>(eta.size()));
    const double factor = prefactor / (2.0 * alpha);
    const bool ok = within(slope, 2.0, 0.2) && factor <= 1.5 && factor >= 1.0 / 1.5;
    return {ok, fmt::format("slope {:.3f} (2 +- 0.2), prefactor {:.4f} vs 2 alpha = {:.4f} (ratio {:.3f});{}", slope,
                            prefactor, 2.0 * alpha, factor, rows)};
}

Outcome plateau(Suite& s) {
    double v1 = NAN, v4 = NAN;
    for (const auto& p : s.mobility()) {
        if (p.basis != "5x3") continue;
        if (p.eta == 0.01) v1 = p.modified.asym_variance;
        if (p.eta == 0.04) v4 = p.modified.asym_variance;
    }
    const double ratio = v1 / v4;
    return {ratio >= 0.5 && ratio <= 2.0,
            fmt::format("5x3: var(0.01) = {:.4e}, var(0.04) = {:.4e}, ratio {:.3f} (in [0.5, 2])", v1, v4, ratio)};
}

Outcome harmonic_zero_variance(Suite&) {
    const auto prm = chain::ChainParams::make(32, 1.0, 1.0, 3.0, 1.0, 1.0, 0.0);
    const auto dyn = prm.dynamics(0.01);
    stochastics::RngStream rng(7, 0);
    auto st = chain::initial_state(prm, rng);
    const double expected = chain::harmonic_mean_flux(prm);
    std::vector<double> v(100000);
    for (std::size_t k = 0; k < v.size(); ++k) {
        chain::step(st, prm, dyn, rng, k);
        v[k] = chain::modified_flux(st, prm);
    }
    long double sum = 0.0L;
    for (double x : v) sum += x;
    const double mean = static_cast<double>(sum / v.size());
    long double dev = 0.0L;
    for (double x : v) dev += (x - mean) * (x - mean);
    const double var = static_cast<double>(dev / v.size());
    return {var < 1e-24 && within(mean, expected, 1e-12),
            fmt::format("sample variance {:.3e}, mean {:.15g} vs {:.15g}", var, mean, expected)};
}

Outcome lyapunov(Suite&) {
    double worst = 0.0;
    for (int n = 2; n <= 64; ++n) {
        for (double nu : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) worst = std::max(worst, numerics::lyapunov_residual(n, nu));
    }
    return {worst < 1e-12, fmt::format("max residual {:.3e} over N = 2..64, nu in [0.1, 10]", worst)};
}

Outcome standard_flux_limit(Suite& s) {
    auto c = s.base("chain", "chain_small_b");
    c.run.dt = 0.01;
    c.run.n_steps = 101'000'000;
    c.run.burn_in = 1'000'000;
    c.chain.n = {32};
    c.chain.b = {0.04};
    c.chain.t_deco_standard = 96.0;
    const auto p = cli::run_chain(c).front();
    const auto& r = p.at("standard");
    return {within(r.asym_variance, 2.0, 0.3),
            fmt::format("sigma^2(standard) = {:.4f} +- {:.4f} (target 2 +- 0.3), T = {:g}", r.asym_variance,
                        r.variance_error_bar, r.total_time())};
}

Outcome b_scaling(Suite& s) {
    auto c = s.base("chain", "chain_b_sweep");
    c.run.dt = 0.01;
    c.run.n_steps = 10'000'000;
    c.chain.n = {32};
    c.chain.b = {0.02, 0.04, 0.08, 0.16};
    const auto points = cli::run_chain(c);
    std::vector<double> b, v;
    std::string rows;
    for (const auto& p : points) {
        b.push_back(p.b);
        v.push_back(p.at("modified").asym_variance);
        rows += fmt::format(" {}:{:.4e}", p.b, v.back());
    }
    for (double x : v) {
        if (!(x > 0.0)) return {false, "non-positive variance estimate:" + rows};
    }
    const double slope = loglog_fit(b, v).first;
    return {within(slope, 2.0, 0.3), fmt::format("slope {:.3f} (2 +- 0.3);{}", slope, rows)};
}

Outcome flux_equalities(Suite& s) {
    const auto& p = s.equilibrium_chain();
    const auto& j1 = p.at("j1");
    const auto& jm = p.at("jmid");
    const auto& rs = p.at("standard");
    auto close = [](double a, double ea, double b, double eb) { return std::abs(a - b) <= 3.0 * std::hypot(ea, eb); };
    const bool means = close(j1.mean, j1.mean_error_bar, jm.mean, jm.mean_error_bar) &&
                       close(j1.mean, j1.mean_error_bar, rs.mean, rs.mean_error_bar) &&
                       close(jm.mean, jm.mean_error_bar, rs.mean, rs.mean_error_bar);
    const bool vars =
        close(j1.asym_variance, j1.variance_error_bar, rs.asym_variance, rs.variance_error_bar);
    return {means && vars,
            fmt::format("E[j1] = {:.4f}+-{:.4f}, E[jmid] = {:.4f}+-{:.4f}, E[std] = {:.4f}+-{:.4f}; "
                        "var(j1) = {:.4f}+-{:.4f}, var(std) = {:.4f}+-{:.4f}",
                        j1.mean, j1.mean_error_bar, jm.mean, jm.mean_error_bar, rs.mean, rs.mean_error_bar,
                        j1.asym_variance, j1.variance_error_bar, rs.asym_variance, rs.variance_error_bar)};
}

Outcome boundary_variance(Suite& s) {
    const auto& p = s.equilibrium_chain();
    const auto& j0 = p.at("j0");
    const auto& rs = p.at("standard");
    const double beta = 1.0 / p.t_left;
    const double m = 1.0, gamma = 1.0;
    const double n1 = static_cast<double>(p.n - 1);
    // Green–Kubo conductivity from the equilibrium standard-flux variance.
    const double kappa = beta * beta * n1 * rs.asym_variance / 2.0;
    const double predicted = gamma / (m * beta * beta) - 2.0 * kappa / (beta * beta * n1);
    const double tol = 3.0 * std::hypot(j0.variance_error_bar, rs.variance_error_bar);
    return {within(j0.asym_variance, predicted, tol),
            fmt::format("sigma^2(j0) = {:.4f} +- {:.4f}, predicted {:.4f} (kappa = {:.4f}); "
                        "2 gamma T^2/m - sigma^2(j1) = {:.4f}",
                        j0.asym_variance, j0.variance_error_bar, predicted, kappa,
                        2.0 * gamma / (m * beta * beta) - p.at("j1").asym_variance)};
}

Outcome estimator_oracle(Suite&) {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(12);
    std::uniform_int_distribution<std::size_t> len(2, 5000);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = len(gen);
        const std::size_t nd = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(200, (n - 1) / 2))(gen);
        std::vector<double> x(n);
        double a = 0.0;
        for (auto& v : x) v = a = 0.95 * a + g(gen) + 1.5;
        estimators::VarianceAccumulator acc(0.05, nd, {false, 1});
        for (double v : x) acc.push(v);
        const double got = acc.finalize().asym_variance;
        const double ref = oracle::brute_force_variance(x, 0.05, nd);
        worst = std::max(worst, std::abs(got - ref) / std::max(std::abs(ref), 1e-300));
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-12 && secs < 10.0, fmt::format("max relative deviation {:.3e}, {:.2f} s", worst, secs)};
}

Outcome estimator_calibration(Suite& s) {
    auto c = s.base("selftest-ou", "selftest");
    c.run.dt = 0.05;
    c.selftest.t_deco = 10.0;
    c.selftest.time_factor = 1e4;
    c.selftest.repetitions = 100;
    const auto r = cli::run_selftest(c);
    int hits2 = 0;
    for (const auto& rep : r.reports) {
        if (std::abs(rep.asym_variance - 2.0) <= 2.0 * rep.variance_error_bar) ++hits2;
    }
    return {r.hits >= 95,
            fmt::format("{} of 100 within one reported error bar (required 95); {} within two", r.hits, hits2)};
}

Outcome radial_residual(Suite&) {
    const auto p = dimer::solve_radial_poisson(dimer::DoubleWell{}, 1.0, 2, 1e-3, 10.0);
    const double res = oracle::radial_residual(p, 0.01);
    double lowest = 0.0, peak = 0.0;
    for (double v : p.phi) {
        lowest = std::min(lowest, v);
        peak = std::max(peak, std::abs(v));
    }
    const double tail = std::abs(p.phi.back()) / peak;
    return {res < 1e-6 && lowest >= 0.0 && tail < 1e-3,
            fmt::format("residual {:.3e}, min phi {:.3e}, |phi(r_max)|/max {:.3e}, r* = {:.9f}", res, lowest, tail,
                        p.r_star)};
}

Outcome dimer_unbiased(Suite& s) {
    bool ok = true;
    std::string rows;
    for (const auto& p : s.dimer()) {
        if (p.nu != 0.0 && p.nu != 0.5 && p.nu != 1.0) continue;
        const double gap = std::abs(p.plain.mean - p.modified.mean);
        const double tol = 3.0 * std::hypot(p.plain.mean_error_bar, p.modified.mean_error_bar);
        ok = ok && gap <= tol;
        rows += fmt::format(" {}/nu={} (T = {:g}): {:.5f} vs {:.5f} (gap {:.2e}, 3 bars {:.2e})", p.solvent, p.nu,
                            p.plain.total_time(), p.plain.mean, p.modified.mean, gap, tol);
    }
    return {ok, rows.substr(1)};
}

Outcome dimer_variance_reduction(Suite& s) {
    bool ok = true;
    std::string rows;
    for (const auto& p : s.dimer()) {
        if (p.nu > 0.25 || p.solvent == "none") continue;
        const double need = p.solvent == "soft" ? 10.0 : 4.0;
        const double ratio = p.plain.asym_variance / p.modified.asym_variance;
        // Ratio upper bound from the error bars of both estimates.
        const double hi = (p.plain.asym_variance + p.plain.variance_error_bar) /
                          std::max(p.modified.asym_variance - p.modified.variance_error_bar, 1e-300);
        ok = ok && hi >= need;
        rows += fmt::format(" {}/nu={}: ratio {:.2f} (upper {:.2f}, need {:g})", p.solvent, p.nu, ratio, hi, need);
    }
    return {ok, rows.empty() ? "no points" : rows.substr(1)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome reproducibility(Suite& s) {
    std::vector<cli::ExperimentConfig> configs;
    {
        auto c = s.base("mobility", "");
        c.run.n_steps = 200'000;
        c.mobility.bases = {"15x10", "5x3"};
        c.mobility.eta = {0.01, 0.16};
        c.run.acf = true;
        c.run.acf_stride = 10;
        c.replicas = 2;
        configs.push_back(c);
    }
    {
        auto c = s.base("chain", "");
        c.run.dt = 0.01;
        c.run.n_steps = 200'000;
        c.chain.n = {32};
        c.chain.b = {0.08};
        c.chain.t_left = 3.0;
        c.chain.t_right = 1.0;
        c.chain.conductivity = true;
        c.replicas = 2;
        configs.push_back(c);
    }
    {
        auto c = s.dimer_config(false);
        c.dimer.solvent = {"none", "soft", "coulomb"};
        c.run.n_steps = 40'000;
        c.run.burn_in = 1000;
        c.dimer.nu = {0.0, 1.0};
        c.replicas = 2;
        configs.push_back(c);
    }
    {
        auto c = s.base("selftest-ou", "");
        c.selftest.repetitions = 4;
        c.selftest.time_factor = 100;
        c.selftest.required = 0;
        configs.push_back(c);
    }
    std::size_t files = 0;
    for (const auto& cfg : configs) {
        std::vector<std::string> dirs;
        for (const char* tag : {"a", "b"}) {
            auto c = cfg;
            c.output = (s.out() / "repro" / (c.experiment + "_" + tag)).string();
            fs::remove_all(c.output);
            const auto r = cli::run(c);
            if (r.exit_code != cli::exit_ok) return {false, c.experiment + ": " + r.summary};
            dirs.push_back(c.output);
        }
        for (const auto& entry : fs::directory_iterator(dirs[0])) {
            const auto name = entry.path().filename();
            if (slurp(entry.path()) != slurp(fs::path(dirs[1]) / name)) {
                return {false, fmt::format("{} differs between repeated runs", (fs::path(dirs[0]) / name).string())};
            }
            ++files;
        }
    }
    return {files > 0, fmt::format("{} CSV files byte-identical across repeated runs", files)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks for the perturbative control variate library"};
    std::string out = "acceptance_out";
    std::vector<int> only;
    app.add_option("--out", out, "Directory for the CSV files written by the checks");
    app.add_option("--only", only, "Run only the listed criteria")->check(CLI::Range(1, 17));
    CLI11_PARSE(app, argc, argv);

    Suite suite{fs::path(out)};
    const std::vector<std::pair<std::string, std::function<Outcome(Suite&)>>> criteria = {
        {"Galerkin mobility", galerkin_mobility},
        {"Galerkin variance prefactor", galerkin_prefactor},
        {"Free-particle mobility", free_particle},
        {"Modified variance eta^2 scaling", eta_scaling},
        {"Small-basis plateau", plateau},
        {"Harmonic zero variance", harmonic_zero_variance},
        {"Lyapunov identity", lyapunov},
        {"Standard flux small-b limit", standard_flux_limit},
        {"Modified flux b^2 scaling", b_scaling},
        {"Equilibrium flux equalities", flux_equalities},
        {"Boundary flux variance relation", boundary_variance},
        {"Estimator double-sum oracle", estimator_oracle},
        {"Estimator calibration on exact OU", estimator_calibration},
        {"Radial Poisson residual", radial_residual},
        {"Dimer unbiasedness", dimer_unbiased},
        {"Dimer variance reduction", dimer_variance_reduction},
        {"Reproducibility", reproducibility},
    };
    const std::set<int> selected(only.begin(), only.end());
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second(suite);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::cout << fmt::format("{} {:2d} {}: {} [{:.1f} s]", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                                 o.detail, seconds_since(t0))
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
