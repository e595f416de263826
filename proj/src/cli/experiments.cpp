#include "pcv/cli/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pcv/chain/chain.hpp"
#include "pcv/csv.hpp"
#include "pcv/dimer/dimer.hpp"
#include "pcv/dimer/radial.hpp"
#include "pcv/galerkin/galerkin.hpp"
#include "pcv/stochastics/integrators.hpp"
#include "pcv/stochastics/rng.hpp"
#include "pcv/stochastics/trajectory.hpp"

namespace pcv::cli {

using estimators::AcfOptions;
using estimators::VarianceAccumulator;
using estimators::VarianceReport;
using stochastics::RngStream;

namespace {

std::uint64_t stream_id(std::uint64_t point, int replica) {
    return (point << 32) | static_cast<std::uint64_t>(replica);
}

AcfOptions acf_options(const RunSection& run) { return {run.acf, static_cast<std::size_t>(run.acf_stride)}; }

VarianceReport merged(const std::vector<VarianceReport>& reports) {
    return estimators::merge(std::span<const VarianceReport>(reports));
}

std::string tag(double x) { return fmt::format("{:g}", x); }

class Writer {
public:
    explicit Writer(const ExperimentConfig& cfg) : dir_(cfg.output) {
        std::filesystem::create_directories(dir_);
    }

    std::ofstream open(const std::string& name) {
        const auto path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error("cannot open " + path.string() + " for writing");
        files_.push_back(path.string());
        return os;
    }

    void acf(const std::string& stem, const VarianceReport& r) {
        if (r.acf_profile.empty()) return;
        auto a = open("acf_" + stem + ".csv");
        estimators::write_acf_csv(a, r);
        auto c = open("cumacf_" + stem + ".csv");
        estimators::write_cumulated_acf_csv(c, r);
    }

    std::vector<std::string> files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> files_;
};

std::string stats_row(const VarianceReport& r) {
    return fmt17(r.mean) + "," + fmt17(r.mean_error_bar) + "," + fmt17(r.asym_variance) + "," +
           fmt17(r.variance_error_bar);
}

galerkin::TensorBasis make_basis(const MobilitySection& m, const std::string& spec) {
    const auto [kq, kp] = parse_basis(spec);
    galerkin::TensorBasis basis;
    basis.kq = kq;
    basis.kp = kp;
    basis.m = m.m;
    basis.gamma = m.gamma;
    basis.beta = m.beta;
    basis.potential = galerkin::PeriodicPotential::cosine(m.amplitude);
    return basis;
}

dimer::DimerParams make_dimer(const DimerSection& d, const std::string& solvent, double nu) {
    dimer::DimerParams prm;
    prm.n = d.n;
    prm.box = d.box;
    prm.beta = d.beta;
    prm.well = {d.h, d.r0, d.dr};
    prm.solvent = dimer::solvent_from_string(solvent);
    prm.eps = d.eps;
    prm.sigma = d.sigma;
    prm.r_cut = d.r_cut;
    prm.nu = nu;
    return prm;
}

}  // namespace

std::size_t window_steps(double t_deco, double dt) {
    if (!(t_deco > 0.0) || !(dt > 0.0)) throw InvalidArgument("window_steps: t_deco and dt must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t_deco / dt)));
}

const VarianceReport& ChainPoint::at(const std::string& name) const {
    for (const auto& o : observables) {
        if (o.name == name) return o.report;
    }
    throw InvalidArgument("ChainPoint: unknown observable '" + name + "'");
}

std::vector<MobilityPoint> run_mobility(const ExperimentConfig& cfg) {
    const auto& ms = cfg.mobility;
    const auto& run = cfg.run;
    const std::size_t nd = window_steps(ms.t_deco, run.dt);
    std::vector<MobilityPoint> out;
    std::uint64_t point = 0;
    for (const auto& spec : ms.bases) {
        const auto sol = galerkin::solve(make_basis(ms, spec));
        const double d = galerkin::mobility(sol);
        const double alpha = galerkin::cv_prefactor(sol);
        stochastics::LangevinParams lp{ms.m, ms.gamma, ms.beta, run.dt};
        lp.validate();
        const double amp = ms.amplitude;
        auto force = [amp](double q) { return -amp * std::sin(q); };
        for (double eta : ms.eta) {
            const std::uint64_t pt = point++;
            using Pair = std::vector<VarianceReport>;
            auto reports = run_replicas<Pair>(
                cfg.replicas,
                [&](int rep) {
                    RngStream rng(cfg.seed, stream_id(pt, rep));
                    std::vector<VarianceAccumulator> acc(2, VarianceAccumulator(run.dt, nd, acf_options(run)));
                    stochastics::LangevinState s;
                    stochastics::run_trajectory(
                        s,
                        [&](stochastics::LangevinState& st, std::uint64_t k) {
                            stochastics::gla_step(st, force, lp, eta, rng, k);
                        },
                        [&](const stochastics::LangevinState& st, std::span<double> v) {
                            v[0] = st.p / lp.m;
                            v[1] = galerkin::eval_modified(sol, st.q, st.p, eta);
                        },
                        std::span<VarianceAccumulator>(acc), run.n_steps, run.burn_in_steps());
                    return Pair{acc[0].finalize(), acc[1].finalize()};
                },
                fmt::format("mobility basis {} eta {}", spec, tag(eta)));
            Pair plain, modified;
            for (auto& r : reports) {
                plain.push_back(r[0]);
                modified.push_back(r[1]);
            }
            out.push_back({spec, eta, d, alpha, merged(plain), merged(modified)});
        }
    }
    return out;
}

std::vector<ChainPoint> run_chain(const ExperimentConfig& cfg) {
    const auto& cs = cfg.chain;
    const auto& run = cfg.run;
    constexpr std::size_t n_obs = std::size(chain_observable_names);
    std::vector<ChainPoint> out;
    std::uint64_t point = 0;
    for (int n : cs.n) {
        for (double b : cs.b) {
            const std::uint64_t pt = point++;
            const auto prm = chain::ChainParams::make(n, cs.m, cs.gamma, cs.t_left, cs.t_right, cs.a, b);
            const auto dyn = prm.dynamics(run.dt);
            const double tds = cs.t_deco_standard > 0.0 ? cs.t_deco_standard : 3.0 * n;
            const std::size_t nd_std = window_steps(tds, run.dt);
            const std::size_t nd_mod = window_steps(cs.t_deco_modified, run.dt);
            const int mid = std::max(1, n / 2);
            using Set = std::vector<VarianceReport>;
            auto reports = run_replicas<Set>(
                cfg.replicas,
                [&](int rep) {
                    RngStream rng(cfg.seed, stream_id(pt, rep));
                    std::vector<VarianceAccumulator> acc;
                    for (std::size_t i = 0; i < n_obs; ++i) {
                        acc.emplace_back(run.dt, i == 1 ? nd_mod : nd_std, acf_options(run));
                    }
                    auto s = chain::initial_state(prm, rng);
                    stochastics::run_trajectory(
                        s, [&](chain::ChainState& st, std::uint64_t k) { chain::step(st, prm, dyn, rng, k); },
                        [&](const chain::ChainState& st, std::span<double> v) {
                            v[0] = chain::standard_flux(st, prm);
                            v[1] = chain::modified_flux(st, prm);
                            v[2] = chain::boundary_observable(st, prm);
                            v[3] = chain::elementary_flux(1, st, prm);
                            v[4] = chain::elementary_flux(mid, st, prm);
                            v[5] = chain::boundary_flux_0(st, prm);
                        },
                        std::span<VarianceAccumulator>(acc), run.n_steps, run.burn_in_steps());
                    Set r;
                    for (auto& a : acc) r.push_back(a.finalize());
                    return r;
                },
                fmt::format("chain N {} b {}", n, tag(b)));
            ChainPoint p{n, b, cs.t_left, cs.t_right, {}};
            for (std::size_t i = 0; i < n_obs; ++i) {
                Set col;
                for (auto& r : reports) col.push_back(r[i]);
                p.observables.push_back({chain_observable_names[i], merged(col)});
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<DimerPoint> run_dimer(const ExperimentConfig& cfg) {
    const auto& ds = cfg.dimer;
    const auto& run = cfg.run;
    const std::size_t nd = window_steps(ds.t_deco, run.dt);
    const auto profile = dimer::solve_radial_poisson({ds.h, ds.r0, ds.dr}, ds.beta, 2, ds.grid_h, ds.r_max);
    std::vector<DimerPoint> out;
    std::uint64_t point = 0;
    for (const auto& solvent : ds.solvent) {
        for (double nu : ds.nu) {
            const std::uint64_t pt = point++;
            const auto prm = make_dimer(ds, solvent, nu);
            struct Rep {
                VarianceReport plain, modified;
                std::uint64_t clamped = 0;
            };
            auto reports = run_replicas<Rep>(
                cfg.replicas,
                [&](int rep) {
                    RngStream rng(cfg.seed, stream_id(pt, rep));
                    dimer::DimerSystem sys(prm);
                    VarianceAccumulator plain(run.dt, nd, acf_options(run));
                    VarianceAccumulator modified(run.dt, nd, acf_options(run));
                    std::uint64_t clamped = 0;
                    const std::uint64_t burn = run.burn_in_steps();
                    for (std::uint64_t k = 0; k < run.n_steps; ++k) {
                        sys.step(run.dt, rng, k);
                        if (k < burn) continue;
                        plain.push(sys.length());
                        modified.push(dimer::eval_modified_length(sys, profile, &clamped));
                    }
                    return Rep{plain.finalize(), modified.finalize(), clamped};
                },
                fmt::format("dimer solvent {} nu {}", solvent, tag(nu)));
            std::vector<VarianceReport> plain, modified;
            std::uint64_t clamped = 0;
            for (auto& r : reports) {
                plain.push_back(r.plain);
                modified.push_back(r.modified);
                clamped += r.clamped;
            }
            out.push_back({nu, solvent, merged(plain), merged(modified), clamped});
        }
    }
    return out;
}

SelftestResult run_selftest(const ExperimentConfig& cfg) {
    const auto& st = cfg.selftest;
    const double dt = cfg.run.dt;
    const std::size_t nd = window_steps(st.t_deco, dt);
    const auto n_steps = static_cast<std::uint64_t>(std::llround(st.time_factor * st.t_deco / dt));
    const AcfOptions acf{cfg.run.acf, static_cast<std::size_t>(cfg.run.acf_stride)};
    SelftestResult result;
    result.reports = run_replicas<VarianceReport>(
        st.repetitions,
        [&](int rep) {
            RngStream rng(cfg.seed, stream_id(static_cast<std::uint64_t>(rep), 0));
            VarianceAccumulator acc(dt, nd, acf);
            double x = rng.normal();
            for (std::uint64_t k = 0; k < n_steps; ++k) {
                x = stochastics::ou_exact_step(x, dt, rng);
                acc.push(x);
            }
            return acc.finalize();
        },
        "selftest-ou");
    for (const auto& r : result.reports) {
        if (std::abs(r.asym_variance - 2.0) <= r.variance_error_bar) ++result.hits;
    }
    return result;
}

namespace {

void emit_mobility(const ExperimentConfig& cfg, Writer& w, std::ostringstream& summary) {
    const auto points = run_mobility(cfg);
    for (const auto& spec : cfg.mobility.bases) {
        auto os = w.open("galerkin_" + spec + ".csv");
        galerkin::write_solution_csv(os, galerkin::solve(make_basis(cfg.mobility, spec)));
    }
    auto os = w.open("mobility.csv");
    os << "basis,eta,observable,mean,mean_err,asym_var,var_err,D,alpha\n";
    summary << fmt::format("{:>7} {:>8} {:>9} {:>13} {:>11} {:>13} {:>11}\n", "basis", "eta", "observable", "mean",
                           "mean_err", "asym_var", "var_err");
    for (const auto& p : points) {
        for (const auto& [name, r] : {std::pair{"plain", &p.plain}, std::pair{"modified", &p.modified}}) {
            os << p.basis << ',' << fmt17(p.eta) << ',' << name << ',' << stats_row(*r) << ',' << fmt17(p.mobility)
               << ',' << fmt17(p.alpha) << '\n';
            w.acf(fmt::format("mobility_{}_eta{}_{}", p.basis, tag(p.eta), name), *r);
            summary << fmt::format("{:>7} {:>8g} {:>9} {:>13.6g} {:>11.3g} {:>13.6g} {:>11.3g}\n", p.basis, p.eta,
                                   name, r->mean, r->mean_error_bar, r->asym_variance, r->variance_error_bar);
        }
    }
    for (const auto& spec : cfg.mobility.bases) {
        for (const auto& p : points) {
            if (p.basis != spec) continue;
            summary << fmt::format("basis {}: D = {:.6g}, alpha = {:.6g}\n", spec, p.mobility, p.alpha);
            break;
        }
    }
}

void emit_chain(const ExperimentConfig& cfg, Writer& w, std::ostringstream& summary) {
    const auto points = run_chain(cfg);
    auto os = w.open("chain.csv");
    os << "b,N,TL,TR,observable,mean,mean_err,asym_var,var_err,kappa\n";
    summary << fmt::format("{:>4} {:>8} {:>9} {:>13} {:>11} {:>13} {:>11}\n", "N", "b", "observable", "mean",
                           "mean_err", "asym_var", "var_err");
    for (const auto& p : points) {
        const auto prm = chain::ChainParams::make(p.n, cfg.chain.m, cfg.chain.gamma, p.t_left, p.t_right, cfg.chain.a,
                                                  p.b);
        for (const auto& o : p.observables) {
            const auto& r = o.report;
            std::string kappa;
            if (cfg.chain.conductivity && (o.name == "standard" || o.name == "modified" || o.name == "boundary")) {
                kappa = fmt17(chain::conductivity(r.mean, prm));
            }
            os << fmt17(p.b) << ',' << p.n << ',' << fmt17(p.t_left) << ',' << fmt17(p.t_right) << ',' << o.name << ','
               << stats_row(r) << ',' << kappa << '\n';
            w.acf(fmt::format("chain_N{}_b{}_{}", p.n, tag(p.b), o.name), r);
            summary << fmt::format("{:>4} {:>8g} {:>9} {:>13.6g} {:>11.3g} {:>13.6g} {:>11.3g}\n", p.n, p.b, o.name,
                                   r.mean, r.mean_error_bar, r.asym_variance, r.variance_error_bar);
        }
    }
}

void emit_dimer(const ExperimentConfig& cfg, Writer& w, std::ostringstream& summary) {
    const auto& ds = cfg.dimer;
    {
        const auto profile = dimer::solve_radial_poisson({ds.h, ds.r0, ds.dr}, ds.beta, 2, ds.grid_h, ds.r_max);
        auto os = w.open("radial_profile.csv");
        dimer::write_profile_csv(os, profile);
        summary << fmt::format("r* = {:.10g}\n", profile.r_star);
    }
    const auto points = run_dimer(cfg);
    auto os = w.open("dimer.csv");
    os << "nu,solvent,mean_len,mean_err,var_plain,var_plain_err,var_cv,var_cv_err\n";
    summary << fmt::format("{:>8} {:>8} {:>12} {:>10} {:>12} {:>10} {:>12} {:>10}\n", "solvent", "nu", "mean_len",
                           "mean_err", "var_plain", "err", "var_cv", "err");
    for (const auto& p : points) {
        os << fmt17(p.nu) << ',' << p.solvent << ',' << fmt17(p.modified.mean) << ',' << fmt17(p.modified.mean_error_bar)
           << ',' << fmt17(p.plain.asym_variance) << ',' << fmt17(p.plain.variance_error_bar) << ','
           << fmt17(p.modified.asym_variance) << ',' << fmt17(p.modified.variance_error_bar) << '\n';
        w.acf(fmt::format("dimer_{}_nu{}_plain", p.solvent, tag(p.nu)), p.plain);
        w.acf(fmt::format("dimer_{}_nu{}_modified", p.solvent, tag(p.nu)), p.modified);
        summary << fmt::format("{:>8} {:>8g} {:>12.6g} {:>10.3g} {:>12.5g} {:>10.3g} {:>12.5g} {:>10.3g}\n", p.solvent,
                               p.nu, p.modified.mean, p.modified.mean_error_bar, p.plain.asym_variance,
                               p.plain.variance_error_bar, p.modified.asym_variance, p.modified.variance_error_bar);
        if (p.clamped > 0) summary << fmt::format("  warning: {} samples beyond r_max\n", p.clamped);
    }
}

int emit_selftest(const ExperimentConfig& cfg, Writer& w, std::ostringstream& summary) {
    const auto result = run_selftest(cfg);
    auto os = w.open("selftest_ou.csv");
    os << "repetition,mean,mean_err,asym_var,var_err,covered\n";
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        const auto& r = result.reports[i];
        const bool covered = std::abs(r.asym_variance - 2.0) <= r.variance_error_bar;
        os << i << ',' << stats_row(r) << ',' << (covered ? 1 : 0) << '\n';
    }
    summary << fmt::format("selftest-ou: {} of {} repetitions cover sigma^2 = 2 (required {})\n", result.hits,
                           cfg.selftest.repetitions, cfg.selftest.required);
    return result.hits >= cfg.selftest.required ? exit_ok : exit_selftest;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
    RunResult result;
    const auto diagnostics = validate(cfg);
    if (!diagnostics.empty()) {
        result.exit_code = exit_config;
        for (const auto& d : diagnostics) result.summary += "config error: " + d + "\n";
        return result;
    }
    std::ostringstream summary;
    try {
        Writer w(cfg);
        if (cfg.experiment == "mobility") {
            emit_mobility(cfg, w, summary);
        } else if (cfg.experiment == "chain") {
            emit_chain(cfg, w, summary);
        } else if (cfg.experiment == "dimer") {
            emit_dimer(cfg, w, summary);
        } else {
            result.exit_code = emit_selftest(cfg, w, summary);
        }
        result.files = w.files();
    } catch (const ConfigError& e) {
        result.exit_code = exit_config;
        summary << "config error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        result.exit_code = exit_runtime;
        summary << "runtime error: " << e.what() << '\n';
    }
    result.summary = summary.str();
    return result;
}

}  // namespace pcv::cli
