#include "pcv/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pcv/csv.hpp"
#include "pcv/errors.hpp"

namespace pcv::cli {

namespace {

using Setter = std::function<void(const std::string&)>;

std::string trim(std::string s) {
    boost::algorithm::trim(s);
    return s;
}

template <class T>
T parse_number(const std::string& field, const std::string& raw) {
    const std::string s = trim(raw);
    T value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end || s.empty()) {
        throw ConfigError(field + ": cannot parse '" + s + "' as a number");
    }
    return value;
}

bool parse_bool(const std::string& field, const std::string& raw) {
    const std::string s = boost::algorithm::to_lower_copy(trim(raw));
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    throw ConfigError(field + ": expected a boolean, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, raw, boost::algorithm::is_any_of(","));
    std::vector<std::string> out;
    for (auto& p : parts) {
        auto t = trim(p);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

template <class T>
std::vector<T> parse_list(const std::string& field, const std::string& raw) {
    std::vector<T> out;
    for (const auto& item : split_list(raw)) out.push_back(parse_number<T>(field, item));
    return out;
}

template <class T>
Setter num(T& target, const std::string& field) {
    return [&target, field](const std::string& v) { target = parse_number<T>(field, v); };
}

Setter flag(bool& target, const std::string& field) {
    return [&target, field](const std::string& v) { target = parse_bool(field, v); };
}

Setter text(std::string& target) {
    return [&target](const std::string& v) { target = trim(v); };
}

template <class T>
Setter list(std::vector<T>& target, const std::string& field) {
    return [&target, field](const std::string& v) { target = parse_list<T>(field, v); };
}

Setter words(std::vector<std::string>& target) {
    return [&target](const std::string& v) { target = split_list(v); };
}

std::map<std::string, Setter> setters(ExperimentConfig& c) {
    std::map<std::string, Setter> s;
    s["experiment"] = text(c.experiment);
    s["seed"] = num(c.seed, "seed");
    s["replicas"] = num(c.replicas, "replicas");
    s["output"] = text(c.output);

    s["run.dt"] = num(c.run.dt, "run.dt");
    s["run.n_steps"] = num(c.run.n_steps, "run.n_steps");
    s["run.burn_in"] = num(c.run.burn_in, "run.burn_in");
    s["run.acf"] = flag(c.run.acf, "run.acf");
    s["run.acf_stride"] = num(c.run.acf_stride, "run.acf_stride");

    s["mobility.m"] = num(c.mobility.m, "mobility.m");
    s["mobility.gamma"] = num(c.mobility.gamma, "mobility.gamma");
    s["mobility.beta"] = num(c.mobility.beta, "mobility.beta");
    s["mobility.amplitude"] = num(c.mobility.amplitude, "mobility.amplitude");
    s["mobility.bases"] = words(c.mobility.bases);
    s["mobility.eta"] = list(c.mobility.eta, "mobility.eta");
    s["mobility.t_deco"] = num(c.mobility.t_deco, "mobility.t_deco");

    s["chain.n"] = list(c.chain.n, "chain.n");
    s["chain.b"] = list(c.chain.b, "chain.b");
    s["chain.a"] = num(c.chain.a, "chain.a");
    s["chain.m"] = num(c.chain.m, "chain.m");
    s["chain.gamma"] = num(c.chain.gamma, "chain.gamma");
    s["chain.t_left"] = num(c.chain.t_left, "chain.t_left");
    s["chain.t_right"] = num(c.chain.t_right, "chain.t_right");
    s["chain.t_deco_standard"] = num(c.chain.t_deco_standard, "chain.t_deco_standard");
    s["chain.t_deco_modified"] = num(c.chain.t_deco_modified, "chain.t_deco_modified");
    s["chain.conductivity"] = flag(c.chain.conductivity, "chain.conductivity");

    s["dimer.n"] = num(c.dimer.n, "dimer.n");
    s["dimer.box"] = num(c.dimer.box, "dimer.box");
    s["dimer.beta"] = num(c.dimer.beta, "dimer.beta");
    s["dimer.h"] = num(c.dimer.h, "dimer.h");
    s["dimer.r0"] = num(c.dimer.r0, "dimer.r0");
    s["dimer.dr"] = num(c.dimer.dr, "dimer.dr");
    s["dimer.solvent"] = words(c.dimer.solvent);
    s["dimer.eps"] = num(c.dimer.eps, "dimer.eps");
    s["dimer.sigma"] = num(c.dimer.sigma, "dimer.sigma");
    s["dimer.r_cut"] = num(c.dimer.r_cut, "dimer.r_cut");
    s["dimer.nu"] = list(c.dimer.nu, "dimer.nu");
    s["dimer.t_deco"] = num(c.dimer.t_deco, "dimer.t_deco");
    s["dimer.grid_h"] = num(c.dimer.grid_h, "dimer.grid_h");
    s["dimer.r_max"] = num(c.dimer.r_max, "dimer.r_max");

    s["selftest.t_deco"] = num(c.selftest.t_deco, "selftest.t_deco");
    s["selftest.time_factor"] = num(c.selftest.time_factor, "selftest.time_factor");
    s["selftest.repetitions"] = num(c.selftest.repetitions, "selftest.repetitions");
    s["selftest.required"] = num(c.selftest.required, "selftest.required");
    return s;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_same_v<T, double>) {
            out += fmt17(v[i]);
        } else if constexpr (std::is_same_v<T, std::string>) {
            out += v[i];
        } else {
            out += std::to_string(v[i]);
        }
    }
    return out;
}

std::string b2s(bool b) { return b ? "true" : "false"; }

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream cleaned;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (!t.empty() && t[0] == '#') {
            cleaned << '\n';
        } else {
            cleaned << line << '\n';
        }
    }
    boost::property_tree::ptree tree;
    std::istringstream src(cleaned.str());
    try {
        boost::property_tree::ini_parser::read_ini(src, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig cfg;
    auto table = setters(cfg);
    for (const auto& [key, node] : tree) {
        if (node.empty()) {
            auto it = table.find(key);
            if (it == table.end()) throw ConfigError(key + ": unknown key");
            it->second(node.data());
            continue;
        }
        for (const auto& [sub, leaf] : node) {
            const std::string field = key + "." + sub;
            if (!leaf.empty()) throw ConfigError(field + ": nested sections are not supported");
            auto it = table.find(field);
            if (it == table.end()) throw ConfigError(field + ": unknown key");
            it->second(leaf.data());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "experiment = " << c.experiment << '\n';
    o << "seed = " << c.seed << '\n';
    o << "replicas = " << c.replicas << '\n';
    o << "output = " << c.output << '\n';
    o << "\n[run]\n";
    o << "dt = " << fmt17(c.run.dt) << '\n';
    o << "n_steps = " << c.run.n_steps << '\n';
    o << "burn_in = " << c.run.burn_in << '\n';
    o << "acf = " << b2s(c.run.acf) << '\n';
    o << "acf_stride = " << c.run.acf_stride << '\n';
    o << "\n[mobility]\n";
    o << "m = " << fmt17(c.mobility.m) << '\n';
    o << "gamma = " << fmt17(c.mobility.gamma) << '\n';
    o << "beta = " << fmt17(c.mobility.beta) << '\n';
    o << "amplitude = " << fmt17(c.mobility.amplitude) << '\n';
    o << "bases = " << join(c.mobility.bases) << '\n';
    o << "eta = " << join(c.mobility.eta) << '\n';
    o << "t_deco = " << fmt17(c.mobility.t_deco) << '\n';
    o << "\n[chain]\n";
    o << "n = " << join(c.chain.n) << '\n';
    o << "b = " << join(c.chain.b) << '\n';
    o << "a = " << fmt17(c.chain.a) << '\n';
    o << "m = " << fmt17(c.chain.m) << '\n';
    o << "gamma = " << fmt17(c.chain.gamma) << '\n';
    o << "t_left = " << fmt17(c.chain.t_left) << '\n';
    o << "t_right = " << fmt17(c.chain.t_right) << '\n';
    o << "t_deco_standard = " << fmt17(c.chain.t_deco_standard) << '\n';
    o << "t_deco_modified = " << fmt17(c.chain.t_deco_modified) << '\n';
    o << "conductivity = " << b2s(c.chain.conductivity) << '\n';
    o << "\n[dimer]\n";
    o << "n = " << c.dimer.n << '\n';
    o << "box = " << fmt17(c.dimer.box) << '\n';
    o << "beta = " << fmt17(c.dimer.beta) << '\n';
    o << "h = " << fmt17(c.dimer.h) << '\n';
    o << "r0 = " << fmt17(c.dimer.r0) << '\n';
    o << "dr = " << fmt17(c.dimer.dr) << '\n';
    o << "solvent = " << join(c.dimer.solvent) << '\n';
    o << "eps = " << fmt17(c.dimer.eps) << '\n';
    o << "sigma = " << fmt17(c.dimer.sigma) << '\n';
    o << "r_cut = " << fmt17(c.dimer.r_cut) << '\n';
    o << "nu = " << join(c.dimer.nu) << '\n';
    o << "t_deco = " << fmt17(c.dimer.t_deco) << '\n';
    o << "grid_h = " << fmt17(c.dimer.grid_h) << '\n';
    o << "r_max = " << fmt17(c.dimer.r_max) << '\n';
    o << "\n[selftest]\n";
    o << "t_deco = " << fmt17(c.selftest.t_deco) << '\n';
    o << "time_factor = " << fmt17(c.selftest.time_factor) << '\n';
    o << "repetitions = " << c.selftest.repetitions << '\n';
    o << "required = " << c.selftest.required << '\n';
    return o.str();
}

std::pair<int, int> parse_basis(const std::string& s) {
    const auto pos = s.find('x');
    if (pos == std::string::npos) throw ConfigError("mobility.bases: expected KqxKp, got '" + s + "'");
    return {parse_number<int>("mobility.bases", s.substr(0, pos)),
            parse_number<int>("mobility.bases", s.substr(pos + 1))};
}

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> d;
    auto positive = [&d](double v, const char* field) {
        if (!(v > 0.0)) d.push_back(std::string(field) + ": must be positive");
    };
    const bool known = c.experiment == "mobility" || c.experiment == "chain" || c.experiment == "dimer" ||
                       c.experiment == "selftest-ou";
    if (!known) d.push_back("experiment: unknown experiment '" + c.experiment + "'");
    if (c.replicas < 1) d.push_back("replicas: must be at least 1");
    if (c.output.empty()) d.push_back("output: must not be empty");

    positive(c.run.dt, "run.dt");
    if (c.run.n_steps == 0) d.push_back("run.n_steps: must be positive");
    if (c.run.burn_in >= 0 && static_cast<std::uint64_t>(c.run.burn_in) >= c.run.n_steps) {
        d.push_back("run.burn_in: must be smaller than run.n_steps");
    }
    if (c.run.acf_stride == 0) d.push_back("run.acf_stride: must be positive");

    auto check_window = [&](double t_deco, const char* field) {
        positive(t_deco, field);
        if (!(c.run.dt > 0.0) || !(t_deco > 0.0)) return;
        const double nd = std::round(t_deco / c.run.dt);
        const std::uint64_t samples = c.run.n_steps - std::min(c.run.n_steps, c.run.burn_in_steps());
        if (static_cast<double>(samples) < 2.0 * nd + 1.0) {
            d.push_back(std::string(field) + ": run too short for this decorrelation time");
        }
    };

    if (c.experiment == "mobility") {
        positive(c.mobility.m, "mobility.m");
        positive(c.mobility.gamma, "mobility.gamma");
        positive(c.mobility.beta, "mobility.beta");
        if (c.mobility.bases.empty()) d.push_back("mobility.bases: must not be empty");
        for (const auto& b : c.mobility.bases) {
            try {
                const auto [kq, kp] = parse_basis(b);
                if (kq < 1 || kq % 2 == 0) d.push_back("mobility.bases: K_q must be odd in '" + b + "'");
                if (kp < 2) d.push_back("mobility.bases: K_p must be at least 2 in '" + b + "'");
            } catch (const ConfigError& e) {
                d.push_back(e.what());
            }
        }
        if (c.mobility.eta.empty()) d.push_back("mobility.eta: must not be empty");
        check_window(c.mobility.t_deco, "mobility.t_deco");
    } else if (c.experiment == "chain") {
        if (c.chain.n.empty()) d.push_back("chain.n: must not be empty");
        for (int n : c.chain.n) {
            if (n < 2) d.push_back("chain.n: needs at least two particles");
        }
        if (c.chain.b.empty()) d.push_back("chain.b: must not be empty");
        positive(c.chain.a, "chain.a");
        positive(c.chain.m, "chain.m");
        positive(c.chain.gamma, "chain.gamma");
        positive(c.chain.t_left, "chain.t_left");
        positive(c.chain.t_right, "chain.t_right");
        if (c.chain.conductivity && c.chain.t_left == c.chain.t_right) {
            d.push_back("chain.conductivity: requires t_left != t_right");
        }
        for (int n : c.chain.n) {
            const double t = c.chain.t_deco_standard > 0.0 ? c.chain.t_deco_standard : 3.0 * n;
            check_window(t, "chain.t_deco_standard");
        }
        check_window(c.chain.t_deco_modified, "chain.t_deco_modified");
    } else if (c.experiment == "dimer") {
        positive(c.dimer.box, "dimer.box");
        positive(c.dimer.beta, "dimer.beta");
        positive(c.dimer.h, "dimer.h");
        positive(c.dimer.dr, "dimer.dr");
        positive(c.dimer.eps, "dimer.eps");
        positive(c.dimer.grid_h, "dimer.grid_h");
        if (!(c.dimer.r_max > c.dimer.r0 + c.dimer.dr)) d.push_back("dimer.r_max: must exceed r0 + dr");
        if (c.dimer.solvent.empty()) d.push_back("dimer.solvent: must not be empty");
        bool solvated = false;
        for (const auto& s : c.dimer.solvent) {
            if (s != "none" && s != "soft" && s != "coulomb") {
                d.push_back("dimer.solvent: unknown solvent '" + s + "'");
            }
            solvated = solvated || s != "none";
        }
        if (solvated) {
            positive(c.dimer.r_cut, "dimer.r_cut");
            if (c.dimer.r_cut >= c.dimer.box / 2.0) d.push_back("dimer.r_cut: must be below box/2 (minimum image)");
            if (c.dimer.n < 3) d.push_back("dimer.n: a solvated dimer needs at least 3 particles");
            if (!(c.dimer.sigma > 0.0 && c.dimer.sigma < c.dimer.r_cut)) {
                d.push_back("dimer.sigma: must lie in (0, r_cut)");
            }
        }
        if (c.dimer.nu.empty()) d.push_back("dimer.nu: must not be empty");
        check_window(c.dimer.t_deco, "dimer.t_deco");
    } else if (c.experiment == "selftest-ou") {
        positive(c.selftest.t_deco, "selftest.t_deco");
        if (!(c.selftest.time_factor >= 2.0)) {
            d.push_back("selftest.time_factor: must be at least 2");
        } else if (c.selftest.t_deco > 0.0 && c.run.dt > 0.0) {
            const double nd = std::round(c.selftest.t_deco / c.run.dt);
            if (std::round(c.selftest.time_factor * c.selftest.t_deco / c.run.dt) < 2.0 * nd + 1.0) {
                d.push_back("selftest.time_factor: run too short for this decorrelation time");
            }
        }
        if (c.selftest.repetitions < 1) d.push_back("selftest.repetitions: must be at least 1");
        if (c.selftest.required < 0 || c.selftest.required > c.selftest.repetitions) {
            d.push_back("selftest.required: must lie in [0, repetitions]");
        }
    }
    return d;
}

}  // namespace pcv::cli
