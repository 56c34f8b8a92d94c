#include "rbn/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "rbn/csv.hpp"

namespace rbn {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

bool parse_list(const std::string& s, std::vector<double>& out) {
    out.clear();
    if (trim(s).empty()) return true;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v;
        if (!parse_double(trim(item), v)) return false;
        out.push_back(v);
    }
    return true;
}

std::string list_str(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

using Setter = std::function<bool(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = {
        {"eigenvalues", [](ExperimentConfig& c, const std::string& v) { return parse_list(v, c.eigenvalues); }},
        {"lambda_alpha", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.lambda_alpha); }},
        {"dim", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.dim); }},
        {"gamma", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.gamma); }},
        {"drift", [](ExperimentConfig& c, const std::string& v) { c.drift = v; return true; }},
        {"drift_scale", [](ExperimentConfig& c, const std::string& v) { c.drift_scale = v; return true; }},
        {"sign_a0", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.sign_a0); }},
        {"sign_a1", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.sign_a1); }},
        {"cell_resolution", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.cell_resolution); }},
        {"salt", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.salt); }},
        {"horizon", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.horizon); }},
        {"grid_steps", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.grid_steps); }},
        {"replicas", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.replicas); }},
        {"seed", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.seed); }},
        {"workers", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.workers); }},
        {"out", [](ExperimentConfig& c, const std::string& v) { c.out = v; return true; }},
        {"budget", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.budget); }},
        {"quadrature_min", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.quadrature_min); }},
        {"tolerance", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.tolerance); }},
        {"max_iterations", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.max_iterations); }},
        {"damping", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.damping); }},
        {"beta_a", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.beta_a); }},
        {"n_min", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.n_min); }},
        {"n_max", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.n_max); }},
        {"points", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.points); }},
        {"r", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.r); }},
        {"m", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.m); }},
        {"scale", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.scale); }},
        {"K", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.K); }},
        {"beta0", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.beta0); }},
        {"steps", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.steps); }},
        {"p", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.p); }},
        {"walk_length", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.walk_length); }},
        {"family", [](ExperimentConfig& c, const std::string& v) { c.family = v; return true; }},
        {"C", [](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.C); }},
        {"chain_n", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.chain_n); }},
        {"chain_k", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.chain_k); }},
        {"chain_r", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.chain_r); }},
        {"paths", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.paths); }},
        {"inits", [](ExperimentConfig& c, const std::string& v) { return parse_u64(v, c.inits); }},
        {"x0", [](ExperimentConfig& c, const std::string& v) { return parse_list(v, c.x0); }},
    };
    return table;
}

} // namespace

SpectralOperator ExperimentConfig::make_operator() const {
    if (!eigenvalues.empty()) return SpectralOperator(eigenvalues);
    return SpectralOperator::power_law(static_cast<std::size_t>(dim), lambda_alpha);
}

DriftSpec ExperimentConfig::make_drift() const {
    const auto fam = family_from_name(drift);
    if (!fam) throw std::invalid_argument("unknown drift family: " + drift);
    std::vector<double> scales;
    if (drift_scale == "assumption") {
        scales = DriftSpec::decay_scales(gamma, static_cast<std::size_t>(dim));
    } else {
        double v = 0.0;
        if (!parse_double(drift_scale, v) || !(v >= 0.0))
            throw std::invalid_argument("drift_scale must be 'assumption' or a nonnegative number");
        scales.assign(static_cast<std::size_t>(dim), v);
    }
    DriftSpec d = DriftSpec::make(*fam, std::move(scales));
    d.threshold_a0 = sign_a0;
    d.threshold_a1 = sign_a1;
    d.cell_resolution = static_cast<unsigned>(cell_resolution);
    d.salt = salt;
    return d;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("eigenvalues", list_str(eigenvalues));
    kv.emplace_back("lambda_alpha", format_double(lambda_alpha));
    kv.emplace_back("dim", std::to_string(dim));
    kv.emplace_back("gamma", format_double(gamma));
    kv.emplace_back("drift", drift);
    kv.emplace_back("drift_scale", drift_scale);
    kv.emplace_back("sign_a0", format_double(sign_a0));
    kv.emplace_back("sign_a1", format_double(sign_a1));
    kv.emplace_back("cell_resolution", std::to_string(cell_resolution));
    kv.emplace_back("salt", std::to_string(salt));
    kv.emplace_back("horizon", format_double(horizon));
    kv.emplace_back("grid_steps", std::to_string(grid_steps));
    kv.emplace_back("replicas", std::to_string(replicas));
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("budget", std::to_string(budget));
    kv.emplace_back("quadrature_min", std::to_string(quadrature_min));
    kv.emplace_back("tolerance", format_double(tolerance));
    kv.emplace_back("max_iterations", std::to_string(max_iterations));
    kv.emplace_back("damping", format_double(damping));
    kv.emplace_back("beta_a", format_double(beta_a));
    kv.emplace_back("n_min", std::to_string(n_min));
    kv.emplace_back("n_max", std::to_string(n_max));
    kv.emplace_back("points", std::to_string(points));
    kv.emplace_back("r", std::to_string(r));
    kv.emplace_back("m", std::to_string(m));
    kv.emplace_back("scale", std::to_string(scale));
    kv.emplace_back("K", format_double(K));
    kv.emplace_back("beta0", format_double(beta0));
    kv.emplace_back("steps", std::to_string(steps));
    kv.emplace_back("p", format_double(p));
    kv.emplace_back("walk_length", std::to_string(walk_length));
    kv.emplace_back("family", family);
    kv.emplace_back("C", format_double(C));
    kv.emplace_back("chain_n", std::to_string(chain_n));
    kv.emplace_back("chain_k", std::to_string(chain_k));
    kv.emplace_back("chain_r", std::to_string(chain_r));
    kv.emplace_back("paths", std::to_string(paths));
    kv.emplace_back("inits", std::to_string(inits));
    kv.emplace_back("x0", list_str(x0));
    return kv;
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };
    require(cfg.dim >= 1, "dim must be >= 1");
    require(cfg.gamma > 0.0, "gamma must satisfy gamma > 0");
    require(family_from_name(cfg.drift).has_value(), "unknown drift family: " + cfg.drift);
    if (cfg.drift_scale != "assumption") {
        double v = 0.0;
        require(parse_double(cfg.drift_scale, v) && v >= 0.0,
                "drift_scale must be 'assumption' or a nonnegative number");
    }
    require(cfg.horizon > 0.0 && cfg.horizon <= 1.0, "horizon must lie in (0, 1]");
    require(cfg.grid_steps >= 1, "grid_steps must be >= 1");
    require(cfg.replicas >= 1, "replicas must be >= 1");
    require(cfg.workers >= 1, "workers must be >= 1");
    require(cfg.quadrature_min >= 1, "quadrature_min must be >= 1");
    require(cfg.tolerance > 0.0, "tolerance must be > 0");
    require(cfg.max_iterations >= 1, "max_iterations must be >= 1");
    require(cfg.damping > 0.0 && cfg.damping <= 1.0, "damping must lie in (0, 1]");
    require(cfg.beta_a > 0.0, "beta_a must be > 0");
    require(cfg.n_min >= 1, "n_min must be >= 1");
    require(cfg.n_max >= cfg.n_min, "n_max must be >= n_min");
    require(cfg.n_max <= 24, "n_max must be <= 24");
    require(cfg.points >= 1, "points must be >= 1");
    require(cfg.m >= cfg.r, "m must be >= r");
    require(cfg.m <= 40, "m must be <= 40");
    require(cfg.scale == 1 || cfg.scale == 2, "scale must be 1 or 2");
    require(cfg.K >= 0.0, "K must be >= 0");
    require(cfg.beta0 > 0.0 && cfg.beta0 < 1.0, "beta0 must lie in (0, 1)");
    require(cfg.p >= 2.0, "p must be >= 2");
    require(cfg.walk_length >= 1, "walk_length must be >= 1");
    require(cfg.C > 0.0, "C must be > 0");
    require(cfg.chain_n >= 1 && cfg.chain_n <= 24, "chain_n must lie in [1, 24]");
    require(cfg.paths >= 1, "paths must be >= 1");
    require(cfg.inits >= 2, "inits must be >= 2");
    if (!cfg.eigenvalues.empty()) {
        double prev = 0.0;
        bool ok = true;
        for (double lambda : cfg.eigenvalues) {
            if (!(lambda > 0.0) || lambda < prev) ok = false;
            prev = lambda;
        }
        require(ok, "eigenvalues must be positive and nondecreasing");
    } else {
        require(cfg.lambda_alpha > 0.0, "lambda_alpha must be > 0");
    }
    return errors;
}

ParseOutcome parse_config(const std::string& text, ExperimentConfig base) {
    ParseOutcome outcome;
    std::vector<std::string>& errors = outcome.errors;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = key_table().find(key);
        if (it == key_table().end()) {
            errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            continue;
        }
        if (!it->second(base, value))
            errors.push_back("line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
    for (const std::string& msg : validate_config(base)) errors.push_back(msg);
    if (errors.empty()) outcome.config = std::move(base);
    return outcome;
}

} // namespace rbn
