#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hcmean/error.hpp"
#include "hcmean/harness.hpp"

namespace hcmean {

namespace {

const std::set<std::string> kKnownKeys{"family",     "eta",      "gamma1",      "p",         "n",
                                       "replicates", "seed",     "theta",       "k_min",     "k_min_frac",
                                       "k_max_frac", "boot_b",   "level",       "boot_policy", "ci_method"};

template <typename T>
T get(const nlohmann::json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

void GridConfig::validate() const {
    if (gamma1_list.empty() || p_list.empty() || n_list.empty()) throw ConfigError("grid lists must be nonempty");
    for (double g : gamma1_list)
        if (!(g > 0.0 && g < 1.0)) throw ConfigError("every gamma1 must lie in (0,1)");
    for (double p : p_list)
        if (!(p > 0.0 && p < 1.0)) throw ConfigError("every p must lie in (0,1)");
    if (replicates < 1) throw ConfigError("replicates must be at least 1");
    if (family == Family::Burr && !(eta > 0.0)) throw ConfigError("eta must be positive");
    if (!(selection.theta >= 0.0 && selection.theta <= 0.5)) throw ConfigError("theta must lie in [0, 0.5]");
    if (!(selection.k_max_frac > 0.0 && selection.k_max_frac < 1.0)) throw ConfigError("k_max_frac must lie in (0,1)");
    if (!(selection.k_min_frac >= 0.0 && selection.k_min_frac < selection.k_max_frac))
        throw ConfigError("k_min_frac must lie in [0, k_max_frac)");
    for (std::size_t n : n_list) {
        const auto [lo, hi] = selection.range(static_cast<Eigen::Index>(n));
        if (!(lo < hi)) throw ConfigError("sample size " + std::to_string(n) + " leaves no room for k selection");
    }
    if (boot_b < 2) throw ConfigError("boot_b must be at least 2");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0,1)");
}

GridConfig full_grid(Family family) {
    GridConfig config;
    config.family = family;
    return config;
}

GridConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& item : doc.items())
        if (!kKnownKeys.contains(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");

    GridConfig config;
    try {
        config.family = parse_family(get<std::string>(doc, "family", "frechet"));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    config.eta = get(doc, "eta", config.eta);
    config.gamma1_list = get(doc, "gamma1", config.gamma1_list);
    config.p_list = get(doc, "p", config.p_list);
    config.n_list = get(doc, "n", config.n_list);
    config.replicates = get(doc, "replicates", config.replicates);
    config.seed = get(doc, "seed", config.seed);
    config.selection.theta = get(doc, "theta", config.selection.theta);
    config.selection.k_min = get(doc, "k_min", config.selection.k_min);
    config.selection.k_min_frac = get(doc, "k_min_frac", config.selection.k_min_frac);
    config.selection.k_max_frac = get(doc, "k_max_frac", config.selection.k_max_frac);
    config.boot_b = get(doc, "boot_b", config.boot_b);
    config.level = get(doc, "level", config.level);

    const auto policy = get<std::string>(doc, "boot_policy", "fixed");
    if (policy == "fixed")
        config.boot_policy = KPolicy::Kind::Fixed;
    else if (policy == "reauto")
        config.boot_policy = KPolicy::Kind::Reauto;
    else
        throw ConfigError("boot_policy must be 'fixed' or 'reauto'");

    const auto method = get<std::string>(doc, "ci_method", "normal");
    if (method == "normal")
        config.interval = IntervalMethod::Normal;
    else if (method == "percentile")
        config.interval = IntervalMethod::Percentile;
    else
        throw ConfigError("ci_method must be 'normal' or 'percentile'");

    config.validate();
    return config;
}

GridConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace hcmean
