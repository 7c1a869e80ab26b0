#include "volwin/study_config.hpp"

#include "volwin/csv.hpp"
#include "volwin/error.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace volwin::study {

std::vector<WindowDef> default_windows() {
    return {
        {"pre_taper", Date{2010, 1, 1}, Date{2013, 4, 30}, false},
        {"taper", Date{2013, 5, 1}, Date{2013, 12, 31}, true},
        {"post_taper", Date{2014, 1, 1}, Date{2019, 12, 31}, false},
        {"covid", Date{2020, 3, 1}, Date{2021, 6, 30}, true},
        {"post_covid", Date{2021, 7, 1}, Date{2022, 1, 31}, false},
        {"hike", Date{2022, 2, 1}, Date{2023, 6, 30}, true},
    };
}

void StudyConfig::validate() const {
    if (windows.empty()) throw DomainError("study config needs at least one window");
    std::set<std::string> names;
    for (const auto& w : windows) {
        if (w.end < w.start) throw DomainError("window '" + w.name + "' ends before it starts");
        if (!names.insert(w.name).second) throw DomainError("duplicate window name '" + w.name + "'");
    }
    std::set<std::string> ids;
    for (const auto& m : markets) {
        if (!ids.insert(m.market_id).second) throw DomainError("duplicate market id '" + m.market_id + "'");
    }
    if (families.empty()) throw DomainError("study config needs at least one model family");
    if (min_window_obs < 50) throw DomainError("min_window_obs must be at least 50");
    if (!(var_level > 0.5 && var_level < 1.0)) throw DomainError("var_level must lie in (0.5, 1)");
    law.validate();
    fit_config.validate();
}

std::string StudyConfig::canonical_text() const {
    std::ostringstream out;
    out << "law=" << dists::to_string(law.kind) << "\n";
    out << "families=";
    for (const auto f : families) out << models::to_string(f) << ";";
    out << "\nmin_window_obs=" << min_window_obs << "\n";
    out << "fit=" << fit_config.max_iterations << ";" << format_double(fit_config.function_tolerance) << ";"
        << fit_config.starts << ";" << fit_config.seed << "\n";
    out << "diagnostics=" << adf_lags << ";" << ljung_box_lags << ";" << arch_lm_lags << ";"
        << format_double(var_level) << "\n";
    for (const auto& m : markets) {
        out << "market=" << m.market_id << ";" << (m.kind == MarketInput::Kind::prices ? "prices" : "returns")
            << ";" << std::filesystem::path(m.path).filename().string() << ";" << m.column << "\n";
    }
    for (const auto& w : windows) {
        out << "window=" << w.name << ";" << w.start.iso() << ";" << w.end.iso() << ";" << w.is_crisis << "\n";
    }
    return out.str();
}

std::string StudyConfig::hash() const { return hex64(fnv1a64(canonical_text())); }

namespace {

template <typename T>
T get_or(const YAML::Node& node, const char* key, T fallback) {
    const auto child = node[key];
    if (!child || child.IsNull()) return fallback;
    try {
        return child.as<T>();
    } catch (const YAML::Exception& e) {
        throw DataError(std::string("config key '") + key + "': " + e.what());
    }
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    const std::filesystem::path path(p);
    if (path.is_absolute()) return p;
    return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

}  // namespace

StudyConfig parse_study_config(const std::string& yaml_text, const std::string& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw DataError(std::string("study config is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) throw DataError("study config must be a mapping");

    StudyConfig cfg;
    cfg.fit_config.seed = get_or<std::uint64_t>(root, "seed", 0);
    cfg.min_window_obs = get_or<std::size_t>(root, "min_window_obs", 100);
    cfg.threads = get_or<unsigned>(root, "threads", 1);

    const auto law_name = get_or<std::string>(root, "law", "t");
    const auto kind = dists::parse_law_kind(law_name);
    if (!kind) throw DataError("unknown innovation law '" + law_name + "'");
    cfg.law = *kind == dists::LawKind::student_t ? dists::InnovationLaw::student_t(8.0)
              : *kind == dists::LawKind::ged     ? dists::InnovationLaw::ged(1.5)
                                                 : dists::InnovationLaw::normal();

    if (const auto fams = root["families"]) {
        cfg.families.clear();
        for (const auto& f : fams) {
            const auto name = f.as<std::string>();
            const auto fam = models::parse_family(name);
            if (!fam) throw DataError("unknown model family '" + name + "'");
            cfg.families.push_back(*fam);
        }
    }

    if (const auto fit = root["fit"]) {
        cfg.fit_config.max_iterations = get_or<int>(fit, "max_iterations", cfg.fit_config.max_iterations);
        cfg.fit_config.function_tolerance =
            get_or<double>(fit, "function_tolerance", cfg.fit_config.function_tolerance);
        cfg.fit_config.starts = get_or<int>(fit, "starts", cfg.fit_config.starts);
    }
    if (const auto d = root["diagnostics"]) {
        cfg.adf_lags = get_or<std::size_t>(d, "adf_lags", cfg.adf_lags);
        cfg.ljung_box_lags = get_or<std::size_t>(d, "ljung_box_lags", cfg.ljung_box_lags);
        cfg.arch_lm_lags = get_or<std::size_t>(d, "arch_lm_lags", cfg.arch_lm_lags);
        cfg.var_level = get_or<double>(d, "var_level", cfg.var_level);
    }

    if (const auto markets = root["markets"]) {
        for (const auto& m : markets) {
            MarketInput in;
            in.market_id = get_or<std::string>(m, "id", "");
            const auto prices = get_or<std::string>(m, "prices", "");
            const auto returns = get_or<std::string>(m, "returns", "");
            if (prices.empty() == returns.empty()) {
                throw DataError("market '" + in.market_id + "' needs exactly one of 'prices' or 'returns'");
            }
            in.kind = prices.empty() ? MarketInput::Kind::returns : MarketInput::Kind::prices;
            in.path = resolve(base_dir, prices.empty() ? returns : prices);
            in.column = get_or<std::string>(m, "column", "Close");
            if (in.market_id.empty()) throw DataError("market entry without an 'id'");
            cfg.markets.push_back(std::move(in));
        }
    }

    if (const auto windows = root["windows"]) {
        for (const auto& w : windows) {
            WindowDef def;
            def.name = get_or<std::string>(w, "name", "");
            def.start = Date::from_iso(get_or<std::string>(w, "start", ""));
            def.end = Date::from_iso(get_or<std::string>(w, "end", ""));
            def.is_crisis = get_or<bool>(w, "crisis", false);
            if (def.name.empty()) throw DataError("window entry without a 'name'");
            cfg.windows.push_back(std::move(def));
        }
    } else {
        cfg.windows = default_windows();
    }
    cfg.validate();
    return cfg;
}

StudyConfig load_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open study config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    const auto base = std::filesystem::path(path).parent_path().string();
    return parse_study_config(text.str(), base.empty() ? "." : base);
}

}  // namespace volwin::study
