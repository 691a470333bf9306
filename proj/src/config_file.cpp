#include "suprb/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "suprb/errors.hpp"

namespace suprb {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_real(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw UsageError("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw UsageError("config key '" + std::string(key) + "': expected true or false");
}

struct Field {
    std::function<void(TrainingConfig&, std::string_view key, std::string_view value)> set;
    std::function<std::string(const TrainingConfig&)> get;
};

template <typename T>
Field size_field(T TrainingConfig::*outer, std::size_t T::*member)
{
    return {[=](TrainingConfig& c, std::string_view k, std::string_view v) {
                c.*outer.*member = parse_number<std::size_t>(k, v);
            },
            [=](const TrainingConfig& c) { return std::to_string(c.*outer.*member); }};
}

template <typename T>
Field real_field(T TrainingConfig::*outer, double T::*member)
{
    return {[=](TrainingConfig& c, std::string_view k, std::string_view v) {
                c.*outer.*member = parse_number<double>(k, v);
            },
            [=](const TrainingConfig& c) { return format_real(c.*outer.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields()
{
    using TC = TrainingConfig;
    using DP = DiscoveryParams;
    using CP = CompositionParams;
    static const std::vector<std::pair<std::string, Field>> table = {
        {"n_phases", {[](TC& c, std::string_view k, std::string_view v) { c.n_phases = parse_number<std::size_t>(k, v); },
                      [](const TC& c) { return std::to_string(c.n_phases); }}},
        {"rng_seed", {[](TC& c, std::string_view k, std::string_view v) { c.rng_seed = parse_number<std::uint64_t>(k, v); },
                      [](const TC& c) { return std::to_string(c.rng_seed); }}},
        {"ridge_lambda", {[](TC& c, std::string_view k, std::string_view v) { c.ridge_lambda = parse_number<double>(k, v); },
                          [](const TC& c) { return format_real(c.ridge_lambda); }}},
        {"early_stop", {[](TC& c, std::string_view k, std::string_view v) { c.early_stop = parse_bool(k, v); },
                        [](const TC& c) { return std::string(c.early_stop ? "true" : "false"); }}},
        {"early_stop_tol", {[](TC& c, std::string_view k, std::string_view v) { c.early_stop_tol = parse_number<double>(k, v); },
                            [](const TC& c) { return format_real(c.early_stop_tol); }}},
        {"discovery.lambda", size_field(&TC::discovery, &DP::lambda)},
        {"discovery.delta", size_field(&TC::discovery, &DP::delta)},
        {"discovery.mutation_sigma", real_field(&TC::discovery, &DP::mutation_sigma)},
        {"discovery.init_sigma", real_field(&TC::discovery, &DP::init_sigma)},
        {"discovery.rules_per_phase", size_field(&TC::discovery, &DP::rules_per_phase)},
        {"discovery.max_iter", size_field(&TC::discovery, &DP::max_iter)},
        {"discovery.max_retries", size_field(&TC::discovery, &DP::max_retries)},
        {"composition.population_size", size_field(&TC::composition, &CP::population_size)},
        {"composition.tournament_k", size_field(&TC::composition, &CP::tournament_k)},
        {"composition.crossover_points", size_field(&TC::composition, &CP::crossover_points)},
        {"composition.crossover_prob", real_field(&TC::composition, &CP::crossover_prob)},
        {"composition.mutation_rate", real_field(&TC::composition, &CP::mutation_rate)},
        {"composition.elitists", size_field(&TC::composition, &CP::elitists)},
        {"composition.generations_per_phase", size_field(&TC::composition, &CP::generations_per_phase)},
        {"fitness.alpha_rule",
         {[](TC& c, std::string_view k, std::string_view v) { c.discovery.fitness.alpha = parse_number<double>(k, v); },
          [](const TC& c) { return format_real(c.discovery.fitness.alpha); }}},
        {"fitness.alpha_candidate",
         {[](TC& c, std::string_view k, std::string_view v) { c.composition.fitness.alpha = parse_number<double>(k, v); },
          [](const TC& c) { return format_real(c.composition.fitness.alpha); }}},
        // One β drives both rule and candidate fitness.
        {"fitness.beta",
         {[](TC& c, std::string_view k, std::string_view v) {
              c.discovery.fitness.beta = parse_number<double>(k, v);
              c.composition.fitness.beta = c.discovery.fitness.beta;
          },
          [](const TC& c) { return format_real(c.discovery.fitness.beta); }}},
    };
    return table;
}

} // namespace

TrainingConfig parse_config(std::string_view text)
{
    TrainingConfig config;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
        if (it == table.end()) {
            throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
        if (const auto prev = seen.find(key); prev != seen.end()) {
            throw UsageError("config line " + std::to_string(line_no) + ": key '" + std::string(key) +
                             "' already set on line " + std::to_string(prev->second));
        }
        seen.emplace(std::string(key), line_no);
        it->second.set(config, key, value);
    }
    config.discovery.ridge_lambda = config.ridge_lambda;
    config.validate();
    return config;
}

TrainingConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const TrainingConfig& config)
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, field] : fields()) {
        out.emplace_back(key, field.get(config));
    }
    return out;
}

std::string format_config(const TrainingConfig& config)
{
    std::string out;
    for (const auto& [key, value] : config_entries(config)) {
        out += key + " = " + value + "\n";
    }
    return out;
}

} // namespace suprb
