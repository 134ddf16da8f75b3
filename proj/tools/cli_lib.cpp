#include "cli_lib.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ringeq::cli {

std::string format_double(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

void Options::load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& err) {
        throw std::runtime_error("config file " + path + ": " + err.what());
    }
    if (!j.is_object())
        throw std::runtime_error("config file " + path + ": top level must be an object");
    for (auto& [key, value] : j.items()) {
        if (values_.count(key)) continue;  // flags override the file
        if (value.is_string())
            values_[key] = value.get<std::string>();
        else if (value.is_number_integer())
            values_[key] = std::to_string(value.get<long long>());
        else if (value.is_number_float())
            values_[key] = format_double(value.get<double>());
        else if (value.is_boolean())
            values_[key] = value.get<bool>() ? "true" : "false";
        else
            throw std::runtime_error("config key '" + key +
                                     "': unsupported value type");
    }
}

void Options::set_flag(const std::string& key, const std::string& value) {
    values_[key] = value;
}

void Options::validate_schema(const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            std::string known;
            for (const auto& k : allowed) known += (known.empty() ? "" : ", ") + k;
            throw std::runtime_error("unknown config key '" + key +
                                     "' (allowed: " + known + ")");
        }
    }
}

bool Options::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& Options::require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::runtime_error("missing required key '" + key + "'");
    return it->second;
}

std::string Options::str(const std::string& key) const { return require(key); }

std::string Options::str_or(const std::string& key,
                            const std::string& fallback) const {
    return has(key) ? values_.at(key) : fallback;
}

Rational Options::rational(const std::string& key) const {
    try {
        return parse_rational(require(key));
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error("key '" + key + "': " + err.what());
    }
}

Rational Options::rational_or(const std::string& key,
                              const Rational& fallback) const {
    return has(key) ? rational(key) : fallback;
}

long long Options::integer(const std::string& key) const {
    const auto& text = require(key);
    std::size_t pos = 0;
    long long v = std::stoll(text, &pos);
    if (pos != text.size())
        throw std::runtime_error("key '" + key + "': not an integer: " + text);
    return v;
}

long long Options::integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
}

double Options::real(const std::string& key) const {
    const auto& text = require(key);
    // rationals are accepted anywhere a real number is
    if (text.find('/') != std::string::npos) return to_double(parse_rational(text));
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size())
        throw std::runtime_error("key '" + key + "': not a number: " + text);
    return v;
}

double Options::real_or(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
}

json Options::resolved() const {
    json out = json::object();
    for (const auto& [key, value] : values_) out[key] = value;
    return out;
}

std::vector<long long> parse_count_list(const std::string& text) {
    std::vector<long long> out;
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c);
        long long start = std::stoll(a);
        long long stop = std::stoll(b);
        if (c.size() < 2 || (c[0] != 'x' && c[0] != '+'))
            throw std::runtime_error("count range step must look like x2 or +4: " + text);
        long long step = std::stoll(c.substr(1));
        if (step <= (c[0] == 'x' ? 1 : 0))
            throw std::runtime_error("count range step must grow: " + text);
        for (long long v = start; v <= stop; v = c[0] == 'x' ? v * step : v + step)
            out.push_back(v);
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stoll(item));
    }
    if (out.empty()) throw std::runtime_error("empty count list: " + text);
    return out;
}

std::string CsvTable::to_string() const {
    std::string out = "# ringeq-csv v1 " + kind + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

json to_json(const ResidualVector& res) {
    return json{{"inf_norm", res.inf_norm},
                {"force_scale", res.force_scale},
                {"relative_inf_norm", res.relative_inf_norm()}};
}

json to_json(const Configuration& config) {
    json positions = json::array();
    for (double x : config.positions()) positions.push_back(x);
    json gaps = json::array();
    for (std::size_t k = 0; k < config.size(); ++k)
        gaps.push_back(config.gap_after(k));
    return json{{"circumference", config.circumference()},
                {"positions", positions},
                {"gaps", gaps}};
}

json to_json(const SegmentSolution& solution) {
    json gaps = json::array();
    for (double g : solution.gaps) gaps.push_back(g);
    json deviations = json::array();
    for (double d : solution.deviations) deviations.push_back(d);
    return json{{"length", solution.problem.length},
                {"count", solution.problem.count},
                {"force", solution.problem.force},
                {"exponent", solution.problem.law.exponent()},
                {"gaps", gaps},
                {"deviations", deviations},
                {"step", solution.step},
                {"residual_norm", solution.residual_norm}};
}

json to_json(const ExistenceVerdict& verdict) {
    json out{{"verdict", to_string(verdict.kind)},
             {"asymptotic_regime", verdict.asymptotic_regime},
             {"repairable", verdict.repairable}};
    if (!verdict.failed_condition.empty())
        out["failed_condition"] = verdict.failed_condition;
    if (verdict.partition) {
        out["partition"] = json::array({verdict.partition->first,
                                        verdict.partition->second});
    }
    if (verdict.gamma) out["gamma"] = format_rational(*verdict.gamma);
    return out;
}

json to_json(const SymmetricBuild& build) {
    json out = to_json(build.config);
    out["overlap"] = build.overlap;
    out["shift"] = build.shift;
    out["window"] = build.window;
    out["residual"] = to_json(build.residual);
    return out;
}

json to_json(const GlueReport& report) {
    return json{{"M1", report.M1},
                {"M2", report.M2},
                {"F1", report.F1},
                {"F2", report.F2},
                {"N1", report.N1},
                {"N2", report.N2},
                {"exponent", report.exponent},
                {"gamma", report.gamma},
                {"m1", report.m1},
                {"m2", report.m2},
                {"infeasibility", report.infeasibility},
                {"infeasibility_rel", report.infeasibility_rel},
                {"m_A", report.m_A},
                {"m_B", report.m_B},
                {"index1", report.index1},
                {"index2", report.index2},
                {"c1", report.c1},
                {"c4", report.c4},
                {"d1", report.d1},
                {"d4", report.d4}};
}

json to_json(const SolveReport& report) {
    json history = json::array();
    for (double r : report.residual_history) history.push_back(r);
    return json{{"status", to_string(report.status)},
                {"iterations", report.iterations},
                {"residual_norm", report.residual_norm},
                {"residual_rel", report.residual_rel},
                {"pinned_index", report.pinned_index},
                {"residual_history", history},
                {"configuration", to_json(report.config)}};
}

json to_json(const RelaxReport& report) {
    json partition = json::array();
    for (int c : report.partition) partition.push_back(c);
    return json{{"status", to_string(report.status)},
                {"time", report.time},
                {"steps", report.steps},
                {"residual_norm", report.residual_norm},
                {"residual_rel", report.residual_rel},
                {"velocity_norm", report.velocity_norm},
                {"damping", report.damping_used},
                {"dt_base", report.dt_base},
                {"partition", partition},
                {"configuration", to_json(report.config)}};
}

json to_json(const SweepResult& sweep) {
    json rows = json::array();
    for (const auto& row : sweep.rows)
        rows.push_back(json{{"N", row.count},
                            {"deviation_inf", row.deviation_inf},
                            {"deviation_two", row.deviation_two},
                            {"predicted", row.predicted}});
    return json{{"rows", rows}, {"slope", sweep.slope}};
}

json to_json(const FineScaleReport& report) {
    json rows = json::array();
    for (const auto& row : report.rows)
        rows.push_back(json{{"index", row.index},
                            {"gap", row.gap},
                            {"deviation", row.deviation},
                            {"predicted", row.predicted}});
    return json{{"rows", rows},
                {"max_deviation", report.max_deviation},
                {"deviation_sum", report.deviation_sum},
                {"imprint_scale", report.imprint_scale}};
}

CsvTable csv_positions(const Configuration& config) {
    CsvTable t;
    t.kind = "positions";
    t.columns = {"index", "position", "gap_after"};
    for (std::size_t k = 0; k < config.size(); ++k)
        t.rows.push_back({std::to_string(k + 1), format_double(config[k]),
                          format_double(config.gap_after(k))});
    return t;
}

CsvTable csv_trajectory(const Trajectory& trajectory) {
    CsvTable t;
    t.kind = "trajectory";
    t.columns = {"time", "residual_rel", "energy"};
    for (std::size_t i = 0; i < trajectory.times.size(); ++i)
        t.rows.push_back({format_double(trajectory.times[i]),
                          format_double(trajectory.residual_norms[i]),
                          format_double(trajectory.energies[i])});
    return t;
}

CsvTable csv_sweep(const SweepResult& sweep) {
    CsvTable t;
    t.kind = "sweep";
    t.columns = {"N", "deviation_inf", "deviation_two", "predicted"};
    for (const auto& row : sweep.rows)
        t.rows.push_back({std::to_string(row.count),
                          format_double(row.deviation_inf),
                          format_double(row.deviation_two),
                          format_double(row.predicted)});
    return t;
}

CsvTable csv_fine_scale(const FineScaleReport& report) {
    CsvTable t;
    t.kind = "fine-scale";
    t.columns = {"index", "gap", "deviation", "predicted"};
    for (const auto& row : report.rows)
        t.rows.push_back({std::to_string(row.index + 1), format_double(row.gap),
                          format_double(row.deviation),
                          format_double(row.predicted)});
    return t;
}

Configuration configuration_from_json(const json& j) {
    const json* node = &j;
    if (node->contains("result")) node = &(*node)["result"];
    if (node->contains("configuration")) node = &(*node)["configuration"];
    if (!node->contains("positions") || !node->contains("circumference"))
        throw std::runtime_error(
            "JSON does not contain a configuration (positions + circumference)");
    std::vector<double> xs;
    for (const auto& v : (*node)["positions"]) xs.push_back(v.get<double>());
    return Configuration(RingGeometry{(*node)["circumference"].get<double>()}, xs);
}

}  // namespace ringeq::cli
