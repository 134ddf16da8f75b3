// CLI support: merged flag/config-file options with schema validation,
// shortest round-trip number formatting, CSV assembly, atomic file output,
// and JSON serializers for the library report types.
#ifndef RINGEQ_CLI_LIB_HPP
#define RINGEQ_CLI_LIB_HPP

#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringeq/asymptotics.hpp"
#include "ringeq/circle.hpp"
#include "ringeq/dynamics.hpp"
#include "ringeq/existence.hpp"
#include "ringeq/model.hpp"
#include "ringeq/newton.hpp"
#include "ringeq/rational.hpp"

namespace ringeq::cli {

using json = nlohmann::ordered_json;

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

// Key-value options merged from a JSON config file and command-line flags
// (flags win). Keys outside the schema are rejected with their paths.
class Options {
  public:
    void load_config_file(const std::string& path);
    void set_flag(const std::string& key, const std::string& value);
    void validate_schema(const std::vector<std::string>& allowed_keys) const;

    bool has(const std::string& key) const;
    std::string str(const std::string& key) const;
    std::string str_or(const std::string& key, const std::string& fallback) const;
    Rational rational(const std::string& key) const;
    Rational rational_or(const std::string& key, const Rational& fallback) const;
    long long integer(const std::string& key) const;
    long long integer_or(const std::string& key, long long fallback) const;
    double real(const std::string& key) const;
    double real_or(const std::string& key, double fallback) const;

    json resolved() const;

  private:
    std::map<std::string, std::string> values_;
    const std::string& require(const std::string& key) const;
};

// "16:4096:x2" (geometric), "8:20:+4" (arithmetic), or "8,16,32".
std::vector<long long> parse_count_list(const std::string& text);

struct CsvTable {
    std::string kind;  // schema tag written into the header comment
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::string to_string() const;
};

void write_atomic(const std::string& path, const std::string& content);

json to_json(const ResidualVector& res);
json to_json(const Configuration& config);
json to_json(const SegmentSolution& solution);
json to_json(const ExistenceVerdict& verdict);
json to_json(const SymmetricBuild& build);
json to_json(const GlueReport& report);
json to_json(const SolveReport& report);
json to_json(const RelaxReport& report);
json to_json(const SweepResult& sweep);
json to_json(const FineScaleReport& report);

CsvTable csv_positions(const Configuration& config);
CsvTable csv_trajectory(const Trajectory& trajectory);
CsvTable csv_sweep(const SweepResult& sweep);
CsvTable csv_fine_scale(const FineScaleReport& report);

// Read a configuration back from a report written by this tool.
Configuration configuration_from_json(const json& j);

}  // namespace ringeq::cli

#endif
