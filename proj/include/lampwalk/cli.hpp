#pragma once

// Command-line front end: experiment configuration, the line-oriented record
// format, and the simulate / metric / strip / verify subcommands.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lampwalk/base_group.hpp"
#include "lampwalk/lamplighter.hpp"
#include "lampwalk/rational.hpp"
#include "lampwalk/strips.hpp"
#include "lampwalk/walk_engine.hpp"

namespace lampwalk::cli {

inline constexpr std::string_view kVersion = "1.0.0";

// Desk-scale limits enforced before any work starts.
inline constexpr std::int64_t kMaxSteps = 2'000'000;
inline constexpr std::int64_t kMaxWalks = 200'000;
inline constexpr int kMaxDepth = 12;
inline constexpr int kMaxModulus = 1000;
inline constexpr int kMaxBfsRadius = 8;

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kCapExceeded = 2, kInvariantViolation = 3 };

struct ExperimentConfig {
  GroupSpec group = GroupSpec::free(2);
  int modulus = 2;
  Rational c{1};
  // "srw", "srw+lamp", "ray", "drift(1/3,0,0)", "drift+lamp(...)", or an
  // atom list "atoms({e}@a:1/2;{}@A:1/2)".
  std::string measure = "srw";
  std::int64_t steps = 1000;
  std::int64_t walks = 1;
  std::uint64_t seed = 0;        // at most 2^63 - 1 so records keep it as an integer
  std::int64_t tail_window = 0;  // 0: steps / 10
  int depth = 1;                 // cylinder depth L
  std::string scheme;            // empty: tree-edge-cut on trees, hyperplane on lattices

  PartitionScheme partition_scheme() const;
};

/// Reads a JSON object whose keys are the flag names (family, rank, modulus,
/// c, measure, steps, walks, seed, tail-window, depth, scheme). Unknown keys
/// are rejected.
ExperimentConfig load_config(const std::string& path);
void apply_config_json(ExperimentConfig& cfg, std::string_view json_text);

/// Throws InvalidInput / CapExceeded for out-of-range fields.
void validate(const ExperimentConfig& cfg);

StepMeasure build_measure(const ExperimentConfig& cfg);
/// Exact drift of the projected measure (lattices only).
std::vector<Rational> config_drift(const ExperimentConfig& cfg);

/// "e a=2 ab" -> {e: 1, a: 2, ab: 1}. Lattice sites use "(1,0,0)".
Configuration parse_lamps(const GroupSpec& group, int modulus, std::string_view text);
/// "{e a=2}@ab".
LampElement parse_lamp_element(const GroupSpec& group, int modulus, std::string_view text);

using Value = std::variant<std::int64_t, double, std::string, bool>;

/// One output line: an ordered list of key/value pairs whose first two keys
/// are "kind" and "version".
class Record {
 public:
  explicit Record(std::string kind);

  Record& add(std::string key, Value value);
  Record& add(std::string key, std::int64_t value) { return add(std::move(key), Value{value}); }
  Record& add(std::string key, int value) { return add(std::move(key), Value{static_cast<std::int64_t>(value)}); }
  Record& add(std::string key, std::size_t value) { return add(std::move(key), Value{static_cast<std::int64_t>(value)}); }
  Record& add(std::string key, double value) { return add(std::move(key), Value{value}); }
  Record& add(std::string key, bool value) { return add(std::move(key), Value{value}); }
  Record& add(std::string key, std::string value) { return add(std::move(key), Value{std::move(value)}); }
  Record& add(std::string key, const char* value) { return add(std::move(key), Value{std::string(value)}); }
  Record& add(std::string key, const Rational& value) { return add(std::move(key), Value{to_string(value)}); }

  const std::string& kind() const;
  const std::vector<std::pair<std::string, Value>>& fields() const noexcept { return fields_; }
  const Value& at(std::string_view key) const;
  bool has(std::string_view key) const;

  friend bool operator==(const Record&, const Record&) = default;

 private:
  std::vector<std::pair<std::string, Value>> fields_;
  friend Record parse_record(std::string_view line);
};

/// A JSON object on one line; doubles carry 17 significant digits and always
/// a decimal point or exponent, so parse(serialize(r)) == r.
std::string serialize(const Record& record);
/// Rejects unknown kinds and keys outside the kind's schema.
Record parse_record(std::string_view line);
/// Keys allowed for `kind` (empty when the kind is unknown).
const std::vector<std::string>& record_schema(std::string_view kind);

std::string format_double(double x);

/// FNV-1a over the serialized configuration echo.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string hex_hash(std::uint64_t h);
Record config_record(const ExperimentConfig& cfg);

/// Runs the tool in-process. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lampwalk::cli
