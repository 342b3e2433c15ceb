#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "lampwalk/cli.hpp"
#include "lampwalk/error.hpp"

namespace lampwalk::cli {

namespace {

const std::map<std::string, std::vector<std::string>, std::less<>>& schemas() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> table{
      {"config",
       {"kind", "version", "config_hash", "family", "rank", "modulus", "c", "measure", "steps", "walks", "seed",
        "tail_window", "depth", "scheme"}},
      {"walk",
       {"kind", "version", "config_hash", "seed", "walk", "steps", "final_position", "distance", "speed",
        "support_size", "settled_count", "tail_window", "stable_prefix", "stable_length", "direction",
        "stabilization_time", "lamp_lower", "lamp_upper"}},
      {"aggregate",
       {"kind", "version", "config_hash", "seed", "walks", "steps", "generates", "drift", "drift_l1", "speed_mean",
        "speed_se", "lamp_speed_lower", "lamp_speed_upper", "harmonic_depth", "harmonic_decided",
        "harmonic_undecided", "harmonic_max", "harmonic_counts", "atom_max_mass", "atom_decaying", "atom_atomic",
        "atom_note", "atom_shared_pairs", "stationarity_depth", "stationarity_max", "stationarity_radius",
        "stationarity_status"}},
      {"metric",
       {"kind", "version", "config_hash", "element", "distance", "lower", "upper", "exact", "tour", "bfs_distance",
        "bfs_agrees"}},
      {"equivariance",
       {"kind", "version", "config_hash", "seed", "u", "v", "scheme", "n_max", "trials", "checked",
        "strip_mismatches", "partition_mismatches", "lifted_mismatches", "count_violations", "first_mismatch"}},
      {"check", {"kind", "version", "config_hash", "seed", "name", "ok", "cases", "failures", "detail"}},
  };
  return table;
}

bool in_schema(std::string_view kind, std::string_view key) {
  for (const auto& k : record_schema(kind)) {
    if (k == key) return true;
  }
  return false;
}

std::vector<std::pair<std::string, Value>> config_fields(const ExperimentConfig& cfg) {
  return {
      {"family", std::string(cfg.group.family == GroupFamily::Free ? "free" : "lattice")},
      {"rank", static_cast<std::int64_t>(cfg.group.rank)},
      {"modulus", static_cast<std::int64_t>(cfg.modulus)},
      {"c", to_string(cfg.c)},
      {"measure", cfg.measure},
      {"steps", cfg.steps},
      {"walks", cfg.walks},
      {"seed", static_cast<std::int64_t>(cfg.seed)},
      {"tail_window", cfg.tail_window},
      {"depth", static_cast<std::int64_t>(cfg.depth)},
      {"scheme", to_string(cfg.partition_scheme())},
  };
}

}  // namespace

Record::Record(std::string kind) {
  if (record_schema(kind).empty()) throw InvalidInput("unknown record kind '" + kind + "'");
  fields_.emplace_back("kind", std::move(kind));
  fields_.emplace_back("version", std::string(kVersion));
}

Record& Record::add(std::string key, Value value) {
  if (!in_schema(kind(), key)) throw InvalidInput("field '" + key + "' is not part of the '" + kind() + "' schema");
  if (has(key)) throw InvalidInput("duplicate record field '" + key + "'");
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

const std::string& Record::kind() const { return std::get<std::string>(fields_.front().second); }

const Value& Record::at(std::string_view key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  throw InvalidInput("record has no field '" + std::string(key) + "'");
}

bool Record::has(std::string_view key) const {
  for (const auto& [k, _] : fields_) {
    if (k == key) return true;
  }
  return false;
}

const std::vector<std::string>& record_schema(std::string_view kind) {
  static const std::vector<std::string> none;
  auto it = schemas().find(kind);
  return it == schemas().end() ? none : it->second;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string serialize(const Record& record) {
  std::string line = "{";
  bool first = true;
  for (const auto& [key, value] : record.fields()) {
    if (!first) line += ',';
    first = false;
    line += nlohmann::json(key).dump();
    line += ':';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::int64_t>) line += std::to_string(v);
          else if constexpr (std::is_same_v<T, double>) line += format_double(v);
          else if constexpr (std::is_same_v<T, bool>) line += v ? "true" : "false";
          else line += nlohmann::json(v).dump();
        },
        value);
  }
  return line + "}";
}

Record parse_record(std::string_view line) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("record is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.size() < 2) throw InvalidInput("record must be an object with kind and version");
  auto it = j.begin();
  if (it.key() != "kind" || !it.value().is_string()) throw InvalidInput("record must start with a string 'kind'");
  Record r(it.value().get<std::string>());
  ++it;
  if (it.key() != "version" || !it.value().is_string()) throw InvalidInput("record 'version' must follow 'kind'");
  r.fields_[1].second = it.value().get<std::string>();
  for (++it; it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_boolean()) r.add(it.key(), v.get<bool>());
    else if (v.is_number_integer() && !(v.is_number_unsigned() && v.get<std::uint64_t>() > INT64_MAX)) r.add(it.key(), v.get<std::int64_t>());
    else if (v.is_number_float()) r.add(it.key(), v.get<double>());
    else if (v.is_string()) r.add(it.key(), v.get<std::string>());
    else throw InvalidInput("record field '" + it.key() + "' has an unsupported type");
  }
  return r;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  Record echo("config");
  for (auto& [k, v] : config_fields(cfg)) echo.add(k, v);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(echo)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_hash(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Record config_record(const ExperimentConfig& cfg) {
  Record r("config");
  r.add("config_hash", hex_hash(config_hash(cfg)));
  for (auto& [k, v] : config_fields(cfg)) r.add(k, v);
  return r;
}

}  // namespace lampwalk::cli
