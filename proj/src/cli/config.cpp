#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lampwalk/cli.hpp"
#include "lampwalk/error.hpp"

namespace lampwalk::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

// "name(args)" -> args, when `text` has that shape.
bool call_syntax(std::string_view text, std::string_view name, std::string_view& args) {
  if (text.size() < name.size() + 2 || text.substr(0, name.size()) != name) return false;
  if (text[name.size()] != '(' || text.back() != ')') return false;
  args = text.substr(name.size() + 1, text.size() - name.size() - 2);
  return true;
}

std::vector<Rational> parse_vector(std::string_view args) {
  std::vector<Rational> v;
  for (auto part : split(args, ',')) v.push_back(parse_rational(trim(part)));
  return v;
}

StepMeasure atom_measure(const ExperimentConfig& cfg, std::string_view args) {
  std::vector<Atom> atoms;
  for (auto part : split(args, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    const auto colon = part.rfind(':');
    if (colon == std::string_view::npos) throw InvalidInput("atom '" + std::string(part) + "' lacks ':weight'");
    atoms.push_back({parse_lamp_element(cfg.group, cfg.modulus, trim(part.substr(0, colon))),
                     parse_rational(trim(part.substr(colon + 1)))});
  }
  return StepMeasure::create(cfg.group, cfg.modulus, std::move(atoms), GenerationCheck::Skip);
}

std::int64_t json_int(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer()) throw InvalidInput("config field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string json_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw InvalidInput("config field '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

PartitionScheme ExperimentConfig::partition_scheme() const {
  if (scheme.empty()) {
    return group.family == GroupFamily::Free ? PartitionScheme::TreeEdgeCut : PartitionScheme::Hyperplane;
  }
  return parse_scheme(scheme);
}

void apply_config_json(ExperimentConfig& cfg, std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "family") {
      const std::string f = json_string(v, key);
      if (f == "free") cfg.group.family = GroupFamily::Free;
      else if (f == "lattice") cfg.group.family = GroupFamily::Lattice;
      else throw InvalidInput("family must be 'free' or 'lattice'");
    } else if (key == "rank") {
      cfg.group.rank = static_cast<int>(json_int(v, key));
    } else if (key == "modulus") {
      cfg.modulus = static_cast<int>(json_int(v, key));
    } else if (key == "c") {
      cfg.c = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(json_int(v, key));
    } else if (key == "measure") {
      cfg.measure = json_string(v, key);
    } else if (key == "steps") {
      cfg.steps = json_int(v, key);
    } else if (key == "walks") {
      cfg.walks = json_int(v, key);
    } else if (key == "seed") {
      const std::int64_t s = json_int(v, key);
      if (s < 0) throw InvalidInput("seed must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "tail-window") {
      cfg.tail_window = json_int(v, key);
    } else if (key == "depth") {
      cfg.depth = static_cast<int>(json_int(v, key));
    } else if (key == "scheme") {
      cfg.scheme = json_string(v, key);
    } else {
      throw InvalidInput("unknown config field '" + key + "'");
    }
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  ExperimentConfig cfg;
  apply_config_json(cfg, text.str());
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.group.family == GroupFamily::Free && (cfg.group.rank < 1 || cfg.group.rank > 26)) {
    throw InvalidInput("free group rank must be in 1..26");
  }
  if (cfg.group.family == GroupFamily::Lattice && (cfg.group.rank < 1 || cfg.group.rank > 16)) {
    throw InvalidInput("lattice dimension must be in 1..16");
  }
  if (cfg.modulus < 2) throw InvalidInput("modulus must be >= 2");
  if (cfg.modulus > kMaxModulus) throw CapExceeded("modulus", kMaxModulus, cfg.modulus);
  if (cfg.c <= Rational(0)) throw InvalidInput("lamp cost c must be positive");
  if (cfg.steps < 1) throw InvalidInput("steps must be >= 1");
  if (cfg.steps > kMaxSteps) throw CapExceeded("walk length", kMaxSteps, cfg.steps);
  if (cfg.walks < 1) throw InvalidInput("walks must be >= 1");
  if (cfg.walks > kMaxWalks) throw CapExceeded("walks", kMaxWalks, cfg.walks);
  if (cfg.seed > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw InvalidInput("seed must be < 2^63");
  }
  if (cfg.tail_window < 0 || 2 * cfg.tail_window > cfg.steps) {
    throw InvalidInput("tail-window must be in 0..steps/2");
  }
  if (cfg.depth < 1) throw InvalidInput("depth must be >= 1");
  if (cfg.depth > kMaxDepth) throw CapExceeded("cylinder depth", kMaxDepth, cfg.depth);
  const PartitionScheme s = cfg.partition_scheme();
  if ((s == PartitionScheme::Hyperplane) != (cfg.group.family == GroupFamily::Lattice)) {
    throw InvalidInput("scheme " + to_string(s) + " does not apply to " + to_string(cfg.group));
  }
}

StepMeasure build_measure(const ExperimentConfig& cfg) {
  const std::string_view m = trim(cfg.measure);
  std::string_view args;
  if (m == "srw") return simple_random_walk(cfg.group, cfg.modulus);
  if (m == "srw+lamp") return switch_walk(cfg.group, cfg.modulus);
  if (m == "ray" || m == "ray+lamp") {
    const BaseElement step = cfg.group.generators().front();
    Configuration lamps(cfg.modulus);
    if (m == "ray+lamp") lamps.set(cfg.group.identity(), 1);
    return StepMeasure::create(cfg.group, cfg.modulus, {{{lamps, step}, Rational(1)}}, GenerationCheck::Skip);
  }
  if (call_syntax(m, "drift", args)) return drift_walk(cfg.group, cfg.modulus, parse_vector(args), false);
  if (call_syntax(m, "drift+lamp", args)) return drift_walk(cfg.group, cfg.modulus, parse_vector(args), true);
  if (call_syntax(m, "atoms", args)) return atom_measure(cfg, args);
  throw InvalidInput("unknown measure '" + cfg.measure + "'");
}

std::vector<Rational> config_drift(const ExperimentConfig& cfg) {
  if (cfg.group.family != GroupFamily::Lattice) throw VariantMismatch("drift is defined for lattice walks");
  return drift(project_measure(build_measure(cfg)));
}

Configuration parse_lamps(const GroupSpec& group, int modulus, std::string_view text) {
  Configuration config(modulus);
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    int state = 1;
    std::string_view site = token;
    if (const auto eq = site.find('='); eq != std::string_view::npos) {
      try {
        state = std::stoi(std::string(site.substr(eq + 1)));
      } catch (const std::exception&) {
        throw InvalidInput("bad lamp state in '" + token + "'");
      }
      site = site.substr(0, eq);
    }
    config.add(parse_element(group, site), state);
  }
  return config;
}

LampElement parse_lamp_element(const GroupSpec& group, int modulus, std::string_view text) {
  text = trim(text);
  const auto close = text.find('}');
  if (text.empty() || text.front() != '{' || close == std::string_view::npos || close + 1 >= text.size() ||
      text[close + 1] != '@') {
    throw InvalidInput("lamplighter element '" + std::string(text) + "' must look like {lamps}@position");
  }
  return {parse_lamps(group, modulus, text.substr(1, close - 1)), parse_element(group, trim(text.substr(close + 2)))};
}

}  // namespace lampwalk::cli
