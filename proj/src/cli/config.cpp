#include "mitodet/cli/config.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "mitodet/cli/toml_lite.hpp"
#include "mitodet/core/error.hpp"
#include "mitodet/core/fs.hpp"

namespace mitodet::cli {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  fail(ErrorKind::kInvalidArgument, "config key '" + key + "': " + what);
}

int as_int(const json& v, const std::string& key) {
  if (v.is_number_integer()) {
    const auto x = v.get<long long>();
    if (x >= std::numeric_limits<int>::min() && x <= std::numeric_limits<int>::max()) return static_cast<int>(x);
  }
  bad(key, "expected an integer, got " + v.dump());
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) bad(key, "expected a number, got " + v.dump());
  return v.get<double>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) bad(key, "expected true or false, got " + v.dump());
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad(key, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

std::vector<std::string> as_strings(const json& v, const std::string& key) {
  if (!v.is_array()) bad(key, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(as_string(e, key));
  return out;
}

augment::AugmentSpec as_augment(const json& v, const std::string& key) {
  if (!v.is_array()) bad(key, "expected an array of { kind, p, min, max } tables");
  std::vector<augment::AugmentStep> steps;
  for (const auto& e : v) {
    if (!e.is_object()) bad(key, "expected an inline table, got " + e.dump());
    for (const auto& [k, _] : e.items()) {
      if (k != "kind" && k != "p" && k != "min" && k != "max") bad(key, "unknown field '" + k + "'");
    }
    if (!e.contains("kind")) bad(key, "entry without kind");
    const std::string name = as_string(e["kind"], key);
    const auto kind = augment::parse_kind(name);
    if (!kind) bad(key, "unknown augmentation kind '" + name + "'");
    augment::AugmentStep step{*kind, 0.5, 0.0, 0.0};
    if (e.contains("p")) step.p = as_double(e["p"], key);
    if (e.contains("min")) step.min = as_double(e["min"], key);
    if (e.contains("max")) step.max = as_double(e["max"], key);
    steps.push_back(step);
  }
  try {
    return augment::AugmentSpec(std::move(steps));
  } catch (const Error& err) {
    bad(key, err.what());
  }
}

using Setter = std::function<void(PipelineConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"tile_size", [](auto& c, auto& v, auto& k) { c.tile_size = as_int(v, k); }},
      {"overlap", [](auto& c, auto& v, auto& k) { c.overlap = as_int(v, k); }},
      {"tta", [](auto& c, auto& v, auto& k) { c.tta = as_bool(v, k); }},
      {"seg_threshold", [](auto& c, auto& v, auto& k) { c.seg_threshold = as_double(v, k); }},
      {"open_radius", [](auto& c, auto& v, auto& k) { c.open_radius = as_int(v, k); }},
      {"min_area", [](auto& c, auto& v, auto& k) { c.min_area = as_int(v, k); }},
      {"refine_patch", [](auto& c, auto& v, auto& k) { c.refine_patch = as_int(v, k); }},
      {"accept_threshold", [](auto& c, auto& v, auto& k) { c.accept_threshold = as_double(v, k); }},
      {"segmenter", [](auto& c, auto& v, auto& k) { c.segmenter = as_string(v, k); }},
      {"segmenter_commands", [](auto& c, auto& v, auto& k) { c.segmenter_commands = as_strings(v, k); }},
      {"classifier", [](auto& c, auto& v, auto& k) { c.classifier = as_string(v, k); }},
      {"classifier_commands", [](auto& c, auto& v, auto& k) { c.classifier_commands = as_strings(v, k); }},
      {"oracle_sigma", [](auto& c, auto& v, auto& k) { c.oracle_sigma = as_double(v, k); }},
      {"oracle_radius", [](auto& c, auto& v, auto& k) { c.oracle_radius = as_double(v, k); }},
      {"match_radius_px", [](auto& c, auto& v, auto& k) { c.match_radius_px = as_double(v, k); }},
      {"disk_radius", [](auto& c, auto& v, auto& k) { c.disk_radius = as_int(v, k); }},
      {"harvest_size", [](auto& c, auto& v, auto& k) { c.harvest_size = as_int(v, k); }},
      {"harvest_stride", [](auto& c, auto& v, auto& k) { c.harvest_stride = as_int(v, k); }},
      {"harvest_margin", [](auto& c, auto& v, auto& k) { c.harvest_margin = as_int(v, k); }},
      {"negative_ratio", [](auto& c, auto& v, auto& k) { c.negative_ratio = as_double(v, k); }},
      {"augment", [](auto& c, auto& v, auto& k) { c.augment = as_augment(v, k); }},
      {"seed",
       [](auto& c, auto& v, auto& k) {
         if (!v.is_number_integer() || v.template get<long long>() < 0) bad(k, "expected a non-negative integer");
         c.seed = v.template get<std::uint64_t>();
       }},
      {"jobs", [](auto& c, auto& v, auto& k) { c.jobs = as_int(v, k); }},
  };
  return table;
}

void check(bool ok, const char* key, const std::string& what) {
  if (!ok) bad(key, what);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void PipelineConfig::validate() const {
  check(tile_size >= 1, "tile_size", "must be >= 1");
  check(overlap >= 0 && overlap < tile_size, "overlap", "must lie in [0, tile_size)");
  check(seg_threshold > 0.0 && seg_threshold < 1.0, "seg_threshold", "must lie in (0, 1)");
  check(open_radius >= 0, "open_radius", "must be >= 0");
  check(min_area >= 0, "min_area", "must be >= 0");
  check(refine_patch >= 1, "refine_patch", "must be >= 1");
  check(in_unit(accept_threshold), "accept_threshold", "must lie in [0, 1]");
  check(segmenter == "classical" || segmenter == "oracle" || segmenter == "external", "segmenter",
        "must be classical, oracle or external");
  check(segmenter != "external" || !segmenter_commands.empty(), "segmenter_commands",
        "external segmenter needs at least one command");
  check(classifier == "none" || classifier == "oracle" || classifier == "external", "classifier",
        "must be none, oracle or external");
  check(classifier != "external" || !classifier_commands.empty(), "classifier_commands",
        "external classifier needs at least one command");
  for (const auto& c : segmenter_commands) check(!c.empty(), "segmenter_commands", "empty command");
  for (const auto& c : classifier_commands) check(!c.empty(), "classifier_commands", "empty command");
  check(oracle_sigma > 0.0, "oracle_sigma", "must be > 0");
  check(oracle_radius > 0.0, "oracle_radius", "must be > 0");
  check(match_radius_px > 0.0, "match_radius_px", "must be > 0");
  check(disk_radius >= 1, "disk_radius", "must be >= 1");
  check(harvest_size == 128 || harvest_size == 512, "harvest_size", "must be 128 or 512");
  check(harvest_stride >= 1, "harvest_stride", "must be >= 1");
  check(harvest_margin >= 0 && 2 * harvest_margin < harvest_size, "harvest_margin",
        "must lie in [0, harvest_size / 2)");
  check(negative_ratio >= 0.0 && std::isfinite(negative_ratio), "negative_ratio", "must be >= 0");
  check(seed <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()), "seed",
        "must fit in a signed 64-bit integer");
  check(jobs >= 1, "jobs", "must be >= 1");
}

json config_to_json(const PipelineConfig& c) {
  json steps = json::array();
  for (const auto& s : c.augment.steps()) {
    steps.push_back({{"kind", std::string(augment::to_string(s.kind))}, {"p", s.p}, {"min", s.min}, {"max", s.max}});
  }
  return json{{"tile_size", c.tile_size},
              {"overlap", c.overlap},
              {"tta", c.tta},
              {"seg_threshold", c.seg_threshold},
              {"open_radius", c.open_radius},
              {"min_area", c.min_area},
              {"refine_patch", c.refine_patch},
              {"accept_threshold", c.accept_threshold},
              {"segmenter", c.segmenter},
              {"segmenter_commands", c.segmenter_commands},
              {"classifier", c.classifier},
              {"classifier_commands", c.classifier_commands},
              {"oracle_sigma", c.oracle_sigma},
              {"oracle_radius", c.oracle_radius},
              {"match_radius_px", c.match_radius_px},
              {"disk_radius", c.disk_radius},
              {"harvest_size", c.harvest_size},
              {"harvest_stride", c.harvest_stride},
              {"harvest_margin", c.harvest_margin},
              {"negative_ratio", c.negative_ratio},
              {"augment", steps},
              {"seed", c.seed},
              {"jobs", c.jobs}};
}

namespace {

PipelineConfig merge(const json& doc, const PipelineConfig& base) {
  if (!doc.is_object()) fail(ErrorKind::kInvalidArgument, "config: expected key/value pairs");
  PipelineConfig c = base;
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) fail(ErrorKind::kInvalidArgument, "config: unknown key '" + key + "'");
    it->second(c, value, key);
  }
  return c;
}

}  // namespace

PipelineConfig config_from_json(const json& doc, const PipelineConfig& base) {
  PipelineConfig c = merge(doc, base);
  c.validate();
  return c;
}

PipelineConfig parse_config(std::string_view text) {
  return config_from_json(parse_toml_lite(text));
}

PipelineConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return parse_config(text);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_config(const PipelineConfig& config) {
  const json doc = config_to_json(config);
  std::string out;
  for (const auto& [key, value] : doc.items()) {
    if (key == "augment") {
      out += "augment = [\n";
      for (const auto& step : value) out += "  " + format_toml_value(step) + ",\n";
      out += "]\n";
    } else {
      out += key + " = " + format_toml_value(value) + "\n";
    }
  }
  return out;
}

void apply_override(PipelineConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    fail(ErrorKind::kInvalidArgument, "override '" + std::string(assignment) + "': expected key=value");
  }
  const std::string key(assignment.substr(0, eq));
  std::string value(assignment.substr(eq + 1));
  json doc;
  try {
    doc = parse_toml_lite(key + " = " + value);
  } catch (const Error&) {
    // Bare words such as `segmenter=oracle` are strings.
    doc = json{{key, value}};
  }
  config = merge(doc, config);
}

}  // namespace mitodet::cli
