#include "mahc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

#include "mahc/errors.hpp"
#include "mahc/format.hpp"
#include "mahc/rng.hpp"

namespace mahc {

ScenarioConfig scenario_preset(const std::string& name) {
  ScenarioConfig s;
  s.name = name;
  s.k_tasks = 30;
  s.m = 10000;
  if (name == "scenario1") {
    s.n_workers = 3;
    s.p = 6000;
  } else if (name == "scenario2") {
    s.n_workers = 4;
    s.p = 8000;
  } else if (name == "scenario3") {
    s.n_workers = 5;
    s.p = 10000;
  } else if (name == "desk") {
    s.n_workers = 2;
    s.p = 200;
    s.m = 200;
    s.k_tasks = 5;
  } else if (name == "desk3") {
    s.n_workers = 3;
    s.p = 200;
    s.m = 200;
    s.k_tasks = 5;
  } else {
    throw ConfigError("preset: unknown preset '" + name + "'");
  }
  return s;
}

std::vector<std::string> preset_names() { return {"scenario1", "scenario2", "scenario3", "desk", "desk3"}; }

namespace {

struct Value {
  std::variant<std::string, double, bool> data;
  int line = 0;
};

using Entries = std::map<std::string, Value>;

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

Entries tokenize(std::string_view text, const std::string& origin) {
  Entries entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    // Strip comments outside string literals.
    bool in_string = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') in_string = !in_string;
      if (raw[i] == '#' && !in_string) {
        cut = i;
        break;
      }
    }
    const std::string_view line = trim(raw.substr(0, cut));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_identifier(name)) fail(origin, line_no, "invalid section name");
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(origin, line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view rhs = trim(line.substr(eq + 1));
    if (!valid_identifier(key)) fail(origin, line_no, "invalid key '" + std::string(key) + "'");
    const std::string path = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (entries.count(path)) fail(origin, line_no, "duplicate key " + path);

    Value v;
    v.line = line_no;
    if (rhs.size() >= 2 && rhs.front() == '"' && rhs.back() == '"') {
      v.data = std::string(rhs.substr(1, rhs.size() - 2));
    } else if (rhs == "true" || rhs == "false") {
      v.data = rhs == "true";
    } else {
      double d = 0.0;
      const auto [ptr, ec] = std::from_chars(rhs.data(), rhs.data() + rhs.size(), d);
      if (ec != std::errc() || ptr != rhs.data() + rhs.size() || !std::isfinite(d)) {
        fail(origin, line_no, path + ": cannot parse value '" + std::string(rhs) + "'");
      }
      v.data = d;
    }
    entries.emplace(path, std::move(v));
  }
  return entries;
}

class Binder {
 public:
  Binder(const Entries& entries, std::string origin) : entries_(entries), origin_(std::move(origin)) {}

  double number(const std::string& key, const Value& v) const {
    if (const auto* d = std::get_if<double>(&v.data)) return *d;
    fail(origin_, v.line, key + ": expected a number");
  }
  std::int64_t integer(const std::string& key, const Value& v) const {
    const double d = number(key, v);
    if (d != std::floor(d) || std::abs(d) > 9.0e15) fail(origin_, v.line, key + ": expected an integer");
    return static_cast<std::int64_t>(d);
  }
  std::size_t count(const std::string& key, const Value& v) const {
    const auto i = integer(key, v);
    if (i < 0) fail(origin_, v.line, key + ": expected a non-negative integer");
    return static_cast<std::size_t>(i);
  }
  bool boolean(const std::string& key, const Value& v) const {
    if (const auto* b = std::get_if<bool>(&v.data)) return *b;
    fail(origin_, v.line, key + ": expected true or false");
  }
  std::string string(const std::string& key, const Value& v) const {
    if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
    fail(origin_, v.line, key + ": expected a quoted string");
  }
  const std::string& origin() const { return origin_; }

 private:
  const Entries& entries_;
  std::string origin_;
};

using Setter = std::function<void(RunConfig&, const Binder&, const std::string&, const Value&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const Binder& b, const std::string& k, const Value& v) { member(c) = b.number(k, v); };
    };
    auto cnt = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const Binder& b, const std::string& k, const Value& v) { member(c) = b.count(k, v); };
    };
    auto integer = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const Binder& b, const std::string& k, const Value& v) { member(c) = b.integer(k, v); };
    };
    auto flag = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const Binder& b, const std::string& k, const Value& v) { member(c) = b.boolean(k, v); };
    };

    t["scenario.name"] = [](RunConfig& c, const Binder& b, const std::string& k, const Value& v) { c.scenario.name = b.string(k, v); };
    cnt("scenario.workers", [](RunConfig& c) -> auto& { return c.scenario.n_workers; });
    integer("scenario.rows", [](RunConfig& c) -> auto& { return c.scenario.p; });
    integer("scenario.cols", [](RunConfig& c) -> auto& { return c.scenario.m; });
    cnt("scenario.tasks", [](RunConfig& c) -> auto& { return c.scenario.k_tasks; });
    num("scenario.position_range", [](RunConfig& c) -> auto& { return c.scenario.position_range; });
    num("scenario.velocity_range", [](RunConfig& c) -> auto& { return c.scenario.velocity_range; });
    num("scenario.beta_min", [](RunConfig& c) -> auto& { return c.scenario.beta_min; });
    num("scenario.beta_max", [](RunConfig& c) -> auto& { return c.scenario.beta_max; });
    t["scenario.alpha_rule"] = [](RunConfig& c, const Binder& b, const std::string& k, const Value& v) {
      const auto s = b.string(k, v);
      if (s == "inverse_beta") c.scenario.alpha_rule = AlphaRule::InverseBeta;
      else if (s == "fixed") c.scenario.alpha_rule = AlphaRule::Fixed;
      else fail(b.origin(), v.line, k + ": expected \"inverse_beta\" or \"fixed\"");
    };
    num("scenario.alpha", [](RunConfig& c) -> auto& { return c.scenario.alpha_fixed; });
    flag("scenario.master_moves", [](RunConfig& c) -> auto& { return c.scenario.master_moves; });
    integer("scenario.batch_size", [](RunConfig& c) -> auto& { return c.scenario.batch_size; });
    integer("scenario.baseline_batch_size", [](RunConfig& c) -> auto& { return c.scenario.baseline_batch_size; });
    t["scenario.seed"] = [](RunConfig& c, const Binder& b, const std::string& k, const Value& v) {
      c.scenario.seed = static_cast<std::uint64_t>(b.count(k, v));
    };
    flag("scenario.verify", [](RunConfig& c) -> auto& { return c.scenario.verify; });

    num("comm.bandwidth_hz", [](RunConfig& c) -> auto& { return c.scenario.comm.bandwidth_hz; });
    num("comm.noise_power_w", [](RunConfig& c) -> auto& { return c.scenario.comm.noise_power_w; });
    num("comm.sd_offset_dbm", [](RunConfig& c) -> auto& { return c.scenario.comm.sd_offset_dbm; });
    num("comm.path_loss_slope_db", [](RunConfig& c) -> auto& { return c.scenario.comm.path_loss_slope_db; });
    num("comm.noise_std_db", [](RunConfig& c) -> auto& { return c.scenario.comm.noise_std_db; });
    num("comm.bits_per_element", [](RunConfig& c) -> auto& { return c.scenario.comm.bits_per_element; });
    num("comm.min_distance_m", [](RunConfig& c) -> auto& { return c.scenario.comm.min_distance_m; });

    flag("straggler.enabled", [](RunConfig& c) -> auto& { return c.scenario.straggler_enabled; });
    num("straggler.slowdown_factor", [](RunConfig& c) -> auto& { return c.scenario.slowdown_factor; });

    num("train.gamma", [](RunConfig& c) -> auto& { return c.train.gamma; });
    num("train.learning_rate", [](RunConfig& c) -> auto& { return c.train.learning_rate; });
    num("train.tau", [](RunConfig& c) -> auto& { return c.train.tau; });
    num("train.penalty", [](RunConfig& c) -> auto& { return c.train.reward.penalty; });
    t["train.penalty_boundary"] = [](RunConfig& c, const Binder& b, const std::string& k, const Value& v) {
      const auto s = b.string(k, v);
      if (s == "strict") c.train.reward.boundary = marl::PenaltyBoundary::Strict;
      else if (s == "inclusive") c.train.reward.boundary = marl::PenaltyBoundary::Inclusive;
      else fail(b.origin(), v.line, k + ": expected \"strict\" or \"inclusive\"");
    };
    cnt("train.batch_size", [](RunConfig& c) -> auto& { return c.train.batch_size; });
    cnt("train.replay_capacity", [](RunConfig& c) -> auto& { return c.train.replay_capacity; });
    cnt("train.episodes_per_iteration", [](RunConfig& c) -> auto& { return c.train.episodes_per_iteration; });
    cnt("train.iterations", [](RunConfig& c) -> auto& { return c.train.iterations; });
    cnt("train.updates_per_iteration", [](RunConfig& c) -> auto& { return c.train.updates_per_iteration; });
    num("train.noise_start", [](RunConfig& c) -> auto& { return c.train.noise_start; });
    num("train.noise_end", [](RunConfig& c) -> auto& { return c.train.noise_end; });
    t["train.optimizer"] = [](RunConfig& c, const Binder& b, const std::string& k, const Value& v) {
      const auto s = b.string(k, v);
      if (s == "adam") c.train.optimizer = marl::OptimizerKind::Adam;
      else if (s == "sgd") c.train.optimizer = marl::OptimizerKind::Sgd;
      else fail(b.origin(), v.line, k + ": expected \"adam\" or \"sgd\"");
    };
    t["train.hidden_width"] = [](RunConfig& c, const Binder& b, const std::string& k, const Value& v) {
      c.train.hidden_width = static_cast<Eigen::Index>(b.count(k, v));
    };

    cnt("eval.episodes", [](RunConfig& c) -> auto& { return c.eval_episodes; });
    return t;
  }();
  return table;
}

const std::vector<std::string> kRequiredWithoutPreset = {"scenario.workers", "scenario.rows", "scenario.cols",
                                                         "scenario.tasks"};
const std::vector<std::string> kAntennaKeys = {"comm.tx_power_dbm", "comm.wavelength_m", "comm.antenna_gain_dbi"};

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& origin) {
  const Entries entries = tokenize(text, origin);
  const Binder binder(entries, origin);
  RunConfig cfg;

  if (auto it = entries.find("preset"); it != entries.end()) {
    cfg.scenario = scenario_preset(binder.string("preset", it->second));
  } else {
    std::string missing;
    for (const auto& key : kRequiredWithoutPreset) {
      if (!entries.count(key)) missing += (missing.empty() ? "" : ", ") + key;
    }
    if (!missing.empty()) {
      throw ConfigError(origin + ": no preset given and required keys are missing: " + missing);
    }
  }

  std::size_t antenna_keys = 0;
  for (const auto& key : kAntennaKeys) antenna_keys += entries.count(key);
  if (antenna_keys != 0 && antenna_keys != kAntennaKeys.size()) {
    throw ConfigError(origin + ": comm.tx_power_dbm, comm.wavelength_m and comm.antenna_gain_dbi must be given together");
  }
  if (antenna_keys != 0 && entries.count("comm.sd_offset_dbm")) {
    throw ConfigError(origin + ": comm.sd_offset_dbm conflicts with the individual antenna constants");
  }

  const auto& table = setters();
  for (const auto& [key, value] : entries) {
    if (key == "preset") continue;
    if (std::find(kAntennaKeys.begin(), kAntennaKeys.end(), key) != kAntennaKeys.end()) {
      binder.number(key, value);
      continue;
    }
    const auto it = table.find(key);
    if (it == table.end()) fail(origin, value.line, "unknown key " + key);
    it->second(cfg, binder, key, value);
  }
  if (antenna_keys != 0) {
    cfg.scenario.comm.sd_offset_dbm = fold_sd_offset(binder.number(kAntennaKeys[0], entries.at(kAntennaKeys[0])),
                                                     binder.number(kAntennaKeys[1], entries.at(kAntennaKeys[1])),
                                                     binder.number(kAntennaKeys[2], entries.at(kAntennaKeys[2])));
  }

  try {
    cfg.scenario.validate();
    cfg.train.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (cfg.eval_episodes == 0) throw ConfigError(origin + ": eval.episodes: must be positive");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string RunConfig::canonical() const {
  const auto& s = scenario;
  const auto& c = s.comm;
  std::map<std::string, std::string> kv{
      {"scenario.name", s.name},
      {"scenario.workers", std::to_string(s.n_workers)},
      {"scenario.rows", std::to_string(s.p)},
      {"scenario.cols", std::to_string(s.m)},
      {"scenario.tasks", std::to_string(s.k_tasks)},
      {"scenario.position_range", format_double(s.position_range)},
      {"scenario.velocity_range", format_double(s.velocity_range)},
      {"scenario.beta_min", format_double(s.beta_min)},
      {"scenario.beta_max", format_double(s.beta_max)},
      {"scenario.alpha_rule", s.alpha_rule == AlphaRule::InverseBeta ? "inverse_beta" : "fixed"},
      {"scenario.alpha", format_double(s.alpha_fixed)},
      {"scenario.master_moves", s.master_moves ? "true" : "false"},
      {"scenario.batch_size", std::to_string(s.batch_size)},
      {"scenario.baseline_batch_size", std::to_string(s.baseline_batch_size)},
      {"scenario.seed", std::to_string(s.seed)},
      {"scenario.verify", s.verify ? "true" : "false"},
      {"comm.bandwidth_hz", format_double(c.bandwidth_hz)},
      {"comm.noise_power_w", format_double(c.noise_power_w)},
      {"comm.sd_offset_dbm", format_double(c.sd_offset_dbm)},
      {"comm.path_loss_slope_db", format_double(c.path_loss_slope_db)},
      {"comm.noise_std_db", format_double(c.noise_std_db)},
      {"comm.bits_per_element", format_double(c.bits_per_element)},
      {"comm.min_distance_m", format_double(c.min_distance_m)},
      {"straggler.enabled", s.straggler_enabled ? "true" : "false"},
      {"straggler.slowdown_factor", format_double(s.slowdown_factor)},
      {"train.gamma", format_double(train.gamma)},
      {"train.learning_rate", format_double(train.learning_rate)},
      {"train.tau", format_double(train.tau)},
      {"train.penalty", format_double(train.reward.penalty)},
      {"train.penalty_boundary", train.reward.boundary == marl::PenaltyBoundary::Strict ? "strict" : "inclusive"},
      {"train.batch_size", std::to_string(train.batch_size)},
      {"train.replay_capacity", std::to_string(train.replay_capacity)},
      {"train.episodes_per_iteration", std::to_string(train.episodes_per_iteration)},
      {"train.iterations", std::to_string(train.iterations)},
      {"train.updates_per_iteration", std::to_string(train.updates_per_iteration)},
      {"train.noise_start", format_double(train.noise_start)},
      {"train.noise_end", format_double(train.noise_end)},
      {"train.optimizer", train.optimizer == marl::OptimizerKind::Adam ? "adam" : "sgd"},
      {"train.hidden_width", std::to_string(train.hidden_width)},
      {"eval.episodes", std::to_string(eval_episodes)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(canonical()); }

}  // namespace mahc
