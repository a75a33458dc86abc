#include "curio/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace curio {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad number '" + v +
                                "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': bad integer '" + v +
                                "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': bad unsigned integer '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config key '" + key + "': bad boolean '" + v +
                              "' (use true/false)");
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto next = v.find(',', pos);
    if (next == std::string::npos) {
      out.push_back(trim(v.substr(pos)));
      break;
    }
    out.push_back(trim(v.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

// An empty value is an empty list, so echoed configs (which print every key,
// including empty list keys) replay cleanly.
std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  for (const auto& tok : split_commas(v)) out.push_back(parse_double(key, tok));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  if (trim(v).empty()) return out;
  for (const auto& tok : split_commas(v))
    out.push_back(static_cast<int>(parse_int(key, tok)));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += fmt(v[i]);
  }
  return s;
}

std::string fmt_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

std::string to_string(DecoderKind k) {
  switch (k) {
    case DecoderKind::Ifep: return "ifep";
    case DecoderKind::Subjective: return "subjective";
    case DecoderKind::Qlearning: return "qlearning";
  }
  return "ifep";
}

DecoderKind decoder_from_string(const std::string& s) {
  if (s == "ifep") return DecoderKind::Ifep;
  if (s == "subjective") return DecoderKind::Subjective;
  if (s == "qlearning") return DecoderKind::Qlearning;
  throw std::invalid_argument("unknown decoder '" + s +
                              "' (expected ifep|subjective|qlearning)");
}

void apply_config_line(RunConfig& cfg, const std::string& key,
                       const std::string& value) {
  if (key == "alpha") cfg.params.alpha = parse_double(key, value);
  else if (key == "beta") cfg.params.beta = parse_double(key, value);
  else if (key == "p0") cfg.params.p0 = parse_double(key, value);
  else if (key == "sigma_w") cfg.params.sigma_w = parse_double(key, value);
  else if (key == "epsilon_c") cfg.epsilon_c = parse_double(key, value);
  else if (key == "n_particles")
    cfg.n_particles = static_cast<int>(parse_int(key, value));
  else if (key == "resample_threshold")
    cfg.resample_threshold = parse_double(key, value);
  else if (key == "init_mu") cfg.init_mu = parse_double(key, value);
  else if (key == "init_p") cfg.init_p = parse_double(key, value);
  else if (key == "init_w_sd") cfg.init_w_sd = parse_double(key, value);
  else if (key == "init_c_sd") cfg.init_c_sd = parse_double(key, value);
  else if (key == "epsilon_theta") cfg.epsilon_theta = parse_double(key, value);
  else if (key == "q_conventional") cfg.q_conventional = parse_bool(key, value);
  else if (key == "decoder") cfg.decoder = decoder_from_string(value);
  else if (key == "trials") cfg.trials = static_cast<int>(parse_int(key, value));
  else if (key == "curiosity_mode") {
    if (value != "sinusoid" && value != "constant" && value != "randomwalk")
      throw std::invalid_argument(
          "config key 'curiosity_mode': expected sinusoid|constant|randomwalk");
    cfg.curiosity_mode = value;
  } else if (key == "curiosity_amplitude")
    cfg.curiosity_amplitude = parse_double(key, value);
  else if (key == "curiosity_cycles")
    cfg.curiosity_cycles = parse_double(key, value);
  else if (key == "curiosity_constant")
    cfg.curiosity_constant = parse_double(key, value);
  else if (key == "curiosity_epsilon")
    cfg.params.epsilon_c = parse_double(key, value);
  else if (key == "schedule_mode") {
    if (value != "piecewise" && value != "randomwalk")
      throw std::invalid_argument(
          "config key 'schedule_mode': expected piecewise|randomwalk");
    cfg.schedule_mode = value;
  } else if (key == "schedule_breaks")
    cfg.schedule_breaks = parse_int_list(key, value);
  else if (key == "schedule_rest")
    cfg.schedule_rest = parse_double_list(key, value);
  else if (key == "schedule_accel")
    cfg.schedule_accel = parse_double_list(key, value);
  else if (key == "schedule_rw_sigma")
    cfg.schedule_rw_sigma = parse_double(key, value);
  else if (key == "schedule_rw_init")
    cfg.schedule_rw_init = parse_double(key, value);
  else if (key == "participant_id") cfg.participant_id = value;
  else if (key == "task_index")
    cfg.task_index = static_cast<int>(parse_int(key, value));
  else if (key == "window_s") cfg.window_s = parse_double(key, value);
  else if (key == "speed_threshold")
    cfg.speed_threshold = parse_double(key, value);
  else if (key == "msdv_threshold")
    cfg.msdv_threshold = parse_double(key, value);
  else if (key == "rate_hz") cfg.rate_hz = parse_double(key, value);
  else if (key == "eda_baseline") cfg.eda_baseline = parse_double(key, value);
  else if (key == "eda_drift_slope")
    cfg.eda_drift_slope = parse_double(key, value);
  else if (key == "eda_noise_sd") cfg.eda_noise_sd = parse_double(key, value);
  else if (key == "eda_event_rate_per_min")
    cfg.eda_event_rate_per_min = parse_double(key, value);
  else if (key == "validate_seeds")
    cfg.validate_seeds = static_cast<int>(parse_int(key, value));
  else if (key == "validate_epsilons")
    cfg.validate_epsilons = parse_double_list(key, value);
  else if (key == "max_lag") cfg.max_lag = static_cast<int>(parse_int(key, value));
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "workers")
    cfg.workers = static_cast<int>(parse_int(key, value));
  else if (key == "quiet") cfg.quiet = parse_bool(key, value);
  else if (key == "input") cfg.input = value;
  else if (key == "ssq") cfg.ssq_csv = value;
  else if (key == "out") cfg.out = value;
  else
    throw std::invalid_argument("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_line(cfg, key, value);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  return cfg;
}

DecoderConfig RunConfig::decoder_config(std::uint64_t session_seed) const {
  DecoderConfig d;
  d.n_particles = n_particles;
  d.params = params;
  d.epsilon_c = epsilon_c;
  d.resample_threshold = resample_threshold;
  d.seed = session_seed;
  d.init_mu = init_mu;
  d.init_p = init_p;
  d.init_w_sd = init_w_sd;
  d.init_c_sd = init_c_sd;
  return d;
}

SimConfig RunConfig::sim_config() const {
  SimConfig s;
  s.trials = trials;
  s.params = params;
  s.seed = seed;
  s.init_mu = init_mu;
  s.init_p = init_p;

  if (schedule_mode == "randomwalk") {
    s.schedule.mode = EnvSchedule::Mode::RandomWalk;
    s.schedule.rw_sigma = schedule_rw_sigma;
    s.schedule.rw_init_w = {schedule_rw_init, schedule_rw_init};
  } else if (schedule_breaks.empty()) {
    s.schedule = EnvSchedule::default_protocol(trials);
  } else {
    if (schedule_breaks.size() != schedule_rest.size() ||
        schedule_breaks.size() != schedule_accel.size())
      throw std::invalid_argument(
          "schedule_breaks/schedule_rest/schedule_accel must have equal length");
    s.schedule.mode = EnvSchedule::Mode::Piecewise;
    for (std::size_t i = 0; i < schedule_breaks.size(); ++i) {
      EnvSchedule::Segment seg;
      seg.start_trial = schedule_breaks[i];
      seg.prob = {schedule_rest[i], schedule_accel[i]};
      s.schedule.segments.push_back(seg);
    }
  }

  if (curiosity_mode == "sinusoid") {
    s.curiosity.mode = CuriosityProcess::Mode::Sinusoid;
    s.curiosity.amplitude = curiosity_amplitude;
    s.curiosity.cycles = curiosity_cycles;
  } else if (curiosity_mode == "constant") {
    s.curiosity.mode = CuriosityProcess::Mode::Constant;
    s.curiosity.constant = curiosity_constant;
  } else {
    s.curiosity.mode = CuriosityProcess::Mode::RandomWalk;
    s.curiosity.epsilon = params.epsilon_c;
  }
  return s;
}

PipelineConfig RunConfig::pipeline_config() const {
  PipelineConfig p;
  p.window_s = window_s;
  p.speed_threshold_mps = speed_threshold;
  p.msdv_threshold = msdv_threshold;
  return p;
}

void RunConfig::validate() const {
  params.validate();
  decoder_config(seed).validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (!(window_s > 0.0)) throw std::invalid_argument("window_s must be > 0");
  if (!(rate_hz > 0.0)) throw std::invalid_argument("rate_hz must be > 0");
  if (!(speed_threshold >= 0.0))
    throw std::invalid_argument("speed_threshold must be >= 0");
  if (!(msdv_threshold >= 0.0))
    throw std::invalid_argument("msdv_threshold must be >= 0");
  if (max_lag < 0) throw std::invalid_argument("max_lag must be >= 0");
  if (validate_seeds < 1)
    throw std::invalid_argument("validate_seeds must be >= 1");
  if (validate_epsilons.empty())
    throw std::invalid_argument("validate_epsilons must be non-empty");
  if (!(epsilon_theta >= 0.0))
    throw std::invalid_argument("epsilon_theta must be >= 0");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (task_index < 1) throw std::invalid_argument("task_index must be >= 1");
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::map<std::string, std::string> m;
  m["alpha"] = fmt(params.alpha);
  m["beta"] = fmt(params.beta);
  m["p0"] = fmt(params.p0);
  m["sigma_w"] = fmt(params.sigma_w);
  m["epsilon_c"] = fmt(epsilon_c);
  m["n_particles"] = std::to_string(n_particles);
  m["resample_threshold"] = fmt(resample_threshold);
  m["init_mu"] = fmt(init_mu);
  m["init_p"] = fmt(init_p);
  m["init_w_sd"] = fmt(init_w_sd);
  m["init_c_sd"] = fmt(init_c_sd);
  m["epsilon_theta"] = fmt(epsilon_theta);
  m["q_conventional"] = q_conventional ? "true" : "false";
  m["decoder"] = to_string(decoder);
  m["trials"] = std::to_string(trials);
  m["curiosity_mode"] = curiosity_mode;
  m["curiosity_amplitude"] = fmt(curiosity_amplitude);
  m["curiosity_cycles"] = fmt(curiosity_cycles);
  m["curiosity_constant"] = fmt(curiosity_constant);
  m["curiosity_epsilon"] = fmt(params.epsilon_c);
  m["schedule_mode"] = schedule_mode;
  m["schedule_breaks"] = fmt_list(schedule_breaks);
  m["schedule_rest"] = fmt_list(schedule_rest);
  m["schedule_accel"] = fmt_list(schedule_accel);
  m["schedule_rw_sigma"] = fmt(schedule_rw_sigma);
  m["schedule_rw_init"] = fmt(schedule_rw_init);
  m["participant_id"] = participant_id;
  m["task_index"] = std::to_string(task_index);
  m["window_s"] = fmt(window_s);
  m["speed_threshold"] = fmt(speed_threshold);
  m["msdv_threshold"] = fmt(msdv_threshold);
  m["rate_hz"] = fmt(rate_hz);
  m["eda_baseline"] = fmt(eda_baseline);
  m["eda_drift_slope"] = fmt(eda_drift_slope);
  m["eda_noise_sd"] = fmt(eda_noise_sd);
  m["eda_event_rate_per_min"] = fmt(eda_event_rate_per_min);
  m["validate_seeds"] = std::to_string(validate_seeds);
  m["validate_epsilons"] = fmt_list(validate_epsilons);
  m["max_lag"] = std::to_string(max_lag);
  m["seed"] = std::to_string(seed);
  m["workers"] = std::to_string(workers);
  m["quiet"] = quiet ? "true" : "false";
  // Location keys (input, ssq, out) are deliberately not echoed: artifacts
  // must be byte-identical no matter where a run reads from or writes to.
  return m;
}

}  // namespace curio
