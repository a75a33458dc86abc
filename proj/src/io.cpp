#include "curio/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace curio {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const auto next = line.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(trim(line.substr(pos)));
      break;
    }
    out.push_back(trim(line.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

[[noreturn]] void fail_at(const std::string& path, int line,
                          const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& path, int line, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail_at(path, line, "bad number '" + tok + "'");
  }
}

int to_int(const std::string& path, int line, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail_at(path, line, "bad integer '" + tok + "'");
  }
}

// Reads all data lines of a CSV, checks its header, hands rows to `row_fn`.
template <typename RowFn>
void read_csv(const std::string& path, const std::string& expect_header,
              RowFn row_fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      if (t != expect_header)
        fail_at(path, lineno,
                "unexpected header (want '" + expect_header + "')");
      header_seen = true;
      continue;
    }
    row_fn(lineno, split(t, ','));
    ++rows;
  }
  if (!header_seen)
    throw std::runtime_error("'" + path + "' is empty (no header found)");
  if (rows == 0)
    throw std::runtime_error("'" + path + "' has a header but no data rows");
}

std::string echo_block(const ConfigEcho& echo) {
  std::string s;
  for (const auto& [k, v] : echo) s += "# " + k + " = " + v + "\n";
  return s;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string peek_csv_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t[0] != '#') return t;
  }
  throw std::runtime_error("'" + path + "' is empty (no header found)");
}

RawSession read_session_csv(const std::string& path) {
  RawSession s;
  const std::string stem = fs::path(path).stem().string();
  const auto tag = stem.rfind("_task");
  if (tag != std::string::npos && tag + 5 < stem.size()) {
    try {
      std::size_t pos = 0;
      const int task = std::stoi(stem.substr(tag + 5), &pos);
      if (pos == stem.size() - tag - 5 && task >= 1) {
        s.participant_id = stem.substr(0, tag);
        s.task_index = task;
      }
    } catch (const std::exception&) {
      // not a _task<k> suffix; fall through to whole-stem id
    }
  }
  if (s.participant_id.empty()) {
    s.participant_id = stem;
    s.task_index = 1;
  }

  read_csv(path, "time_s,speed_mps,eda_us",
           [&](int lineno, const std::vector<std::string>& tok) {
             if (tok.size() != 3) fail_at(path, lineno, "expected 3 columns");
             s.time_s.push_back(to_double(path, lineno, tok[0]));
             s.speed_mps.push_back(to_double(path, lineno, tok[1]));
             s.eda_us.push_back(to_double(path, lineno, tok[2]));
           });
  return s;
}

std::vector<TrialRecord> read_trial_records_csv(const std::string& path) {
  std::vector<TrialRecord> out;
  read_csv(path, kTrialHeader,
           [&](int lineno, const std::vector<std::string>& tok) {
             if (tok.size() != 9) fail_at(path, lineno, "expected 9 columns");
             TrialRecord r;
             r.participant_id = tok[0];
             r.task_index = to_int(path, lineno, tok[1]);
             r.trial = to_int(path, lineno, tok[2]);
             r.mean_speed = to_double(path, lineno, tok[3]);
             r.msdv = to_double(path, lineno, tok[4]);
             try {
               r.action = action_from_string(tok[5]);
             } catch (const std::exception& e) {
               fail_at(path, lineno, e.what());
             }
             r.outcome = to_int(path, lineno, tok[6]);
             if (r.outcome != 0 && r.outcome != 1)
               fail_at(path, lineno, "outcome must be 0 or 1");
             r.scr_mean = to_double(path, lineno, tok[7]);
             r.sick_prob_truth = to_double(path, lineno, tok[8]);
             out.push_back(r);
           });
  return out;
}

std::vector<SSQRow> read_ssq_csv(const std::string& path) {
  std::vector<SSQRow> out;
  read_csv(path, "participant_id,task_index,ssq_pre,ssq_post",
           [&](int lineno, const std::vector<std::string>& tok) {
             if (tok.size() != 4) fail_at(path, lineno, "expected 4 columns");
             SSQRow r;
             r.participant_id = tok[0];
             r.task_index = to_int(path, lineno, tok[1]);
             r.pre = to_double(path, lineno, tok[2]);
             r.post = to_double(path, lineno, tok[3]);
             out.push_back(r);
           });
  return out;
}

void write_trace_csv(const std::string& path, const SimTrace& trace,
                     const ConfigEcho& echo) {
  std::string s = echo_block(echo);
  s +=
      "trial,c_true,w_rest,w_accel,action,outcome,mu_rest,mu_accel,p_rest,"
      "p_accel,er_rest,er_accel,info_rest,info_accel,net_rest,net_accel,"
      "p_select_accel\n";
  for (const auto& r : trace.rows) {
    s += std::to_string(r.trial);
    s += ',' + fmt_double(r.c_true);
    s += ',' + fmt_double(r.w_true[0]) + ',' + fmt_double(r.w_true[1]);
    s += ',' + to_string(r.action) + ',' + std::to_string(r.outcome);
    s += ',' + fmt_double(r.mu[0]) + ',' + fmt_double(r.mu[1]);
    s += ',' + fmt_double(r.p[0]) + ',' + fmt_double(r.p[1]);
    s += ',' + fmt_double(r.utility[0].expected_reward) + ',' +
         fmt_double(r.utility[1].expected_reward);
    s += ',' + fmt_double(r.utility[0].expected_info) + ',' +
         fmt_double(r.utility[1].expected_info);
    s += ',' + fmt_double(r.utility[0].net_utility) + ',' +
         fmt_double(r.utility[1].net_utility);
    s += ',' + fmt_double(r.p_select_accel) + '\n';
  }
  atomic_write(path, s);
}

void write_session_csv(const std::string& path, const SynthSession& session,
                       const ConfigEcho& echo) {
  std::string s = echo_block(echo);
  s += "time_s,speed_mps,eda_us\n";
  for (std::size_t i = 0; i < session.time_s.size(); ++i)
    s += fmt_double(session.time_s[i]) + ',' + fmt_double(session.speed_mps[i]) +
         ',' + fmt_double(session.eda_us[i]) + '\n';
  atomic_write(path, s);
}

void write_trial_records_csv(const std::string& path,
                             const std::vector<TrialRecord>& records,
                             const ConfigEcho& echo) {
  std::string s = echo_block(echo);
  s += kTrialHeader;
  s += '\n';
  for (const auto& r : records) {
    s += r.participant_id;
    s += ',' + std::to_string(r.task_index) + ',' + std::to_string(r.trial);
    s += ',' + fmt_double(r.mean_speed) + ',' + fmt_double(r.msdv);
    s += ',' + to_string(r.action) + ',' + std::to_string(r.outcome);
    s += ',' + fmt_double(r.scr_mean) + ',' + fmt_double(r.sick_prob_truth);
    s += '\n';
  }
  atomic_write(path, s);
}

void write_trajectory_csv(const std::string& path,
                          const DecodedTrajectory& traj,
                          const ConfigEcho& echo) {
  std::string s = echo_block(echo);
  s +=
      "trial,curiosity_mean,curiosity_sd,p_sick_rest,p_sick_accel,conf_rest,"
      "conf_accel,p_select_accel,ess\n";
  for (std::size_t t = 0; t < traj.size(); ++t) {
    s += std::to_string(t);
    s += ',' + fmt_double(traj.curiosity_mean[t]) + ',' +
         fmt_double(traj.curiosity_sd[t]);
    s += ',' + fmt_double(traj.p_sick[0][t]) + ',' + fmt_double(traj.p_sick[1][t]);
    s += ',' + fmt_double(traj.conf[0][t]) + ',' + fmt_double(traj.conf[1][t]);
    s += ',' + fmt_double(traj.p_select_accel[t]) + ',' + fmt_double(traj.ess[t]);
    s += '\n';
  }
  atomic_write(path, s);
}

void write_subjective_csv(const std::string& path,
                          const SubjectiveTrajectory& traj,
                          const ConfigEcho& echo) {
  std::string s = echo_block(echo);
  s += "# d_arith_mean = " + fmt_double(traj.d_arith_mean) + "\n";
  s += "# d_log_mean = " + fmt_double(traj.d_log_mean) +
       " (over " + std::to_string(traj.d_log_count) + " positive trials)\n";
  s +=
      "trial,d_mean,d_sd,p_sick_rest,p_sick_accel,conf_rest,conf_accel,"
      "p_select_accel,ess\n";
  for (std::size_t t = 0; t < traj.size(); ++t) {
    s += std::to_string(t);
    s += ',' + fmt_double(traj.d_mean[t]) + ',' + fmt_double(traj.d_sd[t]);
    s += ',' + fmt_double(traj.p_sick[0][t]) + ',' + fmt_double(traj.p_sick[1][t]);
    s += ',' + fmt_double(traj.conf[0][t]) + ',' + fmt_double(traj.conf[1][t]);
    s += ',' + fmt_double(traj.p_select_accel[t]) + ',' + fmt_double(traj.ess[t]);
    s += '\n';
  }
  atomic_write(path, s);
}

void write_qlearn_csv(const std::string& path, const QLearnTrajectory& traj,
                      const ConfigEcho& echo) {
  std::string s = echo_block(echo);
  s +=
      "trial,alpha_mean,alpha_sd,beta_mean,beta_sd,q_rest,q_accel,"
      "p_select_accel,ess\n";
  for (std::size_t t = 0; t < traj.size(); ++t) {
    s += std::to_string(t);
    s += ',' + fmt_double(traj.alpha_mean[t]) + ',' + fmt_double(traj.alpha_sd[t]);
    s += ',' + fmt_double(traj.beta_mean[t]) + ',' + fmt_double(traj.beta_sd[t]);
    s += ',' + fmt_double(traj.q_rest[t]) + ',' + fmt_double(traj.q_accel[t]);
    s += ',' + fmt_double(traj.p_select_accel[t]) + ',' + fmt_double(traj.ess[t]);
    s += '\n';
  }
  atomic_write(path, s);
}

void write_rmse_sweep_csv(const std::string& path,
                          const std::vector<SweepCell>& cells,
                          const ConfigEcho& echo) {
  std::string s = echo_block(echo);
  s += "epsilon,seed,rmse,pearson_r\n";
  for (const auto& c : cells) {
    s += fmt_double(c.epsilon) + ',' + std::to_string(c.seed) + ',' +
         fmt_double(c.rmse_c) + ',' + fmt_double(c.corr_c) + '\n';
  }
  atomic_write(path, s);
}

std::vector<SweepCell> read_rmse_sweep_csv(const std::string& path) {
  std::vector<SweepCell> out;
  read_csv(path, "epsilon,seed,rmse,pearson_r",
           [&](int lineno, const std::vector<std::string>& tok) {
             if (tok.size() != 4) fail_at(path, lineno, "expected 4 columns");
             SweepCell c;
             c.epsilon = to_double(path, lineno, tok[0]);
             c.seed = static_cast<std::uint64_t>(
                 to_double(path, lineno, tok[1]));
             c.rmse_c = to_double(path, lineno, tok[2]);
             c.corr_c = to_double(path, lineno, tok[3]);
             out.push_back(c);
           });
  return out;
}

}  // namespace curio
