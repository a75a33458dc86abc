#include "curio/run.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include "curio/analysis.hpp"
#include "curio/baselines.hpp"
#include "curio/pipeline.hpp"
#include "curio/rng.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace curio {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out) / name).string();
}

void note(const RunConfig& cfg, const std::string& msg) {
  if (!cfg.quiet) std::cout << msg << "\n";
}

std::uint64_t session_seed(const RunConfig& cfg, const std::string& pid,
                           int task) {
  std::uint64_t k = rng::mix64(cfg.seed);
  k = rng::chain(k, rng::fnv1a(pid.data(), pid.size()));
  k = rng::chain(k, static_cast<std::uint64_t>(task));
  return k;
}

std::string traj_name(const std::string& pid, int task) {
  return "trajectory_" + pid + "_task" + std::to_string(task) + ".csv";
}

using TrialGroups = std::map<std::pair<std::string, int>, std::vector<TrialRecord>>;

TrialGroups group_records(const std::vector<TrialRecord>& records) {
  TrialGroups groups;
  for (const auto& r : records) groups[{r.participant_id, r.task_index}].push_back(r);
  for (auto& [key, recs] : groups)
    std::sort(recs.begin(), recs.end(),
              [](const TrialRecord& a, const TrialRecord& b) {
                return a.trial < b.trial;
              });
  return groups;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

void apply_workers(const RunConfig& cfg) {
  int n = cfg.workers;
  if (const char* env = std::getenv("CURIO_WORKERS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw std::runtime_error("CURIO_WORKERS must be an integer");
    }
  }
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

std::vector<SweepCell> validate_protocol(const RunConfig& cfg,
                                         std::vector<ValidationRun>* keep) {
  cfg.validate();
  std::vector<SweepCell> cells;
  for (int i = 0; i < cfg.validate_seeds; ++i) {
    SimConfig sc = cfg.sim_config();
    sc.seed = cfg.seed + static_cast<std::uint64_t>(i);
    const SimTrace trace = simulate_recu(sc);
    const auto records = trace.to_trial_records(cfg.participant_id, 1);
    std::vector<double> c_true(trace.rows.size());
    for (std::size_t t = 0; t < trace.rows.size(); ++t)
      c_true[t] = trace.rows[t].c_true;

    for (std::size_t ei = 0; ei < cfg.validate_epsilons.size(); ++ei) {
      const double eps = cfg.validate_epsilons[ei];
      // Key the decode stream by the epsilon *value* so each sweep cell is a
      // pure function of (seed, epsilon), independent of the grid it sits in.
      DecoderConfig dc = cfg.decoder_config(rng::derive_key(
          sc.seed, rng::Tag::Misc, 17, std::bit_cast<std::uint64_t>(eps)));
      dc.epsilon_c = eps;
      DecodedTrajectory traj = decode(records, dc);

      SweepCell cell;
      cell.epsilon = eps;
      cell.seed = sc.seed;
      cell.rmse_c = rmse(traj.curiosity_mean, c_true);
      cell.corr_c = pearson(traj.curiosity_mean, c_true);
      cells.push_back(cell);
      if (keep)
        keep->push_back(ValidationRun{sc.seed, eps, trace, std::move(traj)});
    }
  }
  std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    return a.epsilon != b.epsilon ? a.epsilon < b.epsilon : a.seed < b.seed;
  });
  return cells;
}

int run_simulate(const RunConfig& cfg) {
  apply_workers(cfg);
  cfg.validate();
  const SimTrace trace = simulate_recu(cfg.sim_config());
  const auto echo = cfg.echo();
  write_trace_csv(out_path(cfg, "trace.csv"), trace, echo);

  EdaOptions opts;
  opts.baseline_us = cfg.eda_baseline;
  opts.drift_slope_us_per_s = cfg.eda_drift_slope;
  opts.noise_sd_us = cfg.eda_noise_sd;
  const SynthSession session =
      synth_session(trace, cfg.window_s, cfg.rate_hz, opts);
  const std::string session_name =
      cfg.participant_id + "_task" + std::to_string(cfg.task_index) + ".csv";
  write_session_csv(out_path(cfg, session_name), session, echo);
  note(cfg, "wrote " + out_path(cfg, "trace.csv") + " and " +
                out_path(cfg, session_name));
  return 0;
}

int run_decode(const RunConfig& cfg) {
  apply_workers(cfg);
  cfg.validate();
  if (cfg.input.empty())
    throw std::runtime_error("decode requires config key 'input'");

  std::vector<std::string> files;
  if (fs::is_directory(cfg.input)) {
    for (const auto& e : fs::directory_iterator(cfg.input))
      if (e.is_regular_file() && e.path().extension() == ".csv")
        files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty())
      throw std::runtime_error("no .csv files in '" + cfg.input + "'");
  } else if (fs::exists(cfg.input)) {
    files.push_back(cfg.input);
  } else {
    throw std::runtime_error("input '" + cfg.input + "' does not exist");
  }

  std::vector<TrialRecord> all;
  for (const auto& f : files) {
    const std::string header = peek_csv_header(f);
    std::vector<TrialRecord> recs;
    if (header == std::string(kSessionHeader)) {
      recs = process_session(read_session_csv(f), cfg.pipeline_config());
    } else if (header == std::string(kTrialHeader)) {
      recs = read_trial_records_csv(f);
    } else {
      throw std::runtime_error("'" + f + "': unrecognized CSV header");
    }
    all.insert(all.end(), recs.begin(), recs.end());
  }

  const auto groups = group_records(all);
  const auto echo = cfg.echo();

  std::vector<TrialRecord> ordered;
  for (const auto& [key, recs] : groups)
    ordered.insert(ordered.end(), recs.begin(), recs.end());
  write_trial_records_csv(out_path(cfg, "trialrecords.csv"), ordered, echo);

  for (const auto& [key, recs] : groups) {
    const auto& [pid, task] = key;
    const DecoderConfig dc = cfg.decoder_config(session_seed(cfg, pid, task));
    const std::string name = traj_name(pid, task);
    switch (cfg.decoder) {
      case DecoderKind::Ifep:
        write_trajectory_csv(out_path(cfg, name), decode(recs, dc), echo);
        break;
      case DecoderKind::Subjective:
        write_subjective_csv(out_path(cfg, name), decode_subjective(recs, dc),
                             echo);
        break;
      case DecoderKind::Qlearning:
        write_qlearn_csv(out_path(cfg, name),
                         decode_qlearning(recs, dc, cfg.epsilon_theta,
                                          cfg.q_conventional),
                         echo);
        break;
    }
    note(cfg, "wrote " + out_path(cfg, name));
  }
  return 0;
}

int run_validate(const RunConfig& cfg) {
  apply_workers(cfg);
  const auto cells = validate_protocol(cfg);
  write_rmse_sweep_csv(out_path(cfg, "rmse_sweep.csv"), cells, cfg.echo());
  note(cfg, "wrote " + out_path(cfg, "rmse_sweep.csv"));
  return 0;
}

namespace {

struct TrajectorySeries {
  std::vector<double> latent;  // curiosity_mean | d_mean | beta_mean
  std::string latent_name;
};

TrajectorySeries read_trajectory_any(const std::string& path) {
  const std::string header = peek_csv_header(path);
  std::vector<std::string> cols;
  {
    std::size_t pos = 0;
    while (pos <= header.size()) {
      const auto next = header.find(',', pos);
      if (next == std::string::npos) {
        cols.push_back(header.substr(pos));
        break;
      }
      cols.push_back(header.substr(pos, next - pos));
      pos = next + 1;
    }
  }
  int idx = -1;
  std::string name;
  for (const char* cand : {"curiosity_mean", "d_mean", "beta_mean"}) {
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (cols[j] == cand) {
        idx = static_cast<int>(j);
        name = cand;
        break;
      }
    if (idx >= 0) break;
  }
  if (idx < 0)
    throw std::runtime_error("'" + path +
                             "': not a decoded trajectory (no latent column)");

  TrajectorySeries out;
  out.latent_name = name;
  std::ifstream in(path);
  std::string line;
  bool past_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!past_header) {
      past_header = true;
      continue;
    }
    std::vector<std::string> tok;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto next = line.find(',', pos);
      if (next == std::string::npos) {
        tok.push_back(line.substr(pos));
        break;
      }
      tok.push_back(line.substr(pos, next - pos));
      pos = next + 1;
    }
    if (static_cast<int>(tok.size()) <= idx)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": short row");
    out.latent.push_back(std::stod(tok[idx]));
  }
  if (out.latent.empty())
    throw std::runtime_error("'" + path + "' has no data rows");
  return out;
}

json lag_block(const LagCorrelation& lc, int max_lag_used, double rate_hz) {
  return json{{"argmax_lag_samples", lc.argmax_lag},
              {"argmax_lag_seconds", lag_to_seconds(lc.argmax_lag, rate_hz)},
              {"argmax_r", lc.argmax_r},
              {"max_lag_used", max_lag_used}};
}

}  // namespace

int run_analyze(const RunConfig& cfg) {
  apply_workers(cfg);
  cfg.validate();
  if (cfg.input.empty())
    throw std::runtime_error("analyze requires config key 'input'");
  if (!fs::is_directory(cfg.input))
    throw std::runtime_error("analyze input '" + cfg.input +
                             "' must be a directory of decode artifacts");

  const std::string records_path =
      (fs::path(cfg.input) / "trialrecords.csv").string();
  if (!fs::exists(records_path))
    throw std::runtime_error("analyze: missing '" + records_path + "'");
  const auto groups = group_records(read_trial_records_csv(records_path));
  if (groups.empty()) throw std::runtime_error("analyze: no trial records");

  // participant -> ordered tasks
  std::map<std::string, std::vector<int>> participants;
  for (const auto& [key, recs] : groups)
    participants[key.first].push_back(key.second);

  const auto echo = cfg.echo();
  json report;
  report["config"] = echo;
  report["participants"] = json::array();

  std::vector<double> group_lag1, group_lag2, group_r1, group_r2;

  for (const auto& [pid, tasks] : participants) {
    json pblock;
    pblock["id"] = pid;
    pblock["tasks"] = json::array();

    // Concatenated series across the participant's tasks, in task order.
    std::vector<double> info_all, latent_all;     // aligned per trial
    std::vector<double> info_tail, dlatent_all;   // derivative pairing
    std::string latent_name;

    for (int task : tasks) {
      const auto& recs = groups.at({pid, task});
      const std::string tpath =
          (fs::path(cfg.input) / traj_name(pid, task)).string();
      if (!fs::exists(tpath))
        throw std::runtime_error("analyze: missing '" + tpath + "'");
      const TrajectorySeries ts = read_trajectory_any(tpath);
      if (ts.latent.size() != recs.size())
        throw std::runtime_error("analyze: '" + tpath + "' has " +
                                 std::to_string(ts.latent.size()) +
                                 " rows but " + std::to_string(recs.size()) +
                                 " trial records");
      latent_name = ts.latent_name;

      // Expected information gain of the chosen option, replayed from the
      // observed actions/outcomes with the configured constants.
      RecognitionState replay;
      replay.mu = {cfg.init_mu, cfg.init_mu};
      replay.p = {cfg.init_p, cfg.init_p};
      std::vector<double> info(recs.size());
      for (std::size_t t = 0; t < recs.size(); ++t) {
        info[t] =
            expected_info_gain(replay, recs[t].action, cfg.params).expected_info;
        replay = update_recognition(replay, recs[t].action, recs[t].outcome,
                                    cfg.params);
      }

      info_all.insert(info_all.end(), info.begin(), info.end());
      latent_all.insert(latent_all.end(), ts.latent.begin(), ts.latent.end());
      if (ts.latent.size() >= 2) {
        const auto d = temporal_derivative(ts.latent, cfg.window_s);
        dlatent_all.insert(dlatent_all.end(), d.begin(), d.end());
        info_tail.insert(info_tail.end(), info.begin() + 1, info.end());
      }

      pblock["tasks"].push_back(
          json{{"task", task}, {"trials", recs.size()}});
    }
    pblock["latent"] = latent_name;

    const int n1 = static_cast<int>(latent_all.size());
    const int L1 = std::min(cfg.max_lag, n1 - 3);
    json b1, b2;
    try {
      if (L1 < 0) throw std::invalid_argument("series too short");
      const auto lc1 = lagged_correlation(info_all, latent_all, L1);
      b1 = lag_block(lc1, L1, cfg.rate_hz);
      group_lag1.push_back(lc1.argmax_lag);
      group_r1.push_back(lc1.argmax_r);

      const int n2 = static_cast<int>(dlatent_all.size());
      const int L2 = std::min(cfg.max_lag, n2 - 3);
      if (L2 < 0) throw std::invalid_argument("series too short");
      const auto lc2 = lagged_correlation(info_tail, dlatent_all, L2);
      b2 = lag_block(lc2, L2, cfg.rate_hz);
      group_lag2.push_back(lc2.argmax_lag);
      group_r2.push_back(lc2.argmax_r);

      // Plot CSV: both curves over the union of lags.
      std::map<int, std::pair<std::string, std::string>> rows;
      for (std::size_t i = 0; i < lc1.lags.size(); ++i)
        rows[lc1.lags[i]].first = fmt_double(lc1.r[i]);
      for (std::size_t i = 0; i < lc2.lags.size(); ++i)
        rows[lc2.lags[i]].second = fmt_double(lc2.r[i]);
      std::string csv;
      for (const auto& [k, v] : echo) csv += "# " + k + " = " + v + "\n";
      csv += "lag,r_info_latent,r_info_dlatent\n";
      for (const auto& [lag, rs] : rows)
        csv += std::to_string(lag) + ',' + rs.first + ',' + rs.second + '\n';
      atomic_write(out_path(cfg, "lagcorr_" + pid + ".csv"), csv);
    } catch (const std::exception& e) {
      b1 = json{{"error", e.what()}};
      b2 = json{{"error", e.what()}};
    }
    pblock["lag_info_latent"] = b1;
    pblock["lag_info_dlatent"] = b2;
    report["participants"].push_back(pblock);
  }

  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  json group;
  group["n_participants"] = participants.size();
  if (!group_lag1.empty()) {
    group["info_latent"] =
        json{{"mean_argmax_lag_samples", mean_of(group_lag1)},
             {"mean_argmax_lag_seconds",
              mean_of(group_lag1) / cfg.rate_hz},
             {"mean_argmax_r", mean_of(group_r1)}};
  }
  if (!group_lag2.empty()) {
    group["info_dlatent"] =
        json{{"mean_argmax_lag_samples", mean_of(group_lag2)},
             {"mean_argmax_lag_seconds",
              mean_of(group_lag2) / cfg.rate_hz},
             {"mean_argmax_r", mean_of(group_r2)}};
  }
  report["group"] = group;

  // Chi-square association between decoded latent sign and SSQ severity,
  // one observation per (participant, task).
  if (!cfg.ssq_csv.empty()) {
    const auto ssq_rows = read_ssq_csv(cfg.ssq_csv);
    // counts[negative? 0 : 1][severity]
    std::vector<std::vector<double>> counts(2, std::vector<double>(4, 0.0));
    int used = 0;
    for (const auto& row : ssq_rows) {
      const auto it = groups.find({row.participant_id, row.task_index});
      if (it == groups.end()) continue;
      const std::string tpath =
          (fs::path(cfg.input) / traj_name(row.participant_id, row.task_index))
              .string();
      if (!fs::exists(tpath)) continue;
      const TrajectorySeries ts = read_trajectory_any(tpath);
      double m = 0.0;
      for (double v : ts.latent) m += v;
      m /= static_cast<double>(ts.latent.size());
      const SSQRecord rec = ssq(row.pre, row.post);
      counts[m < 0.0 ? 0 : 1][static_cast<int>(rec.severity)] += 1.0;
      ++used;
    }

    json cs;
    cs["rows"] = json{{"negative", counts[0]}, {"nonnegative", counts[1]}};
    cs["observations"] = used;

    // Drop empty rows/columns before testing; the test needs every expected
    // count positive.
    std::vector<std::vector<double>> table;
    for (const auto& row : counts) {
      double s = 0.0;
      for (double v : row) s += v;
      if (s > 0.0) table.push_back(row);
    }
    if (!table.empty()) {
      std::vector<std::size_t> keep_cols;
      for (std::size_t j = 0; j < 4; ++j) {
        double s = 0.0;
        for (const auto& row : table) s += row[j];
        if (s > 0.0) keep_cols.push_back(j);
      }
      for (auto& row : table) {
        std::vector<double> nr;
        for (auto j : keep_cols) nr.push_back(row[j]);
        row = nr;
      }
    }

    std::string csv;
    for (const auto& [k, v] : echo) csv += "# " + k + " = " + v + "\n";
    csv += "curiosity_class,negligible,low,moderate,high\n";
    const char* row_names[2] = {"negative", "nonnegative"};
    for (int i = 0; i < 2; ++i) {
      csv += row_names[i];
      for (int j = 0; j < 4; ++j) csv += ',' + fmt_double(counts[i][j]);
      csv += '\n';
    }
    try {
      if (table.size() < 2 || table[0].size() < 2)
        throw std::invalid_argument(
            "reduced table smaller than 2x2 after dropping empty rows/columns");
      const auto res = chi_square(table);
      cs["chi2"] = res.chi2;
      cs["dof"] = res.dof;
      cs["p"] = res.p;
      cs["cramers_v"] = res.cramers_v;
      csv += "# chi2 = " + fmt_double(res.chi2) + ", dof = " +
             std::to_string(res.dof) + ", p = " + fmt_double(res.p) +
             ", cramers_v = " + fmt_double(res.cramers_v) + "\n";
    } catch (const std::exception& e) {
      cs["error"] = e.what();
      csv += std::string("# chi-square not computed: ") + e.what() + "\n";
    }
    atomic_write(out_path(cfg, "chi_square.csv"), csv);
    report["chi_square"] = cs;
  }

  // Validation summary, when the decode directory carries a sweep.
  const std::string sweep_path =
      (fs::path(cfg.input) / "rmse_sweep.csv").string();
  if (fs::exists(sweep_path)) {
    const auto cells = read_rmse_sweep_csv(sweep_path);
    std::map<double, std::vector<double>> by_eps_rmse, by_eps_corr;
    for (const auto& c : cells) {
      by_eps_rmse[c.epsilon].push_back(c.rmse_c);
      by_eps_corr[c.epsilon].push_back(c.corr_c);
    }
    json sweep = json::array();
    for (const auto& [eps, v] : by_eps_rmse)
      sweep.push_back(json{{"epsilon", eps},
                           {"median_rmse", median(v)},
                           {"median_corr", median(by_eps_corr[eps])},
                           {"n", v.size()}});
    report["rmse_sweep"] = sweep;
  }

  atomic_write(out_path(cfg, "report.json"), report.dump(2) + "\n");
  note(cfg, "wrote " + out_path(cfg, "report.json"));
  return 0;
}

}  // namespace curio
