#pragma once

#include <map>
#include <string>
#include <vector>

#include "curio/baselines.hpp"
#include "curio/core.hpp"
#include "curio/ifep.hpp"
#include "curio/pipeline.hpp"
#include "curio/sim.hpp"

// CSV/JSON artifact plumbing.  All writers go through atomic_write
// (write-temp-then-rename) and lead with the fully-resolved config echo as
// `# key = value` comment lines; readers skip blank and comment lines.
// Floating-point values are serialized with the shortest round-trip
// representation, so identical runs produce identical bytes.

namespace curio {

using ConfigEcho = std::map<std::string, std::string>;

std::string fmt_double(double v);

void atomic_write(const std::string& path, const std::string& content);

// ---- readers ----

// Session CSV, header `time_s,speed_mps,eda_us`.  The participant id and
// task come from the file name: `<pid>.csv` or `<pid>_task<k>.csv`.
RawSession read_session_csv(const std::string& path);

// TrialRecord CSV, header `participant_id,task_index,trial,mean_speed,msdv,
// action,outcome,scr_mean,sick_prob_truth`.
std::vector<TrialRecord> read_trial_records_csv(const std::string& path);

// SSQ CSV, header `participant_id,task_index,ssq_pre,ssq_post`.
struct SSQRow {
  std::string participant_id;
  int task_index = 1;
  double pre = 0.0;
  double post = 0.0;
};
std::vector<SSQRow> read_ssq_csv(const std::string& path);

// First non-comment line of a CSV file (its header), for format sniffing.
std::string peek_csv_header(const std::string& path);

// Exact headers of the two ingestible formats.
inline constexpr const char* kSessionHeader = "time_s,speed_mps,eda_us";
inline constexpr const char* kTrialHeader =
    "participant_id,task_index,trial,mean_speed,msdv,action,outcome,"
    "scr_mean,sick_prob_truth";

// ---- writers ----

void write_trace_csv(const std::string& path, const SimTrace& trace,
                     const ConfigEcho& echo);
void write_session_csv(const std::string& path, const SynthSession& session,
                       const ConfigEcho& echo);
void write_trial_records_csv(const std::string& path,
                             const std::vector<TrialRecord>& records,
                             const ConfigEcho& echo);
void write_trajectory_csv(const std::string& path,
                          const DecodedTrajectory& traj,
                          const ConfigEcho& echo);
void write_subjective_csv(const std::string& path,
                          const SubjectiveTrajectory& traj,
                          const ConfigEcho& echo);
void write_qlearn_csv(const std::string& path, const QLearnTrajectory& traj,
                      const ConfigEcho& echo);

struct SweepCell {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double rmse_c = 0.0;
  double corr_c = 0.0;
};
void write_rmse_sweep_csv(const std::string& path,
                          const std::vector<SweepCell>& cells,
                          const ConfigEcho& echo);
std::vector<SweepCell> read_rmse_sweep_csv(const std::string& path);

}  // namespace curio
