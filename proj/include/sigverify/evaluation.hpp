#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sigverify/sigdata.hpp"

namespace sigverify {

class Pipeline;

/// Operating point where the false-acceptance and false-rejection rates meet.
struct EerResult {
  double eer_percent = 0.0;
  double threshold = 0.0;
};

struct CurvePoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction of impostor scores >= threshold
  double frr = 0.0;  // fraction of genuine scores < threshold
};

/// FAR/FRR at every distinct score, ascending thresholds.
std::vector<CurvePoint> far_frr_curve(std::span<const double> genuine, std::span<const double> impostor);

/// Equal error rate for higher-is-genuine scores.
///
/// The thresholds are the distinct scores plus a point above the maximum
/// (FAR 0, FRR 1). The EER is where the piecewise-linear FAR/FRR trace first
/// reaches FRR >= FAR, interpolated linearly between the bracketing points.
/// The reported threshold is interpolated the same way and capped at the
/// maximum score.
EerResult compute_eer(std::span<const double> genuine, std::span<const double> impostor);

enum class Task { Task1 = 1, Task2 = 2, Task3 = 3 };

std::string_view to_string(Task t);

struct EvaluationReport {
  Task task = Task::Task1;
  double eer_percent = 0.0;
  double threshold_at_eer = 0.0;
  std::vector<CurvePoint> far_frr_curve;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
};

/// Joins scores and labels by comparison id. Throws InvalidArgument listing
/// missing and extra ids when the id sets differ.
EvaluationReport evaluate_task(std::span<const ScoreRecord> scores, std::span<const LabelRecord> labels, Task task);

std::string format_report_text(const EvaluationReport& report);
/// key=value lines: task, eer_percent, threshold, n_genuine, n_impostor, then one
/// `curve=<threshold>,<far>,<frr>` line per curve point.
std::string format_report_kv(const EvaluationReport& report);
/// CSV with header `threshold,far,frr`.
std::string format_curve_csv(const std::vector<CurvePoint>& curve);

// ---------------------------------------------------------------------------
// Ranking

using TeamEerTable = std::map<std::string, std::map<Task, double>>;

struct RankingRow {
  std::string team;
  std::map<Task, int> task_points;
  int total_points = 0;
};

/// Medal points per task (3/2/1 to the three lowest EERs; equal EERs ordered by
/// team name), summed per team. Rows are sorted by total descending, then by the
/// team's best single-task EER, then by name.
std::vector<RankingRow> rank_teams(const TeamEerTable& per_task_eers);

/// `team,task,eer` rows (task 1..3, eer in percent, optional trailing '%').
/// Team names may contain spaces but not commas.
TeamEerTable parse_eer_table_text(std::string_view content, const std::string& source = "<memory>");
TeamEerTable parse_eer_table_file(const std::filesystem::path& path);

/// `position,team,total_points` with a header row.
std::string format_ranking_csv(const std::vector<RankingRow>& rows);

// ---------------------------------------------------------------------------
// Protocol runner

/// Scores every comparison with `pipeline`. Relative signature paths are resolved
/// against `base_dir`. Comparisons are scored on up to `threads` workers
/// (0 = hardware concurrency) and returned in input order. Any failure aborts
/// the run with an Error naming the first failing comparison id.
std::vector<ScoreRecord> run_protocol(std::span<const ComparisonTask> comparisons, const Pipeline& pipeline,
                                      const std::filesystem::path& base_dir = {}, unsigned threads = 0);

/// Parses every signature referenced by `comparisons` without scoring.
void validate_protocol_inputs(std::span<const ComparisonTask> comparisons, const std::filesystem::path& base_dir = {});

}  // namespace sigverify
