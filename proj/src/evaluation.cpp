#include "sigverify/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "sigverify/error.hpp"
#include "sigverify/text.hpp"

namespace sigverify {

namespace {

void require_scores(std::span<const double> genuine, std::span<const double> impostor) {
  if (genuine.empty()) throw InvalidArgument("no genuine scores");
  if (impostor.empty()) throw InvalidArgument("no impostor scores");
}

}  // namespace

std::vector<CurvePoint> far_frr_curve(std::span<const double> genuine, std::span<const double> impostor) {
  require_scores(genuine, impostor);
  std::vector<double> g(genuine.begin(), genuine.end());
  std::vector<double> im(impostor.begin(), impostor.end());
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());

  std::vector<double> thresholds;
  thresholds.reserve(g.size() + im.size());
  std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double ng = static_cast<double>(g.size());
  const double ni = static_cast<double>(im.size());
  std::vector<CurvePoint> curve;
  curve.reserve(thresholds.size());
  for (double theta : thresholds) {
    const auto rejected = std::lower_bound(g.begin(), g.end(), theta) - g.begin();
    const auto accepted = im.end() - std::lower_bound(im.begin(), im.end(), theta);
    curve.push_back({theta, static_cast<double>(accepted) / ni, static_cast<double>(rejected) / ng});
  }
  return curve;
}

EerResult compute_eer(std::span<const double> genuine, std::span<const double> impostor) {
  auto curve = far_frr_curve(genuine, impostor);
  // Everything rejected above the highest score.
  curve.push_back({curve.back().threshold, 0.0, 1.0});

  for (std::size_t k = 0; k < curve.size(); ++k) {
    const double diff = curve[k].frr - curve[k].far;
    if (diff < 0.0) continue;
    if (diff == 0.0 || k == 0) return {100.0 * curve[k].far, curve[k].threshold};
    const auto& lo = curve[k - 1];
    const auto& hi = curve[k];
    const double lo_diff = lo.frr - lo.far;
    const double t = -lo_diff / (diff - lo_diff);
    return {100.0 * (lo.far + t * (hi.far - lo.far)), lo.threshold + t * (hi.threshold - lo.threshold)};
  }
  // Unreachable: the sentinel point always has FRR >= FAR.
  return {100.0 * curve.back().far, curve.back().threshold};
}

std::string_view to_string(Task t) {
  switch (t) {
    case Task::Task1: return "1";
    case Task::Task2: return "2";
    case Task::Task3: return "3";
  }
  return "1";
}

EvaluationReport evaluate_task(std::span<const ScoreRecord> scores, std::span<const LabelRecord> labels, Task task) {
  std::unordered_map<std::string, Truth> truth;
  for (const auto& l : labels) truth.emplace(l.comparison_id, l.truth);

  std::unordered_set<std::string> scored;
  std::vector<std::string> extra, missing;
  std::vector<double> genuine, impostor;
  for (const auto& s : scores) {
    if (!scored.insert(s.comparison_id).second) throw InvalidArgument("duplicate score for '" + s.comparison_id + "'");
    const auto it = truth.find(s.comparison_id);
    if (it == truth.end()) {
      extra.push_back(s.comparison_id);
      continue;
    }
    (it->second == Truth::Genuine ? genuine : impostor).push_back(s.score);
  }
  for (const auto& l : labels) {
    if (!scored.count(l.comparison_id)) missing.push_back(l.comparison_id);
  }
  if (!extra.empty() || !missing.empty()) {
    auto join = [](const std::vector<std::string>& ids) {
      std::string out;
      for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? " " : "") + ids[i];
      return out;
    };
    std::string msg = "score and label ids differ";
    if (!missing.empty()) msg += "; missing scores: " + join(missing);
    if (!extra.empty()) msg += "; unlabeled scores: " + join(extra);
    throw InvalidArgument(msg);
  }

  EvaluationReport report;
  report.task = task;
  const auto eer = compute_eer(genuine, impostor);
  report.eer_percent = eer.eer_percent;
  report.threshold_at_eer = eer.threshold;
  report.far_frr_curve = far_frr_curve(genuine, impostor);
  report.n_genuine = genuine.size();
  report.n_impostor = impostor.size();
  return report;
}

std::string format_report_text(const EvaluationReport& report) {
  std::string out;
  out += "Task " + std::string(to_string(report.task)) + "\n";
  out += "  genuine comparisons:  " + std::to_string(report.n_genuine) + "\n";
  out += "  impostor comparisons: " + std::to_string(report.n_impostor) + "\n";
  out += "  EER (%):              " + text::format_decimal(report.eer_percent) + "\n";
  out += "  threshold at EER:     " + text::format_decimal(report.threshold_at_eer) + "\n";
  return out;
}

std::string format_report_kv(const EvaluationReport& report) {
  std::string out;
  out += "task=" + std::string(to_string(report.task)) + "\n";
  out += "eer_percent=" + text::format_decimal(report.eer_percent) + "\n";
  out += "threshold=" + text::format_decimal(report.threshold_at_eer) + "\n";
  out += "n_genuine=" + std::to_string(report.n_genuine) + "\n";
  out += "n_impostor=" + std::to_string(report.n_impostor) + "\n";
  for (const auto& p : report.far_frr_curve) {
    out += "curve=" + text::format_double(p.threshold) + "," + text::format_double(p.far) + "," +
           text::format_double(p.frr) + "\n";
  }
  return out;
}

std::string format_curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "threshold,far,frr\n";
  for (const auto& p : curve) {
    out += text::format_double(p.threshold) + "," + text::format_double(p.far) + "," + text::format_double(p.frr) +
           "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<RankingRow> rank_teams(const TeamEerTable& per_task_eers) {
  std::map<std::string, RankingRow> rows;
  std::map<Task, std::vector<std::pair<double, std::string>>> by_task;
  for (const auto& [team, eers] : per_task_eers) {
    auto& row = rows[team];
    row.team = team;
    for (const auto& [task, eer] : eers) {
      row.task_points[task] = 0;
      by_task[task].emplace_back(eer, team);
    }
  }
  for (auto& [task, entries] : by_task) {
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size() && i < 3; ++i) {
      rows[entries[i].second].task_points[task] = 3 - static_cast<int>(i);
    }
  }

  std::vector<std::pair<double, RankingRow>> ordered;
  for (auto& [team, row] : rows) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [task, eer] : per_task_eers.at(team)) best = std::min(best, eer);
    row.total_points = 0;
    for (const auto& [task, pts] : row.task_points) row.total_points += pts;
    ordered.emplace_back(best, std::move(row));
  }
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second.total_points != b.second.total_points) return a.second.total_points > b.second.total_points;
    if (a.first != b.first) return a.first < b.first;
    return a.second.team < b.second.team;
  });

  std::vector<RankingRow> out;
  out.reserve(ordered.size());
  for (auto& [best, row] : ordered) out.push_back(std::move(row));
  return out;
}

TeamEerTable parse_eer_table_text(std::string_view content, const std::string& source) {
  TeamEerTable table;
  const auto rows = text::lines(content);
  bool first = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = text::split(row, ',');
    if (fields.size() != 3) throw ParseError(source, i + 1, "expected 'team,task,eer'");
    const auto team = text::trim(fields[0]);
    const auto task_field = text::trim(fields[1]);
    auto eer_field = text::trim(fields[2]);
    if (first && team == "team" && task_field == "task") {
      first = false;
      continue;
    }
    first = false;
    if (team.empty()) throw ParseError(source, i + 1, "empty team name");
    const auto task = text::parse_int(task_field);
    if (!task || *task < 1 || *task > 3) throw ParseError(source, i + 1, "task must be 1, 2 or 3");
    if (!eer_field.empty() && eer_field.back() == '%') eer_field.remove_suffix(1);
    const auto eer = text::parse_double(eer_field);
    if (!eer || *eer < 0.0 || *eer > 100.0) throw ParseError(source, i + 1, "EER must be a percentage in [0,100]");
    auto& entry = table[std::string(team)];
    if (!entry.emplace(static_cast<Task>(*task), *eer).second) {
      throw ParseError(source, i + 1, "duplicate entry for team '" + std::string(team) + "'");
    }
  }
  return table;
}

TeamEerTable parse_eer_table_file(const std::filesystem::path& path) {
  return parse_eer_table_text(text::read_file(path.string()), path.string());
}

std::string format_ranking_csv(const std::vector<RankingRow>& rows) {
  std::string out = "position,team,total_points\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += std::to_string(i + 1) + "," + rows[i].team + "," + std::to_string(rows[i].total_points) + "\n";
  }
  return out;
}

}  // namespace sigverify
