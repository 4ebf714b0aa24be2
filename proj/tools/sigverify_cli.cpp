// sigverify: run the signature-verification benchmark protocol from the shell.
//
//   sigverify synth   --seed 42 --subjects 20 --out data/
//   sigverify compare data/comparisons_random.csv --pipeline baseline.cfg --out scores.csv
//   sigverify eval    scores.csv data/labels_random.csv --task 1 --curve curve.csv
//   sigverify rank    eers.csv
//   sigverify inspect data/signatures/s0123456789.sig

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sigverify/error.hpp"
#include "sigverify/evaluation.hpp"
#include "sigverify/features.hpp"
#include "sigverify/pipeline.hpp"
#include "sigverify/sigdata.hpp"
#include "sigverify/synth.hpp"
#include "sigverify/text.hpp"

namespace fs = std::filesystem;
using namespace sigverify;

namespace {

// Writes next to the destination and renames, so a failed run never leaves a
// partial file behind.
void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".partial";
  text::write_file(tmp.string(), content);
  fs::rename(tmp, path);
}

int cmd_compare(const std::string& comparisons_path, const std::string& pipeline_path, const std::string& out,
                bool dry_run, unsigned threads) {
  const auto config = PipelineConfig::load(pipeline_path);
  const auto tasks = parse_comparison_file(comparisons_path);
  const fs::path base = fs::path(comparisons_path).parent_path();
  if (dry_run) {
    validate_protocol_inputs(tasks, base);
    std::cout << "ok: " << tasks.size() << " comparisons, verifier " << to_string(config.verifier) << "\n";
    return 0;
  }
  if (out.empty()) throw Error("--out is required unless --dry-run is given");
  const Pipeline pipeline(config);
  const auto scores = run_protocol(tasks, pipeline, base, threads ? threads : config.threads);
  write_atomically(out, format_scores(scores));
  std::cout << "wrote " << scores.size() << " scores to " << out << "\n";
  return 0;
}

int cmd_eval(const std::string& scores_path, const std::string& labels_path, int task, const std::string& curve_path,
             const std::string& report_path) {
  const auto scores = parse_score_file(scores_path);
  const auto labels = parse_label_file(labels_path);
  const auto report = evaluate_task(scores, labels, static_cast<Task>(task));
  std::cout << format_report_text(report);
  std::cout << "eer_percent=" << text::format_decimal(report.eer_percent) << "\n";
  if (!curve_path.empty()) write_atomically(curve_path, format_curve_csv(report.far_frr_curve));
  if (!report_path.empty()) write_atomically(report_path, format_report_kv(report));
  return 0;
}

int cmd_rank(const std::string& table_path, const std::string& out) {
  const auto rows = rank_teams(parse_eer_table_file(table_path));
  const auto csv = format_ranking_csv(rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_atomically(out, csv);
  }
  return 0;
}

int cmd_synth(std::uint64_t seed, int subjects, const std::string& out) {
  const auto manifest = write_synthetic_dataset(seed, subjects, out);
  std::cout << "wrote " << manifest.signature_files.size() << " signatures to " << out << "\n";
  for (const auto& s : manifest.subsets) {
    std::cout << "  " << s.name << ": " << s.comparisons.filename().string() << " (" << s.n_genuine << " genuine, "
              << s.n_impostor << " impostor)\n";
  }
  return 0;
}

int cmd_inspect(const std::string& path) {
  const auto sig = parse_signature_file(path);
  const auto& meta = sig.meta();
  const auto feats = global_features(sig, GlobalFeatureSet::Extended);
  const auto pen_up = std::count_if(sig.samples().begin(), sig.samples().end(),
                                    [](const SignatureSample& s) { return s.pen_state == PenState::Up; });
  const auto p = sig.pressures();
  const auto [pmin, pmax] = std::minmax_element(p.begin(), p.end());

  std::cout << "file:        " << path << "\n"
            << "subject:     " << meta.subject_id << "\n"
            << "input:       " << to_string(meta.input) << "\n"
            << "scenario:    " << to_string(meta.scenario) << "\n"
            << "auth:        " << to_string(meta.authenticity) << "\n";
  if (meta.session) std::cout << "session:     " << *meta.session << "\n";
  std::cout << "samples:     " << sig.size() << " (" << pen_up << " pen-up)\n"
            << "pressure:    " << text::format_double(*pmin) << " .. " << text::format_double(*pmax) << "\n";
  const auto names = feats.names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::printf("%-13s%s\n", (std::string(names[i]) + ":").c_str(), text::format_double(feats.values[i]).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"On-line signature verification toolkit and benchmark protocol harness"};
  app.require_subcommand(1);

  std::string comparisons, pipeline_path, out, scores, labels, curve, table, sig_path;
  bool dry_run = false;
  unsigned threads = 0;
  int task = 1;
  std::uint64_t seed = 42;
  int subjects = 20;

  auto* compare = app.add_subcommand("compare", "Score every comparison of a comparison file");
  compare->add_option("comparisons", comparisons, "Comparison file")->required()->check(CLI::ExistingFile);
  compare->add_option("--pipeline", pipeline_path, "Pipeline configuration file")->required();
  compare->add_option("--out", out, "Score file to write");
  compare->add_flag("--dry-run", dry_run, "Validate inputs without scoring or writing");
  compare->add_option("--threads", threads, "Worker threads (default: pipeline setting, then all cores)");

  auto* eval = app.add_subcommand("eval", "Compute the EER of a score file against labels");
  eval->add_option("scores", scores, "Score file")->required()->check(CLI::ExistingFile);
  eval->add_option("labels", labels, "Label file")->required()->check(CLI::ExistingFile);
  eval->add_option("--task", task, "Task number")->check(CLI::Range(1, 3));
  eval->add_option("--curve", curve, "Also write FAR/FRR rows as CSV");
  eval->add_option("--out", out, "Also write a key=value report");

  auto* rank = app.add_subcommand("rank", "Medal-points ranking from a team,task,eer table");
  rank->add_option("table", table, "EER table")->required()->check(CLI::ExistingFile);
  rank->add_option("--out", out, "Ranking CSV (default: stdout)");

  auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic dataset");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--subjects", subjects, "Number of subjects (>= 2)");
  synth->add_option("--out", out, "Output directory")->required();

  auto* inspect = app.add_subcommand("inspect", "Print a summary of a signature file");
  inspect->add_option("signature", sig_path, "Signature file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compare) return cmd_compare(comparisons, pipeline_path, out, dry_run, threads);
    if (*eval) return cmd_eval(scores, labels, task, curve, out);
    if (*rank) return cmd_rank(table, out);
    if (*synth) return cmd_synth(seed, subjects, out);
    if (*inspect) return cmd_inspect(sig_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
