#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sigverify/sigdata.hpp"

namespace sigverify {

/// Frozen generator constants. Jitter values are standard deviations relative to
/// the subject's base trajectory parameters.
struct SynthConfig {
  int min_length = 300;
  int max_length = 800;
  int min_components = 3;
  int max_components = 5;
  std::int64_t sample_period_ms = 10;

  int genuine_per_session = 2;
  int sessions = 2;
  int skilled_per_subject = 4;
  int random_per_subject = 4;
  double session_jitter_step = 0.6;  // session k scales genuine jitter by 1 + step * (k - 1)

  struct Variation {
    double amplitude;
    double phase;
    double frequency;
    double time_warp;
    double length;
    double slowdown;  // mean relative increase in duration
    double noise;     // device units
  };
  Variation genuine{0.04, 0.08, 0.01, 0.04, 0.05, 0.0, 2.0};
  Variation skilled{0.14, 0.30, 0.035, 0.18, 0.15, 0.25, 4.0};
};

struct SyntheticSubject {
  std::string subject_id;
  Scenario scenario = Scenario::Office;
  std::vector<Signature> genuine;
  std::vector<Signature> skilled;
};

enum class ComparisonKind { Genuine, Skilled, Random };

struct SyntheticComparison {
  std::string comparison_id;
  std::size_t reference_subject = 0;
  std::size_t reference_index = 0;  // into genuine
  std::size_t questioned_subject = 0;
  std::size_t questioned_index = 0;  // into genuine or skilled
  ComparisonKind kind = ComparisonKind::Genuine;
};

struct SyntheticDataset {
  std::vector<SyntheticSubject> subjects;
  std::vector<SyntheticComparison> comparisons;  // shuffled protocol order

  const Signature& reference(const SyntheticComparison& c) const;
  const Signature& questioned(const SyntheticComparison& c) const;
};

/// Deterministic for a given seed. Even-numbered subjects are office/stylus,
/// odd-numbered ones mobile/finger. Needs n_subjects >= 2.
SyntheticDataset generate_synthetic_signatures(std::uint64_t seed, int n_subjects, const SynthConfig& config = {});

struct SynthSubset {
  std::string name;  // all (the mixed-scenario task), task1, task2, random, skilled
  std::filesystem::path comparisons;
  std::filesystem::path labels;
  std::size_t n_genuine = 0;
  std::size_t n_impostor = 0;
};

struct SynthManifest {
  std::filesystem::path root;
  std::vector<std::filesystem::path> signature_files;
  std::vector<SynthSubset> subsets;
};

/// Writes signatures/, comparisons_<subset>.csv, labels_<subset>.csv and
/// manifest.txt under out_dir (created if needed). comparisons.csv/labels.csv
/// duplicate the `all` subset. Signature paths inside comparison files are
/// relative to out_dir.
SynthManifest write_synthetic_dataset(std::uint64_t seed, int n_subjects, const std::filesystem::path& out_dir,
                                      const SynthConfig& config = {});

}  // namespace sigverify
