#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sigverify {

enum class PenState { Down, Up };
enum class InputKind { Stylus, Finger };
enum class Scenario { Office, Mobile };
enum class Authenticity { Genuine, SkilledForgery, RandomForgery, Unknown };
enum class Truth { Genuine, Impostor };

/// Pressure value written for devices that do not report pressure (finger input).
inline constexpr double kMissingPressureFill = 1.0;

struct SignatureSample {
  double x = 0.0;
  double y = 0.0;
  double pressure = 0.0;
  std::int64_t t = 0;  // milliseconds
  PenState pen_state = PenState::Down;

  bool operator==(const SignatureSample&) const = default;
};

struct SignatureMeta {
  std::string subject_id;
  InputKind input = InputKind::Stylus;
  Scenario scenario = Scenario::Office;
  Authenticity authenticity = Authenticity::Unknown;
  std::optional<int> session;

  bool operator==(const SignatureMeta&) const = default;
};

/// Time-ordered pen samples plus acquisition metadata.
///
/// The constructor enforces the structural invariants (at least two samples,
/// finite values, non-decreasing timestamps). Acquisition invariants that only
/// hold for raw device data (non-negative pressure, the finger fill constant)
/// are checked by validate_raw(), since normalized signatures legitimately
/// violate them.
class Signature {
 public:
  Signature(std::vector<SignatureSample> samples, SignatureMeta meta);

  const std::vector<SignatureSample>& samples() const noexcept { return samples_; }
  const SignatureMeta& meta() const noexcept { return meta_; }
  std::size_t size() const noexcept { return samples_.size(); }

  std::vector<double> xs() const;
  std::vector<double> ys() const;
  std::vector<double> pressures() const;
  std::vector<double> times() const;

  /// Copy with the same metadata and replaced channel values; timestamps and
  /// pen states are kept. All spans must have size() elements.
  Signature with_channels(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& pressure) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<SignatureSample> samples_;
  SignatureMeta meta_;
};

/// Throws InvalidArgument unless pressure >= 0 everywhere and finger-input
/// signatures carry kMissingPressureFill in every sample.
void validate_raw(const Signature& sig);

/// One (reference, questioned) pair of the evaluation protocol.
struct ComparisonTask {
  std::string comparison_id;
  std::string reference_path;
  std::string questioned_path;

  bool operator==(const ComparisonTask&) const = default;
};

/// Score in [0, 1]; higher means more likely genuine.
struct ScoreRecord {
  std::string comparison_id;
  double score = 0.0;

  bool operator==(const ScoreRecord&) const = default;
};

struct LabelRecord {
  std::string comparison_id;
  Truth truth = Truth::Genuine;

  bool operator==(const LabelRecord&) const = default;
};

std::string_view to_string(PenState v);
std::string_view to_string(InputKind v);
std::string_view to_string(Scenario v);
std::string_view to_string(Authenticity v);
std::string_view to_string(Truth v);

std::optional<InputKind> input_kind_from_string(std::string_view s);
std::optional<Scenario> scenario_from_string(std::string_view s);
std::optional<Authenticity> authenticity_from_string(std::string_view s);
std::optional<Truth> truth_from_string(std::string_view s);

// Signature file:
//   COUNT <n>
//   META subject=<id> input=<stylus|finger> scenario=<office|mobile> auth=<genuine|skilled|random|unknown> [session=<k>]
//   <x> <y> <t> <p> <s>        (n rows, s: 0 = pen-down, 1 = pen-up)
Signature parse_signature_text(std::string_view content, const std::string& source = "<memory>");
Signature parse_signature_file(const std::filesystem::path& path);
std::string format_signature(const Signature& sig);
void write_signature_file(const Signature& sig, const std::filesystem::path& path);

// Comparison file: `comparison_id,reference_path,questioned_path` per line.
std::vector<ComparisonTask> parse_comparison_text(std::string_view content,
                                                  const std::string& source = "<memory>");
std::vector<ComparisonTask> parse_comparison_file(const std::filesystem::path& path);
std::string format_comparisons(const std::vector<ComparisonTask>& tasks);
void write_comparison_file(const std::vector<ComparisonTask>& tasks, const std::filesystem::path& path);

// Score file: `comparison_id,score` per line.
std::vector<ScoreRecord> parse_score_text(std::string_view content, const std::string& source = "<memory>");
std::vector<ScoreRecord> parse_score_file(const std::filesystem::path& path);
std::string format_scores(const std::vector<ScoreRecord>& records);
void write_score_file(const std::vector<ScoreRecord>& records, const std::filesystem::path& path);

// Label file: `comparison_id,genuine|impostor` per line.
std::vector<LabelRecord> parse_label_text(std::string_view content, const std::string& source = "<memory>");
std::vector<LabelRecord> parse_label_file(const std::filesystem::path& path);
std::string format_labels(const std::vector<LabelRecord>& records);
void write_label_file(const std::vector<LabelRecord>& records, const std::filesystem::path& path);

}  // namespace sigverify
