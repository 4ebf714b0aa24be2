#include "sigverify/sigdata.hpp"

#include <cmath>
#include <unordered_set>

#include "sigverify/error.hpp"
#include "sigverify/text.hpp"

namespace sigverify {

namespace {

void check_structure(const std::vector<SignatureSample>& samples) {
  if (samples.size() < 2) {
    throw InvalidArgument("signature needs at least 2 samples, got " + std::to_string(samples.size()));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.pressure)) {
      throw InvalidArgument("non-finite value in sample " + std::to_string(i));
    }
    if (i > 0 && s.t < samples[i - 1].t) {
      throw InvalidArgument("timestamps decrease at sample " + std::to_string(i));
    }
  }
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') return false;
  }
  return true;
}

bool is_comment_or_blank(std::string_view line) {
  auto t = text::trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

Signature::Signature(std::vector<SignatureSample> samples, SignatureMeta meta)
    : samples_(std::move(samples)), meta_(std::move(meta)) {
  check_structure(samples_);
}

std::vector<double> Signature::xs() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.x);
  return out;
}

std::vector<double> Signature::ys() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.y);
  return out;
}

std::vector<double> Signature::pressures() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(s.pressure);
  return out;
}

std::vector<double> Signature::times() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const auto& s : samples_) out.push_back(static_cast<double>(s.t));
  return out;
}

Signature Signature::with_channels(const std::vector<double>& x, const std::vector<double>& y,
                                   const std::vector<double>& pressure) const {
  const std::size_t n = samples_.size();
  if (x.size() != n || y.size() != n || pressure.size() != n) {
    throw InvalidArgument("channel length does not match sample count");
  }
  auto samples = samples_;
  for (std::size_t i = 0; i < n; ++i) {
    samples[i].x = x[i];
    samples[i].y = y[i];
    samples[i].pressure = pressure[i];
  }
  return Signature(std::move(samples), meta_);
}

void validate_raw(const Signature& sig) {
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const double p = sig.samples()[i].pressure;
    if (p < 0.0) throw InvalidArgument("negative pressure in sample " + std::to_string(i));
    if (sig.meta().input == InputKind::Finger && p != kMissingPressureFill) {
      throw InvalidArgument("finger signature must carry pressure " +
                            text::format_decimal(kMissingPressureFill) + " in sample " + std::to_string(i));
    }
  }
}

std::string_view to_string(PenState v) { return v == PenState::Down ? "down" : "up"; }
std::string_view to_string(InputKind v) { return v == InputKind::Stylus ? "stylus" : "finger"; }
std::string_view to_string(Scenario v) { return v == Scenario::Office ? "office" : "mobile"; }
std::string_view to_string(Truth v) { return v == Truth::Genuine ? "genuine" : "impostor"; }

std::string_view to_string(Authenticity v) {
  switch (v) {
    case Authenticity::Genuine: return "genuine";
    case Authenticity::SkilledForgery: return "skilled";
    case Authenticity::RandomForgery: return "random";
    case Authenticity::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<InputKind> input_kind_from_string(std::string_view s) {
  if (s == "stylus") return InputKind::Stylus;
  if (s == "finger") return InputKind::Finger;
  return std::nullopt;
}

std::optional<Scenario> scenario_from_string(std::string_view s) {
  if (s == "office") return Scenario::Office;
  if (s == "mobile") return Scenario::Mobile;
  return std::nullopt;
}

std::optional<Authenticity> authenticity_from_string(std::string_view s) {
  if (s == "genuine") return Authenticity::Genuine;
  if (s == "skilled") return Authenticity::SkilledForgery;
  if (s == "random") return Authenticity::RandomForgery;
  if (s == "unknown") return Authenticity::Unknown;
  return std::nullopt;
}

std::optional<Truth> truth_from_string(std::string_view s) {
  if (s == "genuine") return Truth::Genuine;
  if (s == "impostor") return Truth::Impostor;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Signature files

Signature parse_signature_text(std::string_view content, const std::string& source) {
  const auto rows = text::lines(content);
  if (rows.empty()) throw ParseError(source, 1, "empty file, expected 'COUNT <n>'");

  const auto count_tokens = text::split_whitespace(rows[0]);
  if (count_tokens.size() != 2 || count_tokens[0] != "COUNT") {
    throw ParseError(source, 1, "malformed header, expected 'COUNT <n>'");
  }
  const auto count = text::parse_int(count_tokens[1]);
  if (!count || *count < 0) throw ParseError(source, 1, "invalid sample count '" + std::string(count_tokens[1]) + "'");
  if (*count < 2) throw ParseError(source, 1, "signature needs at least 2 samples, header declares " + std::to_string(*count));

  if (rows.size() < 2) throw ParseError(source, 2, "missing META line");
  const auto meta_tokens = text::split_whitespace(rows[1]);
  if (meta_tokens.empty() || meta_tokens[0] != "META") throw ParseError(source, 2, "malformed header, expected 'META ...'");

  SignatureMeta meta;
  bool have_subject = false, have_input = false, have_scenario = false, have_auth = false;
  for (std::size_t k = 1; k < meta_tokens.size(); ++k) {
    const auto tok = meta_tokens[k];
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, 2, "META field '" + std::string(tok) + "' is not key=value");
    const auto key = tok.substr(0, eq);
    const auto value = tok.substr(eq + 1);
    if (key == "subject") {
      if (value.empty()) throw ParseError(source, 2, "empty subject id");
      meta.subject_id = std::string(value);
      have_subject = true;
    } else if (key == "input") {
      auto v = input_kind_from_string(value);
      if (!v) throw ParseError(source, 2, "unknown input '" + std::string(value) + "'");
      meta.input = *v;
      have_input = true;
    } else if (key == "scenario") {
      auto v = scenario_from_string(value);
      if (!v) throw ParseError(source, 2, "unknown scenario '" + std::string(value) + "'");
      meta.scenario = *v;
      have_scenario = true;
    } else if (key == "auth") {
      auto v = authenticity_from_string(value);
      if (!v) throw ParseError(source, 2, "unknown auth '" + std::string(value) + "'");
      meta.authenticity = *v;
      have_auth = true;
    } else if (key == "session") {
      auto v = text::parse_int(value);
      if (!v || *v < 0 || *v > 1000) throw ParseError(source, 2, "invalid session '" + std::string(value) + "'");
      meta.session = static_cast<int>(*v);
    } else {
      throw ParseError(source, 2, "unknown META key '" + std::string(key) + "'");
    }
  }
  if (!(have_subject && have_input && have_scenario && have_auth)) {
    throw ParseError(source, 2, "META requires subject, input, scenario and auth");
  }

  const auto n = static_cast<std::size_t>(*count);
  const std::size_t available = rows.size() - 2;
  if (available != n) {
    throw ParseError(source, available < n ? rows.size() : n + 3,
                     "sample count mismatch: header declares " + std::to_string(n) + ", file has " +
                         std::to_string(available) + " rows");
  }

  std::vector<SignatureSample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t line_no = i + 3;
    const auto tok = text::split_whitespace(rows[i + 2]);
    if (tok.size() != 5) throw ParseError(source, line_no, "expected 5 fields 'x y t p s', got " + std::to_string(tok.size()));
    SignatureSample s;
    auto x = text::parse_double(tok[0]);
    auto y = text::parse_double(tok[1]);
    auto t = text::parse_int(tok[2]);
    auto p = text::parse_double(tok[3]);
    if (!x || !y || !t || !p) throw ParseError(source, line_no, "non-numeric token");
    if (tok[4] == "0") {
      s.pen_state = PenState::Down;
    } else if (tok[4] == "1") {
      s.pen_state = PenState::Up;
    } else {
      throw ParseError(source, line_no, "pen state must be 0 or 1");
    }
    if (*p < 0.0) throw ParseError(source, line_no, "negative pressure");
    if (meta.input == InputKind::Finger && *p != kMissingPressureFill) {
      throw ParseError(source, line_no, "finger signature must carry pressure 1.0");
    }
    if (!samples.empty() && *t < samples.back().t) throw ParseError(source, line_no, "timestamps must be non-decreasing");
    s.x = *x;
    s.y = *y;
    s.t = *t;
    s.pressure = *p;
    samples.push_back(s);
  }
  return Signature(std::move(samples), std::move(meta));
}

Signature parse_signature_file(const std::filesystem::path& path) {
  return parse_signature_text(text::read_file(path.string()), path.string());
}

std::string format_signature(const Signature& sig) {
  validate_raw(sig);
  const auto& meta = sig.meta();
  if (!valid_id(meta.subject_id)) throw InvalidArgument("subject id must be non-empty without whitespace or commas");

  std::string out = "COUNT " + std::to_string(sig.size()) + "\n";
  out += "META subject=" + meta.subject_id;
  out += " input=" + std::string(to_string(meta.input));
  out += " scenario=" + std::string(to_string(meta.scenario));
  out += " auth=" + std::string(to_string(meta.authenticity));
  if (meta.session) out += " session=" + std::to_string(*meta.session);
  out += '\n';
  for (const auto& s : sig.samples()) {
    out += text::format_double(s.x);
    out += ' ';
    out += text::format_double(s.y);
    out += ' ';
    out += std::to_string(s.t);
    out += ' ';
    out += text::format_double(s.pressure);
    out += s.pen_state == PenState::Down ? " 0\n" : " 1\n";
  }
  return out;
}

void write_signature_file(const Signature& sig, const std::filesystem::path& path) {
  text::write_file(path.string(), format_signature(sig));
}

// ---------------------------------------------------------------------------
// Comparison files

std::vector<ComparisonTask> parse_comparison_text(std::string_view content, const std::string& source) {
  std::vector<ComparisonTask> tasks;
  std::unordered_set<std::string> seen;
  const auto rows = text::lines(content);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (is_comment_or_blank(rows[i])) continue;
    const auto fields = text::split(rows[i], ',');
    if (fields.size() != 3) {
      throw ParseError(source, i + 1, "expected 3 fields 'comparison_id,reference_path,questioned_path', got " +
                                          std::to_string(fields.size()));
    }
    ComparisonTask task{std::string(text::trim(fields[0])), std::string(text::trim(fields[1])),
                        std::string(text::trim(fields[2]))};
    if (task.comparison_id.empty() || task.reference_path.empty() || task.questioned_path.empty()) {
      throw ParseError(source, i + 1, "empty field");
    }
    if (!seen.insert(task.comparison_id).second) {
      throw ParseError(source, i + 1, "duplicate comparison id '" + task.comparison_id + "'");
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<ComparisonTask> parse_comparison_file(const std::filesystem::path& path) {
  return parse_comparison_text(text::read_file(path.string()), path.string());
}

std::string format_comparisons(const std::vector<ComparisonTask>& tasks) {
  std::unordered_set<std::string> seen;
  std::string out;
  for (const auto& t : tasks) {
    if (!valid_id(t.comparison_id)) throw InvalidArgument("invalid comparison id '" + t.comparison_id + "'");
    if (!seen.insert(t.comparison_id).second) throw InvalidArgument("duplicate comparison id '" + t.comparison_id + "'");
    out += t.comparison_id + ',' + t.reference_path + ',' + t.questioned_path + '\n';
  }
  return out;
}

void write_comparison_file(const std::vector<ComparisonTask>& tasks, const std::filesystem::path& path) {
  text::write_file(path.string(), format_comparisons(tasks));
}

// ---------------------------------------------------------------------------
// Score files

std::vector<ScoreRecord> parse_score_text(std::string_view content, const std::string& source) {
  std::vector<ScoreRecord> records;
  std::unordered_set<std::string> seen;
  const auto rows = text::lines(content);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (is_comment_or_blank(rows[i])) continue;
    const auto fields = text::split(rows[i], ',');
    if (fields.size() != 2) throw ParseError(source, i + 1, "expected 'comparison_id,score'");
    std::string id(text::trim(fields[0]));
    if (id.empty()) throw ParseError(source, i + 1, "empty comparison id");
    auto score = text::parse_double(text::trim(fields[1]));
    if (!score) throw ParseError(source, i + 1, "non-numeric score");
    if (*score < 0.0 || *score > 1.0) throw ParseError(source, i + 1, "score outside [0,1]");
    if (!seen.insert(id).second) throw ParseError(source, i + 1, "duplicate comparison id '" + id + "'");
    records.push_back({std::move(id), *score});
  }
  return records;
}

std::vector<ScoreRecord> parse_score_file(const std::filesystem::path& path) {
  return parse_score_text(text::read_file(path.string()), path.string());
}

std::string format_scores(const std::vector<ScoreRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    if (!valid_id(r.comparison_id)) throw InvalidArgument("invalid comparison id '" + r.comparison_id + "'");
    if (!(r.score >= 0.0 && r.score <= 1.0)) {
      throw InvalidArgument("score for '" + r.comparison_id + "' outside [0,1]: " + text::format_double(r.score));
    }
    out += r.comparison_id + ',' + text::format_double(r.score) + '\n';
  }
  return out;
}

void write_score_file(const std::vector<ScoreRecord>& records, const std::filesystem::path& path) {
  text::write_file(path.string(), format_scores(records));
}

// ---------------------------------------------------------------------------
// Label files

std::vector<LabelRecord> parse_label_text(std::string_view content, const std::string& source) {
  std::vector<LabelRecord> records;
  std::unordered_set<std::string> seen;
  const auto rows = text::lines(content);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (is_comment_or_blank(rows[i])) continue;
    const auto fields = text::split(rows[i], ',');
    if (fields.size() != 2) throw ParseError(source, i + 1, "expected 'comparison_id,genuine|impostor'");
    std::string id(text::trim(fields[0]));
    if (id.empty()) throw ParseError(source, i + 1, "empty comparison id");
    auto truth = truth_from_string(text::trim(fields[1]));
    if (!truth) throw ParseError(source, i + 1, "label must be 'genuine' or 'impostor'");
    if (!seen.insert(id).second) throw ParseError(source, i + 1, "duplicate comparison id '" + id + "'");
    records.push_back({std::move(id), *truth});
  }
  return records;
}

std::vector<LabelRecord> parse_label_file(const std::filesystem::path& path) {
  return parse_label_text(text::read_file(path.string()), path.string());
}

std::string format_labels(const std::vector<LabelRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    if (!valid_id(r.comparison_id)) throw InvalidArgument("invalid comparison id '" + r.comparison_id + "'");
    out += r.comparison_id + ',' + std::string(to_string(r.truth)) + '\n';
  }
  return out;
}

void write_label_file(const std::vector<LabelRecord>& records, const std::filesystem::path& path) {
  text::write_file(path.string(), format_labels(records));
}

}  // namespace sigverify
