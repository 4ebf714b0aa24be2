#include "sigverify/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "sigverify/error.hpp"
#include "sigverify/text.hpp"

namespace sigverify {

namespace {

// mt19937_64 output is fixed by the standard; the distributions below are
// written out so the byte stream does not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::uint64_t bits() { return engine_(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[engine_() % i]);
  }

 private:
  std::mt19937_64 engine_;
};

struct Component {
  double amplitude;
  double frequency;  // cycles over the whole signature
  double phase;
};

struct PenUpInterval {
  double start;
  double end;
};

struct Trajectory {
  std::vector<Component> x;
  std::vector<Component> y;
  double drift = 0.0;
  Component pressure_wave{};
  std::vector<PenUpInterval> pen_up;
  int length = 0;
};

Trajectory draw_base(Rng& rng, const SynthConfig& cfg, Scenario scenario) {
  Trajectory tr;
  const double scale = scenario == Scenario::Office ? 1.0 : 0.4;
  auto draw_components = [&](std::vector<Component>& out) {
    const int k = rng.integer(cfg.min_components, cfg.max_components);
    for (int i = 0; i < k; ++i) {
      out.push_back({scale * rng.uniform(300.0, 1500.0) / (1.0 + 0.5 * i), rng.uniform(0.5, 4.0),
                     rng.uniform(0.0, 2.0 * std::numbers::pi)});
    }
  };
  draw_components(tr.x);
  draw_components(tr.y);
  tr.drift = scale * rng.uniform(2000.0, 5000.0);
  tr.pressure_wave = {rng.uniform(0.15, 0.3), rng.uniform(1.0, 5.0), rng.uniform(0.0, 2.0 * std::numbers::pi)};
  if (scenario == Scenario::Office) {
    const int gaps = rng.integer(1, 3);
    for (int g = 0; g < gaps; ++g) {
      const double start = rng.uniform(0.1, 0.85);
      tr.pen_up.push_back({start, start + rng.uniform(0.02, 0.06)});
    }
  }
  tr.length = rng.integer(cfg.min_length, cfg.max_length);
  return tr;
}

Trajectory vary(const Trajectory& base, Rng& rng, const SynthConfig::Variation& v, double jitter_scale) {
  Trajectory tr = base;
  auto perturb = [&](std::vector<Component>& comps) {
    for (auto& c : comps) {
      c.amplitude *= 1.0 + jitter_scale * v.amplitude * rng.normal();
      c.phase += jitter_scale * v.phase * rng.normal();
      c.frequency *= 1.0 + jitter_scale * v.frequency * rng.normal();
    }
  };
  perturb(tr.x);
  perturb(tr.y);
  tr.drift *= 1.0 + jitter_scale * v.amplitude * rng.normal();
  tr.pressure_wave.phase += jitter_scale * v.phase * rng.normal();
  for (auto& gap : tr.pen_up) {
    const double shift = 0.01 * jitter_scale * rng.normal();
    gap.start += shift;
    gap.end += shift;
  }
  const double stretch = 1.0 + v.slowdown + jitter_scale * v.length * rng.normal();
  tr.length = std::max(60, static_cast<int>(std::lround(base.length * stretch)));
  return tr;
}

double evaluate(const std::vector<Component>& comps, double u) {
  double acc = 0.0;
  for (const auto& c : comps) acc += c.amplitude * std::sin(2.0 * std::numbers::pi * c.frequency * u + c.phase);
  return acc;
}

double round_to(double v, double step) { return std::round(v / step) * step; }

Signature realize(const Trajectory& tr, Rng& rng, const SynthConfig& cfg, const SynthConfig::Variation& v,
                  double jitter_scale, SignatureMeta meta) {
  // Monotone time warp u(tau) = tau + w sin(pi m tau) / (pi m), |w| < 1.
  const int m = rng.integer(1, 3);
  const double w = std::clamp(jitter_scale * v.time_warp * rng.normal() * std::numbers::pi, -0.6, 0.6);
  const double noise = jitter_scale * v.noise;
  const bool stylus = meta.input == InputKind::Stylus;

  std::vector<SignatureSample> samples;
  samples.reserve(static_cast<std::size_t>(tr.length));
  for (int i = 0; i < tr.length; ++i) {
    const double tau = static_cast<double>(i) / (tr.length - 1);
    const double u = tau + w * std::sin(std::numbers::pi * m * tau) / (std::numbers::pi * m);
    SignatureSample s;
    s.t = cfg.sample_period_ms * i;
    s.x = round_to(tr.drift * u + evaluate(tr.x, u) + noise * rng.normal(), 0.1);
    s.y = round_to(evaluate(tr.y, u) + noise * rng.normal(), 0.1);
    if (stylus) {
      const bool up = std::any_of(tr.pen_up.begin(), tr.pen_up.end(),
                                  [u](const PenUpInterval& g) { return u >= g.start && u < g.end; });
      if (up) {
        s.pressure = 0.0;
        s.pen_state = PenState::Up;
      } else {
        // Pressure follows the vertical stroke position plus a slow wave.
        const double level = 0.55 + 0.2 * std::tanh(evaluate(tr.y, u) / 800.0) +
                             tr.pressure_wave.amplitude *
                                 std::sin(2.0 * std::numbers::pi * tr.pressure_wave.frequency * u +
                                          tr.pressure_wave.phase);
        s.pressure = std::round(1023.0 * std::clamp(level, 0.05, 1.0));
        s.pen_state = PenState::Down;
      }
    } else {
      s.pressure = kMissingPressureFill;
      s.pen_state = PenState::Down;
    }
    samples.push_back(s);
  }
  return Signature(std::move(samples), std::move(meta));
}

std::string hex_id(Rng& rng, std::set<std::string>& used, char prefix) {
  static constexpr char kDigits[] = "0123456789abcdef";
  while (true) {
    std::uint64_t b = rng.bits();
    std::string id(1, prefix);
    for (int i = 0; i < 10; ++i, b >>= 4) id += kDigits[b & 0xF];
    if (used.insert(id).second) return id;
  }
}

}  // namespace

const Signature& SyntheticDataset::reference(const SyntheticComparison& c) const {
  return subjects.at(c.reference_subject).genuine.at(c.reference_index);
}

const Signature& SyntheticDataset::questioned(const SyntheticComparison& c) const {
  const auto& s = subjects.at(c.questioned_subject);
  return c.kind == ComparisonKind::Skilled ? s.skilled.at(c.questioned_index) : s.genuine.at(c.questioned_index);
}

SyntheticDataset generate_synthetic_signatures(std::uint64_t seed, int n_subjects, const SynthConfig& cfg) {
  if (n_subjects < 2) throw InvalidArgument("synthetic dataset needs at least 2 subjects");
  Rng rng(seed);
  SyntheticDataset ds;
  ds.subjects.reserve(static_cast<std::size_t>(n_subjects));

  for (int s = 0; s < n_subjects; ++s) {
    SyntheticSubject subject;
    char buf[16];
    std::snprintf(buf, sizeof buf, "u%04d", s);
    subject.subject_id = buf;
    subject.scenario = s % 2 == 0 ? Scenario::Office : Scenario::Mobile;
    const InputKind input = subject.scenario == Scenario::Office ? InputKind::Stylus : InputKind::Finger;
    const auto base = draw_base(rng, cfg, subject.scenario);

    for (int session = 1; session <= cfg.sessions; ++session) {
      const double jitter = 1.0 + cfg.session_jitter_step * (session - 1);
      for (int k = 0; k < cfg.genuine_per_session; ++k) {
        SignatureMeta meta{subject.subject_id, input, subject.scenario, Authenticity::Genuine, session};
        subject.genuine.push_back(realize(vary(base, rng, cfg.genuine, jitter), rng, cfg, cfg.genuine, jitter, meta));
      }
    }
    for (int k = 0; k < cfg.skilled_per_subject; ++k) {
      SignatureMeta meta{subject.subject_id, input, subject.scenario, Authenticity::SkilledForgery, std::nullopt};
      // The forger reproduces the victim's shape with their own pressure habits.
      auto forged = vary(base, rng, cfg.skilled, 1.0);
      forged.pressure_wave = {rng.uniform(0.15, 0.3), rng.uniform(1.0, 5.0), rng.uniform(0.0, 2.0 * std::numbers::pi)};
      subject.skilled.push_back(realize(forged, rng, cfg, cfg.skilled, 1.0, meta));
    }
    ds.subjects.push_back(std::move(subject));
  }

  std::set<std::string> used;
  const auto n = static_cast<std::size_t>(n_subjects);
  const auto random_count = std::min<std::size_t>(static_cast<std::size_t>(cfg.random_per_subject), n - 1);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t g = 1; g < ds.subjects[s].genuine.size(); ++g) {
      ds.comparisons.push_back({hex_id(rng, used, 'c'), s, 0, s, g, ComparisonKind::Genuine});
    }
    for (std::size_t k = 0; k < ds.subjects[s].skilled.size(); ++k) {
      ds.comparisons.push_back({hex_id(rng, used, 'c'), s, 0, s, k, ComparisonKind::Skilled});
    }
    for (std::size_t r = 1; r <= random_count; ++r) {
      ds.comparisons.push_back({hex_id(rng, used, 'c'), s, 0, (s + r) % n, 1, ComparisonKind::Random});
    }
  }
  rng.shuffle(ds.comparisons);
  return ds;
}

SynthManifest write_synthetic_dataset(std::uint64_t seed, int n_subjects, const std::filesystem::path& out_dir,
                                      const SynthConfig& cfg) {
  const auto ds = generate_synthetic_signatures(seed, n_subjects, cfg);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "signatures");

  // Randomized file nomenclature, drawn from a stream derived from the seed.
  Rng names(seed ^ 0x9e3779b97f4a7c15ULL);
  std::set<std::string> used;
  SynthManifest manifest;
  manifest.root = out_dir;
  std::vector<std::vector<std::string>> genuine_paths(ds.subjects.size()), skilled_paths(ds.subjects.size());
  auto emit = [&](const Signature& sig) {
    const std::string rel = "signatures/" + hex_id(names, used, 's') + ".sig";
    write_signature_file(sig, out_dir / rel);
    manifest.signature_files.push_back(out_dir / rel);
    return rel;
  };
  for (std::size_t s = 0; s < ds.subjects.size(); ++s) {
    for (const auto& sig : ds.subjects[s].genuine) genuine_paths[s].push_back(emit(sig));
    for (const auto& sig : ds.subjects[s].skilled) skilled_paths[s].push_back(emit(sig));
  }

  struct Subset {
    std::string name;
    std::vector<ComparisonTask> tasks;
    std::vector<LabelRecord> labels;
  };
  std::vector<Subset> subsets = {{"all", {}, {}}, {"task1", {}, {}}, {"task2", {}, {}}, {"random", {}, {}},
                                 {"skilled", {}, {}}};
  for (const auto& c : ds.comparisons) {
    const ComparisonTask task{
        c.comparison_id, genuine_paths[c.reference_subject][c.reference_index],
        c.kind == ComparisonKind::Skilled ? skilled_paths[c.questioned_subject][c.questioned_index]
                                          : genuine_paths[c.questioned_subject][c.questioned_index]};
    const LabelRecord label{c.comparison_id, c.kind == ComparisonKind::Genuine ? Truth::Genuine : Truth::Impostor};
    const bool office = ds.subjects[c.reference_subject].scenario == Scenario::Office;
    auto add = [&](Subset& sub) {
      sub.tasks.push_back(task);
      sub.labels.push_back(label);
    };
    add(subsets[0]);
    add(subsets[office ? 1 : 2]);
    if (c.kind != ComparisonKind::Skilled) add(subsets[3]);
    if (c.kind != ComparisonKind::Random) add(subsets[4]);
  }

  std::string manifest_text = "seed=" + std::to_string(seed) + "\nsubjects=" + std::to_string(n_subjects) +
                              "\nsignatures=" + std::to_string(manifest.signature_files.size()) + "\n";
  for (const auto& sub : subsets) {
    SynthSubset info;
    info.name = sub.name;
    info.comparisons = out_dir / ("comparisons_" + sub.name + ".csv");
    info.labels = out_dir / ("labels_" + sub.name + ".csv");
    write_comparison_file(sub.tasks, info.comparisons);
    write_label_file(sub.labels, info.labels);
    info.n_genuine = static_cast<std::size_t>(std::count_if(
        sub.labels.begin(), sub.labels.end(), [](const LabelRecord& l) { return l.truth == Truth::Genuine; }));
    info.n_impostor = sub.labels.size() - info.n_genuine;
    manifest_text += "subset=" + sub.name + "," + info.comparisons.filename().string() + "," +
                     info.labels.filename().string() + "," + std::to_string(info.n_genuine) + "," +
                     std::to_string(info.n_impostor) + "\n";
    manifest.subsets.push_back(std::move(info));
  }
  write_comparison_file(subsets[0].tasks, out_dir / "comparisons.csv");
  write_label_file(subsets[0].labels, out_dir / "labels.csv");
  text::write_file((out_dir / "manifest.txt").string(), manifest_text);
  return manifest;
}

}  // namespace sigverify
