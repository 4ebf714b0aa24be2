#include "sigverify/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "sigverify/error.hpp"
#include "sigverify/preprocess.hpp"
#include "sigverify/text.hpp"

namespace sigverify {

std::string_view to_string(VerifierKind v) {
  switch (v) {
    case VerifierKind::BaselineDtw: return "baseline_dtw";
    case VerifierKind::SigOnline: return "sig_online";
    case VerifierKind::SigstatLocal: return "sigstat_local";
    case VerifierKind::SigstatGlobal: return "sigstat_global";
    case VerifierKind::FeatureDifference: return "feature_difference";
    case VerifierKind::Fusion: return "fusion";
  }
  return "baseline_dtw";
}

std::string_view to_string(Preprocessing p) {
  switch (p) {
    case Preprocessing::None: return "none";
    case Preprocessing::Mad: return "mad";
    case Preprocessing::Sigstat: return "sigstat";
  }
  return "none";
}

std::optional<VerifierKind> verifier_kind_from_string(std::string_view s) {
  for (auto k : {VerifierKind::BaselineDtw, VerifierKind::SigOnline, VerifierKind::SigstatLocal,
                 VerifierKind::SigstatGlobal, VerifierKind::FeatureDifference, VerifierKind::Fusion}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

namespace {

std::vector<double> parse_list(std::string_view value, const std::string& source, std::size_t line) {
  std::vector<double> out;
  for (auto tok : text::split(value, ',')) {
    auto v = text::parse_double(text::trim(tok));
    if (!v) throw ParseError(source, line, "non-numeric list element '" + std::string(text::trim(tok)) + "'");
    out.push_back(*v);
  }
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += text::format_double(values[i]);
  }
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::parse(std::string_view content, const std::string& source) {
  PipelineConfig cfg;
  std::vector<double> fusion_mu, fusion_sigma;
  const auto rows = text::lines(content);

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    const auto row = text::trim(rows[i]);
    if (row.empty() || row.front() == '#') continue;
    const auto eq = row.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line, "expected 'key = value'");
    const auto key = text::trim(row.substr(0, eq));
    const auto value = text::trim(row.substr(eq + 1));
    auto number = [&]() {
      auto v = text::parse_double(value);
      if (!v) throw ParseError(source, line, "value of '" + std::string(key) + "' is not a number");
      return *v;
    };

    if (key == "verifier") {
      auto v = verifier_kind_from_string(value);
      if (!v) throw ParseError(source, line, "unknown verifier '" + std::string(value) + "'");
      cfg.verifier = *v;
    } else if (key == "preprocess") {
      if (value == "none") cfg.preprocess = Preprocessing::None;
      else if (value == "mad") cfg.preprocess = Preprocessing::Mad;
      else if (value == "sigstat") cfg.preprocess = Preprocessing::Sigstat;
      else throw ParseError(source, line, "preprocess must be none, mad or sigstat");
    } else if (key == "aggregation") {
      if (value == "mean") cfg.aggregation = Aggregation::Mean;
      else if (value == "max") cfg.aggregation = Aggregation::Max;
      else throw ParseError(source, line, "aggregation must be mean or max");
    } else if (key == "local_distance") {
      if (value == "euclidean") cfg.online_distance = LocalDistance::Euclidean;
      else if (value == "cityblock") cfg.online_distance = LocalDistance::Cityblock;
      else throw ParseError(source, line, "local_distance must be euclidean or cityblock");
    } else if (key == "tanh.mu") {
      cfg.online_tanh.mu = number();
    } else if (key == "tanh.sigma") {
      cfg.online_tanh.sigma = number();
    } else if (key == "local.g_th") {
      cfg.local.genuine_threshold = number();
    } else if (key == "local.f_th") {
      cfg.local.forgery_threshold = number();
    } else if (key == "local.s") {
      cfg.local.scaling = number();
    } else if (key.starts_with("global.")) {
      const auto parts = text::split(key, '.');
      std::optional<InputKind> input;
      if (parts.size() == 3) input = input_kind_from_string(parts[1]);
      if (!input || (parts[2] != "d_g_min" && parts[2] != "d_f_med")) {
        throw ParseError(source, line, "expected global.<stylus|finger>.<d_g_min|d_f_med>");
      }
      auto& g = cfg.global.groups[*input];
      (parts[2] == "d_g_min" ? g.genuine_min : g.forgery_median) = number();
    } else if (key == "features") {
      if (value == "minimum") cfg.feature_set = GlobalFeatureSet::Minimum;
      else if (value == "extended") cfg.feature_set = GlobalFeatureSet::Extended;
      else throw ParseError(source, line, "features must be minimum or extended");
    } else if (key == "logistic.weights") {
      cfg.logistic_weights = parse_list(value, source, line);
    } else if (key == "logistic.scales") {
      cfg.logistic_scales = parse_list(value, source, line);
    } else if (key == "logistic.bias") {
      cfg.logistic_bias = number();
    } else if (key == "fusion.streams") {
      cfg.fusion_streams.clear();
      for (auto tok : text::split(value, ',')) {
        auto v = verifier_kind_from_string(text::trim(tok));
        if (!v || *v == VerifierKind::Fusion) {
          throw ParseError(source, line, "invalid fusion stream '" + std::string(text::trim(tok)) + "'");
        }
        cfg.fusion_streams.push_back(*v);
      }
    } else if (key == "fusion.weights") {
      cfg.fusion.weights = parse_list(value, source, line);
    } else if (key == "fusion.mu") {
      fusion_mu = parse_list(value, source, line);
    } else if (key == "fusion.sigma") {
      fusion_sigma = parse_list(value, source, line);
    } else if (key == "threads") {
      auto v = text::parse_int(value);
      if (!v || *v < 0 || *v > 4096) throw ParseError(source, line, "threads must be a non-negative integer");
      cfg.threads = static_cast<unsigned>(*v);
    } else {
      throw ParseError(source, line, "unknown key '" + std::string(key) + "'");
    }
  }

  if (cfg.verifier == VerifierKind::Fusion) {
    const std::size_t k = cfg.fusion_streams.size();
    if (fusion_mu.empty()) fusion_mu.assign(k, 0.0);
    if (fusion_sigma.empty()) fusion_sigma.assign(k, 1.0);
    if (cfg.fusion.weights.empty() && k > 0) cfg.fusion.weights.assign(k, 1.0 / static_cast<double>(k));
    if (fusion_mu.size() != k || fusion_sigma.size() != k) {
      throw ParseError(source, 0, "fusion.mu and fusion.sigma need one value per stream");
    }
    cfg.fusion.normalization.resize(k);
    for (std::size_t s = 0; s < k; ++s) cfg.fusion.normalization[s] = {fusion_mu[s], fusion_sigma[s]};
  }

  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(source, 0, e.what());
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  return parse(text::read_file(path.string()), path.string());
}

std::string PipelineConfig::format() const {
  std::string out = "verifier = " + std::string(to_string(verifier)) + "\n";
  if (preprocess) out += "preprocess = " + std::string(to_string(*preprocess)) + "\n";
  out += std::string("aggregation = ") + (aggregation == Aggregation::Mean ? "mean" : "max") + "\n";
  if (threads) out += "threads = " + std::to_string(threads) + "\n";
  auto uses = [this](VerifierKind k) {
    return verifier == k || (verifier == VerifierKind::Fusion &&
                             std::find(fusion_streams.begin(), fusion_streams.end(), k) != fusion_streams.end());
  };
  if (uses(VerifierKind::SigOnline)) {
    out += std::string("local_distance = ") +
           (online_distance == LocalDistance::Cityblock ? "cityblock" : "euclidean") + "\n";
    out += "tanh.mu = " + text::format_double(online_tanh.mu) + "\n";
    out += "tanh.sigma = " + text::format_double(online_tanh.sigma) + "\n";
  }
  if (uses(VerifierKind::SigstatLocal)) {
    out += "local.g_th = " + text::format_double(local.genuine_threshold) + "\n";
    out += "local.f_th = " + text::format_double(local.forgery_threshold) + "\n";
    out += "local.s = " + text::format_double(local.scaling) + "\n";
  }
  if (uses(VerifierKind::SigstatGlobal)) {
    for (const auto& [input, g] : global.groups) {
      const std::string prefix = "global." + std::string(to_string(input));
      out += prefix + ".d_g_min = " + text::format_double(g.genuine_min) + "\n";
      out += prefix + ".d_f_med = " + text::format_double(g.forgery_median) + "\n";
    }
  }
  if (uses(VerifierKind::FeatureDifference)) {
    out += std::string("features = ") + (feature_set == GlobalFeatureSet::Minimum ? "minimum" : "extended") + "\n";
    out += "logistic.weights = " + format_list(logistic_weights) + "\n";
    out += "logistic.scales = " + format_list(logistic_scales) + "\n";
    out += "logistic.bias = " + text::format_double(logistic_bias) + "\n";
  }
  if (verifier == VerifierKind::Fusion) {
    std::string names;
    std::vector<double> mu, sigma;
    for (std::size_t i = 0; i < fusion_streams.size(); ++i) {
      if (i) names += ',';
      names += to_string(fusion_streams[i]);
      mu.push_back(fusion.normalization[i].mu);
      sigma.push_back(fusion.normalization[i].sigma);
    }
    out += "fusion.streams = " + names + "\n";
    out += "fusion.mu = " + format_list(mu) + "\n";
    out += "fusion.sigma = " + format_list(sigma) + "\n";
    out += "fusion.weights = " + format_list(fusion.weights) + "\n";
  }
  return out;
}

Preprocessing PipelineConfig::effective_preprocessing(VerifierKind kind) const {
  if (preprocess) return *preprocess;
  switch (kind) {
    case VerifierKind::SigstatLocal:
    case VerifierKind::SigstatGlobal:
      return Preprocessing::Sigstat;
    default:
      return Preprocessing::Mad;
  }
}

void PipelineConfig::validate() const {
  auto check = [this](VerifierKind k) {
    switch (k) {
      case VerifierKind::SigOnline:
        if (!(online_tanh.sigma > 0.0)) throw InvalidArgument("tanh.sigma must be positive");
        break;
      case VerifierKind::SigstatLocal:
        local.validate();
        break;
      case VerifierKind::SigstatGlobal:
        if (global.groups.empty()) throw InvalidArgument("sigstat_global needs global.<input>.d_g_min/d_f_med");
        for (const auto& [input, g] : global.groups) {
          if (!(g.forgery_median > g.genuine_min)) {
            throw InvalidArgument("global." + std::string(to_string(input)) + ": d_f_med must exceed d_g_min");
          }
        }
        break;
      case VerifierKind::FeatureDifference: {
        const std::size_t dim = feature_set == GlobalFeatureSet::Minimum ? kMinimumGlobalFeatureNames.size()
                                                                          : kExtendedGlobalFeatureNames.size();
        if (logistic_weights.size() != dim || logistic_scales.size() != dim) {
          throw InvalidArgument("feature_difference needs logistic.weights and logistic.scales with " +
                                std::to_string(dim) + " values");
        }
        for (double s : logistic_scales) {
          if (!(s > 0.0)) throw InvalidArgument("logistic.scales must be positive");
        }
        break;
      }
      default:
        break;
    }
  };
  if (verifier == VerifierKind::Fusion) {
    if (fusion_streams.size() < 2) throw InvalidArgument("fusion needs at least 2 streams");
    fusion.validate();
    if (fusion.weights.size() != fusion_streams.size()) throw InvalidArgument("fusion needs one weight per stream");
    for (auto k : fusion_streams) check(k);
  } else {
    check(verifier);
  }
}

Signature apply_preprocessing(const Signature& sig, Preprocessing p) {
  switch (p) {
    case Preprocessing::None:
      return sig;
    case Preprocessing::Mad:
      return normalize_mad(sig);
    case Preprocessing::Sigstat:
      return normalize_sigstat(sig.meta().input == InputKind::Stylus ? remove_zero_pressure(sig) : sig);
  }
  return sig;
}

double time_function_dtw_distance(const Signature& reference, const Signature& questioned, LocalDistance local) {
  std::vector<TimeFunction> selection = {TimeFunction::X,  TimeFunction::Y,   TimeFunction::Dx, TimeFunction::Dy,
                                         TimeFunction::Ddx, TimeFunction::Ddy, TimeFunction::V,  TimeFunction::Dv,
                                         TimeFunction::A,  TimeFunction::Theta};
  if (reference.meta().input == InputKind::Stylus && questioned.meta().input == InputKind::Stylus) {
    selection.push_back(TimeFunction::P);
    selection.push_back(TimeFunction::Dp);
  }
  auto a = time_functions(reference).to_matrix(selection);
  auto b = time_functions(questioned).to_matrix(selection);
  znormalize_pair(a, b);
  return dtw(a, b, local).normalized_score;
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  config_.validate();
  const bool needs_logistic =
      config_.verifier == VerifierKind::FeatureDifference ||
      (config_.verifier == VerifierKind::Fusion &&
       std::find(config_.fusion_streams.begin(), config_.fusion_streams.end(), VerifierKind::FeatureDifference) !=
           config_.fusion_streams.end());
  if (needs_logistic) logistic_.emplace(config_.logistic_weights, config_.logistic_scales, config_.logistic_bias);
}

double Pipeline::raw_score(VerifierKind kind, const Signature& reference, const Signature& questioned) const {
  const auto p = config_.effective_preprocessing(kind);
  const Signature ref = apply_preprocessing(reference, p);
  const Signature q = apply_preprocessing(questioned, p);
  switch (kind) {
    case VerifierKind::BaselineDtw:
      return baseline_dtw_score(ref, q);
    case VerifierKind::SigOnline:
      return -time_function_dtw_distance(ref, q, config_.online_distance);
    case VerifierKind::SigstatLocal:
      return sigstat_local_score(sigstat_distance(ref, q), config_.local);
    case VerifierKind::SigstatGlobal:
      return sigstat_global_emit(sigstat_distance(ref, q), config_.global, q.meta().input);
    case VerifierKind::FeatureDifference: {
      const auto diff = feature_difference(global_features(ref, config_.feature_set),
                                           global_features(q, config_.feature_set));
      return logistic_->score(diff.values);
    }
    case VerifierKind::Fusion:
      throw InvalidArgument("fusion has no single raw stream");
  }
  return 0.0;
}

double Pipeline::emit(VerifierKind kind, const Signature& reference, const Signature& questioned) const {
  switch (kind) {
    case VerifierKind::SigOnline:
      return tanh_normalize(raw_score(kind, reference, questioned), config_.online_tanh.mu,
                            config_.online_tanh.sigma);
    case VerifierKind::SigstatLocal:
      return clamp_unit(raw_score(kind, reference, questioned));
    case VerifierKind::Fusion: {
      std::vector<double> raw;
      raw.reserve(config_.fusion_streams.size());
      for (auto stream : config_.fusion_streams) raw.push_back(raw_score(stream, reference, questioned));
      return fuse_raw(raw, config_.fusion);
    }
    default:
      return clamp_unit(raw_score(kind, reference, questioned));
  }
}

double Pipeline::score(const Signature& reference, const Signature& questioned) const {
  return emit(config_.verifier, reference, questioned);
}

double Pipeline::score(std::span<const Signature> references, const Signature& questioned) const {
  std::vector<double> per_reference;
  per_reference.reserve(references.size());
  for (const auto& r : references) per_reference.push_back(score(r, questioned));
  return aggregate_reference_scores(per_reference, config_.aggregation);
}

}  // namespace sigverify
