#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "sigverify/error.hpp"
#include "sigverify/evaluation.hpp"
#include "sigverify/pipeline.hpp"

namespace sigverify {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative() && !base_dir.empty()) return base_dir / p;
  return p;
}

Error comparison_error(const ComparisonTask& task, const std::exception& cause) {
  return Error("comparison '" + task.comparison_id + "': " + cause.what());
}

}  // namespace

void validate_protocol_inputs(std::span<const ComparisonTask> comparisons, const std::filesystem::path& base_dir) {
  for (const auto& task : comparisons) {
    try {
      parse_signature_file(resolve(base_dir, task.reference_path));
      parse_signature_file(resolve(base_dir, task.questioned_path));
    } catch (const std::exception& e) {
      throw comparison_error(task, e);
    }
  }
}

std::vector<ScoreRecord> run_protocol(std::span<const ComparisonTask> comparisons, const Pipeline& pipeline,
                                      const std::filesystem::path& base_dir, unsigned threads) {
  const std::size_t n = comparisons.size();
  std::vector<ScoreRecord> out(n);
  if (n == 0) return out;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::optional<std::size_t> first_failure;
  std::string failure_message;

  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      const auto& task = comparisons[i];
      try {
        const auto reference = parse_signature_file(resolve(base_dir, task.reference_path));
        const auto questioned = parse_signature_file(resolve(base_dir, task.questioned_path));
        out[i] = {task.comparison_id, pipeline.score(reference, questioned)};
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!first_failure || i < *first_failure) {
          first_failure = i;
          failure_message = comparison_error(task, e).what();
        }
        failed = true;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_failure) throw Error(failure_message);
  return out;
}

}  // namespace sigverify
