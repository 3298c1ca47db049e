#pragma once

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tenscert/generic.hpp"
#include "tenscert/shape.hpp"

namespace tenscert {

// All shapes with n_1 >= ... >= n_d >= 2, 3 <= d <= max_order and product of
// mode sizes at most max_pi, enumerated by order and then lexicographically.
inline std::vector<Shape> enumerate_shapes(long long max_pi, int max_order = 16) {
  if (max_pi < 8) throw TooLarge("max_pi below the smallest shape (2,2,2)");
  std::vector<Shape> shapes;
  std::vector<int> dims;
  auto recurse = [&](auto&& self, int remaining, int upper, long long budget) -> void {
    if (remaining == 0) {
      std::vector<int> sorted(dims.rbegin(), dims.rend());
      shapes.push_back(Shape(std::move(sorted)));
      return;
    }
    // ascending tuples (n_d <= ... <= n_1) so the overall order is lexicographic
    for (int n = dims.empty() ? 2 : dims.back(); n <= upper; ++n) {
      long long need = 1;  // remaining modes are at least n each
      for (int i = 0; i < remaining; ++i) {
        need *= n;
        if (need > budget) break;
      }
      if (need > budget) break;
      dims.push_back(n);
      self(self, remaining - 1, upper, budget / n);
      dims.pop_back();
    }
  };
  for (int d = 3; d <= max_order; ++d) {
    if ((1LL << d) > max_pi) break;
    recurse(recurse, d, static_cast<int>(max_pi), max_pi);
  }
  return shapes;
}

struct SweepRecord {
  std::vector<int> dims;
  long long r;
  GenericOutcome verdict;
  std::optional<ExceptionKind> exception;
  std::uint32_t prime;
  std::uint64_t seed;
  int attempts;
  long long elapsed_ms;
};

inline nlohmann::json to_json(const SweepRecord& rec) {
  nlohmann::json j;
  j["shape"] = rec.dims;
  j["r"] = rec.r;
  j["verdict"] = to_string(rec.verdict);
  j["exception"] = rec.exception ? nlohmann::json(to_string(*rec.exception)) : nlohmann::json(nullptr);
  j["prime"] = rec.prime;
  j["seed"] = rec.seed;
  j["attempts"] = rec.attempts;
  j["elapsed_ms"] = rec.elapsed_ms;
  return j;
}

inline SweepRecord sweep_record_from_json(const nlohmann::json& j) {
  SweepRecord rec;
  for (const auto& n : j.at("shape")) rec.dims.push_back(n.get<int>());
  rec.r = j.at("r").get<long long>();
  const std::string v = j.at("verdict").get<std::string>();
  if (v == "proved") rec.verdict = GenericOutcome::Proved;
  else if (v == "proved_s7a") rec.verdict = GenericOutcome::ProvedWeaklyDefectivePath;
  else if (v == "inconclusive") rec.verdict = GenericOutcome::Inconclusive;
  else if (v == "defective_suspected") rec.verdict = GenericOutcome::DefectiveSuspected;
  else if (v == "known_exception") rec.verdict = GenericOutcome::KnownException;
  else throw ParseError("unknown verdict '" + v + "'");
  if (!j.at("exception").is_null()) {
    const std::string e = j.at("exception").get<std::string>();
    if (e == "defective") rec.exception = ExceptionKind::Defective;
    else if (e == "sporadic") rec.exception = ExceptionKind::Sporadic;
    else if (e == "unbalanced") rec.exception = ExceptionKind::Unbalanced;
    else throw ParseError("unknown exception kind '" + e + "'");
  }
  rec.prime = j.at("prime").get<std::uint32_t>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.attempts = j.at("attempts").get<int>();
  rec.elapsed_ms = j.at("elapsed_ms").get<long long>();
  return rec;
}

struct SweepConfig {
  long long max_pi = 100;
  int max_order = 16;
  int jobs = 1;
  std::string out_path;  // empty = keep records in memory only
  bool resume = false;
  GenericConfig generic;
};

struct SweepSummary {
  std::map<std::string, int> verdict_counts;
  int total = 0;
  int resumed = 0;
  std::vector<SweepRecord> records;
};

inline std::uint64_t shape_seed(std::uint64_t global_seed, const Shape& shape) {
  std::uint64_t h = splitmix64(global_seed);
  for (int n : shape.dims()) h = mix_seed(h, static_cast<std::uint64_t>(n));
  return h;
}

// Runs check_generic at rbar for every enumerated shape. Records are appended
// to the output as JSONL, one object per shape; with resume, shapes already
// present in the file are not recomputed. Per-shape seeds derive from the
// global seed and the shape alone, so parallel and serial runs agree.
inline SweepSummary run_sweep(const SweepConfig& config) {
  const auto shapes = enumerate_shapes(config.max_pi, config.max_order);

  SweepSummary summary;
  std::set<std::vector<int>> done;
  if (config.resume && !config.out_path.empty()) {
    std::ifstream in(config.out_path);
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded()) throw ParseError("corrupt sweep record: " + line);
      auto rec = sweep_record_from_json(j);
      done.insert(rec.dims);
      summary.records.push_back(std::move(rec));
      ++summary.resumed;
    }
  }

  std::vector<const Shape*> todo;
  for (const auto& s : shapes)
    if (!done.count(s.dims())) todo.push_back(&s);

  std::ofstream out;
  if (!config.out_path.empty()) {
    out.open(config.out_path, std::ios::app);
    if (!out) throw IoError("cannot open " + config.out_path + " for append");
  }

  std::mutex write_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const Shape& shape = *todo[i];
      const auto q = derive(shape);
      GenericConfig gc = config.generic;
      gc.seed = shape_seed(config.generic.seed, shape);
      const Verdict v = check_generic(shape, q.rbar, gc);
      SweepRecord rec{shape.dims(),
                      q.rbar,
                      v.outcome,
                      v.exception ? std::optional<ExceptionKind>(v.exception->kind) : std::nullopt,
                      v.prime != 0 ? v.prime : config.generic.prime,
                      gc.seed,
                      v.attempts,
                      v.elapsed_ms};
      std::lock_guard<std::mutex> lock(write_mutex);
      if (out.is_open()) {
        out << to_json(rec).dump() << "\n";
        out.flush();
      }
      summary.records.push_back(std::move(rec));
    }
  };

  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const auto& rec : summary.records) {
    ++summary.verdict_counts[to_string(rec.verdict)];
    ++summary.total;
  }
  return summary;
}

}  // namespace tenscert
