#include "lpl/batch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpl {

LogitBatch LogitBatch::single_label(std::vector<RealVec> logits, std::span<const std::size_t> labels) {
  if (logits.size() != labels.size()) {
    throw std::invalid_argument("LogitBatch: logits and labels differ in length");
  }
  LogitBatch b;
  b.kind = TaskKind::single_label;
  b.targets.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    RealVec t(logits[i].size(), 0.0);
    if (labels[i] >= t.size()) throw std::invalid_argument("LogitBatch: label out of range");
    t[labels[i]] = 1.0;
    b.targets.push_back(std::move(t));
  }
  b.logits = std::move(logits);
  b.validate();
  return b;
}

LogitBatch LogitBatch::multi_label(std::vector<RealVec> logits, std::vector<RealVec> targets) {
  LogitBatch b;
  b.kind = TaskKind::multi_label;
  b.logits = std::move(logits);
  b.targets = std::move(targets);
  b.validate();
  return b;
}

std::size_t LogitBatch::label(std::size_t i) const {
  if (kind != TaskKind::single_label) throw std::logic_error("LogitBatch::label on multi-label batch");
  return one_hot_index(targets[i]);
}

void LogitBatch::validate() const {
  if (targets.size() != logits.size()) throw std::invalid_argument("LogitBatch: row count mismatch");
  const std::size_t c = num_classes();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (logits[i].size() != c || targets[i].size() != c || c == 0) {
      throw std::invalid_argument("LogitBatch: ragged rows");
    }
    require_finite(logits[i], "LogitBatch");
    if (kind == TaskKind::single_label) {
      one_hot_index(targets[i]);
    } else {
      for (double y : targets[i]) {
        if (y != 0.0 && y != 1.0) throw std::invalid_argument("LogitBatch: multi-hot entries must be 0 or 1");
      }
    }
  }
}

ClassProfile ClassProfile::from_counts(std::vector<std::size_t> counts, TaskKind kind, std::size_t total) {
  ClassProfile p;
  p.kind = kind;
  const std::size_t sum = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  p.total = kind == TaskKind::single_label ? sum : total;
  p.counts = std::move(counts);
  p.priors.resize(p.counts.size());
  for (std::size_t c = 0; c < p.counts.size(); ++c) {
    p.priors[c] = p.total == 0 ? 0.0 : static_cast<double>(p.counts[c]) / static_cast<double>(p.total);
  }
  p.descending = std::is_sorted(p.priors.rbegin(), p.priors.rend());
  p.validate();
  return p;
}

ClassProfile ClassProfile::from_batch(const LogitBatch& batch) {
  std::vector<std::size_t> counts(batch.num_classes(), 0);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (batch.positive(i, c)) ++counts[c];
    }
  }
  return from_counts(std::move(counts), batch.kind, batch.size());
}

void ClassProfile::validate() const {
  if (counts.empty()) throw std::invalid_argument("ClassProfile: no classes");
  if (total == 0) throw std::invalid_argument("ClassProfile: total must be positive");
  if (priors.size() != counts.size()) throw std::invalid_argument("ClassProfile: priors/counts mismatch");
  for (std::size_t n : counts) {
    if (n > total) throw std::invalid_argument("ClassProfile: class count exceeds total");
  }
  if (kind == TaskKind::single_label) {
    const double s = std::accumulate(priors.begin(), priors.end(), 0.0);
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("ClassProfile: priors do not sum to one");
  }
  if (descending && !std::is_sorted(priors.rbegin(), priors.rend())) {
    throw std::invalid_argument("ClassProfile: descending flag set on unsorted priors");
  }
}

std::vector<int> tercile_buckets(const ClassProfile& profile) {
  const std::size_t n = profile.num_classes();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return profile.counts[a] > profile.counts[b]; });
  std::vector<int> bucket(n, 0);
  // Spread ranks evenly over {head, medium, tail}; two classes map to head and tail.
  for (std::size_t rank = 0; n > 1 && rank < n; ++rank) {
    bucket[order[rank]] = static_cast<int>(std::lround(2.0 * static_cast<double>(rank) / static_cast<double>(n - 1)));
  }
  return bucket;
}

const char* bucket_name(int bucket) {
  switch (bucket) {
    case 0: return "head";
    case 1: return "medium";
    default: return "tail";
  }
}

}  // namespace lpl
