#ifndef SPANID_TARGETS_HPP_
#define SPANID_TARGETS_HPP_

#include <string>
#include <utility>
#include <vector>

#include "spanid/corpus.hpp"
#include "spanid/rng.hpp"
#include "spanid/span.hpp"

namespace spanid {

/// Strictly increasing set of seed-span lengths.
struct WindowSet {
  std::vector<int> lengths;

  int max_length() const { return lengths.back(); }

  /// Parses "1-7,9,11,13,15" style window specs. Throws ConfigError on empty,
  /// non-increasing, or non-positive entries.
  static WindowSet parse(const std::string& spec);
  void validate() const;
};

/// Training assignment for one seed span.
struct SpanTarget {
  Span span;
  int gold_index = -1;   // into Sentence::entities, -1 when unpaired
  double iou = 0.0;      // with the paired gold
  bool positive = false; // stage-1 polarity (iou >= alpha1)
  Offsets offsets;       // regression targets, meaningful only when positive
  int label = 0;         // stage-1 class label (gold label or None)
  double weight = 1.0;   // stage-1 soft-example weight
};

/// All seed spans for a sentence: every window length at every feasible
/// start, ordered by (length, start).
std::vector<Span> enumerate_seeds(int sentence_len, const WindowSet& windows);

/// Pairs a span with the gold entity of largest IoU. Ties broken by smaller
/// entity length, then smaller start. Returns (index, iou), (-1, 0) when the
/// sentence has no entities.
std::pair<int, double> pair_with_gold(const Span& span, const std::vector<Entity>& entities);

/// Loss weight for a partially matched example: iou^eta above the threshold,
/// (1 - iou)^eta below. eta = 0 degenerates to hard examples (weight 1).
double soft_weight(double iou, double alpha, double eta);

/// Stage-1 assignment: polarity, class label, offsets, and soft weight.
SpanTarget assign_stage1(const Span& span, const std::vector<Entity>& entities,
                         double alpha1, double eta);

/// Stage-2 reassignment for a boundary-adjusted span: (class label, weight).
/// gold may be null (unpaired span).
std::pair<int, double> assign_stage2(const Span& adjusted, const Entity* gold,
                                     double alpha2, double eta);

/// Keeps all positives and at most ratio * #positives uniformly sampled
/// negatives (min(ratio, #negatives) when the sentence has no positives).
/// Output preserves enumeration order; target fields are never modified.
std::vector<SpanTarget> downsample_negatives(const std::vector<SpanTarget>& targets,
                                             int ratio, Rng& rng);

}  // namespace spanid

#endif  // SPANID_TARGETS_HPP_
