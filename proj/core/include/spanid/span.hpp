#ifndef SPANID_SPAN_HPP_
#define SPANID_SPAN_HPP_

#include <compare>
#include <cstdint>

namespace spanid {

/// Token span with inclusive start/end indices. A single token is (i, i).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool valid() const { return start >= 0 && start <= end; }

  auto operator<=>(const Span&) const = default;
};

/// Real-valued left/right boundary shifts measured in tokens.
struct Offsets {
  double left = 0.0;
  double right = 0.0;
};

/// Intersection-over-union of two spans' token sets, inclusive counting.
/// Symmetric, 1 iff equal, 0 iff disjoint.
double iou(const Span& a, const Span& b);

/// Offsets that move `seed` exactly onto `gold`.
Offsets offset_targets(const Span& seed, const Span& gold);

/// Rounds a predicted offset to an integer shift: floor(t + 1/2).
int round_offset(double t);

struct AdjustResult {
  Span span;
  bool repaired = false;  // inverted after clamping, collapsed to one token
};

/// Applies rounded offsets to a span and clamps to [0, sentence_len - 1].
/// An inverted result is repaired to a single-token span at the clamped
/// midpoint and flagged.
AdjustResult adjust(const Span& span, const Offsets& t, int sentence_len);

/// Overlap ratio between a continuous predicted interval and a gold span,
/// evaluated in half-open coordinates [start, end + 1). Equals 1 iff the
/// prediction coincides with gold; negative when disjoint.
double overlap_ratio_continuous(double pred_start, double pred_end, const Span& gold);

}  // namespace spanid

#endif  // SPANID_SPAN_HPP_
