#include "spanid/span.hpp"

#include <algorithm>
#include <cmath>

namespace spanid {

double iou(const Span& a, const Span& b) {
  int inter = std::min(a.end, b.end) - std::max(a.start, b.start) + 1;
  if (inter <= 0) return 0.0;
  int uni = a.length() + b.length() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Offsets offset_targets(const Span& seed, const Span& gold) {
  return {static_cast<double>(gold.start - seed.start),
          static_cast<double>(gold.end - seed.end)};
}

int round_offset(double t) {
  return static_cast<int>(std::floor(t + 0.5));
}

AdjustResult adjust(const Span& span, const Offsets& t, int sentence_len) {
  int ns = std::max(0, span.start + round_offset(t.left));
  int ne = std::min(sentence_len - 1, span.end + round_offset(t.right));
  if (ns <= ne) return {{ns, ne}, false};
  int mid = std::clamp((ns + ne) / 2, 0, sentence_len - 1);
  return {{mid, mid}, true};
}

double overlap_ratio_continuous(double pred_start, double pred_end, const Span& gold) {
  double gs = gold.start;
  double ge1 = gold.end + 1.0;
  double pe1 = pred_end + 1.0;
  double num = std::min(pe1, ge1) - std::max(pred_start, gs);
  double den = std::max(pe1, ge1) - std::min(pred_start, gs);
  return num / den;
}

}  // namespace spanid
