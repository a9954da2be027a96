#include "spanid/targets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spanid/errors.hpp"

namespace spanid {

WindowSet WindowSet::parse(const std::string& spec) {
  WindowSet ws;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        ws.lengths.push_back(std::stoi(item));
      } else {
        int lo = std::stoi(item.substr(0, dash));
        int hi = std::stoi(item.substr(dash + 1));
        for (int v = lo; v <= hi; ++v) ws.lengths.push_back(v);
      }
    } catch (const std::exception&) {
      throw ConfigError("bad window spec element \"" + item + "\"");
    }
  }
  ws.validate();
  return ws;
}

void WindowSet::validate() const {
  if (lengths.empty()) throw ConfigError("window set must be nonempty");
  int prev = 0;
  for (int len : lengths) {
    if (len < 1) throw ConfigError("window lengths must be >= 1");
    if (len <= prev) throw ConfigError("window lengths must be strictly increasing");
    prev = len;
  }
}

std::vector<Span> enumerate_seeds(int sentence_len, const WindowSet& windows) {
  std::vector<Span> seeds;
  for (int len : windows.lengths) {
    for (int s = 0; s + len - 1 <= sentence_len - 1; ++s) seeds.push_back({s, s + len - 1});
  }
  return seeds;
}

std::pair<int, double> pair_with_gold(const Span& span, const std::vector<Entity>& entities) {
  int best = -1;
  double best_iou = 0.0;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    double v = iou(span, entities[i].span);
    if (best < 0) {
      best = static_cast<int>(i);
      best_iou = v;
      continue;
    }
    const Span& b = entities[static_cast<std::size_t>(best)].span;
    const Span& c = entities[i].span;
    bool better = v > best_iou ||
                  (v == best_iou && (c.length() < b.length() ||
                                     (c.length() == b.length() && c.start < b.start)));
    if (better) {
      best = static_cast<int>(i);
      best_iou = v;
    }
  }
  return {best, best < 0 ? 0.0 : best_iou};
}

double soft_weight(double iou_value, double alpha, double eta) {
  return iou_value >= alpha ? std::pow(iou_value, eta) : std::pow(1.0 - iou_value, eta);
}

SpanTarget assign_stage1(const Span& span, const std::vector<Entity>& entities,
                         double alpha1, double eta) {
  SpanTarget t;
  t.span = span;
  auto [idx, v] = pair_with_gold(span, entities);
  t.gold_index = idx;
  t.iou = v;
  t.weight = soft_weight(v, alpha1, eta);
  if (idx >= 0 && v >= alpha1) {
    t.positive = true;
    t.label = entities[static_cast<std::size_t>(idx)].label;
    t.offsets = offset_targets(span, entities[static_cast<std::size_t>(idx)].span);
  }
  return t;
}

std::pair<int, double> assign_stage2(const Span& adjusted, const Entity* gold,
                                     double alpha2, double eta) {
  if (gold == nullptr) return {0, 1.0};
  double v = iou(adjusted, gold->span);
  double w = soft_weight(v, alpha2, eta);
  return {v >= alpha2 ? gold->label : 0, w};
}

std::vector<SpanTarget> downsample_negatives(const std::vector<SpanTarget>& targets,
                                             int ratio, Rng& rng) {
  std::size_t positives = 0;
  std::vector<std::size_t> neg_indices;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i].positive)
      ++positives;
    else
      neg_indices.push_back(i);
  }
  std::size_t keep = positives > 0 ? static_cast<std::size_t>(ratio) * positives
                                   : static_cast<std::size_t>(ratio);
  keep = std::min(keep, neg_indices.size());

  // Partial Fisher-Yates: pick `keep` negatives without replacement.
  for (std::size_t i = 0; i < keep; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next() % (neg_indices.size() - i));
    std::swap(neg_indices[i], neg_indices[j]);
  }
  neg_indices.resize(keep);
  std::sort(neg_indices.begin(), neg_indices.end());

  std::vector<SpanTarget> out;
  out.reserve(positives + keep);
  std::size_t next_neg = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    bool take = targets[i].positive;
    if (!take && next_neg < neg_indices.size() && neg_indices[next_neg] == i) {
      take = true;
      ++next_neg;
    }
    if (take) out.push_back(targets[i]);
  }
  return out;
}

}  // namespace spanid
