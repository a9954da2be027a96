#ifndef SPANID_SYNTH_HPP_
#define SPANID_SYNTH_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "spanid/corpus.hpp"

namespace spanid {

/// Configuration for the deterministic synthetic nested-entity generator.
/// An entity of category c is written as a category-c trigger token, filler
/// tokens drawn from the context vocabulary, and a category-c closer token;
/// single-token entities use dedicated category-c unit tokens. Inner entities
/// are embedded strictly inside outer ones with probability nest_prob.
struct SynthConfig {
  int sentences = 200;
  int len_min = 8;
  int len_max = 16;
  int categories = 3;
  double nest_prob = 0.4;
  int max_depth = 2;
  int entities_min = 1;
  int entities_max = 2;
  std::map<int, double> length_weights = {{1, 2.0}, {2, 3.0}, {3, 3.0}, {4, 2.0},
                                          {5, 1.5}, {6, 1.0}, {7, 0.7}};
  int context_words = 50;
  int trigger_words = 4;  // trigger/closer/unit word count per category

  /// Throws ConfigError when no sentence can satisfy the settings.
  void validate() const;
};

/// Generates a corpus as a pure function of (config, seed).
RawCorpus generate_synthetic(const SynthConfig& config, std::uint64_t seed);

/// Category label names used by the generator ("TYPE1".."TYPEC").
std::string synth_label(int category);

}  // namespace spanid

#endif  // SPANID_SYNTH_HPP_
