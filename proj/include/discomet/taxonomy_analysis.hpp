// Copyright 2026 The discomet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Evidence about a label taxonomy: which labels human annotators confuse
// (frequency-weighted NPMI over co-selected label pairs) and which source
// domains are built from overlapping semantic frames.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "discomet/annotator_batch.hpp"
#include "discomet/corpus.hpp"
#include "discomet/diagnostics.hpp"
#include "discomet/error.hpp"
#include "discomet/taxonomy.hpp"

namespace discomet {

enum class PairingMode {
  kWithinAnnotator,   // pairs among one annotator's labels on a sample
  kAcrossAnnotators,  // a chosen by one annotator, b by a different one
};

inline const char *PairingModeName(PairingMode m) {
  return m == PairingMode::kWithinAnnotator ? "within" : "across";
}

// Unordered label pair stored in lexicographic order.
struct LabelPair {
  std::string a;
  std::string b;

  static LabelPair Of(const std::string &x, const std::string &y) {
    return x < y ? LabelPair{x, y} : LabelPair{y, x};
  }
  auto operator<=>(const LabelPair &) const = default;
};

using PairCounts = std::map<LabelPair, uint64_t>;

// Co-occurrence counts under `mode`. Sentinel labels never pair.
inline PairCounts CooccurrenceCounts(std::span<const AnnotatorBatch> batches, PairingMode mode) {
  PairCounts counts;
  for (const auto &batch : batches) {
    for (const auto &sample : batch.samples) {
      if (mode == PairingMode::kWithinAnnotator) {
        for (const auto &[annotator, chosen] : sample.selections) {
          std::set<std::string> labels;
          for (const auto &l : chosen) {
            if (!IsSentinelLabel(l)) labels.insert(l);
          }
          for (auto i = labels.begin(); i != labels.end(); ++i) {
            for (auto j = std::next(i); j != labels.end(); ++j) ++counts[{*i, *j}];
          }
        }
      } else {
        std::set<LabelPair> seen;
        for (const auto &[ann_x, chosen_x] : sample.selections) {
          for (const auto &[ann_y, chosen_y] : sample.selections) {
            if (ann_x == ann_y) continue;
            for (const auto &x : chosen_x) {
              if (IsSentinelLabel(x)) continue;
              for (const auto &y : chosen_y) {
                if (IsSentinelLabel(y) || x == y) continue;
                seen.insert(LabelPair::Of(x, y));
              }
            }
          }
        }
        for (const auto &p : seen) ++counts[p];
      }
    }
  }
  return counts;
}

// Selections per non-sentinel label, over all annotators and samples.
inline std::map<std::string, uint64_t> SelectionCounts(std::span<const AnnotatorBatch> batches) {
  std::map<std::string, uint64_t> counts;
  for (const auto &batch : batches) {
    for (const auto &sample : batch.samples) {
      for (const auto &[annotator, chosen] : sample.selections) {
        for (const auto &l : chosen) {
          if (!IsSentinelLabel(l)) ++counts[l];
        }
      }
    }
  }
  return counts;
}

struct NpmiValue {
  double value = 0.0;
  // p(a,b) == 1: the normalizer vanishes and the value is set to +1.
  bool degenerate = false;
};

// ln(p(a,b) / (p(a) p(b))) / -ln p(a,b).
inline NpmiValue Npmi(double p_ab, double p_a, double p_b) {
  auto valid = [](double p) { return p > 0.0 && p <= 1.0; };
  if (!valid(p_ab) || !valid(p_a) || !valid(p_b)) {
    throw DataError("npmi: probabilities must lie in (0, 1]");
  }
  if (p_ab == 1.0) return {1.0, true};
  return {std::log(p_ab / (p_a * p_b)) / -std::log(p_ab), false};
}

struct ConfusionRecord {
  std::string label_a;
  std::string label_b;
  uint64_t count = 0;
  double npmi = 0.0;
  double npmi_weighted = 0.0;
  PairingMode mode = PairingMode::kWithinAnnotator;
  bool degenerate = false;
};

struct ConfusionAnalysis {
  PairingMode mode = PairingMode::kWithinAnnotator;
  // Probability normalizers: every p(.) is a count over total_selections.
  uint64_t total_selections = 0;
  // Sum of pair counts under `mode`, reported for alternative normalizations.
  uint64_t total_pairs = 0;
  std::vector<ConfusionRecord> records;
};

// p(x) = selections of x / T and p(a,b) = c(a,b) / T with T the total number
// of non-sentinel selections. Since c(a,b) never exceeds the selections of
// a or b, p(a,b) <= min(p(a), p(b)) and NPMI stays within [-1, 1].
inline ConfusionAnalysis AnalyzeConfusions(std::span<const AnnotatorBatch> batches,
                                           PairingMode mode) {
  ConfusionAnalysis out;
  out.mode = mode;
  const PairCounts pairs = CooccurrenceCounts(batches, mode);
  const auto selections = SelectionCounts(batches);
  for (const auto &[label, n] : selections) out.total_selections += n;
  for (const auto &[pair, c] : pairs) out.total_pairs += c;
  const double total = static_cast<double>(out.total_selections);
  for (const auto &[pair, c] : pairs) {
    ConfusionRecord r;
    r.label_a = pair.a;
    r.label_b = pair.b;
    r.count = c;
    r.mode = mode;
    NpmiValue v = Npmi(static_cast<double>(c) / total,
                       static_cast<double>(selections.at(pair.a)) / total,
                       static_cast<double>(selections.at(pair.b)) / total);
    r.npmi = v.value;
    r.degenerate = v.degenerate;
    r.npmi_weighted = c == 1 ? 0.0 : r.npmi * std::log(static_cast<double>(c));
    out.records.push_back(std::move(r));
  }
  return out;
}

// Highest weighted NPMI first; ties by count descending, then pair order.
inline std::vector<ConfusionRecord> TopConfusions(std::vector<ConfusionRecord> records,
                                                  size_t k) {
  if (k == 0) throw UsageError("top_confusions: k must be at least 1");
  std::sort(records.begin(), records.end(),
            [](const ConfusionRecord &x, const ConfusionRecord &y) {
              if (x.npmi_weighted != y.npmi_weighted) return x.npmi_weighted > y.npmi_weighted;
              if (x.count != y.count) return x.count > y.count;
              return std::tie(x.label_a, x.label_b) < std::tie(y.label_a, y.label_b);
            });
  if (records.size() > k) records.resize(k);
  return records;
}

// ---------------------------------------------------------------------------
// Frame overlap between source domains.

enum class Subsumption { kNone, kAinB, kBinA };

inline const char *SubsumptionName(Subsumption s) {
  switch (s) {
    case Subsumption::kAinB: return "AinB";
    case Subsumption::kBinA: return "BinA";
    default: return "None";
  }
}

struct OverlapReport {
  std::string domain_a;
  std::string domain_b;
  std::set<std::string> frames_a;
  std::set<std::string> frames_b;
  // Fraction of frames_a also in frames_b, and the reverse.
  double overlap_ab = 0.0;
  double overlap_ba = 0.0;
  Subsumption subsumed = Subsumption::kNone;
  bool empty_a = false;
  bool empty_b = false;
};

inline OverlapReport CompareFrameSets(std::string domain_a, std::set<std::string> frames_a,
                                      std::string domain_b, std::set<std::string> frames_b) {
  OverlapReport r;
  r.domain_a = std::move(domain_a);
  r.domain_b = std::move(domain_b);
  r.frames_a = std::move(frames_a);
  r.frames_b = std::move(frames_b);
  r.empty_a = r.frames_a.empty();
  r.empty_b = r.frames_b.empty();
  size_t shared = 0;
  for (const auto &f : r.frames_a) shared += r.frames_b.count(f);
  if (!r.empty_a) r.overlap_ab = static_cast<double>(shared) / r.frames_a.size();
  if (!r.empty_b) r.overlap_ba = static_cast<double>(shared) / r.frames_b.size();
  if (!r.empty_a && shared == r.frames_a.size() && r.frames_a.size() < r.frames_b.size()) {
    r.subsumed = Subsumption::kAinB;
  } else if (!r.empty_b && shared == r.frames_b.size() &&
             r.frames_b.size() < r.frames_a.size()) {
    r.subsumed = Subsumption::kBinA;
  }
  return r;
}

// Frames observed at least `min_frame_count` times with each domain.
inline OverlapReport FrameOverlap(const AnnotatedCorpus &corpus, const std::string &domain_a,
                                  const std::string &domain_b, uint64_t min_frame_count = 1,
                                  const LabelTaxonomy *domains = nullptr) {
  if (domains != nullptr) {
    for (const auto *d : {&domain_a, &domain_b}) {
      if (!domains->Contains(*d)) throw UsageError("frame_overlap: unknown domain '" + *d + "'");
    }
  }
  auto frames_of = [&](const std::string &domain) {
    std::map<std::string, uint64_t> counts;
    for (const auto &a : corpus.annotations()) {
      if (a.domain == domain) ++counts[a.frame];
    }
    std::set<std::string> frames;
    for (const auto &[f, n] : counts) {
      if (n >= min_frame_count) frames.insert(f);
    }
    return frames;
  };
  return CompareFrameSets(domain_a, frames_of(domain_a), domain_b, frames_of(domain_b));
}

}  // namespace discomet
