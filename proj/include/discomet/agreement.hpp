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

// Inter-annotator agreement for multi-label batches and majority labeling.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "discomet/annotator_batch.hpp"
#include "discomet/diagnostics.hpp"
#include "discomet/error.hpp"

namespace discomet {

struct PairAgreement {
  std::string annotator_a;
  std::string annotator_b;
  double value = 0.0;
  // Samples both annotators labeled.
  size_t samples = 0;
};

// Two annotators agree on a sample when their label sets intersect.
inline bool SetsOverlap(const std::vector<std::string> &x, const std::vector<std::string> &y) {
  for (const auto &l : x) {
    for (const auto &m : y) {
      if (l == m) return true;
    }
  }
  return false;
}

// Per-pair overlap agreement. A sample missing one annotator of a pair is
// excluded from that pair only.
inline std::vector<PairAgreement> PairwiseAgreements(const AnnotatorBatch &batch,
                                                     Diagnostics *diagnostics = nullptr) {
  if (batch.annotators.size() < 2) {
    throw DataError("batch '" + batch.id + "': agreement needs at least two annotators");
  }
  for (const auto &s : batch.samples) {
    for (const auto &a : batch.annotators) {
      if (!s.selections.count(a)) {
        Warn(diagnostics, "pairwise_overlap_agreement", s.id,
             "batch '" + batch.id + "': annotator '" + a + "' missing; sample excluded from their pairs");
      }
    }
  }
  std::vector<PairAgreement> pairs;
  const auto &ids = batch.annotators;
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t j = i + 1; j < ids.size(); ++j) {
      PairAgreement p{ids[i], ids[j], 0.0, 0};
      size_t agree = 0;
      for (const auto &s : batch.samples) {
        auto x = s.selections.find(ids[i]);
        auto y = s.selections.find(ids[j]);
        if (x == s.selections.end() || y == s.selections.end()) continue;
        ++p.samples;
        agree += SetsOverlap(x->second, y->second);
      }
      if (p.samples > 0) p.value = static_cast<double>(agree) / p.samples;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

// Mean over annotator pairs that share at least one sample.
inline double MeanPairAgreement(const std::vector<PairAgreement> &pairs) {
  double sum = 0.0;
  size_t n = 0;
  for (const auto &p : pairs) {
    if (p.samples == 0) continue;
    sum += p.value;
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

inline double PairwiseOverlapAgreement(const AnnotatorBatch &batch,
                                       Diagnostics *diagnostics = nullptr) {
  return MeanPairAgreement(PairwiseAgreements(batch, diagnostics));
}

// True when some label is the sole choice of at least `min_votes` annotators.
inline bool HasStrongMajority(const BatchSample &sample, size_t min_votes = 3) {
  std::map<std::string, size_t> sole;
  for (const auto &[annotator, labels] : sample.selections) {
    if (labels.size() == 1) ++sole[labels.front()];
  }
  for (const auto &[label, n] : sole) {
    if (n >= min_votes) return true;
  }
  return false;
}

inline double StrongMajorityRate(const AnnotatorBatch &batch, size_t min_votes = 3) {
  if (batch.samples.empty()) return 0.0;
  size_t hits = 0;
  for (const auto &s : batch.samples) hits += HasStrongMajority(s, min_votes);
  return static_cast<double>(hits) / batch.samples.size();
}

enum class Resolution { kResolved, kTie, kOtherDomain };

inline const char *ResolutionName(Resolution r) {
  switch (r) {
    case Resolution::kResolved: return "resolved";
    case Resolution::kTie: return "tie";
    default: return "other_domain";
  }
}

struct MajorityOutcome {
  Resolution resolution = Resolution::kTie;
  std::optional<std::string> label;
  // Annotators that selected each label.
  std::map<std::string, size_t> votes;

  bool resolved() const { return resolution == Resolution::kResolved; }
};

// The unique label selected by strictly more annotators than any other.
// Ties and OTHER_DOMAIN majorities are left for human adjudication.
inline MajorityOutcome MajorityLabel(const BatchSample &sample) {
  MajorityOutcome out;
  for (const auto &[annotator, labels] : sample.selections) {
    for (const auto &l : labels) ++out.votes[l];
  }
  size_t best = 0;
  size_t tied = 0;
  std::string winner;
  for (const auto &[label, n] : out.votes) {
    if (n > best) {
      best = n;
      tied = 1;
      winner = label;
    } else if (n == best) {
      ++tied;
    }
  }
  if (tied != 1) {
    out.resolution = Resolution::kTie;
  } else if (winner == kOtherDomain) {
    out.resolution = Resolution::kOtherDomain;
  } else {
    out.resolution = Resolution::kResolved;
    out.label = winner;
  }
  return out;
}

struct AgreementReport {
  std::string batch_id;
  double pairwise_overlap_agreement = 0.0;
  double strong_majority_rate = 0.0;
  std::vector<PairAgreement> per_pair;
  std::vector<std::string> unresolved;
  size_t samples = 0;
};

inline AgreementReport ComputeAgreement(const AnnotatorBatch &batch,
                                        Diagnostics *diagnostics = nullptr) {
  AgreementReport r;
  r.batch_id = batch.id;
  r.samples = batch.samples.size();
  r.per_pair = PairwiseAgreements(batch, diagnostics);
  r.pairwise_overlap_agreement = MeanPairAgreement(r.per_pair);
  r.strong_majority_rate = StrongMajorityRate(batch);
  for (const auto &s : batch.samples) {
    if (!MajorityLabel(s).resolved()) r.unresolved.push_back(s.id);
  }
  return r;
}

// Unweighted mean of the per-batch rates (the "Mean" row of a batch table).
struct AgreementMean {
  double agreement_rate = 0.0;
  double majority_vote_rate = 0.0;
};

struct BatchRates {
  std::string batch_id;
  double agreement_rate = 0.0;
  double majority_vote_rate = 0.0;
};

inline AgreementMean MeanRates(std::span<const BatchRates> rows) {
  AgreementMean m;
  if (rows.empty()) return m;
  for (const auto &r : rows) {
    m.agreement_rate += r.agreement_rate;
    m.majority_vote_rate += r.majority_vote_rate;
  }
  m.agreement_rate /= rows.size();
  m.majority_vote_rate /= rows.size();
  return m;
}

inline BatchRates RatesOf(const AgreementReport &r) {
  return {r.batch_id, r.pairwise_overlap_agreement, r.strong_majority_rate};
}

}  // namespace discomet
