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

// CSV and JSON renderings of the analysis results. Output is a pure function
// of the result objects, so identical inputs give byte-identical reports.

#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "discomet/agreement.hpp"
#include "discomet/annotator_batch.hpp"
#include "discomet/csv.hpp"
#include "discomet/saliency.hpp"
#include "discomet/taxonomy_analysis.hpp"

namespace discomet::report {

using Json = nlohmann::ordered_json;

inline std::string DirectionLabel(const SaliencyTable &t, Direction d) {
  switch (d) {
    case Direction::kCorpus1: return t.corpus1_name;
    case Direction::kCorpus2: return t.corpus2_name;
    default: return "neutral";
  }
}

inline const std::vector<std::string> &SaliencyColumns() {
  static const std::vector<std::string> kColumns = {
      "label", "O1", "N1", "O2", "N2", "E1", "E2", "g2", "p_threshold",
      "significant", "direction", "rel_freq1", "rel_freq2"};
  return kColumns;
}

inline void WriteSaliencyCsv(std::ostream &out, const SaliencyTable &t) {
  csv::WriteRecord(out, SaliencyColumns());
  for (const auto &r : t.records) {
    csv::WriteRecord(out, {r.label, csv::FormatUint(r.cell.o1), csv::FormatUint(r.cell.n1),
                           csv::FormatUint(r.cell.o2), csv::FormatUint(r.cell.n2),
                           csv::FormatDouble(r.cell.e1), csv::FormatDouble(r.cell.e2),
                           csv::FormatDouble(r.g2), csv::FormatDouble(t.effective_p),
                           r.significant ? "true" : "false", DirectionLabel(t, r.direction),
                           csv::FormatDouble(r.rel_freq1), csv::FormatDouble(r.rel_freq2)});
  }
}

inline Json RefsToJson(const std::vector<AnnotationRef> &refs) {
  Json arr = Json::array();
  for (const auto &r : refs) {
    Json j;
    j["doc_id"] = r.doc_id;
    j["span"] = {r.span.start, r.span.end};
    j["surface"] = r.surface;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline Json SaliencyMetadata(const SaliencyTable &t) {
  Json m;
  m["dimension"] = DimensionName(t.dimension);
  if (t.domain) m["domain"] = *t.domain;
  m["corpus1"] = t.corpus1_name;
  m["corpus2"] = t.corpus2_name;
  m["N1"] = t.n1;
  m["N2"] = t.n2;
  m["p_threshold"] = t.options.p_threshold;
  m["bonferroni"] = t.options.bonferroni;
  m["effective_p"] = t.effective_p;
  m["critical_value"] = t.critical_value;
  m["tests"] = t.tests;
  m["min_count"] = t.options.min_count;
  m["totals_policy"] = t.options.totals == TotalsPolicy::kAnnotations ? "annotations" : "tokens";
  m["notes"] = t.notes;
  return m;
}

inline Json SaliencyToJson(const SaliencyTable &t) {
  Json j;
  j["metadata"] = SaliencyMetadata(t);
  Json rows = Json::array();
  for (const auto &r : t.records) {
    Json row;
    row["label"] = r.label;
    row["O1"] = r.cell.o1;
    row["N1"] = r.cell.n1;
    row["O2"] = r.cell.o2;
    row["N2"] = r.cell.n2;
    row["E1"] = r.cell.e1;
    row["E2"] = r.cell.e2;
    row["g2"] = r.g2;
    row["p_threshold"] = t.effective_p;
    row["significant"] = r.significant;
    row["direction"] = DirectionLabel(t, r.direction);
    row["rel_freq1"] = r.rel_freq1;
    row["rel_freq2"] = r.rel_freq2;
    row["examples1"] = RefsToJson(r.examples1);
    row["examples2"] = RefsToJson(r.examples2);
    rows.push_back(std::move(row));
  }
  j["records"] = std::move(rows);
  return j;
}

// What a bar chart of relative frequencies needs: records in order of
// diminishing saliency with their per-corpus relative frequencies.
inline Json FigureData(const SaliencyTable &t, bool significant_only = true) {
  Json j;
  j["dimension"] = DimensionName(t.dimension);
  if (t.domain) j["domain"] = *t.domain;
  j["corpora"] = {t.corpus1_name, t.corpus2_name};
  Json items = Json::array();
  size_t rank = 0;
  for (const auto &r : t.records) {
    if (significant_only && !r.significant) continue;
    Json item;
    item["rank"] = ++rank;
    item["label"] = r.label;
    item["g2"] = r.g2;
    item["direction"] = DirectionLabel(t, r.direction);
    item["rel_freq"] = {r.rel_freq1, r.rel_freq2};
    items.push_back(std::move(item));
  }
  j["items"] = std::move(items);
  return j;
}

inline void WriteConfusionCsv(std::ostream &out, std::span<const ConfusionRecord> records) {
  csv::WriteRecord(out, {"label_a", "label_b", "count", "npmi", "npmi_weighted"});
  for (const auto &r : records) {
    csv::WriteRecord(out, {r.label_a, r.label_b, csv::FormatUint(r.count),
                           csv::FormatDouble(r.npmi), csv::FormatDouble(r.npmi_weighted)});
  }
}

inline Json ConfusionMetadata(const ConfusionAnalysis &a) {
  Json j;
  j["mode"] = PairingModeName(a.mode);
  j["total_selections"] = a.total_selections;
  j["total_pairs"] = a.total_pairs;
  j["pairs"] = a.records.size();
  size_t degenerate = 0;
  for (const auto &r : a.records) degenerate += r.degenerate;
  j["degenerate_pairs"] = degenerate;
  return j;
}

inline Json OverlapToJson(const OverlapReport &r) {
  Json j;
  j["domain_a"] = r.domain_a;
  j["domain_b"] = r.domain_b;
  j["frames_a"] = r.frames_a;
  j["frames_b"] = r.frames_b;
  j["overlap_ab"] = r.overlap_ab;
  j["overlap_ba"] = r.overlap_ba;
  j["subsumed"] = SubsumptionName(r.subsumed);
  j["empty_a"] = r.empty_a;
  j["empty_b"] = r.empty_b;
  return j;
}

inline void WriteAgreementCsv(std::ostream &out, std::span<const BatchRates> rows) {
  csv::WriteRecord(out, {"batch", "agreement_rate", "majority_vote_rate"});
  for (const auto &r : rows) {
    csv::WriteRecord(out, {r.batch_id, csv::FormatDouble(r.agreement_rate),
                           csv::FormatDouble(r.majority_vote_rate)});
  }
  AgreementMean mean = MeanRates(rows);
  csv::WriteRecord(out, {"mean", csv::FormatDouble(mean.agreement_rate),
                         csv::FormatDouble(mean.majority_vote_rate)});
}

// One line per sample without a resolved majority label.
inline void WriteAdjudicationQueue(std::ostream &out, const AnnotatorBatch &batch) {
  for (const auto &s : batch.samples) {
    MajorityOutcome m = MajorityLabel(s);
    if (m.resolved()) continue;
    Json j = SampleToJson(batch.id, s);
    j["reason"] = ResolutionName(m.resolution);
    j["votes"] = m.votes;
    out << j.dump() << '\n';
  }
}

}  // namespace discomet::report
