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

// Pipeline commands behind the `discomet` CLI. Each command reads a Config,
// writes its reports plus manifest.json and warnings.jsonl into
// `output_dir`, and returns a process exit code:
//
//   0  success
//   1  analysis produced nothing (empty corpus after filtering, ...)
//   2  usage or configuration error
//   3  input data violates a data-model invariant

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "discomet/agreement.hpp"
#include "discomet/annotator_batch.hpp"
#include "discomet/config.hpp"
#include "discomet/corpus.hpp"
#include "discomet/diagnostics.hpp"
#include "discomet/error.hpp"
#include "discomet/ingestion.hpp"
#include "discomet/interchange.hpp"
#include "discomet/lexicon.hpp"
#include "discomet/manifest.hpp"
#include "discomet/report.hpp"
#include "discomet/saliency.hpp"
#include "discomet/taxonomy.hpp"
#include "discomet/taxonomy_analysis.hpp"

namespace discomet::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitEmpty = 1,
  kExitUsage = 2,
  kExitData = 3,
};

enum class LogLevel { kQuiet, kWarn, kInfo };

// DISCOMET_LOG=quiet|warn|info; warn when unset.
inline LogLevel LogLevelFromEnv() {
  const char *v = std::getenv("DISCOMET_LOG");
  if (v == nullptr) return LogLevel::kWarn;
  std::string s = text::Lower(v);
  if (s == "quiet" || s == "0") return LogLevel::kQuiet;
  if (s == "info" || s == "2" || s == "debug") return LogLevel::kInfo;
  return LogLevel::kWarn;
}

struct Context {
  std::ostream &out;
  std::ostream &err;
  LogLevel log = LogLevel::kWarn;
  Diagnostics diagnostics;

  void Info(const std::string &message) {
    if (log == LogLevel::kInfo) err << "[info] " << message << '\n';
  }
};

namespace internal {

namespace fs = std::filesystem;

// Collects report files and the manifest for one run.
class RunOutput {
 public:
  RunOutput(const Config &config, const std::string &command)
      : dir_(config.GetPath("output_dir")) {
    manifest_.command = command;
    manifest_.config = config.values();
    manifest_.started_at = UtcTimestamp();
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw UsageError("cannot create output_dir " + dir_.string() + ": " + ec.message());
  }

  RunManifest &manifest() { return manifest_; }
  const fs::path &dir() const { return dir_; }

  void Write(const std::string &name, const std::string &content) {
    fs::path path = dir_ / name;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
    manifest_.outputs[name] = Sha256Hex(content);
  }

  void WriteJson(const std::string &name, nlohmann::ordered_json j) {
    if (j.is_object()) j["manifest"] = "manifest.json";
    Write(name, j.dump(2) + "\n");
  }

  // Writes warnings.jsonl and manifest.json; echoes warnings to `ctx.err`.
  void Finish(Context &ctx) {
    std::ostringstream w;
    ctx.diagnostics.WriteJsonLines(w);
    Write("warnings.jsonl", w.str());
    if (ctx.log != LogLevel::kQuiet) ctx.diagnostics.WriteJsonLines(ctx.err);
    manifest_.finished_at = UtcTimestamp();
    std::ofstream out(dir_ / "manifest.json");
    out << manifest_.ToJson().dump(2) << '\n';
  }

 private:
  fs::path dir_;
  RunManifest manifest_;
};

inline std::optional<Taxonomies> LoadTaxonomies(const Config &config, RunManifest &manifest) {
  auto frames = config.FindPath("frames");
  auto domains = config.FindPath("domains");
  if (!frames && !domains) return std::nullopt;
  if (!frames || !domains) {
    throw UsageError("config must give both 'frames' and 'domains' taxonomy paths, or neither");
  }
  manifest.AddInput(*frames);
  manifest.AddInput(*domains);
  return Taxonomies{LoadTaxonomy(*frames, TaxonomyKind::kSemanticFrame),
                    LoadTaxonomy(*domains, TaxonomyKind::kSourceDomain)};
}

inline AnnotatedCorpus LoadCorpusFrom(const Config &config, const std::string &prefix,
                                      const Taxonomies *taxonomies, RunManifest &manifest) {
  std::string docs = config.GetPath(prefix + "documents");
  std::string anns = config.GetPath(prefix + "annotations");
  manifest.AddInput(docs);
  manifest.AddInput(anns);
  return LoadCorpus(docs, anns, taxonomies);
}

inline KeywordMatch KeywordMatchFrom(const Config &config) {
  std::string mode = config.GetOr("keyword_mode", "substring");
  if (mode == "substring") return KeywordMatch::kSubstring;
  if (mode == "word") return KeywordMatch::kWordBoundary;
  throw UsageError("keyword_mode must be 'substring' or 'word', got '" + mode + "'");
}

inline SaliencyOptions SaliencyOptionsFrom(const Config &config) {
  SaliencyOptions o;
  o.p_threshold = config.GetDouble("p_threshold", 0.05);
  if (!(o.p_threshold > 0.0 && o.p_threshold < 1.0)) {
    throw UsageError("p_threshold must lie in (0, 1)");
  }
  o.min_count = config.GetUint("min_count", 5);
  o.max_examples = config.GetUint("max_examples", 3);
  o.bonferroni = config.GetBool("bonferroni", false);
  std::string totals = config.GetOr("totals", "annotations");
  if (totals == "annotations") {
    o.totals = TotalsPolicy::kAnnotations;
  } else if (totals == "tokens") {
    o.totals = TotalsPolicy::kTokens;
  } else {
    throw UsageError("totals must be 'annotations' or 'tokens', got '" + totals + "'");
  }
  return o;
}

inline Dimension DimensionFrom(const std::string &s) {
  if (s == "domain") return Dimension::kDomain;
  if (s == "frame") return Dimension::kFrame;
  throw UsageError("dimension must be 'domain' or 'frame', got '" + s + "'");
}

// File-name-safe form of a label.
inline std::string Slug(const std::string &label) {
  std::string out;
  for (char c : label) out.push_back(text::IsWordByte(c) && static_cast<unsigned char>(c) < 0x80 ? c : '_');
  return out.empty() ? "_" : out;
}

inline std::string SaliencyCsv(const SaliencyTable &t) {
  std::ostringstream s;
  report::WriteSaliencyCsv(s, t);
  return s.str();
}

inline void PrintTable(std::ostream &out, const SaliencyTable &t, size_t top) {
  out << DimensionName(t.dimension) << " saliency";
  if (t.domain) out << " within " << *t.domain;
  out << " (" << t.corpus1_name << " vs " << t.corpus2_name << ", gate "
      << csv::FormatDouble(t.critical_value) << "): " << t.SignificantCount() << " significant of "
      << t.records.size() << '\n';
  size_t shown = 0;
  for (const auto &r : t.records) {
    if (!r.significant || shown++ >= top) continue;
    out << "  " << std::left << std::setw(28) << r.label << std::right << std::setw(12)
        << std::fixed << std::setprecision(3) << r.g2 << "  " << report::DirectionLabel(t, r.direction)
        << '\n';
    out.unsetf(std::ios::floatfield);
  }
}

inline std::string ReadAll(std::istream &in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace internal

// annotate: lexicon annotator over a documents file.
inline int CmdAnnotate(const Config &config, Context &ctx) {
  internal::RunOutput run(config, "annotate");
  auto taxonomies = internal::LoadTaxonomies(config, run.manifest());
  const Taxonomies *tax = taxonomies ? &*taxonomies : nullptr;
  std::string docs_path = config.GetPath("documents");
  std::string lexicon_path = config.GetPath("lexicon");
  run.manifest().AddInput(docs_path);
  run.manifest().AddInput(lexicon_path);
  Lexicon lexicon = LoadLexicon(lexicon_path, tax);
  std::ifstream docs_in(docs_path);
  if (!docs_in) throw UsageError("cannot open documents file: " + docs_path);
  std::vector<Document> docs = ReadDocuments(docs_in, docs_path);

  std::string mode = config.GetOr("mode", config.GetOr("match_mode", "lemma"));
  MatchMode match;
  if (mode == "lemma") {
    match = MatchMode::kLemma;
  } else if (mode == "surface") {
    match = MatchMode::kSurface;
  } else {
    throw UsageError("annotate mode must be 'lemma' or 'surface', got '" + mode + "'");
  }
  AnnotatedCorpus corpus = Annotate(docs, lexicon, match);
  if (lexicon.empty()) ctx.diagnostics.Warn("annotate", "", "empty lexicon");

  std::ostringstream anns;
  WriteAnnotations(anns, corpus.annotations());
  run.Write(config.GetOr("output", "annotations.jsonl"), anns.str());
  run.Finish(ctx);
  ctx.out << "annotated " << corpus.document_count() << " documents: "
          << corpus.annotation_count() << " metaphor annotations\n";
  return kExitOk;
}

// filter: keyword retention, metaphoricity cutoffs and target substrings,
// applied in that order when configured.
inline int CmdFilter(const Config &config, Context &ctx) {
  internal::RunOutput run(config, "filter");
  auto taxonomies = internal::LoadTaxonomies(config, run.manifest());
  AnnotatedCorpus corpus = internal::LoadCorpusFrom(config, "", taxonomies ? &*taxonomies : nullptr,
                                                    run.manifest());
  const size_t before = corpus.annotation_count();

  if (auto keywords = config.GetList("keywords"); !keywords.empty()) {
    corpus = FilterByKeywords(corpus, keywords, internal::KeywordMatchFrom(config), &ctx.diagnostics);
    ctx.Info("after keyword filter: " + std::to_string(corpus.annotation_count()));
  }
  std::optional<CutoffTable> cutoffs;
  if (auto path = config.FindPath("cutoffs")) {
    run.manifest().AddInput(*path);
    std::ifstream in(*path);
    cutoffs = ParseCutoffTable(in, *path);
  } else if (auto judged = config.FindPath("judged")) {
    run.manifest().AddInput(*judged);
    std::ifstream in(*judged);
    cutoffs = ComputeCutoffs(ParseJudgedItems(in, *judged), &ctx.diagnostics);
  }
  if (cutoffs) {
    nlohmann::ordered_json j;
    j["cutoffs"] = cutoffs->cutoffs;
    j["positives"] = cutoffs->positives;
    run.WriteJson("cutoffs.json", j);
    corpus = FilterCandidates(corpus, *cutoffs, &ctx.diagnostics);
    ctx.Info("after cutoff filter: " + std::to_string(corpus.annotation_count()));
  }
  if (auto substrings = config.GetList("target_substrings"); !substrings.empty()) {
    corpus = FilterByTarget(corpus, substrings, config.GetBool("target_case_sensitive", false),
                            &ctx.diagnostics);
    ctx.Info("after target filter: " + std::to_string(corpus.annotation_count()));
  }

  std::ostringstream docs;
  std::ostringstream anns;
  WriteDocuments(docs, corpus.documents());
  WriteAnnotations(anns, corpus.annotations());
  run.Write("documents.jsonl", docs.str());
  run.Write("annotations.jsonl", anns.str());
  nlohmann::ordered_json summary;
  summary["annotations_in"] = before;
  summary["annotations_out"] = corpus.annotation_count();
  summary["documents"] = corpus.document_count();
  summary["flagged_documents"] = corpus.flagged_documents();
  run.WriteJson("filter_summary.json", summary);
  run.Finish(ctx);
  ctx.out << "kept " << corpus.annotation_count() << " of " << before << " annotations\n";
  if (corpus.empty()) {
    ctx.err << "filter: no annotations survived\n";
    return kExitEmpty;
  }
  return kExitOk;
}

// sample-background: year-stratified sample of a pool matching a template.
inline int CmdSampleBackground(const Config &config, Context &ctx) {
  internal::RunOutput run(config, "sample-background");
  auto taxonomies = internal::LoadTaxonomies(config, run.manifest());
  const Taxonomies *tax = taxonomies ? &*taxonomies : nullptr;
  AnnotatedCorpus pool = internal::LoadCorpusFrom(config, "pool.", tax, run.manifest());
  AnnotatedCorpus templ;
  if (config.Has("template.annotations")) {
    templ = internal::LoadCorpusFrom(config, "template.", tax, run.manifest());
  } else {
    std::string path = config.GetPath("template.documents");
    run.manifest().AddInput(path);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open template documents: " + path);
    templ = AnnotatedCorpus(ReadDocuments(in, path), {});
  }
  if (!config.Has("seed")) throw UsageError("sample-background requires a 'seed'");
  const uint64_t seed = config.GetUint("seed", 0);
  run.manifest().seed = seed;

  StratifiedSample sample = StratifiedBackgroundSample(
      pool, templ, seed, config.GetList("keywords"), internal::KeywordMatchFrom(config),
      &ctx.diagnostics);

  std::ostringstream docs;
  std::ostringstream anns;
  WriteDocuments(docs, sample.corpus.documents());
  WriteAnnotations(anns, sample.corpus.annotations());
  run.Write("documents.jsonl", docs.str());
  run.Write("annotations.jsonl", anns.str());
  nlohmann::ordered_json rep;
  rep["seed"] = seed;
  nlohmann::ordered_json years = nlohmann::ordered_json::array();
  for (const auto &[year, want] : sample.requested) {
    nlohmann::ordered_json y;
    y["year"] = YearName(year);
    y["requested"] = want;
    y["drawn"] = sample.drawn[year];
    y["shortfall"] = sample.shortfall.count(year) ? sample.shortfall.at(year) : 0;
    years.push_back(std::move(y));
  }
  rep["years"] = std::move(years);
  run.WriteJson("sample_report.json", rep);
  run.Finish(ctx);
  ctx.out << "sampled " << sample.corpus.document_count() << " background documents\n";
  return sample.corpus.document_count() == 0 ? kExitEmpty : kExitOk;
}

// saliency: domain saliency between two corpora, then frame saliency within
// every significant domain.
inline int CmdSaliency(const Config &config, Context &ctx) {
  internal::RunOutput run(config, "saliency");
  auto taxonomies = internal::LoadTaxonomies(config, run.manifest());
  const Taxonomies *tax = taxonomies ? &*taxonomies : nullptr;

  AnnotatedCorpus c1;
  AnnotatedCorpus c2;
  std::string name1;
  std::string name2;
  if (config.Has("corpus1.documents")) {
    c1 = internal::LoadCorpusFrom(config, "corpus1.", tax, run.manifest());
    c2 = internal::LoadCorpusFrom(config, "corpus2.", tax, run.manifest());
    name1 = config.GetOr("corpus1.name", "corpus1");
    name2 = config.GetOr("corpus2.name", "corpus2");
  } else {
    AnnotatedCorpus all = internal::LoadCorpusFrom(config, "", tax, run.manifest());
    name1 = config.Get("partition_a");
    name2 = config.Get("partition_b");
    for (const auto *tag : {&name1, &name2}) {
      if (!all.HasPartition(*tag)) throw UsageError("unknown partition tag '" + *tag + "'");
    }
    c1 = all.Partition(name1);
    c2 = all.Partition(name2);
  }

  if (auto keywords = config.GetList("keywords"); !keywords.empty()) {
    std::string scope = config.GetOr("keyword_scope", "topic");
    KeywordMatch match = internal::KeywordMatchFrom(config);
    if (scope == "topic" || scope == "both") {
      c1 = FilterByKeywords(c1, keywords, match, &ctx.diagnostics);
    }
    if (scope == "both") c2 = FilterByKeywords(c2, keywords, match, &ctx.diagnostics);
    if (scope != "topic" && scope != "both" && scope != "none") {
      throw UsageError("keyword_scope must be 'topic', 'both' or 'none'");
    }
  }

  if (c1.empty() || c2.empty()) {
    ctx.diagnostics.Warn("saliency", "", std::string("corpus ") + (c1.empty() ? name1 : name2) +
                                             " has no annotations after filtering");
    run.Finish(ctx);
    ctx.err << "saliency: empty corpus after filtering\n";
    return kExitEmpty;
  }

  SaliencyOptions options = internal::SaliencyOptionsFrom(config);
  SaliencyOptions nested = options;
  nested.min_count = config.GetUint("nested_min_count", options.min_count);
  nested.totals = TotalsPolicy::kAnnotations;
  const bool figure_all = config.GetBool("figure_all", false);

  SaliencyTable domains = ComputeSaliencyTable(c1, c2, Dimension::kDomain, options);
  domains.corpus1_name = name1;
  domains.corpus2_name = name2;
  run.manifest().parameters["critical_value"] = csv::FormatDouble(domains.critical_value);
  run.Write("domains.csv", internal::SaliencyCsv(domains));
  run.WriteJson("domains.json", report::SaliencyToJson(domains));
  run.WriteJson("figure_domains.json", report::FigureData(domains, !figure_all));
  internal::PrintTable(ctx.out, domains, 10);

  nlohmann::ordered_json frame_figures = nlohmann::ordered_json::array();
  size_t index = 0;
  for (const auto &r : domains.records) {
    if (!r.significant) continue;
    SaliencyTable frames = NestedFrameSaliency(r.label, c1, c2, nested, &ctx.diagnostics);
    frames.corpus1_name = name1;
    frames.corpus2_name = name2;
    std::ostringstream stem;
    stem << "frames/" << std::setw(2) << std::setfill('0') << ++index << "_"
         << internal::Slug(r.label);
    run.Write(stem.str() + ".csv", internal::SaliencyCsv(frames));
    run.WriteJson(stem.str() + ".json", report::SaliencyToJson(frames));
    frame_figures.push_back(report::FigureData(frames, !figure_all));
    internal::PrintTable(ctx.out, frames, 5);
  }
  run.WriteJson("figure_frames.json", nlohmann::ordered_json{{"domains", frame_figures}});
  run.Finish(ctx);
  return kExitOk;
}

// contrast: one corpus split by two partition tags.
inline int CmdContrast(const Config &config, Context &ctx) {
  internal::RunOutput run(config, "contrast");
  auto taxonomies = internal::LoadTaxonomies(config, run.manifest());
  AnnotatedCorpus corpus = internal::LoadCorpusFrom(config, "", taxonomies ? &*taxonomies : nullptr,
                                                    run.manifest());
  const std::string a = config.Get("partition_a");
  const std::string b = config.Get("partition_b");
  SaliencyOptions options = internal::SaliencyOptionsFrom(config);
  std::vector<std::string> domain_list = config.GetList("contrast_domains");
  const bool figure_all = config.GetBool("figure_all", false);

  std::vector<std::pair<std::string, SaliencyTable>> tables;
  if (domain_list.empty()) {
    Dimension dim = internal::DimensionFrom(config.GetOr("dimension", "domain"));
    tables.emplace_back("contrast", PartitionContrast(corpus, a, b, dim, std::nullopt, options,
                                                      &ctx.diagnostics));
  } else {
    for (const auto &d : domain_list) {
      if (taxonomies && !taxonomies->domains.Contains(d)) {
        throw UsageError("unknown domain '" + d + "'");
      }
      tables.emplace_back("contrast_" + internal::Slug(d),
                          PartitionContrast(corpus, a, b, Dimension::kFrame, d, options,
                                            &ctx.diagnostics));
    }
  }
  run.manifest().parameters["critical_value"] =
      csv::FormatDouble(ChiSquareCritical(options.p_threshold));
  bool any_rows = false;
  for (const auto &[stem, t] : tables) {
    run.Write(stem + ".csv", internal::SaliencyCsv(t));
    run.WriteJson(stem + ".json", report::SaliencyToJson(t));
    run.WriteJson("figure_" + stem + ".json", report::FigureData(t, !figure_all));
    internal::PrintTable(ctx.out, t, 10);
    any_rows = any_rows || !t.records.empty();
  }
  run.Finish(ctx);
  return any_rows ? kExitOk : kExitEmpty;
}

// confusion: weighted-NPMI confusion tables in both pairing modes, and
// optionally frame overlap between confused domains.
inline int CmdConfusion(const Config &config, Context &ctx) {
  internal::RunOutput run(config, "confusion");
  std::vector<AnnotatorBatch> batches;
  auto paths = config.GetPathList("batches");
  if (paths.empty()) throw UsageError("confusion requires 'batches'");
  for (const auto &p : paths) {
    run.manifest().AddInput(p);
    for (auto &b : LoadBatches(p)) batches.push_back(std::move(b));
  }
  const uint64_t top_k = config.GetUint("top_k", 10);
  std::string mode = config.GetOr("mode", "both");
  if (mode != "within" && mode != "across" && mode != "both") {
    throw UsageError("confusion mode must be 'within', 'across' or 'both'");
  }

  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<ConfusionRecord> within_top;
  for (PairingMode m : {PairingMode::kWithinAnnotator, PairingMode::kAcrossAnnotators}) {
    if (mode != "both" && mode != PairingModeName(m)) continue;
    ConfusionAnalysis analysis = AnalyzeConfusions(batches, m);
    // top_k = 0 keeps every pair.
    std::vector<ConfusionRecord> top;
    if (!analysis.records.empty()) {
      top = TopConfusions(analysis.records, top_k == 0 ? analysis.records.size() : top_k);
    }
    std::ostringstream s;
    report::WriteConfusionCsv(s, top);
    run.Write(std::string("confusion_") + PairingModeName(m) + ".csv", s.str());
    meta[PairingModeName(m)] = report::ConfusionMetadata(analysis);
    ctx.out << PairingModeName(m) << "-annotator confusions: " << analysis.records.size()
            << " pairs\n";
    for (const auto &r : top) {
      ctx.out << "  " << r.label_a << " / " << r.label_b << "  count=" << r.count
              << "  npmi_w=" << csv::FormatDouble(r.npmi_weighted) << '\n';
    }
    if (m == PairingMode::kWithinAnnotator) within_top = top;
  }
  run.WriteJson("confusion.json", meta);

  if (config.Has("overlap.documents")) {
    auto taxonomies = internal::LoadTaxonomies(config, run.manifest());
    AnnotatedCorpus corpus = internal::LoadCorpusFrom(
        config, "overlap.", taxonomies ? &*taxonomies : nullptr, run.manifest());
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto &item : config.GetList("overlap_pairs")) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw UsageError("overlap_pairs entries look like A:B");
      pairs.emplace_back(std::string(text::Trim(item.substr(0, colon))),
                         std::string(text::Trim(item.substr(colon + 1))));
    }
    if (pairs.empty()) {
      for (const auto &r : within_top) pairs.emplace_back(r.label_a, r.label_b);
    }
    const uint64_t min_frames = config.GetUint("min_frame_count", 1);
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto &[x, y] : pairs) {
      reports.push_back(report::OverlapToJson(
          FrameOverlap(corpus, x, y, min_frames, taxonomies ? &taxonomies->domains : nullptr)));
    }
    run.WriteJson("overlap.json", nlohmann::ordered_json{{"overlaps", reports}});
  }
  run.Finish(ctx);
  return kExitOk;
}

// agreement: per-batch overlap agreement and strong-majority rate, plus the
// queue of samples needing adjudication.
inline int CmdAgreement(const Config &config, Context &ctx) {
  internal::RunOutput run(config, "agreement");
  auto paths = config.GetPathList("batches");
  if (paths.empty()) throw UsageError("agreement requires 'batches'");
  std::vector<AnnotatorBatch> batches;
  for (const auto &p : paths) {
    run.manifest().AddInput(p);
    for (auto &b : LoadBatches(p)) batches.push_back(std::move(b));
  }
  std::vector<BatchRates> rows;
  nlohmann::ordered_json detail = nlohmann::ordered_json::array();
  std::ostringstream queue;
  for (const auto &batch : batches) {
    AgreementReport r = ComputeAgreement(batch, &ctx.diagnostics);
    rows.push_back(RatesOf(r));
    nlohmann::ordered_json j;
    j["batch"] = r.batch_id;
    j["samples"] = r.samples;
    j["agreement_rate"] = r.pairwise_overlap_agreement;
    j["majority_vote_rate"] = r.strong_majority_rate;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto &p : r.per_pair) {
      pairs.push_back({{"annotator_a", p.annotator_a},
                       {"annotator_b", p.annotator_b},
                       {"agreement", p.value},
                       {"samples", p.samples}});
    }
    j["per_pair"] = std::move(pairs);
    j["unresolved"] = r.unresolved;
    detail.push_back(std::move(j));
    report::WriteAdjudicationQueue(queue, batch);
  }
  std::ostringstream table;
  report::WriteAgreementCsv(table, rows);
  run.Write("agreement.csv", table.str());
  run.Write("adjudication_queue.jsonl", queue.str());
  run.WriteJson("agreement.json", nlohmann::ordered_json{{"batches", detail}});
  run.Finish(ctx);
  ctx.out << table.str();
  return kExitOk;
}

// report: renders a saliency JSON report as a text table and figure data.
inline int CmdReport(const Config &config, Context &ctx) {
  std::string input = config.GetPath("input");
  std::ifstream in(input);
  if (!in) throw UsageError("cannot open report input: " + input);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(internal::ReadAll(in));
  } catch (const nlohmann::json::exception &e) {
    throw DataError(input + ": not a saliency report: " + e.what());
  }
  if (!j.contains("records") || !j.contains("metadata")) {
    throw DataError(input + ": not a saliency report (records/metadata missing)");
  }
  const uint64_t top = config.GetUint("top", 10);
  const auto &meta = j["metadata"];
  nlohmann::ordered_json figure;
  figure["dimension"] = meta.value("dimension", "");
  if (meta.contains("domain")) figure["domain"] = meta["domain"];
  figure["corpora"] = {meta.value("corpus1", "corpus1"), meta.value("corpus2", "corpus2")};
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  ctx.out << std::left << std::setw(4) << "#" << std::setw(28) << "label" << std::right
          << std::setw(12) << "g2" << std::setw(12) << "rel_freq1" << std::setw(12)
          << "rel_freq2" << "  direction\n";
  size_t rank = 0;
  for (const auto &r : j["records"]) {
    if (!r.value("significant", false)) continue;
    if (rank >= top) break;
    ++rank;
    ctx.out << std::left << std::setw(4) << rank << std::setw(28) << r.value("label", "")
            << std::right << std::fixed << std::setprecision(3) << std::setw(12)
            << r.value("g2", 0.0) << std::setprecision(5) << std::setw(12)
            << r.value("rel_freq1", 0.0) << std::setw(12) << r.value("rel_freq2", 0.0) << "  "
            << r.value("direction", "") << '\n';
    ctx.out.unsetf(std::ios::floatfield);
    items.push_back({{"rank", rank},
                     {"label", r.value("label", "")},
                     {"g2", r.value("g2", 0.0)},
                     {"direction", r.value("direction", "")},
                     {"rel_freq", {r.value("rel_freq1", 0.0), r.value("rel_freq2", 0.0)}}});
  }
  figure["items"] = std::move(items);
  if (config.Has("output_dir")) {
    internal::RunOutput run(config, "report");
    run.manifest().AddInput(input);
    run.WriteJson(config.GetOr("output", "figure.json"), figure);
    run.Finish(ctx);
  }
  return rank == 0 ? kExitEmpty : kExitOk;
}

using CommandFn = std::function<int(const Config &, Context &)>;

inline const std::map<std::string, CommandFn> &Commands() {
  static const std::map<std::string, CommandFn> kCommands = {
      {"annotate", CmdAnnotate},   {"filter", CmdFilter},
      {"sample-background", CmdSampleBackground},
      {"saliency", CmdSaliency},   {"contrast", CmdContrast},
      {"confusion", CmdConfusion}, {"agreement", CmdAgreement},
      {"report", CmdReport},
  };
  return kCommands;
}

// Runs one command, mapping exceptions onto exit codes.
inline int Run(const std::string &command, const Config &config, Context &ctx) {
  auto it = Commands().find(command);
  if (it == Commands().end()) {
    ctx.err << "unknown command: " << command << '\n';
    return kExitUsage;
  }
  try {
    return it->second(config, ctx);
  } catch (const Error &e) {
    ctx.err << command << ": " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kUsage: return kExitUsage;
      case ErrorKind::kData: return kExitData;
      default: return kExitData;
    }
  } catch (const std::filesystem::filesystem_error &e) {
    ctx.err << command << ": " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace discomet::cli
