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

#include "discomet/lexicon.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "discomet/interchange.hpp"
#include "discomet/saliency.hpp"
#include "test_util.hpp"

namespace discomet {
namespace {

using testing::Doc;

Lexicon Parse(const std::string &csv, const Taxonomies *tax = nullptr) {
  std::istringstream in(csv);
  return ParseLexicon(in, "lexicon.csv", tax);
}

const char *kHeader = "lemma,frame,domain,prior,triggers,provenance\n";

TEST(LexiconTest, FloodExample) {
  Lexicon lex = Parse(std::string(kHeader) + "flood|floods,Filling,WATER,0.9,,\n");
  AnnotatedCorpus c = Annotate({Doc("d", "immigrants flood the city")}, lex);
  ASSERT_EQ(c.annotation_count(), 1u);
  const auto &a = c.annotations()[0];
  EXPECT_EQ(a.span, (Span{11, 16}));
  EXPECT_EQ(a.surface, "flood");
  EXPECT_EQ(a.frame, "Filling");
  EXPECT_EQ(a.domain, "WATER");
  EXPECT_DOUBLE_EQ(a.domain_confidence, 0.9);
  EXPECT_TRUE(a.is_metaphor);
}

TEST(LexiconTest, EmptyLexicon) {
  AnnotatedCorpus c = Annotate({Doc("d", "immigrants flood the city")}, Lexicon());
  EXPECT_EQ(c.annotation_count(), 0u);
  EXPECT_EQ(c.document_count(), 1u);
}

TEST(LexiconTest, HighestPriorThenLabelOrder) {
  Lexicon lex = Parse(std::string(kHeader) +
                      "flood,Fluidic_motion,WATER,0.6,,\n"
                      "flood,Filling,WATER,0.9,,\n");
  EXPECT_EQ(Annotate({Doc("d", "a flood")}, lex).annotations()[0].frame, "Filling");
  Lexicon tie = Parse(std::string(kHeader) +
                      "flood,Quantified_mass,WATER,0.9,,\n"
                      "flood,Filling,WATER,0.9,,\n");
  EXPECT_EQ(Annotate({Doc("d", "a flood")}, tie).annotations()[0].frame, "Filling");
}

TEST(LexiconTest, TriggersRestrictToSentence) {
  Lexicon lex = Parse(std::string(kHeader) + "wave,Quantified_mass,WATER,0.8,migrants|border,\n");
  Document d = Doc("d", "A wave of migrants at the border. A wave hit.");
  d.sentences = {{0, 33}, {34, 45}};
  AnnotatedCorpus c = Annotate({d}, lex);
  ASSERT_EQ(c.annotation_count(), 1u);
  EXPECT_EQ(c.annotations()[0].span.start, 2u);
  EXPECT_EQ(Annotate({Doc("e", "A wave of migrants.")}, lex).annotation_count(), 0u);
}

TEST(LexiconTest, LemmaAndSurfaceModes) {
  Lexicon lex = Parse(std::string(kHeader) + "flood|floods|flooded,Filling,WATER,0.9,,\n");
  std::vector<Document> docs = {Doc("d", "Floods and flooded streets; a flood.")};
  AnnotatedCorpus lemma = Annotate(docs, lex, MatchMode::kLemma);
  ASSERT_EQ(lemma.annotation_count(), 3u);
  EXPECT_EQ(lemma.annotations()[0].surface, "Floods");
  EXPECT_EQ(lemma.annotations()[0].lemma, "flood");
  AnnotatedCorpus surface = Annotate(docs, lex, MatchMode::kSurface);
  ASSERT_EQ(surface.annotation_count(), 1u);
  EXPECT_EQ(surface.annotations()[0].surface, "flood");
}

TEST(LexiconTest, CodePointSpans) {
  Lexicon lex = Parse(std::string(kHeader) + "flood,Filling,WATER,0.9,,\n");
  AnnotatedCorpus c = Annotate({Doc("d", "caf\xc3\xa9 flood")}, lex);
  ASSERT_EQ(c.annotation_count(), 1u);
  EXPECT_EQ(c.annotations()[0].span, (Span{5, 10}));
}

TEST(LexiconTest, LoadErrors) {
  Taxonomies tax{LabelTaxonomy(TaxonomyKind::kSemanticFrame, {"Filling"}),
                 LabelTaxonomy(TaxonomyKind::kSourceDomain, {"WATER"})};
  EXPECT_THROW(Parse(std::string(kHeader) + "flood,Filling,FIRE,0.9,,\n", &tax), Error);
  EXPECT_THROW(Parse(std::string(kHeader) + "flood,Filling,WATER,1.9,,\n"), Error);
  EXPECT_THROW(Parse(std::string(kHeader) + "flood,Filling,WATER,high,,\n"), Error);
  EXPECT_THROW(Parse(std::string(kHeader) + "flood,Filling,WATER,0.9,,\nflood,Filling,WATER,0.5,,\n"),
               Error);
  try {
    Parse(std::string(kHeader) + "flood,Filling,FIRE,0.9,,\n", &tax);
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("lexicon.csv:2 [domain]"), std::string::npos) << e.what();
  }
}

std::string DataPath(const std::string &rel) { return std::string(DISCOMET_SOURCE_DIR) + "/" + rel; }

Taxonomies DemoTaxonomies() {
  return {LoadTaxonomy(DataPath("data/taxonomy/frames.txt"), TaxonomyKind::kSemanticFrame),
          LoadTaxonomy(DataPath("data/taxonomy/domains.txt"), TaxonomyKind::kSourceDomain)};
}

TEST(StarterLexiconTest, LoadsAgainstShippedTaxonomies) {
  Taxonomies tax = DemoTaxonomies();
  Lexicon lex = LoadLexicon(DataPath("data/lexicon/starter_lexicon.csv"), &tax);
  EXPECT_GE(lex.size(), 55u);
  for (const char *w : {"flood", "tide", "wave", "swarm", "invasion", "battle", "fight", "face",
                        "push", "cage", "prey", "paws", "rampant", "cesspool", "trickle", "stream",
                        "drown", "crackdown", "raid"}) {
    EXPECT_FALSE(lex.Candidates(w, MatchMode::kSurface).empty()) << w;
  }
  for (const auto &e : lex.entries()) EXPECT_FALSE(e.provenance.empty()) << e.lemma;
}

TEST(StarterLexiconTest, DeterministicAndComplete) {
  Taxonomies tax = DemoTaxonomies();
  Lexicon lex = LoadLexicon(DataPath("data/lexicon/starter_lexicon.csv"), &tax);
  std::vector<Document> docs = {
      Doc("a", "Hordes of invaders swarm the border; a flood of migrants arrives."),
      Doc("b", "We must fight climate change and push ahead on the path to progress."),
      Doc("c", "Predators prey on families; the crackdown is a raid by any other name.")};
  auto render = [&](MatchMode mode) {
    std::ostringstream out;
    WriteAnnotations(out, Annotate(docs, lex, mode).annotations());
    return out.str();
  };
  EXPECT_EQ(render(MatchMode::kLemma), render(MatchMode::kLemma));
  for (MatchMode mode : {MatchMode::kLemma, MatchMode::kSurface}) {
    AnnotatedCorpus c = Annotate(docs, lex, mode);
    EXPECT_GT(c.annotation_count(), 5u);
    for (const auto &a : c.annotations()) {
      const std::string lowered = text::Lower(a.surface);
      bool matched = false;
      for (const auto &e : lex.entries()) {
        bool form = mode == MatchMode::kLemma
                        ? std::find(e.forms.begin(), e.forms.end(), lowered) != e.forms.end()
                        : text::Lower(e.lemma) == lowered;
        matched |= form && e.frame == a.frame && e.domain == a.domain &&
                   e.metaphoricity_prior == a.domain_confidence;
      }
      EXPECT_TRUE(matched) << a.surface;
    }
  }
}

TEST(StarterLexiconTest, SerializedPipelineMatchesInMemory) {
  Taxonomies tax = DemoTaxonomies();
  Lexicon lex = LoadLexicon(DataPath("data/lexicon/starter_lexicon.csv"), &tax);
  AnnotatedCorpus c1 = Annotate({Doc("a", "swarm of invaders, a flood, a wave, a tide"),
                                 Doc("b", "another flood and a wave")},
                                lex);
  AnnotatedCorpus c2 = Annotate({Doc("x", "we fight the war and battle on, a flood")}, lex);
  std::ostringstream d, a;
  WriteDocuments(d, c1.documents());
  WriteAnnotations(a, c1.annotations());
  std::istringstream din(d.str()), ain(a.str());
  AnnotatedCorpus reloaded = ParseCorpus(din, "d", ain, "a", &tax);
  SaliencyOptions opts;
  opts.min_count = 1;
  SaliencyTable x = ComputeSaliencyTable(c1, c2, Dimension::kDomain, opts);
  SaliencyTable y = ComputeSaliencyTable(reloaded, c2, Dimension::kDomain, opts);
  ASSERT_EQ(x.records.size(), y.records.size());
  for (size_t i = 0; i < x.records.size(); ++i) {
    EXPECT_EQ(x.records[i].label, y.records[i].label);
    EXPECT_EQ(x.records[i].g2, y.records[i].g2);
  }
}

}  // namespace
}  // namespace discomet
