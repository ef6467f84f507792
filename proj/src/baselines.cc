// Copyright 2026 The stepeval Authors.
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

#include "stepeval/baselines.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "stepeval/corpus.h"
#include "stepeval/error.h"
#include "stepeval/textsim.h"

namespace stepeval {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool ParseSize(std::string_view s, std::size_t &out) {
  s = Trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void ParseFail(const std::string &source, std::size_t line,
                            const std::string &message) {
  throw Error(ErrorCode::kParse,
              source + ":" + std::to_string(line) + ": " + message,
              source + ":" + std::to_string(line));
}

// Accumulates one sentence while reading a parse file.
struct PendingSentence {
  std::string doc_id;
  std::optional<SentenceLocus> locus;
  std::size_t first_line = 0;
  std::vector<Token> tokens;
  std::vector<std::size_t> token_lines;
};

void Finish(PendingSentence &pending, const std::string &source,
            AnnotationIndex &index) {
  if (pending.tokens.empty()) return;
  if (!pending.locus) {
    throw Error(ErrorCode::kMissingLocusComment,
                source + ":" + std::to_string(pending.first_line) +
                    ": sentence without a \"# locus = a,s\" comment",
                source + ":" + std::to_string(pending.first_line));
  }
  const std::size_t n = pending.tokens.size();
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Token &t = pending.tokens[i];
    if (t.head > n) {
      ParseFail(source, pending.token_lines[i],
                "head " + std::to_string(t.head) + " exceeds sentence length " +
                    std::to_string(n));
    }
    if (t.head == i + 1) {
      ParseFail(source, pending.token_lines[i], "token is its own head");
    }
    if (t.head == 0) ++roots;
  }
  if (roots != 1) {
    ParseFail(source, pending.first_line,
              "sentence has " + std::to_string(roots) +
                  " roots; exactly one expected");
  }
  // Reject cycles: every token must reach the root.
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t at = i;
    for (std::size_t steps = 0; at != 0; ++steps) {
      if (steps > n) {
        ParseFail(source, pending.token_lines[i - 1],
                  "dependency cycle through token " + std::to_string(i));
      }
      at = pending.tokens[at - 1].head;
    }
  }
  SentenceAnnotation sentence;
  sentence.locus = *pending.locus;
  sentence.tokens = std::move(pending.tokens);
  auto &bucket = index[pending.doc_id];
  if (bucket.contains(sentence.locus)) {
    ParseFail(source, pending.first_line,
              "duplicate locus " +
                  std::to_string(sentence.locus.article_index + 1) + "," +
                  std::to_string(sentence.locus.sentence_index + 1));
  }
  bucket.emplace(sentence.locus, std::move(sentence));
}

bool IsPunctTag(std::string_view upos) { return upos == "PUNCT"; }

// Dependents not carried into Ie argument spans.
const std::set<std::string, std::less<>> &ExcludedSpanRelations() {
  static const std::set<std::string, std::less<>> kRelations = {
      "conj", "cc", "punct", "appos", "parataxis", "acl:relcl", "rcmod",
      "relcl", "dep", "discourse", "ccomp", "advcl"};
  return kRelations;
}

const std::set<std::string, std::less<>> &RelationModifiers() {
  static const std::set<std::string, std::less<>> kRelations = {
      "aux", "auxpass", "aux:pass", "neg", "prt", "compound:prt"};
  return kRelations;
}

void CollectSubtree(const SentenceAnnotation &s, std::size_t index,
                    bool prune, std::vector<std::size_t> &out) {
  out.push_back(index);
  for (std::size_t dep : s.Dependents(index)) {
    const Token &t = s.tokens[dep - 1];
    if (prune && ExcludedSpanRelations().contains(t.deprel)) continue;
    CollectSubtree(s, dep, prune, out);
  }
}

// Surface text of the given token indices in sentence order.
std::string JoinTokens(const SentenceAnnotation &s,
                       std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  std::string out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Token &t = s.tokens[indices[k] - 1];
    out += t.form;
    const bool adjacent = k + 1 < indices.size() &&
                          indices[k + 1] == indices[k] + 1;
    if (k + 1 < indices.size() && (t.space_after || !adjacent)) out += ' ';
  }
  return NormalizeWhitespace(out);
}

std::string ArgumentSpan(const SentenceAnnotation &s, std::size_t index) {
  std::vector<std::size_t> tokens;
  CollectSubtree(s, index, /*prune=*/true, tokens);
  return JoinTokens(s, std::move(tokens));
}

std::string RelationSpan(const SentenceAnnotation &s, std::size_t verb) {
  std::vector<std::size_t> tokens = {verb};
  for (std::size_t dep : s.Dependents(verb)) {
    if (RelationModifiers().contains(s.tokens[dep - 1].deprel)) {
      tokens.push_back(dep);
    }
  }
  return JoinTokens(s, std::move(tokens));
}

bool IsPredicate(const SentenceAnnotation &s, std::size_t index) {
  const Token &t = s.tokens[index - 1];
  if (t.upos == "VERB") return true;
  if (t.upos != "AUX") return false;
  // An auxiliary hanging off a verb belongs to that verb's relation.
  if (t.head != 0 && IsVerbTag(s.tokens[t.head - 1].upos)) return false;
  return true;
}

bool IsObjectCandidate(const Token &t) {
  if (IsNominalTag(t.upos) || t.upos == "ADP") return true;
  return t.deprel == "obj" || t.deprel == "dobj" || t.deprel == "iobj" ||
         t.deprel == "attr";
}

// Looks up the parse for one sentence, falling back to the naive annotator.
const SentenceAnnotation *FindSentence(const Instance &instance,
                                       const AnnotationIndex &annotations,
                                       SentenceLocus locus,
                                       const BaselineOptions &options,
                                       SentenceAnnotation &scratch) {
  for (const std::string &key : {instance.question_id, std::string()}) {
    auto doc = annotations.find(key);
    if (doc == annotations.end()) continue;
    auto it = doc->second.find(locus);
    if (it != doc->second.end()) return &it->second;
  }
  if (!options.fallback) {
    throw Error(ErrorCode::kMissingAnnotations,
                "no parse for \"" + instance.question_id + "\" article " +
                    std::to_string(locus.article_index + 1) + ", sentence " +
                    std::to_string(locus.sentence_index + 1),
                instance.question_id);
  }
  scratch = NaiveFallbackAnnotate(
      instance.articles[locus.article_index].sentences[locus.sentence_index]);
  scratch.locus = locus;
  return &scratch;
}

// -- naive annotator ---------------------------------------------------------

bool IsWordChar(char32_t c) {
  if (c < 0x80) {
    return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') ||
           (c >= U'A' && c <= U'Z');
  }
  if (c >= 0xA0 && c <= 0xBF) return false;  // Latin-1 punctuation
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x206F) return false;  // general punctuation
  if (c >= 0x3000 && c <= 0x303F) return false;  // CJK punctuation
  return true;
}

bool IsDigit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool IsSpaceChar(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == 0xA0;
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

struct RawToken {
  std::string form;
  bool word = false;
  bool space_after = true;
};

std::vector<RawToken> Tokenize(std::string_view sentence) {
  const std::u32string text = DecodeUtf8(sentence);
  std::vector<RawToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsSpaceChar(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (IsWordChar(text[i])) {
      while (j < text.size()) {
        if (IsWordChar(text[j])) {
          ++j;
          continue;
        }
        // Joiners inside a word: 4,000 / 3.5 / don't / well-known.
        const bool has_next = j + 1 < text.size() && IsWordChar(text[j + 1]);
        const char32_t c = text[j];
        if (has_next && (c == U'\'' || c == U'-' || c == 0x2019) &&
            j > i) {
          ++j;
          continue;
        }
        if (has_next && (c == U',' || c == U'.') && IsDigit(text[j - 1]) &&
            IsDigit(text[j + 1])) {
          ++j;
          continue;
        }
        break;
      }
    } else {
      j = i + 1;
    }
    RawToken t;
    t.form = EncodeUtf8(std::u32string_view(text).substr(i, j - i));
    t.word = IsWordChar(text[i]);
    t.space_after = j >= text.size() || IsSpaceChar(text[j]);
    out.push_back(std::move(t));
    i = j;
  }
  return out;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

const std::set<std::string, std::less<>> kAuxiliaries = {
    "is", "are", "was", "were", "am", "be", "been", "being", "has", "have",
    "had", "do", "does", "did", "will", "would", "shall", "should", "can",
    "could", "may", "might", "must"};
const std::set<std::string, std::less<>> kAdverbs = {
    "not", "also", "never", "later", "still", "often", "only", "n't"};
const std::set<std::string, std::less<>> kIrregularVerbs = {
    "born", "became", "become", "began", "built", "made", "won", "wrote",
    "written", "known", "held", "took", "taken", "given", "grew", "grown",
    "found", "led", "left", "sold", "set"};
const std::set<std::string, std::less<>> kPrepositions = {
    "in", "on", "at", "by", "for", "from", "of", "to", "with", "about",
    "into", "over", "under", "after", "before", "during", "between",
    "through", "since", "until", "near", "as", "against", "among", "within",
    "without", "across", "behind"};
const std::set<std::string, std::less<>> kDeterminers = {
    "a", "an", "the", "this", "that", "these", "those", "his", "her", "its",
    "their", "our", "my", "your"};
const std::set<std::string, std::less<>> kConjunctions = {"and", "or", "but",
                                                          "nor"};

bool LooksLikeVerb(const std::string &lower) {
  if (kIrregularVerbs.contains(lower)) return true;
  return lower.size() >= 4 && lower.ends_with("ed");
}

}  // namespace

bool IsVerbTag(std::string_view upos) {
  return upos == "VERB" || upos == "AUX";
}

bool IsNominalTag(std::string_view upos) {
  return upos == "NOUN" || upos == "PROPN" || upos == "PRON" || upos == "NUM";
}

std::size_t SentenceAnnotation::root() const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].head == 0) return i + 1;
  }
  return 0;
}

std::vector<std::size_t> SentenceAnnotation::Dependents(
    std::size_t index) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].head == index && index != 0) out.push_back(i + 1);
  }
  return out;
}

std::string SentenceAnnotation::Span(std::size_t first,
                                     std::size_t last) const {
  std::vector<std::size_t> indices;
  for (std::size_t i = first; i <= last && i <= tokens.size(); ++i) {
    indices.push_back(i);
  }
  return JoinTokens(*this, std::move(indices));
}

AnnotationIndex ParseAnnotations(std::string_view text,
                                 const std::string &source) {
  AnnotationIndex index;
  PendingSentence pending;
  std::string doc_id;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    ++line_no;
    const bool last = nl >= text.size();

    if (Trim(line).empty()) {
      Finish(pending, source, index);
      pending = PendingSentence{};
      if (last) break;
      continue;
    }
    if (line.front() == '#') {
      std::string_view body = Trim(line.substr(1));
      const std::size_t eq = body.find('=');
      if (eq != std::string_view::npos) {
        const std::string_view key = Trim(body.substr(0, eq));
        const std::string_view value = Trim(body.substr(eq + 1));
        if (key == "doc_id") {
          if (!pending.tokens.empty()) {
            ParseFail(source, line_no, "doc_id comment inside a sentence");
          }
          doc_id = std::string(value);
        } else if (key == "locus") {
          if (!pending.tokens.empty()) {
            ParseFail(source, line_no, "locus comment inside a sentence");
          }
          const std::size_t comma = value.find(',');
          std::size_t a = 0, s = 0;
          if (comma == std::string_view::npos ||
              !ParseSize(value.substr(0, comma), a) ||
              !ParseSize(value.substr(comma + 1), s) || a < 1 || s < 1) {
            ParseFail(source, line_no,
                      "locus must be \"<article>,<sentence>\" (1-based)");
          }
          pending.locus = SentenceLocus{a - 1, s - 1};
        }
      }
      if (pending.first_line == 0) pending.first_line = line_no;
      if (last) break;
      continue;
    }

    const auto cols = SplitTabs(line);
    if (cols.size() != 10) {
      ParseFail(source, line_no,
                "expected 10 tab-separated columns, found " +
                    std::to_string(cols.size()));
    }
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      if (last) break;
      continue;
    }
    std::size_t token_id = 0;
    if (!ParseSize(id, token_id) || token_id != pending.tokens.size() + 1) {
      ParseFail(source, line_no,
                "token ids must count up from 1, found \"" + std::string(id) +
                    "\"");
    }
    Token t;
    t.form = std::string(cols[1]);
    t.lemma = std::string(cols[2]);
    t.upos = std::string(cols[3]);
    if (!ParseSize(cols[6], t.head)) {
      ParseFail(source, line_no, "head must be a non-negative integer");
    }
    t.deprel = std::string(cols[7]);
    t.space_after = cols[9].find("SpaceAfter=No") == std::string_view::npos;
    if (pending.tokens.empty()) {
      pending.doc_id = doc_id;
      if (pending.first_line == 0) pending.first_line = line_no;
    }
    pending.tokens.push_back(std::move(t));
    pending.token_lines.push_back(line_no);
    if (last) break;
  }
  Finish(pending, source, index);
  return index;
}

AnnotationIndex ParseAnnotationFile(const std::string &path) {
  return ParseAnnotations(ReadFile(path), path);
}

SentenceAnnotation NaiveFallbackAnnotate(std::string_view sentence) {
  SentenceAnnotation out;
  const std::vector<RawToken> raw = Tokenize(sentence);
  const std::size_t n = raw.size();
  if (n == 0) return out;

  std::vector<std::string> lower(n);
  for (std::size_t i = 0; i < n; ++i) lower[i] = Lower(raw[i].form);

  // Pick the root (0-based here).
  std::optional<std::size_t> root;
  std::vector<std::size_t> aux_chain;
  for (std::size_t i = 0; i < n && !root; ++i) {
    if (!kAuxiliaries.contains(lower[i])) continue;
    std::size_t j = i + 1;
    std::vector<std::size_t> chain = {i};
    while (j < n && (kAdverbs.contains(lower[j]) ||
                     kAuxiliaries.contains(lower[j]))) {
      if (kAuxiliaries.contains(lower[j])) chain.push_back(j);
      ++j;
    }
    if (j < n && raw[j].word && LooksLikeVerb(lower[j])) {
      root = j;
      aux_chain = std::move(chain);
    } else {
      root = chain.back();
      chain.pop_back();
      aux_chain = std::move(chain);
    }
  }
  bool verb_root = root.has_value();
  if (!root) {
    for (std::size_t i = 1; i < n && !root; ++i) {
      if (raw[i].word && LooksLikeVerb(lower[i])) root = i;
    }
    verb_root = root.has_value();
  }
  if (!root) {
    // Verbless: first word token heads everything.
    for (std::size_t i = 0; i < n && !root; ++i) {
      if (raw[i].word) root = i;
    }
    if (!root) root = 0;
  }
  const std::size_t r = *root;

  out.tokens.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Token &t = out.tokens[i];
    t.form = raw[i].form;
    t.lemma = lower[i];
    t.space_after = raw[i].space_after;
    if (!raw[i].word) {
      t.upos = "PUNCT";
    } else if (std::all_of(lower[i].begin(), lower[i].end(), [](char c) {
                 return (c >= '0' && c <= '9') || c == ',' || c == '.';
               })) {
      t.upos = "NUM";
    } else if (kDeterminers.contains(lower[i])) {
      t.upos = "DET";
    } else if (kPrepositions.contains(lower[i])) {
      t.upos = "ADP";
    } else if (kConjunctions.contains(lower[i])) {
      t.upos = "CCONJ";
    } else if (kAdverbs.contains(lower[i])) {
      t.upos = "ADV";
    } else if (raw[i].form[0] >= 'A' && raw[i].form[0] <= 'Z') {
      t.upos = "PROPN";
    } else {
      t.upos = "NOUN";
    }
  }
  Token &root_token = out.tokens[r];
  if (verb_root) {
    root_token.upos = kAuxiliaries.contains(lower[r]) ? "AUX" : "VERB";
  }
  root_token.head = 0;
  root_token.deprel = "root";
  for (std::size_t a : aux_chain) {
    out.tokens[a].upos = "AUX";
    out.tokens[a].head = r + 1;
    out.tokens[a].deprel = "aux";
  }

  // Left of the root: the nearest word is the subject head, earlier words
  // attach to it.
  std::optional<std::size_t> subject;
  for (std::size_t i = r; i-- > 0;) {
    const bool is_aux = std::find(aux_chain.begin(), aux_chain.end(), i) !=
                        aux_chain.end();
    if (raw[i].word && !is_aux && out.tokens[i].upos != "ADV") {
      subject = i;
      break;
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    Token &t = out.tokens[i];
    if (t.deprel == "aux") continue;
    if (!raw[i].word) {
      t.head = r + 1;
      t.deprel = "punct";
    } else if (subject && i == *subject) {
      t.head = r + 1;
      t.deprel = "nsubj";
    } else if (subject && i < *subject) {
      t.head = *subject + 1;
      t.deprel = "compound";
    } else {
      t.head = r + 1;
      t.deprel = t.upos == "ADV" ? "advmod" : "dep";
    }
  }

  // Right of the root: a chain, each token attached to its left neighbour.
  // Trailing punctuation attaches to the root.
  std::size_t last_word = r;
  for (std::size_t i = r + 1; i < n; ++i) {
    if (raw[i].word) last_word = i;
  }
  std::optional<std::size_t> prev;
  for (std::size_t i = r + 1; i < n; ++i) {
    Token &t = out.tokens[i];
    if (i > last_word) {
      t.head = r + 1;
      t.deprel = "punct";
      continue;
    }
    if (!prev) {
      t.head = r + 1;
      t.deprel = t.upos == "ADP" ? "prep" : (raw[i].word ? "obj" : "punct");
      if (raw[i].word) prev = i;
      continue;
    }
    t.head = *prev + 1;
    t.deprel = raw[i].word ? "flat" : "punct:inner";
    prev = i;
  }
  return out;
}

std::vector<ExtractedTriple> ExtractTriples(
    const SentenceAnnotation &sentence) {
  std::vector<ExtractedTriple> out;
  for (std::size_t v = 1; v <= sentence.tokens.size(); ++v) {
    if (!IsPredicate(sentence, v)) continue;
    std::vector<std::size_t> subjects, objects;
    for (std::size_t dep : sentence.Dependents(v)) {
      const Token &t = sentence.tokens[dep - 1];
      if (ExcludedSpanRelations().contains(t.deprel) ||
          RelationModifiers().contains(t.deprel)) {
        continue;
      }
      if (dep < v && (IsNominalTag(t.upos) || t.deprel.starts_with("nsubj"))) {
        subjects.push_back(dep);
      } else if (dep > v && IsObjectCandidate(t)) {
        objects.push_back(dep);
      }
    }
    if (subjects.empty() || objects.empty()) continue;
    const std::string relation = RelationSpan(sentence, v);
    for (std::size_t s : subjects) {
      const bool core_subject =
          sentence.tokens[s - 1].deprel.starts_with("nsubj");
      const std::string head = ArgumentSpan(sentence, s);
      for (std::size_t o : objects) {
        ExtractedTriple t;
        t.step.head = Phrase(head);
        t.step.relation = Phrase(relation);
        t.step.tail = Phrase(ArgumentSpan(sentence, o));
        t.step.provenance = Provenance{sentence.locus.article_index,
                                       sentence.locus.sentence_index};
        t.confidence = core_subject ? 1.0 : 0.5;
        if (!t.step.head.empty() && !t.step.tail.empty()) {
          out.push_back(std::move(t));
        }
      }
    }
  }
  return out;
}

Derivation BaselineIe(const Instance &instance,
                      const AnnotationIndex &annotations,
                      const BaselineOptions &options,
                      std::vector<std::string> *warnings) {
  if (options.sf_only && !instance.supporting_fact_flags) {
    throw Error(ErrorCode::kInvalidArgument,
                "\"" + instance.question_id +
                    "\" has no supporting-fact flags; rerun without sf_only",
                instance.question_id);
  }
  Derivation out;
  SentenceAnnotation scratch;
  for (std::size_t a = 0; a < instance.articles.size(); ++a) {
    for (std::size_t s = 0; s < instance.articles[a].sentences.size(); ++s) {
      if (options.sf_only && !instance.IsSupportingFact(a, s)) continue;
      const SentenceAnnotation *parse =
          FindSentence(instance, annotations, {a, s}, options, scratch);
      SentenceAnnotation located = *parse;
      located.locus = {a, s};
      for (auto &t : options.extractor(located)) {
        t.step.provenance = Provenance{a, s};
        out.steps.push_back(std::move(t.step));
      }
    }
  }
  if (out.empty() && warnings != nullptr) {
    warnings->push_back(instance.question_id + ": ie extracted no triples");
  }
  return out;
}

Derivation BaselineCore(const Instance &instance,
                        const AnnotationIndex &annotations,
                        const BaselineOptions &options,
                        std::vector<std::string> *warnings) {
  auto warn = [&](std::size_t a, std::size_t s, const std::string &why) {
    if (warnings == nullptr) return;
    warnings->push_back(instance.question_id + " [" + std::to_string(a + 1) +
                        "," + std::to_string(s + 1) + "]: " + why);
  };
  const bool has_flags = instance.supporting_fact_flags.has_value();
  if (!has_flags && warnings != nullptr) {
    warnings->push_back(instance.question_id +
                        ": no supporting-fact flags; using every sentence");
  }
  Derivation out;
  SentenceAnnotation scratch;
  for (std::size_t a = 0; a < instance.articles.size(); ++a) {
    const std::string &title = instance.articles[a].title;
    for (std::size_t s = 0; s < instance.articles[a].sentences.size(); ++s) {
      if (has_flags && !instance.IsSupportingFact(a, s)) continue;
      const SentenceAnnotation *parse =
          FindSentence(instance, annotations, {a, s}, options, scratch);
      const std::size_t v = parse->root();
      if (v == 0) {
        warn(a, s, "empty parse");
        continue;
      }
      const Token &root = parse->tokens[v - 1];
      if (!IsVerbTag(root.upos)) {
        warn(a, s, "root \"" + root.form + "\" is not a verb");
        continue;
      }
      std::optional<std::size_t> child;
      for (std::size_t dep : parse->Dependents(v)) {
        const Token &t = parse->tokens[dep - 1];
        if (dep > v && !IsPunctTag(t.upos) && t.deprel != "punct") {
          child = dep;
          break;
        }
      }
      if (!child) {
        warn(a, s, "root verb has no right dependent");
        continue;
      }
      std::string tail;
      if (options.core_span == CoreSpan::kToken) {
        tail = parse->tokens[*child - 1].form;
      } else {
        std::vector<std::size_t> subtree;
        CollectSubtree(*parse, *child, /*prune=*/false, subtree);
        const auto [lo, hi] =
            std::minmax_element(subtree.begin(), subtree.end());
        std::size_t first = *lo, last = *hi;
        while (first < last && IsPunctTag(parse->tokens[first - 1].upos)) {
          ++first;
        }
        while (last > first && IsPunctTag(parse->tokens[last - 1].upos)) {
          --last;
        }
        tail = parse->Span(first, last);
      }
      if (NormalizeWhitespace(title).empty()) {
        warn(a, s, "article has no title");
        continue;
      }
      DerivationStep step;
      step.head = Phrase(title);
      step.relation = Phrase(root.form);
      step.tail = Phrase(tail);
      step.provenance = Provenance{a, s};
      out.steps.push_back(std::move(step));
    }
  }
  return out;
}

}  // namespace stepeval
