// pulsemine: command-line driver for the ingest -> detect -> classify -> report
// pipeline. Exit codes: 0 success, 1 usage error, 2 data or configuration error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pulsemine/analytics.hpp"
#include "pulsemine/brown.hpp"
#include "pulsemine/classifier.hpp"
#include "pulsemine/docstore.hpp"
#include "pulsemine/entitykb.hpp"
#include "pulsemine/kernels.hpp"
#include "pulsemine/skipgram.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace pulsemine;

namespace {

struct Options {
  std::string source, heuristics, store, kb, entity, out, lexicon, model, brown, embeddings;
  std::string data, corpus, method = "lexicon", format = "csv", bucket = "day", mode = "full_batch";
  std::string annotations, before, after, terms, brown_prefixes = "2,4,6,8";
  std::uint64_t seed = 1;
  std::size_t clusters = 50;
  SkipGramParams sg;
  TrainingParams tp;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void emit(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  auto out = open_out(path);
  out << bytes;
  if (!out) throw IoError("write failed: " + path);
}

Corpus read_corpus(const Options& o) {
  Corpus corpus;
  if (!o.corpus.empty()) {
    std::ifstream in(o.corpus);
    if (!in) throw ConfigError("cannot open corpus " + o.corpus);
    std::string line;
    while (std::getline(in, line)) {
      auto toks = normalize_surfaces(line);
      if (!toks.empty()) corpus.push_back(std::move(toks));
    }
  } else if (!o.store.empty()) {
    for (const auto& d : DocumentStore::open_readonly(o.store).scan_all()) {
      auto toks = normalize_surfaces(d.text);
      if (!toks.empty()) corpus.push_back(std::move(toks));
    }
  } else {
    throw ConfigError("give --corpus or --store");
  }
  return corpus;
}

std::vector<std::size_t> parse_prefixes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    std::size_t v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != item.size() || v == 0) throw ConfigError("bad brown prefix list '" + text + "'");
    out.push_back(v);
  }
  if (!std::is_sorted(out.begin(), out.end())) throw ConfigError("brown prefixes must be sorted");
  return out;
}

std::string default_annotations(const Options& o) {
  return o.annotations.empty() ? (fs::path(o.store) / "annotations.jsonl").string() : o.annotations;
}

std::string annotation_line(const SentimentAnnotation& a) {
  ordered_json j;
  j["doc_id"] = a.doc_id;
  j["label"] = label_name(a.label);
  j["probs"] = a.probs;
  j["method"] = method_name(a.method);
  return j.dump();
}

std::vector<SentimentAnnotation> read_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open annotations " + path);
  std::vector<SentimentAnnotation> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      SentimentAnnotation a;
      a.doc_id = j.at("doc_id").get<std::string>();
      a.label = parse_label(j.at("label").get<std::string>());
      a.probs = j.at("probs").get<Probs>();
      a.method = parse_method(j.at("method").get<std::string>());
      out.push_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// "YYYY-MM-DD" is that UTC day; otherwise "FROM/TO" with instants or dates.
Window parse_window(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    const Instant day = parse_instant_or_date(text);
    if (text.size() != 10) throw ConfigError("window '" + text + "' must be a date or FROM/TO");
    return {day, Instant{day.seconds + kSecondsPerDay}};
  }
  Window w{parse_instant_or_date(text.substr(0, slash)), parse_instant_or_date(text.substr(slash + 1))};
  if (w.from > w.to) throw RangeError("window '" + text + "' is inverted");
  return w;
}

std::vector<std::string> split_terms(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required option ") + flag);
}

// --- subcommands -------------------------------------------------------------------

int cmd_ingest(const Options& o) {
  const auto heuristics = load_heuristics(o.heuristics);
  auto store = DocumentStore::open(o.store);
  std::ifstream file;
  std::istream* in = &std::cin;
  if (o.source != "-") {
    file.open(o.source);
    if (!file) throw ConfigError("cannot open source " + o.source);
    in = &file;
  }
  IngestStats stats;
  try {
    stats = ingest(*in, heuristics, store, &std::cerr);
  } catch (const IngestAborted& e) {
    std::cerr << "ingest aborted after read=" << e.stats().read << " accepted=" << e.stats().accepted
              << ": " << e.what() << "\n";
    return 2;
  }
  store.flush();
  ordered_json j;
  j["read"] = stats.read;
  j["accepted"] = stats.accepted;
  j["duplicates"] = stats.duplicates;
  j["rejected"] = stats.rejected;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_detect(const Options& o) {
  const auto store = DocumentStore::open_readonly(o.store);
  const auto kb = KnowledgeBase::load(o.kb);
  if (!o.entity.empty() && kb.find(o.entity) == nullptr) {
    throw ConfigError("unknown entity '" + o.entity + "'");
  }
  const SurfaceFormMatcher matcher(kb);
  std::string out;
  for (const auto& doc : store.scan_all()) {
    for (const auto& m : resolve_mentions(normalize_surfaces(doc.text), matcher, kb, doc.id)) {
      if (!o.entity.empty() &&
          std::find(m.candidates.begin(), m.candidates.end(), o.entity) == m.candidates.end()) {
        continue;
      }
      ordered_json j;
      j["doc_id"] = m.doc_id;
      j["start"] = m.start;
      j["end"] = m.end;
      std::string surface;
      for (const auto& t : m.surface) surface += (surface.empty() ? "" : " ") + t;
      j["surface"] = surface;
      j["candidates"] = m.candidates;
      j["resolved"] = m.resolved ? ordered_json(*m.resolved) : ordered_json(nullptr);
      j["confidence"] = m.confidence;
      out += j.dump() + "\n";
    }
  }
  emit(o.out, out);
  return 0;
}

int cmd_train_brown(const Options& o) {
  require(o.out, "--out");
  const auto h = brown_cluster(read_corpus(o), o.clusters);
  save_brown(h, o.out);
  return 0;
}

int cmd_train_embeddings(const Options& o) {
  require(o.out, "--out");
  SkipGramParams p = o.sg;
  p.seed = o.seed;
  save_embeddings(train_skipgram(read_corpus(o), p), o.out);
  return 0;
}

int cmd_train(const Options& o) {
  require(o.data, "--data");
  require(o.out, "--out");
  const auto dataset = load_labeled_dataset(o.data);
  TrainingParams p = o.tp;
  p.seed = o.seed;
  if (o.mode == "full_batch") {
    p.mode = TrainMode::full_batch;
  } else if (o.mode == "sgd") {
    p.mode = TrainMode::sgd;
  } else {
    throw ConfigError("unknown mode '" + o.mode + "'");
  }
  std::optional<BrownHierarchy> brown;
  std::optional<EmbeddingTable> emb;
  if (!o.brown.empty()) brown = load_brown(o.brown);
  if (!o.embeddings.empty()) emb = load_embeddings(o.embeddings);
  const auto result = train_classifier(dataset, p, brown ? &*brown : nullptr,
                                       emb ? &*emb : nullptr, parse_prefixes(o.brown_prefixes));
  save_model(result.model, o.out);
  std::cerr << "trained on " << dataset.size() << " examples, final loss "
            << result.loss_history.back() << "\n";
  return 0;
}

int cmd_classify(const Options& o) {
  require(o.kb, "--kb");
  require(o.entity, "--entity");
  const auto store = DocumentStore::open_readonly(o.store);
  const auto kb = KnowledgeBase::load(o.kb);
  const SurfaceFormMatcher matcher(kb);

  ClassifierConfig config;
  config.method = parse_method(o.method);
  std::optional<Lexicon> lexicon;
  std::optional<LinearModel> model;
  std::optional<BrownHierarchy> brown;
  std::optional<EmbeddingTable> emb;
  if (!o.lexicon.empty()) config.lexicon = &lexicon.emplace(load_lexicon(o.lexicon));
  if (!o.model.empty()) config.model = &model.emplace(load_model(o.model));
  if (!o.brown.empty()) config.brown = &brown.emplace(load_brown(o.brown));
  if (!o.embeddings.empty()) config.embeddings = &emb.emplace(load_embeddings(o.embeddings));
  validate(config);

  const auto docs = store.scan_all();
  const auto relevant = kernels::relevance(docs, o.entity, kb, matcher, Exec::parallel);
  std::vector<Document> selected;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (relevant[i]) selected.push_back(docs[i]);
  }
  std::string out;
  for (const auto& a : kernels::classify(selected, config, Exec::parallel)) {
    out += annotation_line(a) + "\n";
  }
  const std::string path = o.out.empty() ? default_annotations(o) : o.out;
  emit(path, out);
  std::cerr << "classified " << selected.size() << " of " << docs.size() << " documents\n";
  return 0;
}

int cmd_report(const std::string& kind, const Options& o) {
  const auto store = DocumentStore::open_readonly(o.store);
  const Format format = parse_format(o.format);
  const Bucket bucket = parse_bucket(o.bucket);
  const auto docs = store.scan_all();

  if (kind == "volume") {
    require(o.kb, "--kb");
    require(o.entity, "--entity");
    const auto kb = KnowledgeBase::load(o.kb);
    const SurfaceFormMatcher matcher(kb);
    const auto relevant = kernels::relevance(docs, o.entity, kb, matcher, Exec::parallel);
    emit(o.out, render_report(volume_series(docs, relevant, o.entity, bucket), format));
    return 0;
  }

  const auto annotations = read_annotations(default_annotations(o));
  if (kind == "shares") {
    emit(o.out, render_report(shares_by_bucket(docs, annotations, bucket), format));
    return 0;
  }
  if (kind == "delta") {
    Window before, after;
    if (o.before.empty() || o.after.empty()) {
      const auto table = shares_by_bucket(docs, annotations, Bucket::day);
      if (table.rows.size() < 2) throw EmptyWindow("delta needs two days with annotations");
      before = table.rows.front().window;
      after = table.rows.back().window;
    }
    if (!o.before.empty()) before = parse_window(o.before);
    if (!o.after.empty()) after = parse_window(o.after);
    const auto b = polarity_share(annotations_in_window(docs, annotations, before), before);
    const auto a = polarity_share(annotations_in_window(docs, annotations, after), after);
    emit(o.out, render_report(share_delta(b, a), format));
    return 0;
  }
  // aspects
  require(o.terms, "--terms");
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : docs) by_id.emplace(d.id, &d);
  std::vector<std::vector<std::string>> tokens;
  std::vector<SentimentAnnotation> kept;
  for (const auto& a : annotations) {
    auto it = by_id.find(a.doc_id);
    if (it == by_id.end()) continue;
    tokens.push_back(normalize_surfaces(it->second->text));
    kept.push_back(a);
  }
  const auto terms = split_terms(o.terms);
  emit(o.out, render_report(aspect_report(tokens, kept, terms), format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulsemine: social-media opinion mining pipeline"};
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "Collect documents matching extraction heuristics");
  ingest->add_option("--source", o.source, "JSONL source file ('-' for stdin)")->required();
  ingest->add_option("--heuristics", o.heuristics, "Heuristics JSON file")->required();
  ingest->add_option("--store", o.store, "Store directory")->required();

  auto* detect = app.add_subcommand("detect", "Detect and disambiguate entity mentions");
  detect->add_option("--store", o.store)->required();
  detect->add_option("--kb", o.kb, "Knowledge base JSON")->required();
  detect->add_option("--entity", o.entity, "Only mentions that may refer to this entity");
  detect->add_option("--out", o.out, "Mentions JSONL (default stdout)");

  auto* brown = app.add_subcommand("train-brown", "Learn Brown clusters");
  brown->add_option("--corpus", o.corpus, "Text corpus, one document per line");
  brown->add_option("--store", o.store, "Use stored documents as the corpus");
  brown->add_option("--clusters", o.clusters, "Cluster count for the merge log")->check(CLI::PositiveNumber);
  brown->add_option("--out", o.out)->required();
  brown->add_option("--seed", o.seed, "Accepted for uniformity; clustering is deterministic");

  auto* emb = app.add_subcommand("train-embeddings", "Learn skip-gram embeddings");
  emb->add_option("--corpus", o.corpus);
  emb->add_option("--store", o.store);
  emb->add_option("--out", o.out)->required();
  emb->add_option("--dim", o.sg.dim)->check(CLI::PositiveNumber);
  emb->add_option("--window", o.sg.window);
  emb->add_option("--negatives", o.sg.negatives);
  emb->add_option("--epochs", o.sg.epochs);
  emb->add_option("--lr", o.sg.learning_rate);
  emb->add_option("--seed", o.seed);

  auto* train = app.add_subcommand("train", "Train the sentiment classifier");
  train->add_option("--data", o.data, "Labeled TSV (label<TAB>text)")->required();
  train->add_option("--out", o.out)->required();
  train->add_option("--seed", o.seed);
  train->add_option("--l2", o.tp.l2);
  train->add_option("--epochs", o.tp.epochs);
  train->add_option("--lr", o.tp.learning_rate);
  train->add_option("--mode", o.mode)->check(CLI::IsMember({"full_batch", "sgd"}));
  train->add_option("--brown", o.brown, "Brown clusters file");
  train->add_option("--brown-prefixes", o.brown_prefixes);
  train->add_option("--embeddings", o.embeddings, "Embedding file");

  auto* classify = app.add_subcommand("classify", "Annotate relevant documents with sentiment");
  classify->add_option("--method", o.method)->check(CLI::IsMember({"lexicon", "classifier"}));
  classify->add_option("--lexicon", o.lexicon);
  classify->add_option("--model", o.model);
  classify->add_option("--brown", o.brown);
  classify->add_option("--embeddings", o.embeddings);
  classify->add_option("--store", o.store)->required();
  classify->add_option("--kb", o.kb);
  classify->add_option("--entity", o.entity);
  classify->add_option("--out", o.out, "Annotations JSONL (default <store>/annotations.jsonl)");
  classify->add_option("--seed", o.seed);

  auto* report = app.add_subcommand("report", "Aggregate into volume, share, delta or aspect reports");
  report->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> kinds;
  for (const char* kind : {"volume", "shares", "delta", "aspects"}) {
    auto* sub = report->add_subcommand(kind);
    sub->add_option("--store", o.store)->required();
    sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json", "svg"}));
    sub->add_option("--bucket", o.bucket)->check(CLI::IsMember({"day", "hour"}));
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--kb", o.kb);
    sub->add_option("--entity", o.entity);
    sub->add_option("--annotations", o.annotations);
    if (std::string(kind) == "delta") {
      sub->add_option("--before", o.before, "YYYY-MM-DD or FROM/TO");
      sub->add_option("--after", o.after, "YYYY-MM-DD or FROM/TO");
    }
    if (std::string(kind) == "aspects") sub->add_option("--terms", o.terms, "Comma-separated terms");
    kinds.emplace_back(kind, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*ingest) return cmd_ingest(o);
    if (*detect) return cmd_detect(o);
    if (*brown) return cmd_train_brown(o);
    if (*emb) return cmd_train_embeddings(o);
    if (*train) return cmd_train(o);
    if (*classify) return cmd_classify(o);
    for (const auto& [kind, sub] : kinds) {
      if (*sub) return cmd_report(kind, o);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
