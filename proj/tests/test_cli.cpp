#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using testsupport::fixture;
using testsupport::run_cli;
using testsupport::slurp;
using testsupport::TempDir;

namespace {

std::vector<nlohmann::json> jsonl(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

struct Pipeline {
  TempDir dir{"pm-cli"};
  std::string store = (dir / "store").string();

  Pipeline() {
    const auto r = run_cli({"ingest", "--source", fixture("uber_tweets.jsonl").string(), "--heuristics",
                            fixture("heuristics.json").string(), "--store", store});
    REQUIRE(r.exit_code == 0);
    const auto stats = nlohmann::json::parse(r.out);
    CHECK(stats.at("read") == 452);
    CHECK(stats.at("accepted") == 427);
    CHECK(stats.at("duplicates") == 3);
    CHECK(stats.at("rejected") == 22);
  }
};

}  // namespace

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli({}).exit_code == 1);
  CHECK(run_cli({"frobnicate"}).exit_code == 1);
  CHECK(run_cli({"ingest", "--source", "x"}).exit_code == 1);
  CHECK(run_cli({"train", "--data", "x", "--out", "y", "--bogus"}).exit_code == 1);
  CHECK(run_cli({"train", "--data", "x", "--out", "y", "--seed", "-3"}).exit_code == 1);
  CHECK(run_cli({"report", "volume", "--store", "s", "--format", "xml"}).exit_code == 1);
  CHECK(run_cli({"report"}).exit_code == 1);
  const auto help = run_cli({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("ingest") != std::string::npos);
}

TEST_CASE("data and configuration errors exit 2 with a diagnostic") {
  TempDir dir;
  const auto err = dir / "err.txt";
  CHECK(run_cli({"ingest", "--source", "/nonexistent.jsonl", "--heuristics", fixture("heuristics.json").string(),
                 "--store", (dir / "s").string()}, err).exit_code == 2);
  CHECK(slurp(err).find("error") != std::string::npos);
  testsupport::spit(dir / "h.json", "{}");
  CHECK(run_cli({"ingest", "--source", fixture("uber_tweets.jsonl").string(), "--heuristics",
                 (dir / "h.json").string(), "--store", (dir / "s").string()}).exit_code == 2);
  CHECK(run_cli({"train", "--data", "/nonexistent.tsv", "--out", (dir / "m").string()}).exit_code == 2);
  CHECK(run_cli({"report", "volume", "--store", (dir / "missing").string(), "--kb",
                 fixture("kb.json").string(), "--entity", "uber"}).exit_code == 2);
  CHECK(run_cli({"train-brown", "--corpus", fixture("planted_corpus.txt").string(), "--clusters", "1000",
                 "--out", (dir / "b").string()}).exit_code == 2);
}

TEST_CASE("full pipeline through the CLI") {
  Pipeline p;
  const std::string kb = fixture("kb.json").string();

  const auto again = run_cli({"ingest", "--source", fixture("uber_tweets.jsonl").string(), "--heuristics",
                              fixture("heuristics.json").string(), "--store", p.store});
  CHECK(nlohmann::json::parse(again.out).at("accepted") == 0);

  const auto detect = run_cli({"detect", "--store", p.store, "--kb", kb, "--entity", "uber"});
  REQUIRE(detect.exit_code == 0);
  const auto mentions = jsonl(detect.out);
  CHECK(mentions.size() >= 427);
  for (const auto& m : mentions) {
    CHECK(m.at("resolved") == "uber");
    CHECK(m.at("confidence") == 1.0);
    CHECK(m.at("end").get<int>() > m.at("start").get<int>());
  }
  CHECK(run_cli({"detect", "--store", p.store, "--kb", kb, "--entity", "lyft"}).exit_code == 2);

  const auto volume = run_cli({"report", "volume", "--entity", "uber", "--bucket", "day", "--store", p.store,
                               "--kb", kb, "--format", "csv"});
  REQUIRE(volume.exit_code == 0);
  CHECK(volume.out == "bucket_start,count\n2016-04-28T00:00:00Z,247\n2016-04-30T00:00:00Z,180\n");

  REQUIRE(run_cli({"classify", "--method", "lexicon", "--lexicon", fixture("lexicon.tsv").string(), "--store",
                   p.store, "--kb", kb, "--entity", "uber"}).exit_code == 0);
  const auto annotations = jsonl(slurp(std::filesystem::path(p.store) / "annotations.jsonl"));
  CHECK(annotations.size() == 427);
  for (const auto& a : annotations) {
    CHECK(a.at("method") == "lexicon");
    CHECK(a.at("probs").size() == 3);
  }

  const auto delta = run_cli({"report", "delta", "--store", p.store, "--format", "json", "--before", "2016-04-28",
                              "--after", "2016-04-30"});
  REQUIRE(delta.exit_code == 0);
  const auto d = nlohmann::json::parse(delta.out);
  CHECK(d.at("rounded") == nlohmann::json::parse(R"({"positive":-3,"negative":-1,"neutral":3})"));
  CHECK(std::abs(d.at("exact").at("positive").get<double>() + 2.643) < 1e-3);
  const auto implicit = run_cli({"report", "delta", "--store", p.store, "--format", "json"});
  CHECK(implicit.out == delta.out);
  CHECK(run_cli({"report", "delta", "--store", p.store, "--before", "2016-04-29", "--after", "2016-04-30"})
            .exit_code == 2);
  CHECK(run_cli({"report", "delta", "--store", p.store, "--before", "2016-04-30T00:00:00Z/2016-04-28T00:00:00Z",
                 "--after", "2016-04-30"}).exit_code == 2);

  const auto shares = run_cli({"report", "shares", "--store", p.store});
  CHECK(shares.out.find("2016-04-28T00:00:00Z,2016-04-29T00:00:00Z,247,33.198,19.433,47.368") != std::string::npos);
  const auto svg = run_cli({"report", "shares", "--store", p.store, "--format", "svg"});
  CHECK(svg.out.rfind("<svg", 0) == 0);
  CHECK(run_cli({"report", "delta", "--store", p.store, "--format", "svg"}).exit_code == 2);

  const auto aspects = run_cli({"report", "aspects", "--store", p.store, "--terms", "taxistas,motorista"});
  REQUIRE(aspects.exit_code == 0);
  CHECK(aspects.out.rfind("term,mentions,positive,negative,neutral\ntaxistas,", 0) == 0);

  const auto out_file = (p.dir / "vol.json").string();
  CHECK(run_cli({"report", "volume", "--store", p.store, "--kb", kb, "--entity", "uber", "--format", "json",
                 "--out", out_file}).exit_code == 0);
  CHECK(nlohmann::json::parse(slurp(out_file)).is_object());
}

TEST_CASE("training commands are deterministic per seed") {
  TempDir dir;
  auto train = [&](const std::string& name, const std::string& seed) {
    const auto out = (dir / name).string();
    REQUIRE(run_cli({"train", "--data", fixture("labeled.tsv").string(), "--seed", seed, "--mode", "sgd",
                     "--epochs", "20", "--out", out}).exit_code == 0);
    return slurp(out);
  };
  CHECK(train("a", "7") == train("b", "7"));
  CHECK(train("c", "7") != train("d", "8"));

  auto emb = [&](const std::string& name) {
    const auto out = (dir / name).string();
    REQUIRE(run_cli({"train-embeddings", "--corpus", fixture("planted_corpus.txt").string(), "--seed", "42",
                     "--epochs", "2", "--out", out}).exit_code == 0);
    return slurp(out);
  };
  CHECK(emb("e1") == emb("e2"));

  auto brown = [&](const std::string& name) {
    const auto out = (dir / name).string();
    REQUIRE(run_cli({"train-brown", "--corpus", fixture("planted_corpus.txt").string(), "--clusters", "4",
                     "--out", out}).exit_code == 0);
    return slurp(out);
  };
  CHECK(brown("b1") == brown("b2"));
}

TEST_CASE("classifier method with brown and embedding features") {
  Pipeline p;
  const auto d = p.dir.path();
  REQUIRE(run_cli({"train-brown", "--store", p.store, "--clusters", "8", "--out", (d / "brown.tsv").string()})
              .exit_code == 0);
  REQUIRE(run_cli({"train-embeddings", "--store", p.store, "--dim", "8", "--epochs", "1", "--out",
                   (d / "emb.txt").string()}).exit_code == 0);
  REQUIRE(run_cli({"train", "--data", fixture("labeled.tsv").string(), "--brown", (d / "brown.tsv").string(),
                   "--embeddings", (d / "emb.txt").string(), "--out", (d / "model.txt").string()}).exit_code == 0);
  const std::vector<std::string> base = {"classify", "--method", "classifier", "--model", (d / "model.txt").string(),
                                         "--store", p.store, "--kb", fixture("kb.json").string(), "--entity", "uber",
                                         "--out", (d / "ann.jsonl").string()};
  CHECK(run_cli(base).exit_code == 2);  // the model needs its brown and embedding files
  auto full = base;
  full.insert(full.end(), {"--brown", (d / "brown.tsv").string(), "--embeddings", (d / "emb.txt").string()});
  REQUIRE(run_cli(full).exit_code == 0);
  const auto ann = jsonl(slurp(d / "ann.jsonl"));
  CHECK(ann.size() == 427);
  for (const auto& a : ann) {
    const auto probs = a.at("probs").get<std::vector<double>>();
    CHECK(probs[0] + probs[1] + probs[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.at("method") == "classifier");
  }
}

TEST_CASE("ingest reads standard input") {
  TempDir dir;
  const std::string cmd = testsupport::shell_quote(PULSEMINE_CLI) + " ingest --source - --heuristics " +
                          testsupport::shell_quote(fixture("heuristics.json").string()) + " --store " +
                          testsupport::shell_quote((dir / "s").string()) + " < " +
                          testsupport::shell_quote(fixture("uber_tweets.jsonl").string()) + " > " +
                          testsupport::shell_quote((dir / "out").string()) + " 2>/dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(nlohmann::json::parse(slurp(dir / "out")).at("accepted") == 427);
}
