#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

#include "epibias/report_json.hpp"

using namespace epibias;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the CLI through the shell; `args` is appended verbatim.
Run cli(const std::string& args, const std::string& stdin_text = "") {
  static const auto dir = test::temp_dir("cli");
  const auto err_path = dir / "stderr.txt";
  std::string cmd = quote(EPIBIAS_CLI_PATH) + " --data-dir " + quote(test::data_dir().string()) + " " + args +
                    " 2>" + quote(err_path.string());
  if (!stdin_text.empty()) {
    std::ofstream(dir / "stdin.txt", std::ios::binary) << stdin_text;
    cmd += " <" + quote((dir / "stdin.txt").string());
  }
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

const std::string kTopGun = "Kate Middleton Wore a Bardot Dress to the 'Top Gun' Premiere";

}  // namespace

TEST_CASE("analyze prints the library's report") {
  const Run r = cli("analyze " + quote(kTopGun) + " --subject Kate");
  REQUIRE(r.code == 0);
  const AnalysisReport direct = analyze_sentence(kTopGun, std::string("Kate"), *test::golden_engine());
  CHECK(r.out == to_json(direct).dump() + "\n");
}

TEST_CASE("analyze reads stdin and pretty-prints") {
  const Run r = cli("analyze - --pretty", kTopGun + "\n");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("[[Top]]") != std::string::npos);
  CHECK(r.out == to_pretty_text(analyze_sentence(kTopGun, std::nullopt, *test::golden_engine())));
}

TEST_CASE("exit codes") {
  const Run short_text = cli("analyze 'Hi there'");
  CHECK(short_text.code == 2);
  CHECK(short_text.out.empty());
  CHECK(short_text.err.find("error: NotEnoughContext [gate]") != std::string::npos);

  const Run unseen = cli("analyze 'A sentence nobody recorded answers for'");
  CHECK(unseen.code == 1);
  CHECK(unseen.err.find("error: BackendUnavailable [tag]") != std::string::npos);

  CHECK(cli("analyze").code == 1);
  CHECK(cli("no-such-command").code == 1);
  CHECK(cli("analyze x --pretty --json").code == 1);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("batch over the golden texts reproduces the golden reports") {
  const Run r = cli("batch --texts " + quote((test::golden_dir() / "texts.jsonl").string()) + " --workers 3");
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(test::golden_dir() / "reports.jsonl"));
  CHECK(r.err.find("20 report(s), 0 failure(s)") != std::string::npos);
}

TEST_CASE("breakdown of the golden reports") {
  const Run r = cli("breakdown --in " + quote((test::golden_dir() / "reports.jsonl").string()) +
                    " --subjects Meghan,Kate");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out) == json::parse(slurp(test::golden_dir() / "breakdown.json")));
  CHECK(cli("breakdown --in " + quote((test::golden_dir() / "reports.jsonl").string()) + " --subjects Meghan").code ==
        1);
}

TEST_CASE("crawl from recorded responses is idempotent") {
  const auto dir = test::temp_dir("cli-crawl");
  const auto topics = (test::data_dir() / "topics.txt").string();
  const auto mock = (dir / "mock.json").string();
  const auto store = (dir / "docs.jsonl").string();
  REQUIRE(cli("fixtures search --topics-file " + quote(topics) + " --out " + quote(mock)).code == 0);

  const Run first = cli("crawl --topics-file " + quote(topics) + " --mock " + quote(mock) + " --store " + quote(store));
  REQUIRE(first.code == 0);
  const json s1 = json::parse(first.out);
  CHECK(s1["topics"].size() == 28);
  CHECK(s1["written"] == s1["documents"]);
  CHECK(s1["duplicates"].get<int>() > 0);
  const std::string bytes = slurp(store);

  const Run second = cli("crawl --topics-file " + quote(topics) + " --mock " + quote(mock) + " --store " + quote(store));
  REQUIRE(second.code == 0);
  CHECK(json::parse(second.out)["written"] == 0);
  CHECK(slurp(store) == bytes);

  const Run batch = cli("batch --store " + quote(store) + " --out " + quote((dir / "r.jsonl").string()));
  CHECK(batch.code == 0);  // headlines without fixtures are reported as failures, not a crash
  std::filesystem::remove_all(dir);
}

TEST_CASE("lexicon and fixture tools") {
  const Run gifted = cli("lexicon gifted");
  REQUIRE(gifted.code == 0);
  CHECK(json::parse(gifted.out)["bias_types"] == json{"positive", "subjectives"});
  CHECK(cli("lexicon gifted --pos NOPE").code == 1);

  const Run weights = cli("fixtures weights");
  REQUIRE(weights.code == 0);
  CHECK(weights.out == slurp(test::data_dir() / "weights" / "scorer_weights.json"));

  const auto dir = test::temp_dir("cli-synth");
  REQUIRE(cli("fixtures synth --specs " + quote((test::golden_dir() / "headlines.json").string()) + " --out " +
              quote(dir.string()))
              .code == 0);
  for (const char* f : {"token_embeddings.jsonl", "sentence_embeddings.jsonl", "generators.jsonl", "polarity.jsonl"})
    CHECK(slurp(dir / f) == slurp(test::data_dir() / "fixtures" / f));
  std::filesystem::remove_all(dir);
}
