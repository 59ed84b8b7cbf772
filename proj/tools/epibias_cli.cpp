#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "epibias/analysis.hpp"
#include "epibias/config.hpp"
#include "epibias/error.hpp"
#include "epibias/fixtures.hpp"
#include "epibias/ingest.hpp"
#include "epibias/report_json.hpp"
#include "epibias/server.hpp"

namespace {

using namespace epibias;
using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitNotEnoughContext = 2;

struct Globals {
  std::string config_path;
  std::string data_dir;
  std::string log_level = "warn";
};

Config load_config(const Globals& g) {
  const std::filesystem::path data = g.data_dir.empty() ? default_data_dir() : std::filesystem::path(g.data_dir);
  return g.config_path.empty() ? Config::defaults(data) : Config::load(g.config_path, data);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string(), "cli");
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path, "cli");
  out << text;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, ',');)
    if (!part.empty()) out.push_back(part);
  return out;
}

// {"text", "subject"?} per line.
std::vector<SentenceInput> read_texts(const std::filesystem::path& path) {
  std::vector<SentenceInput> out;
  std::istringstream in(read_file(path));
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      SentenceInput item{j.at("text").get<std::string>(), std::nullopt};
      if (j.contains("subject") && !j["subject"].is_null()) item.subject = j["subject"].get<std::string>();
      out.push_back(std::move(item));
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": " + ex.what(),
                  "cli");
    }
  }
  return out;
}

int run_analyze(const Globals& g, std::string text, const std::string& subject, bool pretty) {
  if (text == "-") text.assign(std::istreambuf_iterator<char>(std::cin), {});
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  const Engine engine = Engine::from_config(load_config(g));
  const AnalysisReport r =
      analyze_sentence(text, subject.empty() ? std::nullopt : std::optional(subject), engine);
  std::cout << (pretty ? to_pretty_text(r) : to_json(r).dump() + "\n");
  return 0;
}

struct CrawlArgs {
  std::string topics_file;
  std::string mock;
  std::string store = "documents.jsonl";
  std::size_t limit = 100;
  int max_age = 31;
  std::size_t parallelism = 0;
};

int run_crawl(const Globals& g, const CrawlArgs& a) {
  const Config config = load_config(g);
  const std::vector<std::string> topics = load_topics(a.topics_file);
  CrawlOptions options;
  options.per_topic_limit = a.limit;
  options.max_age_days = a.max_age;
  options.parallelism = a.parallelism ? a.parallelism : config.search.parallelism;
  std::unique_ptr<SearchClient> client;
  if (!a.mock.empty()) {
    client = std::make_unique<MockSearchClient>(MockSearchClient::load(a.mock));
  } else {
    if (config.search.endpoint.empty())
      throw Error(ErrorCode::ConfigError, "no search endpoint: set search.endpoint in the config or pass --mock",
                  "cli");
    client = std::make_unique<HttpSearchClient>(
        HttpSearchClient::from_env(config.search.endpoint, config.search.api_key_env));
    options.requests_per_second = config.search.requests_per_second;
  }
  const CrawlResult result = crawl(topics, options, *client);
  DocumentStore store(a.store);
  const std::size_t written = store.put_all(result.documents);
  json summary = to_json(result);
  summary["written"] = written;
  summary["store"] = a.store;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int run_batch(const Globals& g, const std::string& store, const std::string& texts,
              const std::string& out, std::size_t workers) {
  std::vector<SentenceInput> inputs;
  if (!texts.empty()) {
    inputs = read_texts(texts);
  } else {
    const DocumentStore::ReadResult docs = DocumentStore::read(store);
    if (docs.corrupt) spdlog::warn("{}: skipped {} corrupt record(s)", store, docs.corrupt);
    for (const Document& d : docs.documents) inputs.push_back({d.headline, d.subject});
  }
  const Engine engine = Engine::from_config(load_config(g));
  const BatchOutcome outcome = analyze_batch(inputs, engine, workers);
  for (const BatchFailure& f : outcome.failures)
    std::cerr << "item " << f.index << ": " << to_string(f.error.code()) << ": " << f.error.what() << "\n";
  write_output(out, to_jsonl(outcome.reports));
  std::cerr << outcome.reports.size() << " report(s), " << outcome.failures.size() << " failure(s)\n";
  return 0;
}

int run_breakdown(const std::string& in, const std::string& subjects, double margin,
                  const std::string& out) {
  const std::vector<std::string> names = split_csv(subjects);
  if (names.size() != 2)
    throw Error(ErrorCode::BadRequest, "--subjects must name two subjects, e.g. Meghan,Kate", "cli");
  const std::vector<AnalysisReport> reports = reports_from_jsonl(read_file(in));
  write_output(out, breakdown_document(reports, names[0], names[1], margin).dump(2) + "\n");
  return 0;
}

int run_serve(const Globals& g, std::string host, int port) {
  const Config config = load_config(g);
  auto engine = std::make_shared<const Engine>(Engine::from_config(config));
  std::shared_ptr<DocumentStore> documents;
  if (!config.documents.empty() && std::filesystem::exists(config.documents))
    documents = std::make_shared<DocumentStore>(config.documents);
  ServerConfig server = config.server;
  if (!host.empty()) server.host = host;
  if (port > 0) server.port = port;
  ApiServer api(engine, documents, server);
  if (!api.listen(server.host, server.port))
    throw Error(ErrorCode::IoError, "cannot listen on " + server.host + ":" + std::to_string(server.port),
                "cli");
  return 0;
}

int run_lexicon(const Globals& g, const std::string& word, const std::string& pos) {
  const Config config = load_config(g);
  const LexiconStore lexicon = LexiconStore::load(config.lexicon);
  std::optional<PosTag> tag;
  if (!pos.empty()) {
    tag = parse_pos_tag(pos);
    if (!tag) throw Error(ErrorCode::BadRequest, "unknown POS tag " + pos, "cli");
  }
  std::cout << to_json(lexicon.lookup(word, tag)).dump() << "\n";
  return 0;
}

int run_fixtures_synth(const Globals& g, const std::string& specs_path, const std::string& out) {
  const Config config = load_config(g);
  const LexiconStore lexicon = LexiconStore::load(config.lexicon);
  const ScorerWeights weights = ScorerWeights::load(config.weights);
  const StopWords stopwords =
      config.stopwords.empty() ? StopWords::builtin() : StopWords::load(config.stopwords);
  SynthesisOptions options;
  options.token_model_id = config.tagger.model_id;
  options.sentence_model_id = config.stereotypes.sentence_model_id;
  const FixtureSet set = synthesize_fixtures(load_sentence_specs(specs_path), lexicon, weights,
                                             RulePosBackend{}, stopwords, options);
  set.save(out);
  std::cerr << set.size() << " fixture record(s) written to " << out << "\n";
  return 0;
}

int run_fixtures_weights(const std::string& out, std::size_t d_h, std::size_t d_b, const std::string& seed) {
  write_output(out, synthesize_weights(d_h, d_b, seed).to_json() + "\n");
  return 0;
}

int run_fixtures_search(const std::string& topics_file, std::size_t per_topic, const std::string& now,
                        int max_age, const std::string& seed, const std::string& out) {
  const MockSearchClient client = synthesize_search_responses(
      load_topics(topics_file), per_topic, parse_timestamp(now), max_age, seed);
  write_output(out, client.to_json().dump(1) + "\n");
  return 0;
}

int report_error(const Error& e) {
  std::cerr << "error: " << to_string(e.code());
  if (!e.stage().empty()) std::cerr << " [" << e.stage() << "]";
  std::cerr << ": " << e.what() << "\n";
  return e.code() == ErrorCode::NotEnoughContext ? kExitNotEnoughContext : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epistemological bias analysis for news headlines"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--data-dir", g.data_dir, "Directory with the shipped data files");
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off");

  std::function<int()> action;

  auto* analyze = app.add_subcommand("analyze", "Analyze one sentence");
  std::string text, subject;
  bool pretty = false, as_json = false;
  analyze->add_option("text", text, "Sentence, or - to read stdin")->required();
  analyze->add_option("--subject", subject, "Subject the sentence is about");
  auto* pretty_flag = analyze->add_flag("--pretty", pretty, "Readable output with the tagged word marked");
  analyze->add_flag("--json", as_json, "JSON output (default)")->excludes(pretty_flag);
  analyze->callback([&] { action = [&] { return run_analyze(g, text, subject, pretty); }; });

  auto* crawl_cmd = app.add_subcommand("crawl", "Fetch headlines for a topic list into a document store");
  CrawlArgs crawl_args;
  crawl_cmd->add_option("--topics-file", crawl_args.topics_file, "One topic per line")
      ->required()
      ->check(CLI::ExistingFile);
  crawl_cmd->add_option("--mock", crawl_args.mock, "Recorded search responses to replay")
      ->check(CLI::ExistingFile);
  crawl_cmd->add_option("--store", crawl_args.store, "documents.jsonl to append to");
  crawl_cmd->add_option("--limit", crawl_args.limit, "Results kept per topic");
  crawl_cmd->add_option("--max-age", crawl_args.max_age, "Freshness window in days");
  crawl_cmd->add_option("--parallelism", crawl_args.parallelism, "Concurrent topic fetches");
  crawl_cmd->callback([&] { action = [&] { return run_crawl(g, crawl_args); }; });

  auto* batch = app.add_subcommand("batch", "Analyze a document store or a texts file");
  std::string store, texts, batch_out;
  std::size_t workers = 4;
  auto* store_opt = batch->add_option("--store", store, "documents.jsonl")->check(CLI::ExistingFile);
  batch->add_option("--texts", texts, "JSON Lines of {text, subject}")
      ->check(CLI::ExistingFile)
      ->excludes(store_opt);
  batch->add_option("--out", batch_out, "reports.jsonl (default stdout)");
  batch->add_option("--workers", workers, "Worker threads");
  batch->callback([&] {
    if (store.empty() && texts.empty()) throw CLI::ValidationError("batch", "one of --store or --texts is required");
    action = [&] { return run_batch(g, store, texts, batch_out, workers); };
  });

  auto* breakdown = app.add_subcommand("breakdown", "Comparative breakdown of a reports file");
  std::string reports_in, subjects = "Meghan,Kate", breakdown_out;
  double margin = 0.25;
  breakdown->add_option("--in", reports_in, "reports.jsonl")->required()->check(CLI::ExistingFile);
  breakdown->add_option("--subjects", subjects, "Two subjects, comma separated");
  breakdown->add_option("--margin", margin, "Framing divergence margin");
  breakdown->add_option("--out", breakdown_out, "Output file (default stdout)");
  breakdown->callback([&] { action = [&] { return run_breakdown(reports_in, subjects, margin, breakdown_out); }; });

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string host;
  int port = 0;
  serve->add_option("--host", host, "Bind address (default from config)");
  serve->add_option("--port", port, "Port (default from config)");
  serve->callback([&] { action = [&] { return run_serve(g, host, port); }; });

  auto* lexicon = app.add_subcommand("lexicon", "Look a word up in the bias lexicon");
  std::string word, pos;
  lexicon->add_option("word", word)->required();
  lexicon->add_option("--pos", pos, "POS tag of the word (NOUN, VERB, ADJ, ...)");
  lexicon->callback([&] { action = [&] { return run_lexicon(g, word, pos); }; });

  auto* fixtures = app.add_subcommand("fixtures", "Build replay fixtures");
  fixtures->require_subcommand(1);
  auto* synth = fixtures->add_subcommand("synth", "Fixture records from a sentence spec file");
  std::string specs_path, fixtures_out;
  synth->add_option("--specs", specs_path, "Spec file (see data/golden/headlines.json)")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", fixtures_out, "Fixture directory")->required();
  synth->callback([&] { action = [&] { return run_fixtures_synth(g, specs_path, fixtures_out); }; });

  auto* weights = fixtures->add_subcommand("weights", "Deterministic scorer weights");
  std::string weights_out, seed = "epibias";
  std::size_t d_h = 8, d_b = 16;
  weights->add_option("--out", weights_out, "Output file (default stdout)");
  weights->add_option("--d-h", d_h, "Hidden width");
  weights->add_option("--d-b", d_b, "Token embedding width");
  weights->add_option("--seed", seed, "Seed string");
  weights->callback([&] { action = [&] { return run_fixtures_weights(weights_out, d_h, d_b, seed); }; });

  auto* search = fixtures->add_subcommand("search", "Synthetic recorded search responses");
  std::string search_topics, now = "2022-06-01T00:00:00Z", search_out;
  std::size_t per_topic = 120;
  int search_max_age = 31;
  search->add_option("--topics-file", search_topics)->required()->check(CLI::ExistingFile);
  search->add_option("--per-topic", per_topic, "Results recorded per topic");
  search->add_option("--now", now, "Clock of the recording");
  search->add_option("--max-age", search_max_age, "Freshness window the data straddles");
  search->add_option("--seed", seed, "Seed string");
  search->add_option("--out", search_out, "Output file (default stdout)");
  search->callback([&] {
    action = [&] { return run_fixtures_search(search_topics, per_topic, now, search_max_age, seed, search_out); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  spdlog::set_default_logger(spdlog::stderr_color_st("epibias"));
  spdlog::set_level(spdlog::level::from_str(g.log_level));

  try {
    return action();
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
