#include <algorithm>
#include <atomic>
#include <mutex>
#include <exception>
#include <thread>
#include <variant>

#include <spdlog/spdlog.h>

#include "epibias/analysis.hpp"
#include "epibias/error.hpp"

namespace epibias {

namespace {

// Runs one pipeline stage, recording it in the trace and tagging any error
// it raises with the stage name.
template <typename Fn>
auto run_stage(AnalysisReport& report, const char* stage, Fn&& fn) {
  report.stage_trace.emplace_back(stage);
  try {
    return fn();
  } catch (const RateLimitedError&) {
    throw;
  } catch (const Error& e) {
    if (e.stage() == stage) throw;
    const std::string origin = e.stage().empty() ? "" : " [" + e.stage() + "]";
    throw Error(e.code(), std::string(e.what()) + origin, stage);
  }
}

}  // namespace

namespace {

Engine load_common(const Config& config) {
  Engine e;
  e.lexicon = std::make_shared<const LexiconStore>(LexiconStore::load(config.lexicon));
  e.resources = std::make_shared<const ResourceCatalog>(ResourceCatalog::load(config.resources));
  e.stopwords = std::make_shared<const StopWords>(
      config.stopwords.empty() ? StopWords::builtin() : StopWords::load(config.stopwords));
  e.weights = std::make_shared<const ScorerWeights>(ScorerWeights::load(config.weights));
  e.rules = config.rules.empty() ? RulesConfig{} : RulesConfig::load(config.rules);
  e.tagger = config.tagger;
  e.stereotypes = config.stereotypes;
  e.sentiment = config.sentiment;
  return e;
}

}  // namespace

Engine Engine::with_fixtures(const Config& config, std::shared_ptr<const FixtureSet> fixtures) {
  Engine e = load_common(config);
  e.pos = std::make_shared<const RulePosBackend>();
  e.embeddings = std::make_shared<const FixtureEmbeddingBackend>(fixtures);
  e.generators.push_back(
      std::make_shared<const FixtureGeneratorBackend>(fixtures, GeneratorOrigin::Costar));
  e.generators.push_back(
      std::make_shared<const FixtureGeneratorBackend>(fixtures, GeneratorOrigin::Sbf));
  e.polarity = std::make_shared<const FixturePolarityBackend>(fixtures);
  spdlog::debug("engine: fixture mode, {} fixture records", fixtures->size());
  return e;
}

Engine Engine::from_config(const Config& config) {
  if (config.fixture_mode)
    return with_fixtures(config, std::make_shared<const FixtureSet>(FixtureSet::load(config.fixtures)));

  Engine e = load_common(config);
  if (config.pos_endpoint)
    e.pos = std::make_shared<const HttpPosBackend>(*config.pos_endpoint);
  else
    e.pos = std::make_shared<const RulePosBackend>();
  if (!config.embedding_endpoint)
    throw Error(ErrorCode::ConfigError, "live mode needs endpoints.embeddings", "config");
  e.embeddings = std::make_shared<const HttpEmbeddingBackend>(*config.embedding_endpoint);
  if (config.costar_endpoint)
    e.generators.push_back(
        std::make_shared<const HttpGeneratorBackend>(*config.costar_endpoint, GeneratorOrigin::Costar));
  if (config.sbf_endpoint)
    e.generators.push_back(
        std::make_shared<const HttpGeneratorBackend>(*config.sbf_endpoint, GeneratorOrigin::Sbf));
  if (config.polarity_endpoint)
    e.polarity = std::make_shared<const HttpPolarityBackend>(*config.polarity_endpoint);
  else
    e.polarity = std::make_shared<const RulePolarityBackend>(e.lexicon);
  return e;
}

ConfigSnapshot Engine::snapshot() const {
  ConfigSnapshot s;
  s.pos_backend = pos ? pos->id() : "";
  s.embedding_backend = embeddings ? embeddings->id() : "";
  for (const auto& g : generators) s.generator_backends.push_back(g->id());
  s.polarity_backend = polarity ? polarity->id() : "";
  s.token_model_id = tagger.model_id;
  s.sentence_model_id = stereotypes.sentence_model_id;
  s.relevance_threshold = stereotypes.threshold;
  s.sentiment = sentiment;
  s.rules_version = rules.version;
  s.min_context_words = kMinContextWords;
  return s;
}

GateResult context_gate(const std::vector<Token>& tokens) {
  GateResult g;
  g.token_count = tokens.size();
  for (const Token& t : remove_stopwords(tokens))
    if (t.pos != PosTag::Punct) ++g.content_words;
  g.passed = g.content_words >= kMinContextWords;
  if (!g.passed)
    throw Error(ErrorCode::NotEnoughContext,
                "not enough context: " + std::to_string(g.content_words) +
                    " content word(s) after stop-word removal, need " +
                    std::to_string(kMinContextWords),
                "gate");
  return g;
}

AnalysisReport analyze_sentence(const std::string& text, const std::optional<std::string>& subject,
                                const Engine& engine) {
  AnalysisReport report;
  report.sentence = text;
  report.subject = subject;
  report.config_snapshot = engine.snapshot();

  const std::vector<Token> tokens = run_stage(report, "gate", [&] {
    std::vector<Token> t = tokenize(text, *engine.pos, *engine.stopwords);
    report.gate = context_gate(t);
    report.tmi = tmi_label(t);
    return t;
  });

  report.tagged = run_stage(report, "tag", [&] {
    return tag_sentence(tokens, report.tmi, *engine.lexicon, *engine.embeddings, *engine.weights,
                        engine.tagger);
  });

  report.lookup = run_stage(report, "lookup", [&] {
    const Token& t = tokens[report.tagged.token_index];
    return engine.lexicon->lookup(report.tagged.surface, t.pos);
  });
  for (BiasType type : report.lookup.bias_types) {
    if (type == BiasType::Regular) continue;
    Explanation ex;
    ex.bias_type = type;
    if (const BiasResource* r = engine.resources->find(type)) {
      ex.title = r->title;
      ex.resource_url = r->resource_url;
    }
    report.explanations.push_back(std::move(ex));
  }

  report.candidates = run_stage(report, "stereotype_rank", [&] {
    std::vector<const GeneratorBackend*> gens;
    for (const auto& g : engine.generators) gens.push_back(g.get());
    auto pool = generate_candidates(text, gens, engine.stereotypes);
    return rank_by_similarity(text, std::move(pool), *engine.embeddings,
                              engine.stereotypes.sentence_model_id);
  });
  report.verdict = select_relevant(report.candidates, engine.stereotypes.threshold);

  report.sentiment = run_stage(report, "sentiment", [&] {
    return classify_sentiment(text, *engine.polarity, engine.sentiment);
  });

  report.flags = run_stage(report, "flags", [&] {
    return derive_flags(report.tagged, report.lookup, report.verdict, report.candidates,
                        report.sentiment, engine.rules);
  });
  return report;
}

BatchOutcome analyze_batch(const std::vector<SentenceInput>& inputs, const Engine& engine,
                           std::size_t workers) {
  std::vector<std::optional<std::variant<AnalysisReport, Error>>> results(inputs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mu;
  const auto work = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        results[i] = analyze_sentence(inputs[i].text, inputs[i].subject, engine);
      } catch (const RateLimitedError&) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        return;
      } catch (const Error& e) {
        results[i] = e;
      } catch (...) {
        std::lock_guard lock(fatal_mu);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(inputs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (fatal) std::rethrow_exception(fatal);

  BatchOutcome out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (auto* r = std::get_if<AnalysisReport>(&*results[i]))
      out.reports.push_back(std::move(*r));
    else
      out.failures.push_back({i, std::get<Error>(*results[i])});
  }
  return out;
}

}  // namespace epibias
