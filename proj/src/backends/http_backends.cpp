#include "httplib.h"
#include "json.hpp"

#include "epibias/backends.hpp"
#include "epibias/error.hpp"

namespace epibias {

namespace {

using nlohmann::json;

json post_json(const HttpEndpoint& ep, const std::string& backend, const json& body) {
  httplib::Client client(ep.base_url);
  client.set_connection_timeout(ep.timeout_seconds, 0);
  client.set_read_timeout(ep.timeout_seconds, 0);
  auto res = client.Post(ep.path, body.dump(), "application/json");
  if (!res)
    throw Error(ErrorCode::BackendUnavailable,
                backend + ": request failed (" + httplib::to_string(res.error()) + ")", backend);
  if (res->status < 200 || res->status >= 300)
    throw Error(ErrorCode::BackendUnavailable,
                backend + ": HTTP " + std::to_string(res->status), backend);
  try {
    return json::parse(res->body);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorCode::BackendUnavailable, backend + ": malformed response: " + ex.what(),
                backend);
  }
}

template <typename Fn>
auto decode(const std::string& backend, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::BackendUnavailable, backend + ": unexpected response: " + ex.what(),
                backend);
  }
}

}  // namespace

std::vector<PosAnnotation> HttpPosBackend::annotate(std::string_view sentence) const {
  const json res = post_json(endpoint_, id(), {{"sentence", sentence}});
  return decode(id(), [&] {
    std::vector<PosAnnotation> out;
    for (const json& a : res) {
      PosAnnotation p;
      p.surface = a.at("surface").get<std::string>();
      const auto tag = parse_pos_tag(a.at("pos").get<std::string>());
      p.pos = tag.value_or(PosTag::X);
      p.lemma = a.value("lemma", "");
      out.push_back(std::move(p));
    }
    return out;
  });
}

TokenEmbeddings HttpEmbeddingBackend::embed_tokens(const std::string& model_id,
                                                   const std::string& sentence,
                                                   const std::vector<std::string>& tokens) const {
  const json res =
      post_json(endpoint_, id(), {{"model_id", model_id}, {"sentence", sentence}, {"tokens", tokens}});
  TokenEmbeddings out = decode(id(), [&] {
    TokenEmbeddings e;
    e.model_id = model_id;
    e.vectors = res.at("vectors").get<std::vector<std::vector<double>>>();
    e.dim = res.value("dim", e.vectors.empty() ? std::size_t{0} : e.vectors.front().size());
    if (res.contains("pieces")) e.pieces = res["pieces"].get<std::vector<std::string>>();
    return e;
  });
  if (out.vectors.size() != tokens.size())
    throw Error(ErrorCode::DimensionMismatch,
                id() + ": " + std::to_string(out.vectors.size()) + " vectors for " +
                    std::to_string(tokens.size()) + " tokens",
                id());
  for (const auto& v : out.vectors)
    if (v.size() != out.dim)
      throw Error(ErrorCode::DimensionMismatch, id() + ": vector length != dim", id());
  return out;
}

std::vector<double> HttpEmbeddingBackend::embed_sentence(const std::string& model_id,
                                                         const std::string& text) const {
  const json res = post_json(endpoint_, id(),
                             {{"model_id", model_id}, {"sentence", text}, {"tokens", json::array()}});
  auto vectors = decode(id(), [&] { return res.at("vectors").get<std::vector<std::vector<double>>>(); });
  if (vectors.size() != 1)
    throw Error(ErrorCode::DimensionMismatch, id() + ": expected one sentence vector", id());
  return std::move(vectors.front());
}

GeneratorOutput HttpGeneratorBackend::generate(const std::string& sentence) const {
  const json res = post_json(endpoint_, id(), {{"sentence", sentence}});
  return decode(id(), [&] {
    GeneratorOutput out;
    out.stereotypes = res.value("stereotypes", std::vector<std::string>{});
    out.concepts = res.value("concepts", std::vector<std::string>{});
    return out;
  });
}

std::string HttpGeneratorBackend::id() const {
  return "http-" + std::string(to_string(origin_)) + " " + endpoint_.base_url;
}

double HttpPolarityBackend::score(const std::string& sentence) const {
  const json res = post_json(endpoint_, id(), {{"sentence", sentence}});
  const double s = decode(id(), [&] { return res.at("score").get<double>(); });
  if (!(s >= -1.0 && s <= 1.0))
    throw Error(ErrorCode::BackendUnavailable, id() + ": score outside [-1, 1]", id());
  return s;
}

}  // namespace epibias
