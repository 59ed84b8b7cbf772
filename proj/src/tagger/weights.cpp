#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "epibias/error.hpp"
#include "epibias/tagger.hpp"

namespace epibias {

namespace {

using nlohmann::json;

Error mismatch(const std::string& what) {
  return Error(ErrorCode::DimensionMismatch, "scorer weights: " + what, "tagger");
}

std::vector<double> read_vector(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_array()) throw mismatch(std::string("missing array ") + name);
  return j[name].get<std::vector<double>>();
}

}  // namespace

void ScorerWeights::validate() const {
  if (d_f == 0 || d_h == 0 || d_b == 0) throw mismatch("zero dimension");
  if (w_in.size() != d_f * d_h) throw mismatch("w_in is not d_f x d_h");
  if (w_e.size() != d_h) throw mismatch("w_e length != d_h");
  if (w_b.size() != d_b) throw mismatch("w_b length != d_b");
  if (!feature_names.empty() && feature_names.size() != d_f)
    throw mismatch("feature name count != d_f");
  const auto finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!finite(w_in) || !finite(w_e) || !finite(w_b) || !std::isfinite(b))
    throw Error(ErrorCode::NonFiniteInput, "scorer weights contain NaN or inf", "tagger");
}

ScorerWeights ScorerWeights::parse(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorCode::ParseError, std::string("scorer weights: ") + ex.what(), "tagger");
  }
  try {
    if (j.value("format", "") != "epibias-scorer")
      throw Error(ErrorCode::ParseError, "scorer weights: unknown format", "tagger");
    if (j.value("version", 0) != 1)
      throw Error(ErrorCode::ParseError, "scorer weights: unsupported version", "tagger");
    ScorerWeights w;
    const json& dims = j.at("dims");
    w.d_f = dims.at("d_f").get<std::size_t>();
    w.d_h = dims.at("d_h").get<std::size_t>();
    w.d_b = dims.at("d_b").get<std::size_t>();
    if (j.contains("features")) w.feature_names = j["features"].get<std::vector<std::string>>();
    const json& rows = j.at("w_in");
    if (!rows.is_array() || rows.size() != w.d_f) throw mismatch("w_in must have d_f rows");
    w.w_in.reserve(w.d_f * w.d_h);
    for (const json& row : rows) {
      if (!row.is_array() || row.size() != w.d_h) throw mismatch("w_in row length != d_h");
      for (const json& x : row) w.w_in.push_back(x.get<double>());
    }
    w.w_e = read_vector(j, "w_e");
    w.w_b = read_vector(j, "w_b");
    w.b = j.at("b").get<double>();
    w.validate();
    return w;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("scorer weights: ") + ex.what(), "tagger");
  }
}

ScorerWeights ScorerWeights::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open scorer weights " + path.string(), "tagger");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string ScorerWeights::to_json() const {
  json rows = json::array();
  for (std::size_t r = 0; r < d_f; ++r)
    rows.push_back(std::vector<double>(w_in.begin() + r * d_h, w_in.begin() + (r + 1) * d_h));
  json j = {{"format", "epibias-scorer"},
            {"version", 1},
            {"dims", {{"d_f", d_f}, {"d_h", d_h}, {"d_b", d_b}}},
            {"features", feature_names},
            {"w_in", rows},
            {"w_e", w_e},
            {"w_b", w_b},
            {"b", b}};
  return j.dump(1) + "\n";
}

}  // namespace epibias
