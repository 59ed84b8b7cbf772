#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "epibias/error.hpp"
#include "epibias/lexicon.hpp"

namespace epibias {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

// Joins metadata fields on merge without repeating a value already present.
void join_field(std::string& into, const std::string& extra) {
  if (extra.empty()) return;
  if (into.empty()) {
    into = extra;
    return;
  }
  std::size_t start = 0;
  while (start <= into.size()) {
    std::size_t end = into.find("; ", start);
    if (end == std::string::npos) end = into.size();
    if (into.compare(start, end - start, extra) == 0) return;
    start = end + 2;
  }
  into += "; " + extra;
}

LexiconEntry parse_record(const json& j, std::string_view origin, std::size_t line_no) {
  const auto fail = [&](const std::string& what) -> Error {
    std::ostringstream msg;
    msg << origin << ":" << line_no << ": " << what;
    return Error(ErrorCode::ParseError, msg.str(), "lexicon");
  };
  if (!j.is_object()) throw fail("record is not an object");
  if (!j.contains("word") || !j["word"].is_string()) throw fail("missing string field 'word'");
  if (!j.contains("bias_types") || !j["bias_types"].is_array())
    throw fail("missing array field 'bias_types'");

  LexiconEntry e;
  e.word = to_lower(trim(j["word"].get<std::string>()));
  if (e.word.empty()) throw fail("empty word");
  for (const json& t : j["bias_types"]) {
    if (!t.is_string()) throw fail("bias type is not a string");
    const auto type = parse_bias_type(t.get<std::string>());
    if (!type) throw fail("unknown bias type '" + t.get<std::string>() + "'");
    if (*type == BiasType::Regular) throw fail("'regular' is not a lexicon category");
    e.bias_types.insert(*type);
  }
  if (e.bias_types.empty()) throw fail("bias_types is empty");
  e.source = j.value("source", "");
  e.creators = j.value("creators", "");
  e.resource_url = j.value("resource_url", "");
  return e;
}

}  // namespace

void LexiconStore::add(LexiconEntry record) {
  auto it = entries_.find(record.word);
  if (it == entries_.end()) {
    std::string key = record.word;
    entries_.emplace(std::move(key), std::move(record));
    return;
  }
  LexiconEntry& e = it->second;
  e.bias_types.insert(record.bias_types.begin(), record.bias_types.end());
  join_field(e.source, record.source);
  join_field(e.creators, record.creators);
  join_field(e.resource_url, record.resource_url);
}

void LexiconStore::index_stems() {
  by_stem_.clear();
  for (const auto& [word, entry] : entries_) by_stem_[stem(word)].push_back(word);
}

LexiconStore LexiconStore::parse(std::string_view jsonl, std::string_view origin) {
  LexiconStore store;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    const std::string line = trim(jsonl.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& ex) {
      std::ostringstream msg;
      msg << origin << ":" << line_no << ": " << ex.what();
      throw Error(ErrorCode::ParseError, msg.str(), "lexicon");
    }
    store.add(parse_record(j, origin, line_no));
  }
  store.index_stems();
  return store;
}

LexiconStore LexiconStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open lexicon " + path.string(), "lexicon");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

LexiconStore LexiconStore::from_records(const std::vector<LexiconEntry>& records) {
  LexiconStore store;
  for (LexiconEntry r : records) {
    r.word = to_lower(trim(r.word));
    if (r.word.empty() || r.bias_types.empty() || r.bias_types.count(BiasType::Regular))
      throw Error(ErrorCode::ParseError, "invalid lexicon record '" + r.word + "'", "lexicon");
    store.add(std::move(r));
  }
  store.index_stems();
  return store;
}

std::string LexiconStore::serialize() const {
  std::string out;
  for (const auto& [word, e] : entries_) {
    json j = {{"word", e.word},
              {"bias_types", to_strings(e.bias_types)},
              {"source", e.source},
              {"creators", e.creators},
              {"resource_url", e.resource_url}};
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

const LexiconEntry* LexiconStore::find(std::string_view lowercase_word) const {
  auto it = entries_.find(lowercase_word);
  return it == entries_.end() ? nullptr : &it->second;
}

LookupResult LexiconStore::lookup(std::string_view word, std::optional<PosTag> pos) const {
  const std::string key = to_lower(trim(word));
  if (key.empty()) throw Error(ErrorCode::EmptyInput, "lookup: empty word", "lexicon");

  LookupResult result;
  const auto hit = [&](MatchStage stage, const std::vector<const LexiconEntry*>& found) {
    result.matched = true;
    result.match_stage = stage;
    result.matched_key = found.front()->word;
    result.bias_types.clear();
    for (const LexiconEntry* e : found) {
      result.bias_types.insert(e->bias_types.begin(), e->bias_types.end());
      result.entries.push_back(*e);
    }
    return result;
  };

  if (const LexiconEntry* e = find(key)) return hit(MatchStage::Exact, {e});
  if (!has_letter(key)) return result;

  const std::string lemma = lemmatize(key, pos);
  if (const LexiconEntry* e = find(lemma)) return hit(MatchStage::Lemma, {e});

  const std::string s = stem(key);
  std::vector<const LexiconEntry*> family;
  if (const LexiconEntry* e = find(s)) family.push_back(e);
  if (auto it = by_stem_.find(s); it != by_stem_.end()) {
    for (const std::string& w : it->second)
      if (w != s) family.push_back(find(w));
  }
  if (!family.empty()) return hit(MatchStage::Stem, family);
  return result;
}

ResourceCatalog ResourceCatalog::parse(std::string_view text) {
  ResourceCatalog catalog;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw Error(ErrorCode::ParseError, std::string("resources: ") + ex.what(), "lexicon");
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "resources: expected an object", "lexicon");
  for (const auto& [name, value] : j.items()) {
    const auto type = parse_bias_type(name);
    if (!type) throw Error(ErrorCode::ParseError, "resources: unknown bias type " + name, "lexicon");
    BiasResource r;
    r.type = *type;
    r.title = value.value("title", name);
    r.description = value.value("description", "");
    r.resource_url = value.value("resource_url", "");
    catalog.resources_[*type] = std::move(r);
  }
  return catalog;
}

ResourceCatalog ResourceCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open resources " + path.string(), "lexicon");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const BiasResource* ResourceCatalog::find(BiasType type) const {
  auto it = resources_.find(type);
  return it == resources_.end() ? nullptr : &it->second;
}

}  // namespace epibias
