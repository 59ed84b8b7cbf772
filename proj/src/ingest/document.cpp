#include <cctype>
#include <cstdio>

#include "epibias/error.hpp"
#include "epibias/hashing.hpp"
#include "epibias/ingest.hpp"

namespace epibias {

using nlohmann::json;

std::string format_timestamp(TimePoint t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

TimePoint parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  const auto fail = [&] {
    return Error(ErrorCode::ParseError, "bad timestamp '" + std::string(s) + "'", "ingest");
  };
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
  const std::string str(s);
  int consumed = 0;
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &se, &consumed) != 6)
    throw fail();
  std::size_t pos = static_cast<std::size_t>(consumed);
  if (pos < str.size() && str[pos] == '.') {
    ++pos;
    while (pos < str.size() && std::isdigit(static_cast<unsigned char>(str[pos]))) ++pos;
  }
  int offset_minutes = 0;
  const bool utc = pos == str.size() || (str[pos] == 'Z' && pos + 1 == str.size());
  if (!utc) {
    if ((str[pos] != '+' && str[pos] != '-') || str.size() - pos != 6 || str[pos + 3] != ':')
      throw fail();
    const int oh = std::stoi(str.substr(pos + 1, 2));
    const int om = std::stoi(str.substr(pos + 4, 2));
    offset_minutes = (str[pos] == '-' ? -1 : 1) * (oh * 60 + om);
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 60) throw fail();
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se} - minutes{offset_minutes};
}

std::string document_id(std::string_view headline) { return hash_hex(normalize_text(headline)); }

std::string subject_from_topic(std::string_view topic) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : topic) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  for (const std::string& w : words)
    if (std::isupper(static_cast<unsigned char>(w[0]))) return w;
  return words.empty() ? std::string() : words.front();
}

json to_json(const Document& d) {
  return {{"id", d.id},
          {"headline", d.headline},
          {"subject", d.subject},
          {"topic", d.topic},
          {"source_url", d.source_url},
          {"published_at", format_timestamp(d.published_at)},
          {"fetched_at", format_timestamp(d.fetched_at)}};
}

Document document_from_json(const json& j) {
  try {
    Document d;
    d.headline = j.at("headline").get<std::string>();
    d.id = j.value("id", document_id(d.headline));
    d.subject = j.value("subject", "");
    d.topic = j.value("topic", "");
    d.source_url = j.value("source_url", "");
    d.published_at = parse_timestamp(j.at("published_at").get<std::string>());
    d.fetched_at = parse_timestamp(j.at("fetched_at").get<std::string>());
    if (d.id != document_id(d.headline))
      throw Error(ErrorCode::CorruptRecord, "document id does not match headline", "ingest");
    return d;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::CorruptRecord, std::string("document: ") + ex.what(), "ingest");
  }
}

}  // namespace epibias
