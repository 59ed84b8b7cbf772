#include <fstream>
#include <sstream>
#include <string>

#include "epibias/error.hpp"
#include "epibias/textprep.hpp"

namespace epibias {

namespace {

StopWords::WordSet parse(std::istream& in) {
  StopWords::WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(to_lower(line));
  }
  return words;
}

constexpr const char* kBuiltinList =
#include "stopwords_data.inc"
    ;

}  // namespace

StopWords StopWords::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open stop-word list " + path.string());
  return StopWords(parse(in));
}

const StopWords& StopWords::builtin() {
  static const StopWords list = [] {
    std::istringstream in(kBuiltinList);
    return StopWords(parse(in));
  }();
  return list;
}

bool StopWords::contains(std::string_view lowercase_word) const {
  return words_.find(lowercase_word) != words_.end();
}

}  // namespace epibias
