#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "epibias/error.hpp"
#include "epibias/ingest.hpp"

namespace epibias {

DocumentStore::ReadResult DocumentStore::read(const std::filesystem::path& path) {
  ReadResult out;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (std::filesystem::exists(path))
      throw Error(ErrorCode::IoError, "cannot read document store " + path.string(), "ingest");
    return out;
  }
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Document d = document_from_json(nlohmann::json::parse(line));
      if (seen.insert(d.id).second) out.documents.push_back(std::move(d));
    } catch (const std::exception& ex) {
      ++out.corrupt;
      spdlog::warn("{}:{}: skipping corrupt record: {}", path.string(), line_no, ex.what());
    }
  }
  return out;
}

DocumentStore::DocumentStore(std::filesystem::path path) : path_(std::move(path)) {
  ReadResult existing = read(path_);
  corrupt_ = existing.corrupt;
  docs_ = std::move(existing.documents);
  for (std::size_t i = 0; i < docs_.size(); ++i) index_.emplace(docs_[i].id, i);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream touch(path_, std::ios::binary | std::ios::app);
  if (!touch) throw Error(ErrorCode::IoError, "cannot open document store " + path_.string(), "ingest");
}

bool DocumentStore::put(const Document& doc) {
  std::lock_guard lock(mu_);
  if (index_.count(doc.id)) return false;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot append to " + path_.string(), "ingest");
  out << to_json(doc).dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed on " + path_.string(), "ingest");
  index_.emplace(doc.id, docs_.size());
  docs_.push_back(doc);
  return true;
}

std::size_t DocumentStore::put_all(const std::vector<Document>& docs) {
  std::size_t written = 0;
  for (const Document& d : docs) written += put(d) ? 1 : 0;
  return written;
}

std::optional<Document> DocumentStore::get(std::string_view id) const {
  std::lock_guard lock(mu_);
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return docs_[it->second];
}

std::vector<Document> DocumentStore::all() const {
  std::lock_guard lock(mu_);
  return docs_;
}

std::size_t DocumentStore::size() const {
  std::lock_guard lock(mu_);
  return docs_.size();
}

std::size_t DocumentStore::corrupt_records() const {
  std::lock_guard lock(mu_);
  return corrupt_;
}

}  // namespace epibias
