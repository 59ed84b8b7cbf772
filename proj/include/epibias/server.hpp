#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"

#include "epibias/analysis.hpp"
#include "epibias/config.hpp"
#include "epibias/error.hpp"
#include "epibias/ingest.hpp"

namespace httplib {
class Server;
}

namespace epibias {

// Wire form of a failure: {"error": {"code", "message", "stage"}}.
struct ApiError {
  int status = 500;
  std::string code = "internal";
  std::string message;
  std::string stage;

  nlohmann::json to_json() const;
};

// not_enough_context 422, empty_input 400, backend_unavailable 503,
// bad_request 400 (also parse errors and reports missing a subject),
// not_found 404, internal 500.
ApiError api_error_for(const Error& e);

struct BatchItem {
  std::string text;
  std::optional<std::string> subject;
  std::optional<std::string> document_id;
};

enum class JobStatus { Queued, Running, Done };

std::string_view to_string(JobStatus s);

struct JobSnapshot {
  std::string id;
  JobStatus status = JobStatus::Queued;
  std::size_t total = 0;
  std::size_t completed = 0;
  std::vector<AnalysisReport> reports;  // successful items, in submission order
  std::vector<std::pair<std::size_t, ApiError>> errors;  // item index -> error
};

// Runs batch items on a fixed pool of worker threads. Progress only moves
// forward; a job is Done once every item has a report or an error.
class JobManager {
 public:
  using Analyze = std::function<AnalysisReport(const BatchItem&)>;

  JobManager(Analyze analyze, std::size_t workers);
  ~JobManager();
  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  std::string submit(std::vector<BatchItem> items);
  // Throws Error(UnknownJob).
  JobSnapshot snapshot(const std::string& id) const;
  // Blocks until the job is done; false on timeout.
  bool wait(const std::string& id, std::chrono::milliseconds timeout) const;
  // Reports of every finished item across all jobs, in job then item order.
  std::vector<AnalysisReport> completed_reports() const;

 private:
  struct Job {
    std::string id;
    std::size_t seq = 0;
    std::vector<BatchItem> items;
    std::vector<std::optional<std::variant<AnalysisReport, ApiError>>> results;
    std::size_t completed = 0;
    bool started = false;
  };
  struct Task {
    std::shared_ptr<Job> job;
    std::size_t index;
  };

  void run();

  Analyze analyze_;
  mutable std::mutex mu_;
  mutable std::condition_variable work_cv_;
  mutable std::condition_variable done_cv_;
  std::deque<Task> queue_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::size_t next_seq_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

// HTTP API over one Engine.
//   POST /analyze              {text, subject?}           -> AnalysisReport
//   POST /batch                {document_ids} | {texts}   -> {job_id}
//   GET  /batch/{id}                                      -> progress + reports
//   GET  /breakdown?subjects=a,b[&margin=][&job=]         -> breakdown + divergence
//   GET  /lexicon/{word}                                  -> LookupResult
//   GET  /resources/{bias_type}                           -> resource metadata
//   GET  /health
class ApiServer {
 public:
  ApiServer(std::shared_ptr<const Engine> engine, std::shared_ptr<DocumentStore> documents,
            ServerConfig config);
  ~ApiServer();

  // Binds and serves until stop(). Returns false if the port cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds to a free port and serves on a background thread; returns the port.
  int start_background(const std::string& host = "127.0.0.1");
  void stop();

  JobManager& jobs() { return *jobs_; }

 private:
  void routes();

  std::shared_ptr<const Engine> engine_;
  std::shared_ptr<DocumentStore> documents_;
  ServerConfig config_;
  std::unique_ptr<JobManager> jobs_;
  std::unique_ptr<httplib::Server> http_;
  std::thread background_;
};

}  // namespace epibias
