#include <algorithm>

#include "epibias/hashing.hpp"
#include "epibias/server.hpp"

namespace epibias {

std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::Queued: return "queued";
    case JobStatus::Running: return "running";
    case JobStatus::Done: return "done";
  }
  return "queued";
}

JobManager::JobManager(Analyze analyze, std::size_t workers) : analyze_(std::move(analyze)) {
  if (workers == 0) workers = 1;
  for (std::size_t i = 0; i < workers; ++i) workers_.emplace_back([this] { run(); });
}

JobManager::~JobManager() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  for (std::thread& t : workers_) t.join();
}

std::string JobManager::submit(std::vector<BatchItem> items) {
  auto job = std::make_shared<Job>();
  {
    std::lock_guard lock(mu_);
    job->seq = next_seq_++;
    job->id = "job-" + hash_hex("job:" + std::to_string(job->seq)).substr(0, 12);
    job->items = std::move(items);
    job->results.resize(job->items.size());
    jobs_.emplace(job->id, job);
    for (std::size_t i = 0; i < job->items.size(); ++i) queue_.push_back({job, i});
  }
  work_cv_.notify_all();
  done_cv_.notify_all();
  return job->id;
}

void JobManager::run() {
  for (;;) {
    Task task;
    {
      std::unique_lock lock(mu_);
      work_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      task = std::move(queue_.front());
      queue_.pop_front();
      task.job->started = true;
    }
    std::variant<AnalysisReport, ApiError> result;
    try {
      result = analyze_(task.job->items[task.index]);
    } catch (const Error& e) {
      result = api_error_for(e);
    } catch (const std::exception& e) {
      result = ApiError{500, "internal", e.what(), ""};
    }
    {
      std::lock_guard lock(mu_);
      task.job->results[task.index] = std::move(result);
      ++task.job->completed;
    }
    done_cv_.notify_all();
  }
}

JobSnapshot JobManager::snapshot(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, "unknown job " + id, "batch");
  const Job& job = *it->second;
  JobSnapshot s;
  s.id = job.id;
  s.total = job.items.size();
  s.completed = job.completed;
  s.status = job.completed == s.total ? JobStatus::Done
             : job.started            ? JobStatus::Running
                                      : JobStatus::Queued;
  for (std::size_t i = 0; i < job.results.size(); ++i) {
    if (!job.results[i]) continue;
    if (const auto* r = std::get_if<AnalysisReport>(&*job.results[i]))
      s.reports.push_back(*r);
    else
      s.errors.emplace_back(i, std::get<ApiError>(*job.results[i]));
  }
  return s;
}

bool JobManager::wait(const std::string& id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, "unknown job " + id, "batch");
  const std::shared_ptr<Job> job = it->second;
  return done_cv_.wait_for(lock, timeout, [&] { return job->completed == job->items.size(); });
}

std::vector<AnalysisReport> JobManager::completed_reports() const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<Job>> ordered;
  for (const auto& [id, job] : jobs_) ordered.push_back(job);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a->seq < b->seq; });
  std::vector<AnalysisReport> out;
  for (const auto& job : ordered)
    for (const auto& r : job->results)
      if (r)
        if (const auto* report = std::get_if<AnalysisReport>(&*r)) out.push_back(*report);
  return out;
}

}  // namespace epibias
