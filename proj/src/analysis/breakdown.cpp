#include <algorithm>
#include <cmath>
#include <set>

#include "epibias/analysis.hpp"
#include "epibias/error.hpp"

namespace epibias {

namespace {

constexpr Sentiment kBucketOrder[] = {Sentiment::Positive, Sentiment::Neutral, Sentiment::Negative};

BreakdownNode& child_of(BreakdownNode& parent, std::string_view name) {
  for (BreakdownNode& c : parent.children)
    if (c.name == name) return c;
  parent.children.push_back(BreakdownNode{std::string(name), 0, 0, 0.0, {}});
  return parent.children.back();
}

void fill_shares(BreakdownNode& node) {
  for (BreakdownNode& c : node.children) {
    c.share = node.count == 0 ? 0.0 : static_cast<double>(c.count) / static_cast<double>(node.count);
    fill_shares(c);
  }
}

std::size_t subject_pairs(const BreakdownNode& bucket, std::string_view subject) {
  const BreakdownNode* s = bucket.child(subject);
  return s ? s->count : 0;
}

}  // namespace

const BreakdownNode* BreakdownNode::child(std::string_view n) const {
  for (const BreakdownNode& c : children)
    if (c.name == n) return &c;
  return nullptr;
}

std::vector<std::string> ComparativeBreakdown::subjects() const {
  std::set<std::string> names;
  for (const BreakdownNode& bucket : root.children)
    for (const BreakdownNode& s : bucket.children) names.insert(s.name);
  return {names.begin(), names.end()};
}

ComparativeBreakdown comparative_breakdown(const std::vector<AnalysisReport>& reports) {
  ComparativeBreakdown b;
  for (const AnalysisReport& r : reports)
    if (!r.subject || r.subject->empty())
      throw Error(ErrorCode::MissingSubject, "report without subject: " + r.sentence, "breakdown");

  // Buckets are created in a fixed order so output does not depend on the
  // order of the reports.
  for (Sentiment s : kBucketOrder) {
    BreakdownNode bucket{std::string(to_string(s)), 0, 0, 0.0, {}};
    for (const AnalysisReport& r : reports) {
      if (r.sentiment.value != s) continue;
      BreakdownNode& subject = child_of(bucket, *r.subject);
      ++bucket.reports;
      ++subject.reports;
      for (BiasType t : r.lookup.bias_types) {
        BreakdownNode& leaf = child_of(subject, to_string(t));
        ++leaf.count;
        ++leaf.reports;
        ++subject.count;
        ++bucket.count;
      }
    }
    if (bucket.reports == 0) continue;
    std::sort(bucket.children.begin(), bucket.children.end(),
              [](const BreakdownNode& a, const BreakdownNode& c) { return a.name < c.name; });
    for (BreakdownNode& subject : bucket.children)
      std::sort(subject.children.begin(), subject.children.end(),
                [](const BreakdownNode& a, const BreakdownNode& c) { return a.name < c.name; });
    b.root.count += bucket.count;
    b.root.reports += bucket.reports;
    b.root.children.push_back(std::move(bucket));
  }
  b.root.share = 1.0;
  fill_shares(b.root);
  return b;
}

FramingDivergence framing_divergence(const ComparativeBreakdown& breakdown,
                                     const std::string& subject_a, const std::string& subject_b,
                                     double margin) {
  std::size_t total_a = 0, total_b = 0;
  for (const BreakdownNode& bucket : breakdown.root.children) {
    total_a += subject_pairs(bucket, subject_a);
    total_b += subject_pairs(bucket, subject_b);
  }
  if (total_a == 0)
    throw Error(ErrorCode::UnknownSubject, "subject not in breakdown: " + subject_a, "breakdown");
  if (total_b == 0)
    throw Error(ErrorCode::UnknownSubject, "subject not in breakdown: " + subject_b, "breakdown");

  FramingDivergence d;
  d.subject_a = subject_a;
  d.subject_b = subject_b;
  d.margin = margin;
  for (Sentiment s : kBucketOrder) {
    DivergenceRow row;
    row.sentiment = s;
    if (const BreakdownNode* bucket = breakdown.bucket(s)) {
      row.count_a = subject_pairs(*bucket, subject_a);
      row.count_b = subject_pairs(*bucket, subject_b);
    }
    row.share_a = static_cast<double>(row.count_a) / static_cast<double>(total_a);
    row.share_b = static_cast<double>(row.count_b) / static_cast<double>(total_b);
    row.divergent = std::fabs(row.share_a - row.share_b) > margin;
    d.rows.push_back(row);
  }
  return d;
}

}  // namespace epibias
