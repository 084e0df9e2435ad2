#pragma once

#include <functional>
#include <future>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanfind/selector.hpp"

namespace chanfind {

struct SubQueryResult {
  std::string subquery;
  std::vector<std::string> channels;
  bool abstained = false;
  std::string note;  // why it abstained, if it did
};

struct FinderResult {
  std::vector<std::string> channels;  // validated, de-duplicated, sub-query order
  bool abstained = false;
  std::vector<SubQueryResult> subqueries;
  int selector_calls = 0;
  std::vector<std::string> rejected;  // candidates that failed validation
  std::vector<std::string> warnings;
  nlohmann::json trace;  // paradigm-specific
};

// Order-stable merge of per-sub-query results.
inline void aggregate(FinderResult& out) {
  std::set<std::string> seen;
  out.channels.clear();
  for (const auto& s : out.subqueries)
    for (const auto& c : s.channels)
      if (seen.insert(c).second) out.channels.push_back(c);
  out.abstained = out.channels.empty();
}

// Runs fn(i) for i in [0, n) concurrently; results in index order. The
// first exception (by index) is rethrown after every task has finished.
template <typename F>
auto run_indexed(std::size_t n, F&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(fn(0));
    return out;
  }
  std::vector<std::future<R>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
  std::exception_ptr first;
  for (auto& f : futures) {
    try {
      out.push_back(f.get());
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
  return out;
}

enum class Paradigm { kDirect, kTree, kExplore, kMml, kOnto };

inline std::string to_string(Paradigm p) {
  switch (p) {
    case Paradigm::kDirect: return "direct";
    case Paradigm::kTree: return "tree";
    case Paradigm::kExplore: return "explore";
    case Paradigm::kMml: return "mml";
    case Paradigm::kOnto: return "onto";
  }
  return "direct";
}

// A configured finder: query in, validated channels out.
using FinderFn = std::function<FinderResult(const std::string& query, Selector& selector)>;

}  // namespace chanfind
