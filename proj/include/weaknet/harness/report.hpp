#pragma once

// Report records and the instance-parallel runner. Records are ordered by
// instance id whatever the completion order; wall times live in a side file.

#include "weaknet/serialize.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace weaknet::harness {

/// 64-bit FNV-1a, printed as 16 hex digits.
inline std::string fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Outcome of one check on one instance.
struct Check {
  bool pass = true;
  Json margins = Json::object();
  Json certificate = Json::object();
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

struct Record {
  Json body;
  double seconds = 0;
  bool pass = true;
};

inline Record make_record(const std::string& suite, const Json& instance, const Check& c) {
  Record r;
  r.pass = c.pass;
  r.body = Json::object();
  r.body["suite"] = suite;
  r.body["id"] = instance.contains("id") ? instance.at("id") : Json();
  r.body["verdict"] = c.pass ? "pass" : "fail";
  r.body["digest"] = fnv1a(c.certificate.dump());
  r.body["margins"] = c.margins;
  if (!c.pass) {
    r.body["failures"] = c.failures;
    r.body["instance"] = instance;
  }
  return r;
}

/// Runs `work` over every index on `threads` workers; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, std::size_t threads, const std::function<T(std::size_t)>& work) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_lock;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = work(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(error_lock);
        if (!error) error = std::current_exception();
      }
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Wall-clock seconds of a call.
template <class F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace weaknet::harness
