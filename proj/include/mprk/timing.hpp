#pragma once

#include <chrono>
#include <map>
#include <string>

namespace mprk {

/// Accumulated wall-clock cost of one instrumented kernel.
struct TimingEntry {
  long long count = 0;
  double seconds = 0.0;

  double seconds_per_call() const { return count > 0 ? seconds / static_cast<double>(count) : 0.0; }
};

/// Label -> (call count, total seconds) accumulator.
///
/// Labels used by the library: tensor-l, tensor-m, tensor-r, diag,
/// precond, solver, stencil, axpy.  Brackets may nest (a "stencil" apply
/// inside a "solver" bracket counts under both labels), so totals of
/// different labels overlap and must not be summed.
class TimingRegistry {
 public:
  using Clock = std::chrono::steady_clock;

  void add(const std::string& label, double seconds) {
    auto& e = entries_[label];
    ++e.count;
    e.seconds += seconds;
  }

  void merge(const TimingRegistry& other) {
    for (const auto& [label, e] : other.entries_) {
      auto& mine = entries_[label];
      mine.count += e.count;
      mine.seconds += e.seconds;
    }
  }

  const std::map<std::string, TimingEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  void clear() { entries_.clear(); }

 private:
  std::map<std::string, TimingEntry> entries_;
};

/// RAII bracket recording one timed call under `label`.
/// A null registry disables the bracket entirely.
class ScopedTimer {
 public:
  ScopedTimer(TimingRegistry* registry, const char* label)
      : registry_(registry), label_(label) {
    if (registry_ != nullptr) start_ = TimingRegistry::Clock::now();
  }

  ~ScopedTimer() {
    if (registry_ == nullptr) return;
    const auto stop = TimingRegistry::Clock::now();
    registry_->add(label_, std::chrono::duration<double>(stop - start_).count());
  }

  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  TimingRegistry* registry_;
  const char* label_;
  TimingRegistry::Clock::time_point start_;
};

}  // namespace mprk
