#include "placement/metrics.hpp"

#include <algorithm>
#include <chrono>

namespace placement {

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

double time_fit(const std::function<void()>& fit, std::size_t repeats) {
  if (repeats < 1) throw DomainError("time_fit needs at least one repeat");
  fit();
  std::vector<double> seconds;
  seconds.reserve(repeats);
  for (std::size_t i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fit();
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    seconds.push_back(std::max(elapsed.count(), 1e-9));
  }
  return median(std::move(seconds));
}

}  // namespace placement
