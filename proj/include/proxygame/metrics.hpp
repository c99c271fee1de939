#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "proxygame/core/types.hpp"
#include "proxygame/core/world.hpp"

namespace proxygame {

struct StageMetrics {
  Stage stage = 0;
  std::uint64_t connected_users = 0;
  double connected_ratio = 0.0;
  std::uint64_t total_capacity = 0;
  double mean_wait_time = 0.0;
  std::uint64_t blocked_proxies = 0;
  std::uint64_t alive_proxies = 0;
  std::uint64_t agent_count = 0;
  std::uint64_t benign_count = 0;
  /// Benign clients still waiting for a usable proxy; not part of the CSV.
  std::uint64_t unfulfilled = 0;

  friend bool operator==(const StageMetrics&, const StageMetrics&) = default;
};

/// Pure read of the world after the stage's blocks. A benign client counts
/// as connected when it sits in the connected set of an unblocked proxy.
/// Agents are excluded from both the count and the ratio.
inline StageMetrics sample(const WorldState& world) {
  StageMetrics m;
  m.stage = world.stage;
  for (const auto& c : world.clients) {
    if (c.is_agent()) {
      ++m.agent_count;
      continue;
    }
    ++m.benign_count;
    if (c.waiting_since) ++m.unfulfilled;
    if (c.active_proxy) {
      const auto& p = world.proxies[*c.active_proxy];
      if (!p.blocked && p.is_connected(c.id)) ++m.connected_users;
    }
  }
  m.connected_ratio =
      m.benign_count == 0 ? 0.0 : static_cast<double>(m.connected_users) / static_cast<double>(m.benign_count);
  for (const auto& p : world.proxies) {
    if (p.blocked) {
      ++m.blocked_proxies;
    } else {
      ++m.alive_proxies;
      m.total_capacity += p.capacity;
    }
  }
  if (!world.fulfilled_waits.empty()) {
    double sum = 0.0;
    for (auto w : world.fulfilled_waits) sum += w;
    m.mean_wait_time = sum / static_cast<double>(world.fulfilled_waits.size());
  }
  return m;
}

// --- CSV -------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "stage,connected_users,connected_ratio,total_capacity,mean_wait_time,blocked_proxies,alive_proxies,"
    "agent_count,benign_count";

inline std::string to_csv_row(const StageMetrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%u,%llu,%.6f,%llu,%.6f,%llu,%llu,%llu,%llu", m.stage,
                static_cast<unsigned long long>(m.connected_users), m.connected_ratio,
                static_cast<unsigned long long>(m.total_capacity), m.mean_wait_time,
                static_cast<unsigned long long>(m.blocked_proxies), static_cast<unsigned long long>(m.alive_proxies),
                static_cast<unsigned long long>(m.agent_count), static_cast<unsigned long long>(m.benign_count));
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<StageMetrics>& series) {
  out << kCsvHeader << '\n';
  for (const auto& m : series) out << to_csv_row(m) << '\n';
}

/// Parses what write_csv produced. Returns nullopt on a malformed file.
inline std::optional<std::vector<StageMetrics>> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) return std::nullopt;
  std::vector<StageMetrics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    StageMetrics m;
    unsigned long long v[7];
    unsigned stage = 0;
    if (std::sscanf(line.c_str(), "%u,%llu,%lf,%llu,%lf,%llu,%llu,%llu,%llu", &stage, &v[0], &m.connected_ratio,
                    &v[1], &m.mean_wait_time, &v[2], &v[3], &v[4], &v[5]) != 9)
      return std::nullopt;
    m.stage = stage;
    m.connected_users = v[0];
    m.total_capacity = v[1];
    m.blocked_proxies = v[2];
    m.alive_proxies = v[3];
    m.agent_count = v[4];
    m.benign_count = v[5];
    out.push_back(m);
  }
  return out;
}

// --- Summaries ---------------------------------------------------------------

enum class Metric {
  ConnectedUsers,
  ConnectedRatio,
  TotalCapacity,
  MeanWaitTime,
  BlockedProxies,
  AliveProxies,
  UnusedCapacity,
};

inline double metric_value(const StageMetrics& m, Metric k) {
  switch (k) {
    case Metric::ConnectedUsers: return static_cast<double>(m.connected_users);
    case Metric::ConnectedRatio: return m.connected_ratio;
    case Metric::TotalCapacity: return static_cast<double>(m.total_capacity);
    case Metric::MeanWaitTime: return m.mean_wait_time;
    case Metric::BlockedProxies: return static_cast<double>(m.blocked_proxies);
    case Metric::AliveProxies: return static_cast<double>(m.alive_proxies);
    case Metric::UnusedCapacity:
      return static_cast<double>(m.total_capacity) - static_cast<double>(m.connected_users);
  }
  return 0.0;
}

inline const char* metric_name(Metric k) {
  switch (k) {
    case Metric::ConnectedUsers: return "connected_users";
    case Metric::ConnectedRatio: return "connected_ratio";
    case Metric::TotalCapacity: return "total_capacity";
    case Metric::MeanWaitTime: return "mean_wait_time";
    case Metric::BlockedProxies: return "blocked_proxies";
    case Metric::AliveProxies: return "alive_proxies";
    case Metric::UnusedCapacity: return "unused_capacity";
  }
  return "?";
}

inline constexpr Metric kAllMetrics[] = {Metric::ConnectedUsers, Metric::ConnectedRatio, Metric::TotalCapacity,
                                         Metric::MeanWaitTime,   Metric::BlockedProxies, Metric::AliveProxies,
                                         Metric::UnusedCapacity};

struct MetricSummary {
  Metric metric{};
  double window_mean = 0.0;
  double global_mean = 0.0;
  double final_value = 0.0;
  /// Least-squares slope per stage over the stable interval.
  double stable_slope = 0.0;
};

struct Summary {
  std::size_t stages = 0;
  std::size_t window = 0;
  std::vector<MetricSummary> metrics;

  [[nodiscard]] const MetricSummary& operator[](Metric k) const {
    for (const auto& m : metrics)
      if (m.metric == k) return m;
    static const MetricSummary empty{};
    return empty;
  }
};

/// Ordinary least-squares slope of y against x; 0 with fewer than 2 points.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx == 0 ? 0.0 : sxy / sxx;
}

/// Window means are over the last `window` stages (clamped to the series);
/// the slope is fitted over stages >= stable_from.
inline Summary summarize(const std::vector<StageMetrics>& series, std::size_t window, Stage stable_from = 0) {
  Summary s;
  if (series.empty()) return s;
  s.stages = series.size();
  s.window = std::min(std::max<std::size_t>(window, 1), series.size());
  for (Metric k : kAllMetrics) {
    MetricSummary ms;
    ms.metric = k;
    double total = 0;
    for (const auto& m : series) total += metric_value(m, k);
    ms.global_mean = total / static_cast<double>(series.size());
    double wsum = 0;
    for (std::size_t i = series.size() - s.window; i < series.size(); ++i) wsum += metric_value(series[i], k);
    ms.window_mean = wsum / static_cast<double>(s.window);
    ms.final_value = metric_value(series.back(), k);
    std::vector<double> xs, ys;
    for (const auto& m : series)
      if (m.stage >= stable_from) {
        xs.push_back(m.stage);
        ys.push_back(metric_value(m, k));
      }
    ms.stable_slope = ls_slope(xs, ys);
    s.metrics.push_back(ms);
  }
  return s;
}

/// Human-readable `key: value` lines.
inline void write_summary(std::ostream& out, const Summary& s) {
  out << "stages: " << s.stages << '\n';
  out << "window: " << s.window << '\n';
  char buf[128];
  for (const auto& m : s.metrics) {
    const char* n = metric_name(m.metric);
    std::snprintf(buf, sizeof buf, "%.6f", m.final_value);
    out << n << ".final: " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.6f", m.window_mean);
    out << n << ".window_mean: " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.6f", m.global_mean);
    out << n << ".mean: " << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.9f", m.stable_slope);
    out << n << ".stable_slope: " << buf << '\n';
  }
}

}  // namespace proxygame
