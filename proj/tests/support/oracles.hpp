#pragma once

// Reference implementations used only by the tests. They are written from the
// definitions, in 1-based loops over plain integers, and share no code with
// the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gazedyn/zone.hpp"

namespace oracle {

inline constexpr int kZones = 9;
inline constexpr int kUnknown = 9;

// ---------------------------------------------------------------- generators

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // [lo, hi] inclusive.
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(next() % span);
  }
  double real(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }
  bool coin(double p) { return real(0.0, 1.0) < p; }

 private:
  std::mt19937_64 engine_;
};

constexpr gazedyn::GazeZone label(int v) { return static_cast<gazedyn::GazeZone>(v); }
constexpr int value(gazedyn::GazeZone z) { return static_cast<int>(z); }

inline std::vector<gazedyn::GazeZone> to_zones(const std::vector<int>& v) {
  std::vector<gazedyn::GazeZone> out;
  for (int x : v) out.push_back(label(x));
  return out;
}

// Labels uniform over the nine zones plus Unknown.
inline std::vector<int> random_labels(Gen& g, int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int& x : v) x = g.integer(0, kUnknown);
  return v;
}

// Runs of random length in [min_run, max_run], consecutive runs differ.
inline std::vector<int> random_runs(Gen& g, int n, int min_run, int max_run, bool with_unknown) {
  std::vector<int> v;
  int prev = -1;
  while (static_cast<int>(v.size()) < n) {
    int z;
    do {
      z = g.integer(0, with_unknown ? kUnknown : kZones - 1);
    } while (z == prev);
    const int len = g.integer(min_run, max_run);
    for (int k = 0; k < len && static_cast<int>(v.size()) < n; ++k) v.push_back(z);
    prev = z;
  }
  return v;
}

// Lengths of maximal runs.
// Like random_runs but never truncates the last run, so every run lies in
// [min_run, max_run] and the length is at least min_total.
inline std::vector<int> whole_runs(Gen& g, int min_total, int min_run, int max_run) {
  std::vector<int> v;
  int prev = -1;
  while (static_cast<int>(v.size()) < min_total) {
    int z;
    do {
      z = g.integer(0, kZones - 1);
    } while (z == prev);
    v.insert(v.end(), static_cast<std::size_t>(g.integer(min_run, max_run)), z);
    prev = z;
  }
  return v;
}

inline std::vector<std::pair<int, int>> run_length_encode(const std::vector<int>& v) {
  std::vector<std::pair<int, int>> runs;
  for (int x : v) {
    if (!runs.empty() && runs.back().first == x) {
      ++runs.back().second;
    } else {
      runs.push_back({x, 1});
    }
  }
  return runs;
}

// ---------------------------------------------------------------- descriptors

inline std::array<double, kZones> histogram(const std::vector<int>& v) {
  std::map<int, int> tally;
  for (int x : v) tally[x] += 1;
  std::array<double, kZones> out{};
  for (int j = 0; j < kZones; ++j) out[j] = static_cast<double>(tally[j]) / static_cast<double>(v.size());
  return out;
}

// Every run after the first is one transition into its label.
inline std::array<double, kZones> rle_frequency(const std::vector<int>& v, int fps) {
  const auto runs = run_length_encode(v);
  std::array<int, kZones + 1> count{};
  for (std::size_t r = 1; r < runs.size(); ++r) count[runs[r].first] += 1;
  const double t = static_cast<double>(v.size()) / fps;
  std::array<double, kZones> out{};
  for (int j = 0; j < kZones; ++j) out[j] = count[j] / t;
  return out;
}

inline std::array<int, kZones> rle_transition_counts(const std::vector<int>& v) {
  const auto runs = run_length_encode(v);
  std::array<int, kZones> out{};
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].first < kZones) out[runs[r].first] += 1;
  }
  return out;
}

struct Replay {
  std::array<int, kZones> counts{};
  std::array<std::vector<std::pair<int, int>>, kZones> segments;  // 0-based inclusive
  int unknown_transitions = 0;
};

// Direct replay of the majority-vote tracker, 1-indexed as written:
//   last <- g(1)
//   for i = W+1 .. N:
//     if g(i) != last and #{k in 1..W : g(i-k) == g(i)} > W/2:
//       close the open glance at i-1, open one for g(i) at i, last <- g(i)
//   close the open glance at N
inline Replay replay_tracker(const std::vector<int>& v, int W) {
  const int N = static_cast<int>(v.size());
  auto g = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
  Replay r;
  int last = g(1);
  int open_zone = -1;
  int open_start = 0;
  for (int i = W + 1; i <= N; ++i) {
    if (g(i) == last) continue;
    int agree = 0;
    for (int k = 1; k <= W; ++k) {
      if (g(i - k) == g(i)) ++agree;
    }
    if (!(agree > W / 2.0)) continue;
    if (open_zone >= 0 && open_zone < kZones) {
      r.segments[open_zone].push_back({open_start - 1, i - 2});
    }
    if (g(i) < kZones) {
      r.counts[g(i)] += 1;
    } else {
      r.unknown_transitions += 1;
    }
    open_zone = g(i);
    open_start = i;
    last = g(i);
  }
  if (open_zone >= 0 && open_zone < kZones) r.segments[open_zone].push_back({open_start - 1, N - 1});
  return r;
}

// ---------------------------------------------------------------- statistics

using Matrix = std::vector<std::vector<double>>;

inline std::vector<double> two_pass_mean(const Matrix& rows) {
  const std::size_t d = rows.front().size();
  std::vector<double> m(d, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < d; ++j) m[j] += r[j];
  }
  for (double& x : m) x /= static_cast<double>(rows.size());
  return m;
}

inline Matrix two_pass_covariance(const Matrix& rows) {
  const std::size_t d = rows.front().size();
  const auto m = two_pass_mean(rows);
  Matrix c(d, std::vector<double>(d, 0.0));
  for (const auto& r : rows) {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < d; ++b) c[a][b] += (r[a] - m[a]) * (r[b] - m[b]);
    }
  }
  for (auto& row : c) {
    for (double& x : row) x /= static_cast<double>(rows.size() - 1);
  }
  return c;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular system");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

inline double quadratic_form(const Matrix& cov, const std::vector<double>& diff) {
  const auto y = solve(cov, diff);
  double s = 0.0;
  for (std::size_t i = 0; i < diff.size(); ++i) s += diff[i] * y[i];
  return s;
}

// B Bᵀ + shift·I for a random B: symmetric positive definite.
inline Matrix random_spd(Gen& g, std::size_t d, double shift) {
  Matrix b(d, std::vector<double>(d));
  for (auto& row : b) {
    for (double& x : row) x = g.real(-1.0, 1.0);
  }
  Matrix s(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) s[i][j] += b[i][k] * b[j][k];
    }
    s[i][i] += shift;
  }
  return s;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = (static_cast<double>(i + j)) / 2.0;
    i = j + 1;
  }
  return r;
}

// Pearson correlation of the ranks (average ranks for ties).
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Centered moving average over 2*half+1 points, truncated at the ends.
inline std::vector<double> moving_average(const std::vector<double>& v, std::size_t half) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(v.size() - 1, i + half);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += v[k];
    out[i] = s / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace oracle
