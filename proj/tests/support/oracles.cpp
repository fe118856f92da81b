#include "oracles.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>

namespace oracle {

std::int64_t ks_d_numerator(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<std::int64_t>(a.size());
  const auto m = static_cast<std::int64_t>(b.size());
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::int64_t best = 0;
  for (double x : pooled) {
    const auto ca = std::count_if(a.begin(), a.end(), [x](double v) { return v <= x; });
    const auto cb = std::count_if(b.begin(), b.end(), [x](double v) { return v <= x; });
    best = std::max<std::int64_t>(best, std::llabs(ca * m - cb * n));
  }
  return best;
}

double ks_d(const std::vector<double>& a, const std::vector<double>& b) {
  return static_cast<double>(ks_d_numerator(a, b)) / static_cast<double>(a.size() * b.size());
}

double ks_enumeration_p(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const std::size_t total = a.size() + b.size();
  if (total > 26) throw std::invalid_argument("enumeration oracle is for small samples");
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::int64_t observed = ks_d_numerator(a, b);

  std::uint64_t hits = 0;
  std::uint64_t count = 0;
  std::vector<double> xa;
  std::vector<double> xb;
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n) continue;
    xa.clear();
    xb.clear();
    for (std::size_t i = 0; i < total; ++i) ((mask >> i) & 1u ? xa : xb).push_back(pooled[i]);
    ++count;
    if (ks_d_numerator(xa, xb) >= observed) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(count);
}

double ks_lattice_count_p(std::size_t n, std::size_t m, std::int64_t d_numerator) {
  if (d_numerator == 0) return 1.0;
  // paths[j] holds the number of paths reaching (i, j) without touching the
  // band edge |i*m - j*n| >= d_numerator.
  const auto nn = static_cast<std::int64_t>(n);
  const auto mm = static_cast<std::int64_t>(m);
  auto inside = [&](std::int64_t i, std::int64_t j) {
    return std::llabs(i * mm - j * nn) < d_numerator;
  };
  std::vector<long double> paths(m + 1, 0.0L);
  for (std::int64_t i = 0; i <= nn; ++i) {
    for (std::int64_t j = 0; j <= mm; ++j) {
      long double v;
      if (i == 0 && j == 0) {
        v = 1.0L;
      } else {
        v = (i > 0 ? paths[j] : 0.0L) + (j > 0 ? paths[j - 1] : 0.0L);
      }
      paths[j] = inside(i, j) ? v : 0.0L;
    }
  }
  long double all = 1.0L;
  for (std::size_t k = 1; k <= n; ++k) all = all * static_cast<long double>(m + k) / static_cast<long double>(k);
  const long double below = paths[m];
  return static_cast<double>(1.0L - below / all);
}

double ks_monte_carlo_p(const std::vector<double>& a, const std::vector<double>& b,
                        std::size_t resamples, std::uint64_t seed) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const std::int64_t observed = ks_d_numerator(a, b);

  // labels[k] says whether the k-th smallest pooled value goes to sample a.
  std::vector<char> labels(n + m, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n), 1);
  std::mt19937_64 rng(seed);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < resamples; ++r) {
    std::shuffle(labels.begin(), labels.end(), rng);
    std::int64_t ia = 0;
    std::int64_t ib = 0;
    std::int64_t best = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      (labels[k] ? ia : ib) += 1;
      const bool block_end = k + 1 == labels.size() || pooled[k + 1] != pooled[k];
      if (block_end) {
        best = std::max<std::int64_t>(best, std::llabs(ia * static_cast<std::int64_t>(m) -
                                                       ib * static_cast<std::int64_t>(n)));
      }
    }
    if (best >= observed) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(resamples);
}

Quadratic least_squares_quadratic(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<long double>(n);
  long double s[5] = {0, 0, 0, 0, 0};
  long double t[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const long double u = xs[i] - mean;
    long double p = 1;
    for (int k = 0; k < 5; ++k) {
      s[k] += p;
      if (k < 3) t[k] += p * ys[i];
      p *= u;
    }
  }
  auto det3 = [](long double a, long double b, long double c, long double d, long double e, long double f,
                 long double g, long double h, long double i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  };
  const long double det = det3(s[0], s[1], s[2], s[1], s[2], s[3], s[2], s[3], s[4]);
  const long double a0 = det3(t[0], s[1], s[2], t[1], s[2], s[3], t[2], s[3], s[4]) / det;
  const long double a1 = det3(s[0], t[0], s[2], s[1], t[1], s[3], s[2], t[2], s[4]) / det;
  const long double a2 = det3(s[0], s[1], t[0], s[1], s[2], t[1], s[2], s[3], t[2]) / det;
  // a0 + a1 (x - mu) + a2 (x - mu)^2 expanded in x.
  return {static_cast<double>(a0 - a1 * mean + a2 * mean * mean), static_cast<double>(a1 - 2 * a2 * mean),
          static_cast<double>(a2)};
}

}  // namespace oracle
