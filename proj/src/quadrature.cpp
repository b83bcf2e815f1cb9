#include "mhress/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace mhress {

namespace {

std::vector<std::pair<double, double>> compute_table(int k) {
  std::vector<std::pair<double, double>> table(k);
  for (int i = 0; i < k; ++i) {
    // Chebyshev-like initial guess, then Newton on P_k.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double pk = (k == 1) ? x : p1;
      const double pkm1 = (k == 1) ? 1.0 : p0;
      dp = k * (x * pk - pkm1) / (x * x - 1.0);
      const double dx = pk / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    table[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return table;
}

}  // namespace

const std::vector<std::pair<double, double>>& gauss_legendre_table(int k) {
  if (k < 1 || k > 256) throw std::invalid_argument("Gauss-Legendre order must be in [1, 256]");
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, compute_table(k)).first;
  return it->second;
}

}  // namespace mhress
