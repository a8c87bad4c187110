#ifndef GIBBS_PARTITION_HPP
#define GIBBS_PARTITION_HPP

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gibbs/errors.hpp"

namespace gibbs {

// Block sizes (n_1,...,n_k) of a partition of [n]; order carries no meaning.
struct BlockSizes {
  std::vector<int> sizes;

  BlockSizes() = default;
  BlockSizes(std::vector<int> s) : sizes(std::move(s)) { validate(); }
  BlockSizes(std::initializer_list<int> s) : sizes(s) { validate(); }

  int n() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }
  int k() const { return static_cast<int>(sizes.size()); }
  void validate() const {
    require(!sizes.empty(), "BlockSizes: need at least one block");
    for (int s : sizes) require(s >= 1, "BlockSizes: block sizes must be >= 1");
  }
};

// Law of the number of blocks; p[k] for k = 1..n, p[0] = 0.
struct BlockCountPmf {
  int n = 0;
  std::vector<double> p;

  BlockCountPmf() = default;
  explicit BlockCountPmf(int n_) : n(n_), p(n_ + 1, 0.0) {}
  double at(int k) const { return (k >= 0 && k <= n) ? p[k] : 0.0; }
  double total() const {
    double s = 0, c = 0;
    for (double v : p) {
      double y = v - c, t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s;
  }
};

enum class WeightSource { pd, conditional_t, ml_gibbs, custom };

inline const char* to_string(WeightSource s) {
  switch (s) {
    case WeightSource::pd: return "pd";
    case WeightSource::conditional_t: return "conditional-t";
    case WeightSource::ml_gibbs: return "ml-gibbs";
    case WeightSource::custom: return "custom";
  }
  return "custom";
}

// Gibbs weights V_{n,k} (stored as logs) for EPPFs V_{n,k} prod_j (1-alpha)_{n_j-1}.
class GibbsWeightTable {
 public:
  GibbsWeightTable(double alpha, std::vector<std::vector<double>> log_v, WeightSource source,
                   std::string description = {})
      : alpha_(alpha), log_v_(std::move(log_v)), source_(source), description_(std::move(description)) {
    require(alpha > 0 && alpha < 1, "GibbsWeightTable: alpha must lie in (0,1)");
    require(log_v_.size() >= 2, "GibbsWeightTable: need n_max >= 1");
    for (std::size_t n = 1; n < log_v_.size(); ++n) {
      require(log_v_[n].size() >= n + 1, "GibbsWeightTable: row too short");
      for (std::size_t k = 1; k <= n; ++k)
        require(!std::isnan(log_v_[n][k]) && log_v_[n][k] != std::numeric_limits<double>::infinity(),
                "GibbsWeightTable: weights must be finite and nonnegative");
    }
    require(std::fabs(log_v_[1][1]) <= 1e-12, "GibbsWeightTable: V_{1,1} must equal 1");
  }

  double alpha() const { return alpha_; }
  int n_max() const { return static_cast<int>(log_v_.size()) - 1; }
  WeightSource source() const { return source_; }
  const std::string& description() const { return description_; }

  double log_v(int n, int k) const {
    require(n >= 1 && n <= n_max(), "GibbsWeightTable: n exceeds table");
    require(k >= 1 && k <= n, "GibbsWeightTable: need 1 <= k <= n");
    return log_v_[n][k];
  }

  // max relative residual of V_{n,k} = (n - k alpha) V_{n+1,k} + V_{n+1,k+1}
  double backward_residual() const {
    double worst = 0;
    for (int n = 1; n < n_max(); ++n)
      for (int k = 1; k <= n; ++k) {
        double v = std::exp(log_v_[n][k]);
        double rhs = (n - k * alpha_) * std::exp(log_v_[n + 1][k]) + std::exp(log_v_[n + 1][k + 1]);
        if (v > 0) worst = std::max(worst, std::fabs(rhs / v - 1));
      }
    return worst;
  }

  void write_csv(std::ostream& os) const {
    os << "n,k,log_V\n";
    char buf[64];
    for (int n = 1; n <= n_max(); ++n)
      for (int k = 1; k <= n; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", log_v_[n][k]);
        os << n << ',' << k << ',' << buf << '\n';
      }
  }

  // Reads rows n,k,log_V; every 1 <= k <= n <= n_max must be present.
  static GibbsWeightTable read_csv(std::istream& is, double alpha, std::string description = "csv") {
    std::string line;
    std::vector<std::vector<double>> rows(1);
    std::vector<std::vector<bool>> seen(1);
    bool header_checked = false;
    while (std::getline(is, line)) {
      if (line.empty() || line == "\r") continue;
      if (!header_checked) {
        header_checked = true;
        if (line.rfind("n,", 0) == 0) continue;
      }
      std::stringstream ss(line);
      std::string a, b, c;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
        throw domain_error("GibbsWeightTable: malformed CSV row '" + line + "'");
      int n = 0, k = 0;
      double lv = 0;
      try {
        n = std::stoi(a);
        k = std::stoi(b);
        lv = (c.find("-inf") != std::string::npos) ? -std::numeric_limits<double>::infinity() : std::stod(c);
      } catch (const std::exception&) {
        throw domain_error("GibbsWeightTable: malformed CSV row '" + line + "'");
      }
      require(n >= 1 && k >= 1 && k <= n, "GibbsWeightTable: CSV row needs 1 <= k <= n");
      if (static_cast<int>(rows.size()) <= n) {
        rows.resize(n + 1);
        seen.resize(n + 1);
      }
      rows[n].resize(n + 1, 0.0);
      seen[n].resize(n + 1, false);
      rows[n][k] = lv;
      seen[n][k] = true;
    }
    require(rows.size() >= 2, "GibbsWeightTable: CSV holds no rows");
    for (std::size_t n = 1; n < rows.size(); ++n)
      for (std::size_t k = 1; k <= n; ++k)
        require(seen[n].size() > k && seen[n][k], "GibbsWeightTable: CSV is missing entries");
    return GibbsWeightTable(alpha, std::move(rows), WeightSource::custom, std::move(description));
  }

 private:
  double alpha_;
  std::vector<std::vector<double>> log_v_;
  WeightSource source_;
  std::string description_;
};

}  // namespace gibbs

#endif
