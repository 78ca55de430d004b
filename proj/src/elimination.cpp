#include "hmrf/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace hmrf {

void LogSumAccumulator::rescale(double new_max) {
  const double factor = std::exp(max_ - new_max);
  sum_ *= factor;
  compensation_ *= factor;
  max_ = new_max;
}

void LogSumAccumulator::add(double log_term) {
  if (log_term == -std::numeric_limits<double>::infinity()) return;
  if (!started_) {
    started_ = true;
    max_ = log_term;
    sum_ = 1.0;
    compensation_ = 0.0;
    return;
  }
  if (log_term > max_) rescale(log_term);
  const double x = std::exp(log_term - max_);
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) compensation_ += (sum_ - t) + x;
  else compensation_ += (x - t) + sum_;
  sum_ = t;
}

void LogSumAccumulator::merge(const LogSumAccumulator& other) {
  if (!other.started_) return;
  if (!started_) {
    *this = other;
    return;
  }
  const double target = std::max(max_, other.max_);
  if (max_ < target) rescale(target);
  const double factor = std::exp(other.max_ - target);
  const double x = other.sum_ * factor;
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) compensation_ += (sum_ - t) + x;
  else compensation_ += (x - t) + sum_;
  sum_ = t;
  compensation_ += other.compensation_ * factor;
}

double LogSumAccumulator::value() const {
  if (!started_) return -std::numeric_limits<double>::infinity();
  return max_ + std::log(sum_ + compensation_);
}

double log_sum_exp(const Eigen::ArrayXd& values) {
  LogSumAccumulator acc;
  for (Eigen::Index i = 0; i < values.size(); ++i) acc.add(values(i));
  return acc.value();
}

namespace {

std::size_t table_size(const std::vector<std::size_t>& cards) {
  std::size_t n = 1;
  for (auto c : cards) n *= c;
  return n;
}

// Strides of `scope` variables inside factor f (0 when absent).
std::vector<std::size_t> strides_in(const LogFactor& f, const std::vector<VertexId>& scope) {
  std::vector<std::size_t> own(f.scope.size());
  std::size_t stride = 1;
  for (std::size_t i = f.scope.size(); i-- > 0;) {
    own[i] = stride;
    stride *= f.cards[i];
  }
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t i = 0; i < scope.size(); ++i) {
    auto it = std::lower_bound(f.scope.begin(), f.scope.end(), scope[i]);
    if (it != f.scope.end() && *it == scope[i]) out[i] = own[static_cast<std::size_t>(it - f.scope.begin())];
  }
  return out;
}

}  // namespace

LogFactor multiply(const LogFactor& a, const LogFactor& b) {
  LogFactor out;
  std::set_union(a.scope.begin(), a.scope.end(), b.scope.begin(), b.scope.end(), std::back_inserter(out.scope));
  for (VertexId v : out.scope) {
    auto ia = std::lower_bound(a.scope.begin(), a.scope.end(), v);
    if (ia != a.scope.end() && *ia == v) out.cards.push_back(a.cards[static_cast<std::size_t>(ia - a.scope.begin())]);
    else out.cards.push_back(b.cards[static_cast<std::size_t>(std::lower_bound(b.scope.begin(), b.scope.end(), v) -
                                                              b.scope.begin())]);
  }
  const std::size_t n = table_size(out.cards);
  out.values.resize(static_cast<Eigen::Index>(n));
  const auto sa = strides_in(a, out.scope);
  const auto sb = strides_in(b, out.scope);
  std::vector<std::size_t> digit(out.scope.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    out.values(static_cast<Eigen::Index>(idx)) =
        a.values(static_cast<Eigen::Index>(ia)) + b.values(static_cast<Eigen::Index>(ib));
    for (std::size_t k = out.scope.size(); k-- > 0;) {
      if (++digit[k] < out.cards[k]) {
        ia += sa[k];
        ib += sb[k];
        break;
      }
      digit[k] = 0;
      ia -= sa[k] * (out.cards[k] - 1);
      ib -= sb[k] * (out.cards[k] - 1);
    }
  }
  return out;
}

LogFactor sum_out(const LogFactor& f, VertexId v) {
  auto it = std::lower_bound(f.scope.begin(), f.scope.end(), v);
  if (it == f.scope.end() || *it != v) return f;
  const auto pos = static_cast<std::size_t>(it - f.scope.begin());
  LogFactor out;
  out.scope = f.scope;
  out.cards = f.cards;
  out.scope.erase(out.scope.begin() + static_cast<std::ptrdiff_t>(pos));
  out.cards.erase(out.cards.begin() + static_cast<std::ptrdiff_t>(pos));
  const std::size_t card = f.cards[pos];
  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < f.cards.size(); ++i) inner *= f.cards[i];
  const std::size_t outer = f.size() / (inner * card);
  out.values.resize(static_cast<Eigen::Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      LogSumAccumulator acc;
      for (std::size_t s = 0; s < card; ++s)
        acc.add(f.values(static_cast<Eigen::Index>((o * card + s) * inner + i)));
      out.values(static_cast<Eigen::Index>(o * inner + i)) = acc.value();
    }
  return out;
}

LogFactor eliminate_all_but(std::vector<LogFactor> factors, std::span<const VertexId> keep, std::size_t max_table) {
  std::set<VertexId> kept(keep.begin(), keep.end());
  std::map<VertexId, std::size_t> card;
  for (const auto& f : factors)
    for (std::size_t i = 0; i < f.scope.size(); ++i) card[f.scope[i]] = f.cards[i];

  std::set<VertexId> pending;
  for (const auto& [v, c] : card)
    if (!kept.contains(v)) pending.insert(v);

  while (!pending.empty()) {
    // Pick the variable whose bucket product is smallest.
    VertexId best = *pending.begin();
    std::size_t best_size = std::numeric_limits<std::size_t>::max();
    for (VertexId v : pending) {
      std::set<VertexId> scope;
      for (const auto& f : factors)
        if (std::binary_search(f.scope.begin(), f.scope.end(), v)) scope.insert(f.scope.begin(), f.scope.end());
      std::size_t size = 1;
      for (VertexId u : scope) {
        size *= card[u];
        if (size > max_table) break;
      }
      if (size < best_size) {
        best_size = size;
        best = v;
      }
    }
    if (best_size > max_table)
      throw std::length_error("elimination needs a table larger than " + std::to_string(max_table) + " entries");
    std::vector<LogFactor> rest;
    LogFactor product{{}, {}, Eigen::ArrayXd::Zero(1)};
    for (auto& f : factors) {
      if (std::binary_search(f.scope.begin(), f.scope.end(), best)) product = multiply(product, f);
      else rest.push_back(std::move(f));
    }
    rest.push_back(sum_out(product, best));
    factors = std::move(rest);
    pending.erase(best);
  }

  LogFactor result{{}, {}, Eigen::ArrayXd::Zero(1)};
  for (const auto& f : factors) {
    if (table_size(result.cards) * f.size() > max_table * 4)
      throw std::length_error("final table exceeds the elimination limit");
    result = multiply(result, f);
  }
  // Variables to keep that no factor mentions stay absent; callers add unary factors for them.
  return result;
}

}  // namespace hmrf
