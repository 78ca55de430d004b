#include "hmrf/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hmrf {

SpinSpace::SpinSpace(std::vector<double> values, Eigen::ArrayXd weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
  if (values_.empty()) throw std::invalid_argument("spin space is empty");
  if (values_.size() > 255) throw std::invalid_argument("spin space larger than 255 states");
  if (static_cast<std::size_t>(weights_.size()) != values_.size())
    throw std::invalid_argument("spin weights do not match spin values");
  if ((weights_ <= 0.0).any()) throw std::invalid_argument("spin weights must be strictly positive");
  if (std::abs(weights_.sum() - 1.0) > 1e-12) throw std::invalid_argument("spin weights must sum to 1");
}

SpinSpace SpinSpace::ising() { return uniform({-1.0, 1.0}); }

SpinSpace SpinSpace::uniform(std::vector<double> values) {
  auto n = static_cast<Eigen::Index>(values.size());
  return SpinSpace(std::move(values), Eigen::ArrayXd::Constant(n, 1.0 / static_cast<double>(n)));
}

SpinState SpinSpace::index_of(double value) const {
  auto it = std::find(values_.begin(), values_.end(), value);
  if (it == values_.end()) throw std::invalid_argument("spin value " + std::to_string(value) + " not in space");
  return static_cast<SpinState>(it - values_.begin());
}

double SpinSpace::measure(std::span<const SpinState> subset) const {
  double sum = 0.0;
  for (SpinState s : subset) sum += weight(s);
  return sum;
}

FactorTable::FactorTable(std::size_t arity, std::size_t num_states, Eigen::ArrayXd values)
    : arity_(arity), num_states_(num_states), values_(std::move(values)) {
  std::size_t expected = 1;
  for (std::size_t i = 0; i < arity; ++i) expected *= num_states;
  if (static_cast<std::size_t>(values_.size()) != expected)
    throw std::invalid_argument("factor table has " + std::to_string(values_.size()) + " entries, expected " +
                                std::to_string(expected));
  if (!values_.isFinite().all() || (values_ <= 0.0).any())
    throw std::invalid_argument("factor table entries must be finite and strictly positive");
}

FactorTable FactorTable::constant(std::size_t arity, std::size_t num_states, double value) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) n *= num_states;
  return FactorTable(arity, num_states, Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(n), value));
}

std::size_t FactorTable::index(std::span<const SpinState> states) const {
  if (states.size() != arity_) throw std::invalid_argument("configuration arity does not match factor");
  std::size_t idx = 0;
  for (SpinState s : states) idx = idx * num_states_ + s;
  return idx;
}

double FactorTable::at(std::span<const SpinState> states) const { return (*this)[index(states)]; }

std::vector<SpinState> FactorTable::states(std::size_t index) const {
  std::vector<SpinState> out(arity_);
  for (std::size_t i = arity_; i-- > 0;) {
    out[i] = static_cast<SpinState>(index % num_states_);
    index /= num_states_;
  }
  return out;
}

FactorTable FactorTable::scaled(double factor) const {
  return FactorTable(arity_, num_states_, values_ * factor);
}

InteractionBounds InteractionBounds::from_oscillations(std::vector<double> delta) {
  InteractionBounds b;
  for (double d : delta)
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("oscillation must be finite and nonnegative");
  b.lower.assign(delta.size(), 1.0);
  b.upper.resize(delta.size());
  std::transform(delta.begin(), delta.end(), b.upper.begin(), [](double d) { return std::exp(d); });
  b.delta = std::move(delta);
  return b;
}

InteractionBounds InteractionBounds::from_extrema(std::vector<double> lower, std::vector<double> upper) {
  if (lower.size() != upper.size()) throw std::invalid_argument("bound vectors differ in length");
  InteractionBounds b;
  b.delta.resize(lower.size());
  for (std::size_t e = 0; e < lower.size(); ++e) {
    if (!(lower[e] > 0.0) || !(upper[e] >= lower[e]))
      throw std::invalid_argument("edge " + std::to_string(e) + " violates 0 < m_e <= M_e");
    // Ratio first: exact under power-of-two rescaling of h_e.
    b.delta[e] = std::log(upper[e] / lower[e]);
  }
  b.lower = std::move(lower);
  b.upper = std::move(upper);
  return b;
}

void InteractionModel::validate(const Hypergraph& h) const {
  if (tables.size() != h.num_edges())
    throw std::invalid_argument("model has " + std::to_string(tables.size()) + " tables for " +
                                std::to_string(h.num_edges()) + " edges");
  for (const auto& e : h.edges()) {
    const auto& t = tables[e.id];
    if (t.arity() != e.size() || t.num_states() != spins.size())
      throw std::invalid_argument("factor table of edge " + std::to_string(e.id) + " does not match the edge");
  }
}

InteractionBounds InteractionModel::bounds() const {
  std::vector<double> lower, upper;
  lower.reserve(tables.size());
  upper.reserve(tables.size());
  for (const auto& t : tables) {
    lower.push_back(t.min());
    upper.push_back(t.max());
  }
  return InteractionBounds::from_extrema(std::move(lower), std::move(upper));
}

bool InteractionModel::is_independent() const {
  return std::all_of(tables.begin(), tables.end(), [](const FactorTable& t) { return t.min() == t.max(); });
}

InteractionModel independent_model(const Hypergraph& h, SpinSpace spins) {
  InteractionModel m{std::move(spins), {}};
  for (const auto& e : h.edges()) m.tables.push_back(FactorTable::constant(e.size(), m.spins.size()));
  return m;
}

Configuration::Configuration(std::span<const VertexId> support, std::span<const SpinState> states) {
  if (support.size() != states.size()) throw std::invalid_argument("support and states differ in length");
  for (std::size_t i = 0; i < support.size(); ++i) states_[support[i]] = states[i];
}

Configuration Configuration::uniform(std::span<const VertexId> support, SpinState state) {
  Configuration c;
  for (VertexId x : support) c.set(x, state);
  return c;
}

SpinState Configuration::at(VertexId x) const {
  auto it = states_.find(x);
  if (it == states_.end()) throw std::out_of_range("configuration does not cover vertex " + std::to_string(x));
  return it->second;
}

void to_json(nlohmann::json& j, const InteractionBounds& b) {
  j = {{"lower", b.lower}, {"upper", b.upper}, {"delta", b.delta}};
}

}  // namespace hmrf
