#include "hmrf/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "hmrf/elimination.hpp"
#include "hmrf/enumeration.hpp"
#include "hmrf/line_graph.hpp"
#include "parallel.hpp"

namespace hmrf {

namespace {

std::vector<VertexId> sorted_unique(std::span<const VertexId> in) {
  std::vector<VertexId> v(in.begin(), in.end());
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw std::invalid_argument("volume lists a vertex twice");
  return v;
}

std::string join_ids(const std::vector<VertexId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size() && i < 16; ++i) s += (i ? ", " : "") + std::to_string(ids[i]);
  if (ids.size() > 16) s += ", ...";
  return s;
}

// One edge meeting the volume, with the boundary part of its table index fixed.
struct BoundEdge {
  EdgeId id = 0;
  std::size_t base = 0;
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (volume slot, stride)
  std::vector<double> log_table;                           // log(h_e / m_e)
  bool constant = false;
};

// Volume, boundary and factors prepared for summation. Tables enter as
// h_e / m_e, so any positive rescaling of h_e that is exact in floating point
// leaves every number below unchanged.
struct VolumeProblem {
  std::vector<VertexId> volume;
  std::unordered_map<VertexId, std::size_t> slot;
  std::size_t num_states = 0;
  std::vector<double> log_chi;
  std::vector<BoundEdge> edges;
  double log_scale = 0.0;                                  // sum of log m_e over edges meeting the volume
  std::vector<std::vector<std::size_t>> edges_of_slot;

  bool independent() const {
    return std::all_of(edges.begin(), edges.end(), [](const BoundEdge& e) { return e.constant; });
  }
};

VolumeProblem prepare(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume_in,
                      const Configuration& boundary, const std::optional<FrozenRegion>& frozen) {
  model.validate(h);
  VolumeProblem p;
  p.volume = sorted_unique(volume_in);
  if (p.volume.empty()) throw std::invalid_argument("volume is empty");
  for (std::size_t i = 0; i < p.volume.size(); ++i) {
    if (!h.contains(p.volume[i])) throw std::out_of_range("unknown vertex " + std::to_string(p.volume[i]));
    p.slot[p.volume[i]] = i;
  }
  p.num_states = model.spins.size();
  p.log_chi.resize(p.num_states);
  for (std::size_t s = 0; s < p.num_states; ++s) p.log_chi[s] = std::log(model.spins.weight(static_cast<SpinState>(s)));

  std::vector<VertexId> delta_sorted;
  if (frozen) {
    delta_sorted = sorted_unique(frozen->delta);
    for (VertexId v : p.volume)
      if (!std::binary_search(delta_sorted.begin(), delta_sorted.end(), v))
        throw std::invalid_argument("frozen region must contain the volume");
  }
  auto outside_state = [&](VertexId y) -> std::optional<SpinState> {
    const bool in_delta = !frozen || std::binary_search(delta_sorted.begin(), delta_sorted.end(), y);
    const Configuration& source = in_delta ? boundary : frozen->omega;
    if (!source.contains(y)) return std::nullopt;
    return source.at(y);
  };

  std::vector<VertexId> missing;
  p.edges_of_slot.resize(p.volume.size());
  for (EdgeId e : h.edges_meeting(p.volume)) {
    const auto& edge = h.edge(e);
    const auto& table = model.tables[e];
    BoundEdge be;
    be.id = e;
    std::size_t stride = 1;
    for (std::size_t i = edge.size(); i-- > 0;) {
      const VertexId v = edge.vertices[i];
      if (auto it = p.slot.find(v); it != p.slot.end()) {
        be.slots.emplace_back(it->second, stride);
      } else if (auto s = outside_state(v)) {
        if (*s >= p.num_states) throw std::invalid_argument("boundary state out of range");
        be.base += *s * stride;
      } else {
        missing.push_back(v);
      }
      stride *= p.num_states;
    }
    const double m = table.min();
    be.constant = m == table.max();
    be.log_table.resize(table.num_entries());
    for (std::size_t k = 0; k < table.num_entries(); ++k) be.log_table[k] = std::log(table[k] / m);
    p.log_scale += std::log(m);
    for (auto [s, st] : be.slots) p.edges_of_slot[s].push_back(p.edges.size());
    p.edges.push_back(std::move(be));
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw std::invalid_argument("boundary configuration misses vertices " + join_ids(missing));
  }
  return p;
}

std::size_t brute_force_terms(const VolumeProblem& p, std::size_t max_log2) {
  const double log2_terms = static_cast<double>(p.volume.size()) * std::log2(static_cast<double>(p.num_states));
  if (log2_terms > static_cast<double>(max_log2)) return 0;
  std::size_t n = 1;
  for (std::size_t i = 0; i < p.volume.size(); ++i) n *= p.num_states;
  return n;
}

// Log-mass of every (slot, state) and of the whole sum, by enumeration.
struct BruteForceSums {
  LogSumAccumulator total;
  std::vector<LogSumAccumulator> marginal;   // slot * num_states + state
};

BruteForceSums brute_force(const VolumeProblem& p, std::size_t terms, std::size_t threads) {
  constexpr std::size_t kBlock = std::size_t{1} << 12;
  const std::size_t n = p.volume.size(), q = p.num_states;
  const std::size_t blocks = (terms + kBlock - 1) / kBlock;
  std::vector<BruteForceSums> partial(blocks);
  detail::parallel_for(blocks, threads, [&](std::size_t b) {
    auto& out = partial[b];
    out.marginal.resize(n * q);
    std::vector<std::size_t> digit(n);
    std::size_t code = b * kBlock;
    for (std::size_t i = n; i-- > 0;) {
      digit[i] = code % q;
      code /= q;
    }
    const std::size_t end = std::min(terms, (b + 1) * kBlock);
    for (std::size_t idx = b * kBlock; idx < end; ++idx) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i) w += p.log_chi[digit[i]];
      for (const auto& e : p.edges) {
        std::size_t k = e.base;
        for (auto [s, st] : e.slots) k += digit[s] * st;
        w += e.log_table[k];
      }
      out.total.add(w);
      for (std::size_t i = 0; i < n; ++i) out.marginal[i * q + digit[i]].add(w);
      for (std::size_t i = n; i-- > 0;) {
        if (++digit[i] < q) break;
        digit[i] = 0;
      }
    }
  });
  BruteForceSums sums;
  sums.marginal.resize(n * q);
  for (const auto& part : partial) {
    sums.total.merge(part.total);
    for (std::size_t k = 0; k < n * q; ++k) sums.marginal[k].merge(part.marginal[k]);
  }
  return sums;
}

std::vector<LogFactor> factors_of(const VolumeProblem& p) {
  std::vector<LogFactor> factors;
  for (std::size_t i = 0; i < p.volume.size(); ++i)
    factors.push_back({{p.volume[i]}, {p.num_states}, Eigen::Map<const Eigen::ArrayXd>(
                                                          p.log_chi.data(), static_cast<Eigen::Index>(p.num_states))});
  for (const auto& e : p.edges) {
    if (e.constant) continue;  // contributes log 1 = 0
    LogFactor f;
    auto slots = e.slots;
    std::sort(slots.begin(), slots.end());
    for (auto [s, st] : slots) {
      f.scope.push_back(p.volume[s]);
      f.cards.push_back(p.num_states);
    }
    std::size_t size = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) size *= p.num_states;
    f.values.resize(static_cast<Eigen::Index>(size));
    std::vector<std::size_t> digit(slots.size(), 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
      std::size_t k = e.base;
      for (std::size_t i = 0; i < slots.size(); ++i) k += digit[i] * slots[i].second;
      f.values(static_cast<Eigen::Index>(idx)) = e.log_table[k];
      for (std::size_t i = slots.size(); i-- > 0;) {
        if (++digit[i] < p.num_states) break;
        digit[i] = 0;
      }
    }
    factors.push_back(std::move(f));
  }
  return factors;
}

bool use_brute_force(const VolumeProblem& p, const KernelOptions& options, std::size_t& terms) {
  terms = brute_force_terms(p, options.max_log2_terms);
  switch (options.engine) {
    case ExactEngine::BruteForce:
      if (terms == 0)
        throw std::length_error("volume of " + std::to_string(p.volume.size()) +
                                " spins exceeds the exact summation cap; use the sampler or the elimination engine");
      return true;
    case ExactEngine::Elimination: return false;
    case ExactEngine::Auto: return terms != 0 && brute_force_terms(p, options.auto_log2_terms) != 0;
  }
  return true;
}

// Log-marginal of one slot by elimination; returns the per-state log masses.
Eigen::ArrayXd eliminated_marginal(const VolumeProblem& p, std::size_t slot) {
  const VertexId keep[] = {p.volume[slot]};
  auto f = eliminate_all_but(factors_of(p), keep);
  return f.values;
}

}  // namespace

double h_volume(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                const Configuration& config) {
  model.validate(h);
  auto vol = sorted_unique(volume);
  double product = 1.0;
  std::vector<VertexId> missing;
  std::vector<SpinState> states;
  for (EdgeId e : h.edges_meeting(vol)) {
    const auto& edge = h.edge(e);
    states.clear();
    for (VertexId v : edge.vertices) {
      if (!config.contains(v)) missing.push_back(v);
      else states.push_back(config.at(v));
    }
    if (states.size() == edge.size()) product *= model.tables[e].at(states);
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw std::invalid_argument("configuration misses vertices " + join_ids(missing));
  }
  return product;
}

Eigen::Index VolumeKernel::row(VertexId x) const {
  auto it = std::lower_bound(volume.begin(), volume.end(), x);
  if (it == volume.end() || *it != x) throw std::out_of_range("vertex " + std::to_string(x) + " is not in the volume");
  return static_cast<Eigen::Index>(it - volume.begin());
}

EventProbability exact_kernel(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                              const Configuration& boundary, VertexId x, std::span<const SpinState> event,
                              const std::optional<FrozenRegion>& frozen, const KernelOptions& options) {
  auto p = prepare(h, model, volume, boundary, frozen);
  auto it = p.slot.find(x);
  if (it == p.slot.end()) throw std::invalid_argument("vertex " + std::to_string(x) + " is not in the volume");
  for (SpinState s : event)
    if (s >= p.num_states) throw std::invalid_argument("event state out of range");
  const std::size_t slot = it->second;

  EventProbability out;
  std::size_t terms = 0;
  const bool brute = use_brute_force(p, options, terms);
  if (p.independent()) {
    out.probability = model.spins.measure(event);
    out.log_z = p.log_scale;  // product of the chi^Lambda masses is 1
    return out;
  }
  Eigen::ArrayXd log_mass(static_cast<Eigen::Index>(p.num_states));
  double log_z = 0.0;
  if (brute) {
    auto sums = brute_force(p, terms, options.threads);
    log_z = sums.total.value();
    for (std::size_t s = 0; s < p.num_states; ++s) log_mass(static_cast<Eigen::Index>(s)) = sums.marginal[slot * p.num_states + s].value();
  } else {
    log_mass = eliminated_marginal(p, slot);
    log_z = log_sum_exp(log_mass);
  }
  LogSumAccumulator num;
  std::vector<SpinState> seen(event.begin(), event.end());
  std::sort(seen.begin(), seen.end());
  seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
  for (SpinState s : seen) num.add(log_mass(s));
  out.probability = num.empty() ? 0.0 : std::exp(num.value() - log_z);
  out.log_z = log_z + p.log_scale;
  return out;
}

VolumeKernel exact_marginals(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                             const Configuration& boundary, const std::optional<FrozenRegion>& frozen,
                             const KernelOptions& options) {
  auto p = prepare(h, model, volume, boundary, frozen);
  VolumeKernel k;
  k.volume = p.volume;
  const auto n = static_cast<Eigen::Index>(p.volume.size());
  const auto q = static_cast<Eigen::Index>(p.num_states);
  k.marginals.resize(n, q);
  std::size_t terms = 0;
  if (use_brute_force(p, options, terms)) {
    k.engine = "brute-force";
    auto sums = brute_force(p, terms, options.threads);
    const double log_z = sums.total.value();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index s = 0; s < q; ++s)
        k.marginals(i, s) = std::exp(sums.marginal[static_cast<std::size_t>(i * q + s)].value() - log_z);
    k.log_z = log_z + p.log_scale;
  } else {
    k.engine = "elimination";
    std::vector<Eigen::ArrayXd> rows(p.volume.size());
    detail::parallel_for(p.volume.size(), options.threads,
                         [&](std::size_t i) { rows[i] = eliminated_marginal(p, i); });
    for (Eigen::Index i = 0; i < n; ++i) {
      const double lz = log_sum_exp(rows[static_cast<std::size_t>(i)]);
      if (i == 0) k.log_z = lz + p.log_scale;
      for (Eigen::Index s = 0; s < q; ++s) k.marginals(i, s) = std::exp(rows[static_cast<std::size_t>(i)](s) - lz);
    }
  }
  return k;
}

double configuration_probability(const Hypergraph& h, const InteractionModel& model,
                                 std::span<const VertexId> volume, const Configuration& boundary,
                                 const Configuration& xi) {
  auto p = prepare(h, model, volume, boundary, std::nullopt);
  std::size_t terms = brute_force_terms(p, 24);
  if (terms == 0) throw std::length_error("volume exceeds the exact summation cap");
  auto sums = brute_force(p, terms, 1);
  double w = 0.0;
  std::vector<std::size_t> digit(p.volume.size());
  for (std::size_t i = 0; i < p.volume.size(); ++i) {
    digit[i] = xi.at(p.volume[i]);
    w += p.log_chi[digit[i]];
  }
  for (const auto& e : p.edges) {
    std::size_t k = e.base;
    for (auto [s, st] : e.slots) k += digit[s] * st;
    w += e.log_table[k];
  }
  return std::exp(w - sums.total.value());
}

// ------------------------------------------------------------------ sampler

SamplerResult gibbs_sampler(const Hypergraph& h, const InteractionModel& model, std::span<const VertexId> volume,
                            const Configuration& boundary, const SamplerOptions& options) {
  if (options.sweeps < 1) throw std::invalid_argument("sampler needs at least one sweep");
  auto p = prepare(h, model, volume, boundary, std::nullopt);
  const std::size_t n = p.volume.size(), q = p.num_states;
  const std::size_t burn = options.burn_in ? options.burn_in : options.sweeps / 10;
  const std::size_t batches = std::max<std::size_t>(1, std::min(options.batches, options.sweeps));

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> state(n);
  for (auto& s : state) s = static_cast<std::size_t>(unit(rng) * static_cast<double>(q)) % q;
  std::vector<std::size_t> index(p.edges.size());
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    index[e] = p.edges[e].base;
    for (auto [s, st] : p.edges[e].slots) index[e] += state[s] * st;
  }
  // stride of slot i inside each of its edges
  std::vector<std::vector<std::size_t>> stride_of(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t e : p.edges_of_slot[i])
      for (auto [s, st] : p.edges[e].slots)
        if (s == i) stride_of[i].push_back(st);

  std::vector<double> w(q);
  auto sweep = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& es = p.edges_of_slot[i];
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < q; ++s) {
        double v = p.log_chi[s];
        for (std::size_t j = 0; j < es.size(); ++j) {
          const std::size_t k = index[es[j]] + (s - state[i]) * stride_of[i][j];
          v += p.edges[es[j]].log_table[k];
        }
        w[s] = v;
        top = std::max(top, v);
      }
      double total = 0.0;
      for (auto& v : w) total += (v = std::exp(v - top));
      double u = unit(rng) * total;
      std::size_t next = 0;
      while (next + 1 < q && u >= w[next]) u -= w[next++];
      for (std::size_t j = 0; j < es.size(); ++j) index[es[j]] += (next - state[i]) * stride_of[i][j];
      state[i] = next;
    }
  };

  for (std::size_t t = 0; t < burn; ++t) sweep();
  const std::size_t per_batch = options.sweeps / batches;
  Eigen::MatrixXd batch_sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
  std::vector<Eigen::MatrixXd> batch_means;
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
  std::size_t in_batch = 0;
  for (std::size_t t = 0; t < options.sweeps; ++t) {
    sweep();
    for (std::size_t i = 0; i < n; ++i) batch_sum(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(state[i])) += 1.0;
    if (++in_batch == per_batch && batch_means.size() + 1 < batches) {
      batch_means.push_back(batch_sum / static_cast<double>(in_batch));
      total += batch_sum;
      batch_sum.setZero();
      in_batch = 0;
    }
  }
  if (in_batch > 0) {
    batch_means.push_back(batch_sum / static_cast<double>(in_batch));
    total += batch_sum;
  }

  SamplerResult out;
  out.volume = p.volume;
  out.sweeps = options.sweeps;
  out.burn_in = burn;
  out.marginals = total / static_cast<double>(options.sweeps);
  out.standard_errors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
  const auto b = static_cast<double>(batch_means.size());
  if (batch_means.size() > 1) {
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
    for (const auto& m : batch_means) mean += m / b;
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
    for (const auto& m : batch_means) var += (m - mean).cwiseAbs2();
    out.standard_errors = (var / (b * (b - 1.0))).cwiseSqrt();
  }
  return out;
}

double max_total_variation(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) throw std::invalid_argument("marginal tables differ in shape");
  if (p.rows() == 0) return 0.0;
  return 0.5 * (p - q).cwiseAbs().rowwise().sum().maxCoeff();
}

// ------------------------------------------------------------------ sensitivity

bool is_ferromagnetic(const InteractionModel& model) {
  if (model.spins.size() != 2) return false;
  for (const auto& t : model.tables) {
    const std::size_t a = t.arity();
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = i + 1; j < a; ++j) {
        const std::size_t si = std::size_t{1} << (a - 1 - i), sj = std::size_t{1} << (a - 1 - j);
        for (std::size_t idx = 0; idx < t.num_entries(); ++idx) {
          if (idx & (si | sj)) continue;
          const double f00 = t[idx], f11 = t[idx | si | sj], f10 = t[idx | si], f01 = t[idx | sj];
          if (f11 * f00 < f10 * f01 * (1.0 - 1e-12)) return false;
        }
      }
  }
  return true;
}

double sensitivity_envelope(double epsilon, std::size_t n) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return 2.0 / std::expm1(epsilon) * std::exp(-epsilon * static_cast<double>(n));
}

SensitivityResult boundary_sensitivity(const Hypergraph& h, const InteractionModel& model, VertexId x, EdgeId e_x,
                                       std::size_t r, std::span<const SpinState> event,
                                       const SensitivityOptions& options) {
  LineGraph line(h);
  const auto ball = line.volume_of_ball(x, e_x, r);
  const std::size_t q = model.spins.size();

  // Boundary vertices that vary; under a frozen region only those inside Delta.
  std::vector<VertexId> varying;
  if (options.frozen) {
    auto delta = sorted_unique(options.frozen->delta);
    for (VertexId y : ball.boundary)
      if (std::binary_search(delta.begin(), delta.end(), y)) varying.push_back(y);
  } else {
    varying = ball.boundary;
  }

  SensitivityResult out;
  out.volume_size = ball.volume.size();
  out.boundary_size = varying.size();
  out.p_max = -std::numeric_limits<double>::infinity();
  out.p_min = std::numeric_limits<double>::infinity();

  auto evaluate = [&](const Configuration& sigma) {
    auto ev = exact_kernel(h, model, ball.volume, sigma, x, event, options.frozen, options.kernel);
    out.p_max = std::max(out.p_max, ev.probability);
    out.p_min = std::min(out.p_min, ev.probability);
    ++out.evaluations;
  };
  {
    // engine label for the report
    std::size_t terms = 1;
    bool small = true;
    for (std::size_t i = 0; i < ball.volume.size() && small; ++i) {
      terms *= q;
      small = terms <= (std::size_t{1} << options.kernel.auto_log2_terms);
    }
    out.engine = options.kernel.engine == ExactEngine::Elimination || (options.kernel.engine == ExactEngine::Auto && !small)
                     ? "elimination"
                     : "brute-force";
  }

  double log_count = static_cast<double>(varying.size()) * std::log2(static_cast<double>(q));
  const bool enumerable = log_count <= std::log2(static_cast<double>(options.enumeration_limit));

  if (options.mode == SensitivityMode::ExactSup && enumerable && !options.prefer_monotone) {
    out.method = "enumeration";
    out.exact = true;
    std::vector<SpinState> states(varying.size(), 0);
    while (true) {
      evaluate(Configuration(varying, states));
      std::size_t i = states.size();
      while (i-- > 0) {
        if (++states[i] < q) break;
        states[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
      if (states.empty()) break;
    }
  } else if (options.mode == SensitivityMode::ExactSup) {
    if (!is_ferromagnetic(model))
      throw std::length_error("boundary of " + std::to_string(varying.size()) +
                              " spins is too large to enumerate and the model is not ferromagnetic; use random-search mode");
    // Binary spins: every event is an up-set or a down-set, so the extremes sit at
    // the constant boundaries.
    out.method = "monotone";
    out.exact = true;
    evaluate(Configuration::uniform(varying, 0));
    evaluate(Configuration::uniform(varying, 1));
  } else {
    out.method = "random-search";
    out.exact = false;
    for (std::size_t s = 0; s < q; ++s) evaluate(Configuration::uniform(varying, static_cast<SpinState>(s)));
    std::vector<SpinState> states(varying.size());
    for (std::size_t draw = 0; draw < options.samples; ++draw) {
      for (std::size_t i = 0; i < varying.size(); ++i)
        states[i] = static_cast<SpinState>(
            std::min<std::size_t>(q - 1, static_cast<std::size_t>(counter_uniform(options.seed, draw, i) * static_cast<double>(q))));
      evaluate(Configuration(varying, states));
    }
  }
  out.value = out.p_max - out.p_min;
  return out;
}

// ------------------------------------------------------------------ Gamma bound

GammaBoundReport gamma_factor_bound_check(const InteractionModel& model, double tolerance, std::size_t pair_limit) {
  GammaBoundReport report;
  const auto bounds = model.bounds();
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < model.tables.size(); ++e) {
    const auto& t = model.tables[e];
    const double m = t.min();
    const double bound = std::expm1(2.0 * bounds.delta[e]);
    const double slack_tol = tolerance * std::max(1.0, bound);
    double max_gamma = -std::numeric_limits<double>::infinity();
    auto check = [&](std::size_t i, std::size_t j) {
      const double gamma = (t[i] / m) * (t[j] / m) - 1.0;
      max_gamma = std::max(max_gamma, gamma);
      if ((gamma < -tolerance || gamma > bound + slack_tol) && report.passed) {
        report.passed = false;
        report.witness = {{"edge", e}, {"xi", i}, {"eta", j}, {"gamma", gamma}, {"bound", bound}};
      }
    };
    if (t.num_entries() <= pair_limit) {
      for (std::size_t i = 0; i < t.num_entries(); ++i)
        for (std::size_t j = 0; j < t.num_entries(); ++j) check(i, j);
      report.pairs_checked += t.num_entries() * t.num_entries();
    } else {
      // The extremes of a product of two entries sit at the table extremes.
      Eigen::Index lo = 0, hi = 0;
      t.values().minCoeff(&lo);
      t.values().maxCoeff(&hi);
      check(static_cast<std::size_t>(lo), static_cast<std::size_t>(lo));
      check(static_cast<std::size_t>(hi), static_cast<std::size_t>(hi));
      report.pairs_checked += 2;
    }
    report.max_gamma.push_back(max_gamma);
    report.bound.push_back(bound);
    report.worst_slack = std::min(report.worst_slack, bound - max_gamma);
  }
  if (model.tables.empty()) report.worst_slack = 0.0;
  return report;
}

// ------------------------------------------------------------------ disorder

DisorderReport disorder_decay_experiment(const SimpleGraph& line_graph, NodeId root, const RandomInteractionSpec& spec,
                                         std::span<const std::size_t> schedule, std::size_t replicas, double abar,
                                         std::size_t max_paths) {
  if (root >= line_graph.size()) throw std::out_of_range("root node out of range");
  const auto& dist = spec.distribution;
  DisorderReport report;
  report.k_star = tau_threshold(dist, abar).k_star;
  report.above_threshold = !(spec.coupling < report.k_star);
  report.tau = spec.coupling < dist.coupling_limit() ? dist.tau(spec.coupling) : std::numeric_limits<double>::infinity();
  if (replicas == 0) return report;

  const double rho = std::exp(abar) * report.tau;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const std::size_t radius = schedule[k];
    if (k > 0 && radius <= schedule[k - 1]) throw std::invalid_argument("schedule must be strictly increasing");

    // Flattened node lists of Theta_{N_k}(root).
    std::vector<NodeId> flat;
    std::vector<std::size_t> offsets{0};
    ExpansionBudget budget;
    auto mask = ball_mask(line_graph, root, radius);
    walk_simple_paths(
        line_graph, root, mask, line_graph.size(),
        [&](std::span<const NodeId> path) {
          if (path.size() >= radius + 1) {
            if (offsets.size() > max_paths)
              throw std::length_error("more than " + std::to_string(max_paths) + " paths at N_k = " + std::to_string(radius));
            flat.insert(flat.end(), path.begin(), path.end());
            offsets.push_back(flat.size());
          }
          return WalkStep::Extend;
        },
        budget);

    std::vector<double> samples(replicas);
    std::vector<double> weight(line_graph.size());
    for (std::size_t rep = 0; rep < replicas; ++rep) {
      for (NodeId e = 0; e < line_graph.size(); ++e)
        weight[e] = std::expm1(2.0 * spec.coupling * dist.quantile(counter_uniform(spec.seed, e, rep)));
      double x = 0.0;
      for (std::size_t p = 0; p + 1 < offsets.size(); ++p) {
        double prod = 1.0;
        for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i) prod *= weight[flat[i]];
        x += prod;
      }
      samples[rep] = x;
    }
    DisorderRow row;
    row.k = k + 1;
    row.radius = radius;
    row.paths = offsets.size() - 1;
    for (double s : samples) row.mean += s / static_cast<double>(replicas);
    if (replicas > 1) {
      double var = 0.0;
      for (double s : samples) var += (s - row.mean) * (s - row.mean);
      row.standard_error = std::sqrt(var / static_cast<double>(replicas - 1) / static_cast<double>(replicas));
    }
    row.envelope = rho < 1.0 ? std::pow(rho, static_cast<double>(radius)) / (1.0 - rho)
                             : std::numeric_limits<double>::infinity();
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace hmrf
