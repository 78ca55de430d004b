#include "hmrf/growth.hpp"

#include <cmath>
#include <stdexcept>

namespace hmrf {

GrowthFunction GrowthFunction::table(std::map<std::size_t, double> values) {
  if (values.empty()) throw std::invalid_argument("growth table is empty");
  GrowthFunction g(Kind::Table, 0.0);
  g.table_ = std::move(values);
  return g;
}

std::string GrowthFunction::name() const {
  switch (kind_) {
    case Kind::Log: return "log";
    case Kind::Linear: return "linear";
    case Kind::LogSquared: return "log-squared";
    case Kind::Square: return "square";
    case Kind::Constant: return "constant";
    case Kind::Table: return "custom-table";
  }
  return "unknown";
}

double GrowthFunction::operator()(std::size_t t) const {
  switch (kind_) {
    case Kind::Log:
    case Kind::LogSquared:
      if (t == 0) throw std::domain_error("log-type growth function evaluated at 0");
      return from_log(std::log(static_cast<double>(t)));
    case Kind::Linear: return static_cast<double>(t) + param_;
    case Kind::Square: return static_cast<double>(t) * static_cast<double>(t);
    case Kind::Constant: return param_;
    case Kind::Table: {
      auto it = table_.upper_bound(t);
      if (it == table_.begin()) throw std::domain_error("growth table has no entry at or below argument");
      return std::prev(it)->second;
    }
  }
  return 0.0;
}

double GrowthFunction::from_log(double log_t) const {
  switch (kind_) {
    case Kind::Log: return log_t + param_;
    case Kind::LogSquared: return log_t * log_t;
    case Kind::Linear: return std::exp(log_t) + param_;
    case Kind::Square: return std::exp(2.0 * log_t);
    case Kind::Constant: return param_;
    case Kind::Table: return (*this)(static_cast<std::size_t>(std::llround(std::exp(log_t))));
  }
  return 0.0;
}

bool GrowthFunction::strictly_increasing_on(std::size_t lo, std::size_t hi) const {
  for (std::size_t t = lo; t < hi; ++t)
    if (!((*this)(t) < (*this)(t + 1))) return false;
  return true;
}

void to_json(nlohmann::json& j, const GrowthFunction& g) {
  j = {{"kind", g.name()}};
  if (g.kind_ == GrowthFunction::Kind::Table) {
    auto entries = nlohmann::json::array();
    for (auto [t, v] : g.table_) entries.push_back({t, v});
    j["table"] = entries;
  } else if (g.param_ != 0.0) {
    j["param"] = g.param_;
  }
}

void from_json(const nlohmann::json& j, GrowthFunction& g) {
  auto kind = j.at("kind").get<std::string>();
  double param = j.value("param", 0.0);
  if (kind == "log") g = GrowthFunction::log(param);
  else if (kind == "linear") g = GrowthFunction::linear(param);
  else if (kind == "log-squared") g = GrowthFunction::log_squared();
  else if (kind == "square") g = GrowthFunction::square();
  else if (kind == "constant") g = GrowthFunction::constant(param);
  else if (kind == "custom-table") {
    std::map<std::size_t, double> values;
    for (const auto& entry : j.at("table")) values[entry.at(0).get<std::size_t>()] = entry.at(1).get<double>();
    g = GrowthFunction::table(std::move(values));
  } else {
    throw std::invalid_argument("unknown growth function kind '" + kind + "'");
  }
}

}  // namespace hmrf
