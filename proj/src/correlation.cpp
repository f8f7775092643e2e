#include "exceed/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "exceed/error.hpp"

namespace exceed {

namespace {

constexpr double kPowerCap = 0.999;
constexpr double kLogCap = 0.9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

CorrelationModel CorrelationModel::geometric(double r) {
  if (!(r > -1.0 && r < 1.0)) throw ConfigError("geometric correlation needs r in (-1, 1)");
  return CorrelationModel(Geometric{r});
}

CorrelationModel CorrelationModel::power(double a, double c) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("power correlation needs a > 0");
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("power correlation needs c > 0");
  return CorrelationModel(PowerDecay{a, c});
}

CorrelationModel CorrelationModel::log_decay(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("log correlation needs c > 0");
  return CorrelationModel(LogDecay{c});
}

double CorrelationModel::rho(std::uint64_t k) const noexcept {
  if (k == 0) return 1.0;
  const double lag = static_cast<double>(k);
  return std::visit(Overloaded{
                        [&](const Geometric& g) { return std::pow(g.r, lag); },
                        [&](const PowerDecay& p) {
                          return std::min(kPowerCap, p.c * std::pow(1.0 + lag, -p.a));
                        },
                        [&](const LogDecay& l) {
                          return std::min(kLogCap, l.c / std::log(lag + std::numbers::e));
                        },
                    },
                    family_);
}

bool CorrelationModel::berman_ok() const noexcept {
  return !std::holds_alternative<LogDecay>(family_);
}

bool CorrelationModel::is_white() const noexcept {
  const auto* g = std::get_if<Geometric>(&family_);
  return g != nullptr && g->r == 0.0;
}

std::string CorrelationModel::tag() const {
  return std::visit(Overloaded{
                        [](const Geometric&) { return std::string("geometric"); },
                        [](const PowerDecay&) { return std::string("power"); },
                        [](const LogDecay&) { return std::string("log"); },
                    },
                    family_);
}

std::string CorrelationModel::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Geometric& g) { out << "geometric(r=" << g.r << ")"; },
                 [&](const PowerDecay& p) { out << "power(a=" << p.a << ",c=" << p.c << ")"; },
                 [&](const LogDecay& l) { out << "log(c=" << l.c << ")"; },
             },
             family_);
  return out.str();
}

std::vector<double> CorrelationModel::first_row(std::size_t count) const {
  std::vector<double> row(count);
  for (std::size_t k = 0; k < count; ++k) row[k] = rho(k);
  return row;
}

std::vector<BermanRow> berman_diagnostic(const CorrelationModel& model,
                                         const std::vector<std::uint64_t>& n_grid, double delta) {
  if (!(delta >= 0.0)) throw ConfigError("berman_diagnostic: delta must be >= 0");
  std::vector<BermanRow> rows;
  rows.reserve(n_grid.size());
  std::uint64_t previous = 1;
  for (const std::uint64_t n : n_grid) {
    if (n < 2 || n <= previous) {
      throw ConfigError("berman_diagnostic: grid must be strictly increasing with n >= 2");
    }
    previous = n;
    const double log_n = std::log(static_cast<double>(n));
    const double r = model.rho(n);
    rows.push_back({n, r * log_n, r * std::pow(log_n, 1.0 + delta)});
  }
  return rows;
}

std::uint64_t berman_crossover(const CorrelationModel& model) {
  // f(n) = rho(n) ln n has d/dn ln f = d/dn ln rho(n) + 1 / (n ln n); once this
  // is negative on [n, inf) the sequence decreases from n on.
  return std::visit(
      Overloaded{
          [](const Geometric& g) -> std::uint64_t {
            if (g.r == 0.0) return 2;
            const double decay = -std::log(std::abs(g.r));
            std::uint64_t n = 2;
            while (static_cast<double>(n) * std::log(static_cast<double>(n)) * decay <= 1.0) ++n;
            return n;
          },
          [&](const PowerDecay& p) -> std::uint64_t {
            std::uint64_t n = 2;
            for (;;) {
              const double x = static_cast<double>(n);
              const bool uncapped = p.c * std::pow(1.0 + x, -p.a) < kPowerCap;
              if (uncapped && p.a * x * std::log(x) > 1.0 + x) return n;
              ++n;
            }
          },
          [](const LogDecay&) -> std::uint64_t { return 0; },
      },
      model.family());
}

}  // namespace exceed
