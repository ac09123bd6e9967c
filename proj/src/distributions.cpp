// Copyright 2026 The wiks authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wiks/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "wiks/detail/numfmt.hpp"

namespace wiks {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool cond, const char* message) {
  if (!cond) throw std::invalid_argument(message);
}

bool finite(double v) { return std::isfinite(v); }

double normal_cdf(double mean, double sd, double x) {
  return 0.5 * boost::math::erfc((mean - x) / (sd * std::numbers::sqrt2));
}

double normal_quantile(double mean, double sd, double p) {
  return mean + sd * std::numbers::sqrt2 * boost::math::erf_inv(2.0 * p - 1.0);
}

double student_t_cdf(double df, double t) {
  if (t == 0.0) return 0.5;
  const double u = df / (df + t * t);
  const double half_tail = 0.5 * boost::math::ibeta(0.5 * df, 0.5, u);
  return t < 0.0 ? half_tail : 1.0 - half_tail;
}

double student_t_quantile(double df, double p) {
  if (p == 0.5) return 0.0;
  const double tail = p < 0.5 ? 2.0 * p : 2.0 * (1.0 - p);
  const double u = boost::math::ibeta_inv(0.5 * df, 0.5, tail);
  const double t = std::sqrt(df * (1.0 - u) / u);
  return p < 0.5 ? -t : t;
}

}  // namespace

Normal::Normal(double mean, double sd) : mean(mean), sd(sd) {
  require(finite(mean) && finite(sd) && sd > 0, "normal: need finite mean and sd > 0");
}

Uniform::Uniform(double lo, double hi) : lo(lo), hi(hi) {
  require(finite(lo) && finite(hi) && hi > lo, "uniform: need finite bounds with hi > lo");
}

LogNormal::LogNormal(double log_mean, double log_sd) : log_mean(log_mean), log_sd(log_sd) {
  require(finite(log_mean) && finite(log_sd) && log_sd > 0,
          "lognormal: need finite log-mean and log-sd > 0");
}

Beta::Beta(double a, double b) : a(a), b(b) {
  require(finite(a) && finite(b) && a > 0 && b > 0, "beta: need a > 0 and b > 0");
}

Gamma::Gamma(double shape, double rate) : shape(shape), rate(rate) {
  require(finite(shape) && finite(rate) && shape > 0 && rate > 0,
          "gamma: need shape > 0 and rate > 0");
}

StudentT::StudentT(double df) : df(df) {
  require(finite(df) && df > 0, "t: need df > 0");
}

NormalMixture::NormalMixture(double weight1, double mean1, double sd1, double mean2, double sd2)
    : weight1(weight1), mean1(mean1), sd1(sd1), mean2(mean2), sd2(sd2) {
  require(finite(weight1) && weight1 >= 0 && weight1 <= 1, "mixture: need weight in [0,1]");
  require(finite(mean1) && finite(sd1) && sd1 > 0, "mixture: first component needs sd > 0");
  require(finite(mean2) && finite(sd2) && sd2 > 0, "mixture: second component needs sd > 0");
}

BivariateNormal::BivariateNormal(double mean_x, double mean_y, double var_x, double cov_xy,
                                 double var_y)
    : mean_x(mean_x), mean_y(mean_y), var_x(var_x), cov_xy(cov_xy), var_y(var_y) {
  require(finite(mean_x) && finite(mean_y) && finite(var_x) && finite(cov_xy) && finite(var_y),
          "bivariate normal: parameters must be finite");
  require(var_x > 0 && var_y > 0 && var_x * var_y - cov_xy * cov_xy > 0,
          "bivariate normal: covariance must be positive-definite");
}

double sample_one(const UnivariateModel& model, std::mt19937_64& rng) {
  return std::visit(
      overloaded{
          [&](const Normal& d) { return std::normal_distribution<double>(d.mean, d.sd)(rng); },
          [&](const Uniform& d) {
            return std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
          },
          [&](const LogNormal& d) {
            return std::lognormal_distribution<double>(d.log_mean, d.log_sd)(rng);
          },
          [&](const Beta& d) {
            for (;;) {
              const double g1 = std::gamma_distribution<double>(d.a, 1.0)(rng);
              const double g2 = std::gamma_distribution<double>(d.b, 1.0)(rng);
              if (g1 + g2 > 0) return g1 / (g1 + g2);
            }
          },
          [&](const Gamma& d) {
            return std::gamma_distribution<double>(d.shape, 1.0 / d.rate)(rng);
          },
          [&](const StudentT& d) { return std::student_t_distribution<double>(d.df)(rng); },
          [&](const NormalMixture& d) {
            const bool first = std::bernoulli_distribution(d.weight1)(rng);
            return std::normal_distribution<double>(first ? d.mean1 : d.mean2,
                                                    first ? d.sd1 : d.sd2)(rng);
          },
      },
      model);
}

Point2 sample_one(const BivariateModel& model, std::mt19937_64& rng) {
  std::normal_distribution<double> std_normal(0.0, 1.0);
  const double z1 = std_normal(rng);
  const double z2 = std_normal(rng);
  const double l11 = std::sqrt(model.var_x);
  const double l21 = model.cov_xy / l11;
  const double l22 = std::sqrt(model.var_y - l21 * l21);
  return {model.mean_x + l11 * z1, model.mean_y + l21 * z1 + l22 * z2};
}

std::vector<double> sample_univariate(const UnivariateModel& model, std::size_t n,
                                      const SeedSpec& seed) {
  auto rng = make_engine(seed);
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(model, rng));
  return out;
}

std::vector<Point2> sample_bivariate(const BivariateModel& model, std::size_t n,
                                     const SeedSpec& seed) {
  auto rng = make_engine(seed);
  std::vector<Point2> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_one(model, rng));
  return out;
}

double cdf_univariate(const UnivariateModel& model, double x) {
  return std::visit(
      overloaded{
          [&](const Normal& d) { return normal_cdf(d.mean, d.sd, x); },
          [&](const Uniform& d) {
            if (x <= d.lo) return 0.0;
            if (x >= d.hi) return 1.0;
            return (x - d.lo) / (d.hi - d.lo);
          },
          [&](const LogNormal& d) {
            if (x <= 0) return 0.0;
            return normal_cdf(d.log_mean, d.log_sd, std::log(x));
          },
          [&](const Beta& d) {
            if (x <= 0) return 0.0;
            if (x >= 1) return 1.0;
            return boost::math::ibeta(d.a, d.b, x);
          },
          [&](const Gamma& d) {
            if (x <= 0) return 0.0;
            return boost::math::gamma_p(d.shape, d.rate * x);
          },
          [&](const StudentT& d) { return student_t_cdf(d.df, x); },
          [&](const NormalMixture& d) {
            return d.weight1 * normal_cdf(d.mean1, d.sd1, x) +
                   (1.0 - d.weight1) * normal_cdf(d.mean2, d.sd2, x);
          },
      },
      model);
}

double quantile_univariate(const UnivariateModel& model, double p) {
  require(p > 0 && p < 1, "quantile: p must lie in (0,1)");
  return std::visit(
      overloaded{
          [&](const Normal& d) { return normal_quantile(d.mean, d.sd, p); },
          [&](const Uniform& d) { return d.lo + p * (d.hi - d.lo); },
          [&](const LogNormal& d) {
            return std::exp(normal_quantile(d.log_mean, d.log_sd, p));
          },
          [&](const Beta& d) { return boost::math::ibeta_inv(d.a, d.b, p); },
          [&](const Gamma& d) { return boost::math::gamma_p_inv(d.shape, p) / d.rate; },
          [&](const StudentT& d) { return student_t_quantile(d.df, p); },
          [&](const NormalMixture& d) {
            // No closed form: bisect F(x) = p between the component quantiles,
            // which always bracket the mixture quantile.
            const double q1 = normal_quantile(d.mean1, d.sd1, p);
            const double q2 = normal_quantile(d.mean2, d.sd2, p);
            double lo = std::min(q1, q2);
            double hi = std::max(q1, q2);
            const UnivariateModel self{d};
            for (int iter = 0; iter < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++iter) {
              const double mid = 0.5 * (lo + hi);
              (cdf_univariate(self, mid) < p ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
          },
      },
      model);
}

std::string model_to_string(const UnivariateModel& model) {
  using detail::format_double;
  return std::visit(
      overloaded{
          [](const Normal& d) {
            return "normal(" + format_double(d.mean) + "," + format_double(d.sd) + ")";
          },
          [](const Uniform& d) {
            return "uniform(" + format_double(d.lo) + "," + format_double(d.hi) + ")";
          },
          [](const LogNormal& d) {
            return "lognormal(" + format_double(d.log_mean) + "," + format_double(d.log_sd) + ")";
          },
          [](const Beta& d) {
            return "beta(" + format_double(d.a) + "," + format_double(d.b) + ")";
          },
          [](const Gamma& d) {
            return "gamma(" + format_double(d.shape) + "," + format_double(d.rate) + ")";
          },
          [](const StudentT& d) { return "t(" + format_double(d.df) + ")"; },
          [](const NormalMixture& d) {
            return "mixture(" + format_double(d.weight1) + "," + format_double(d.mean1) + "," +
                   format_double(d.sd1) + "," + format_double(d.mean2) + "," +
                   format_double(d.sd2) + ")";
          },
      },
      model);
}

namespace {

// Splits "family(p1,p2)" or "family:p1,p2" into a lowercase family name and
// numeric parameters; shared by the univariate and bivariate parsers.
std::pair<std::string, std::vector<double>> split_model_text(const std::string& text) {
  std::string family;
  std::string params;
  const auto paren = text.find('(');
  const auto colon = text.find(':');
  if (paren != std::string::npos) {
    if (text.back() != ')') throw std::invalid_argument("model '" + text + "': missing ')'");
    family = text.substr(0, paren);
    params = text.substr(paren + 1, text.size() - paren - 2);
  } else if (colon != std::string::npos) {
    family = text.substr(0, colon);
    params = text.substr(colon + 1);
  } else {
    family = text;
  }
  std::transform(family.begin(), family.end(), family.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  std::vector<double> p;
  if (!params.empty()) {
    std::size_t start = 0;
    while (start <= params.size()) {
      const auto comma = params.find(',', start);
      const auto end = comma == std::string::npos ? params.size() : comma;
      double value = 0;
      if (!detail::parse_double(std::string_view(params).substr(start, end - start), value)) {
        throw std::invalid_argument("model '" + text + "': bad numeric parameter");
      }
      p.push_back(value);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return {std::move(family), std::move(p)};
}

}  // namespace

UnivariateModel parse_model(const std::string& text) {
  auto [family, p] = split_model_text(text);
  auto arity = [&](std::size_t want) {
    if (p.size() != want) {
      throw std::invalid_argument("model '" + text + "': expected " + std::to_string(want) +
                                  " parameters, got " + std::to_string(p.size()));
    }
  };

  if (family == "normal") {
    arity(2);
    return Normal(p[0], p[1]);
  }
  if (family == "uniform") {
    arity(2);
    return Uniform(p[0], p[1]);
  }
  if (family == "lognormal") {
    arity(2);
    return LogNormal(p[0], p[1]);
  }
  if (family == "beta") {
    arity(2);
    return Beta(p[0], p[1]);
  }
  if (family == "gamma") {
    arity(2);
    return Gamma(p[0], p[1]);
  }
  if (family == "t") {
    arity(1);
    return StudentT(p[0]);
  }
  if (family == "mixture") {
    arity(5);
    return NormalMixture(p[0], p[1], p[2], p[3], p[4]);
  }
  throw std::invalid_argument("unknown model family '" + family + "'");
}

std::string model_to_string(const BivariateModel& model) {
  using detail::format_double;
  return "binormal(" + format_double(model.mean_x) + "," + format_double(model.mean_y) + "," +
         format_double(model.var_x) + "," + format_double(model.cov_xy) + "," +
         format_double(model.var_y) + ")";
}

BivariateModel parse_bivariate_model(const std::string& text) {
  auto [family, p] = split_model_text(text);
  if (family != "binormal") {
    throw std::invalid_argument("unknown bivariate model family '" + family + "'");
  }
  if (p.size() != 5) {
    throw std::invalid_argument("model '" + text + "': expected 5 parameters, got " +
                                std::to_string(p.size()));
  }
  return BivariateNormal(p[0], p[1], p[2], p[3], p[4]);
}

bool scenario_is_bivariate(int id) { return id == 9 || id == 10; }

std::string scenario_name(int id) {
  switch (id) {
    case 1: return "normal mean shift";
    case 2: return "normal variance shift";
    case 3: return "lognormal mean shift";
    case 4: return "lognormal variance shift";
    case 5: return "beta symmetry";
    case 6: return "gamma shape";
    case 7: return "normal mixtures";
    case 8: return "tails";
    case 9: return "bivariate shift, identity covariance";
    case 10: return "bivariate shift, correlated covariance";
    default: throw std::invalid_argument("unknown scenario id " + std::to_string(id));
  }
}

std::pair<double, double> scenario_theta_range(int id) {
  switch (id) {
    case 1: return {0.0, 3.0};
    case 2: return {1.0, 4.0};
    case 3: return {0.0, 3.0};
    case 4: return {1.0, 5.0};
    case 5: return {1.0, 6.0};
    case 6: return {3.0, 6.0};
    case 7: return {0.0, 3.0};
    case 8: return {1e-3, 10.0};
    case 9: return {0.0, 1.0};
    case 10: return {0.0, 1.0};
    default: throw std::invalid_argument("unknown scenario id " + std::to_string(id));
  }
}

std::vector<double> default_theta_grid(int id) {
  if (id == 8) {
    // Geometric sweep across four decades of tail heaviness.
    std::vector<double> grid;
    const auto [lo, hi] = scenario_theta_range(id);
    const int points = 8;
    for (int i = 0; i < points; ++i) {
      grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    }
    return grid;
  }
  const auto [lo, hi] = scenario_theta_range(id);
  const double step = scenario_is_bivariate(id) ? 0.25 : 0.5;
  std::vector<double> grid;
  for (double t = lo; t < hi + step / 2; t += step) grid.push_back(t);
  return grid;
}

Scenario scenario(int id, double theta) {
  Scenario s;
  s.id = id;
  s.theta = theta;
  s.bivariate = scenario_is_bivariate(id);
  const auto [lo, hi] = scenario_theta_range(id);
  s.theta_outside_grid = theta < lo || theta > hi;

  switch (id) {
    case 1:
      s.univariate_pair = {Normal(0, 1), Normal(theta, 1)};
      break;
    case 2:
      s.univariate_pair = {Normal(0, 1), Normal(0, std::sqrt(theta))};
      break;
    case 3:
      s.univariate_pair = {LogNormal(0, 1), LogNormal(theta, 1)};
      break;
    case 4:
      s.univariate_pair = {LogNormal(0, 1), LogNormal(0, std::sqrt(theta))};
      break;
    case 5:
      s.univariate_pair = {Beta(1, 1), Beta(theta, theta)};
      break;
    case 6:
      s.univariate_pair = {Gamma(3, 2), Gamma(theta, 2)};
      break;
    case 7:
      s.univariate_pair = {Normal(0, 1), NormalMixture(0.5, -theta, 1, theta, 1)};
      break;
    case 8:
      s.univariate_pair = {Normal(0, 1), StudentT(1.0 / theta)};
      break;
    case 9:
      s.bivariate_pair = {BivariateNormal(0, 0, 1, 0, 1),
                          BivariateNormal(theta, theta, 1, 0, 1)};
      break;
    case 10:
      s.bivariate_pair = {BivariateNormal(0, 0, 1, 0.5, 2),
                          BivariateNormal(theta, theta, 1, 0.5, 2)};
      break;
    default:
      throw std::invalid_argument("unknown scenario id " + std::to_string(id));
  }
  return s;
}

double true_ks_distance(const UnivariateModel& model_x, const UnivariateModel& model_y,
                        double tol) {
  require(tol > 0, "true_ks_distance: tol must be positive");

  // Pool per-model quantile grids so each model's mass is well resolved even
  // when the supports differ by orders of magnitude (heavy-tail t vs normal).
  constexpr int kPointsPerModel = 2048;
  constexpr double kTail = 1e-6;
  std::vector<double> xs;
  xs.reserve(2 * kPointsPerModel);
  for (const auto* m : {&model_x, &model_y}) {
    for (int i = 0; i < kPointsPerModel; ++i) {
      const double p = kTail + (1.0 - 2.0 * kTail) * i / (kPointsPerModel - 1);
      xs.push_back(quantile_univariate(*m, p));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const auto gap = [&](double x) {
    return std::abs(cdf_univariate(model_x, x) - cdf_univariate(model_y, x));
  };

  double best = 0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double g = gap(xs[i]);
    if (g > best) {
      best = g;
      best_i = i;
    }
  }

  // Golden-section polish inside the bracket around the best grid point.
  double a = xs[best_i == 0 ? 0 : best_i - 1];
  double b = xs[std::min(best_i + 1, xs.size() - 1)];
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = gap(c);
  double fd = gap(d);
  for (int iter = 0; iter < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = gap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = gap(d);
    }
  }
  return std::max({best, fc, fd});
}

}  // namespace wiks
