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

#ifndef WIKS_DISTRIBUTIONS_HPP
#define WIKS_DISTRIBUTIONS_HPP

#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wiks/seed.hpp"

namespace wiks {

// Parametric families used as data generators, base measures, and
// null-calibration models. Constructors validate parameters and throw
// std::invalid_argument on violation.

struct Normal {
  double mean;
  double sd;
  Normal(double mean, double sd);
};

struct Uniform {
  double lo;
  double hi;
  Uniform(double lo, double hi);
};

// Distribution of exp(Z) with Z ~ Normal(log_mean, log_sd).
struct LogNormal {
  double log_mean;
  double log_sd;
  LogNormal(double log_mean, double log_sd);
};

struct Beta {
  double a;
  double b;
  Beta(double a, double b);
};

// Shape/rate parameterization: density proportional to x^(shape-1) e^(-rate x).
struct Gamma {
  double shape;
  double rate;
  Gamma(double shape, double rate);
};

// Student t with real-valued degrees of freedom; df as small as 0.1 occurs in
// the heavy-tail scenario, so nothing here may assume integer df.
struct StudentT {
  double df;
  explicit StudentT(double df);
};

// weight1 * Normal(mean1, sd1) + (1 - weight1) * Normal(mean2, sd2).
struct NormalMixture {
  double weight1;
  double mean1;
  double sd1;
  double mean2;
  double sd2;
  NormalMixture(double weight1, double mean1, double sd1, double mean2, double sd2);
};

using UnivariateModel =
    std::variant<Normal, Uniform, LogNormal, Beta, Gamma, StudentT, NormalMixture>;

struct Point2 {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Bivariate normal with mean (mean_x, mean_y) and covariance
// [[var_x, cov_xy], [cov_xy, var_y]]. The constructor rejects matrices that
// are not symmetric positive-definite (posed here as var_x > 0 and
// determinant > 0).
struct BivariateNormal {
  double mean_x;
  double mean_y;
  double var_x;
  double cov_xy;
  double var_y;
  BivariateNormal(double mean_x, double mean_y, double var_x, double cov_xy, double var_y);
};

using BivariateModel = BivariateNormal;

// One draw using the supplied engine. Building block for samplers that
// interleave model draws with other variates (stick-breaking).
double sample_one(const UnivariateModel& model, std::mt19937_64& rng);
Point2 sample_one(const BivariateModel& model, std::mt19937_64& rng);

// n i.i.d. draws, deterministic given the seed.
std::vector<double> sample_univariate(const UnivariateModel& model, std::size_t n,
                                      const SeedSpec& seed);
std::vector<Point2> sample_bivariate(const BivariateModel& model, std::size_t n,
                                     const SeedSpec& seed);

double cdf_univariate(const UnivariateModel& model, double x);

// Inverse CDF. p must lie in (0, 1). Used for quantile grids; accuracy is
// that of the underlying special-function inversions.
double quantile_univariate(const UnivariateModel& model, double p);

// Human-readable form, e.g. "normal(0,1)"; parse_model inverts it and also
// accepts the colon form "normal:0,1" used by CLI flags.
std::string model_to_string(const UnivariateModel& model);
UnivariateModel parse_model(const std::string& text);

// Bivariate form: "binormal(mean_x,mean_y,var_x,cov_xy,var_y)".
std::string model_to_string(const BivariateModel& model);
BivariateModel parse_bivariate_model(const std::string& text);

// Simulation scenarios. Ids 1..8 are univariate pairs; ids 9 and 10 are
// bivariate mean-shift pairs (9: identity covariance, 10: covariance
// [[1,0.5],[0.5,2]]). theta_outside_grid flags values outside the standard
// grid for the id; callers decide whether to warn.
struct Scenario {
  int id = 0;
  double theta = 0;
  bool bivariate = false;
  bool theta_outside_grid = false;
  std::vector<UnivariateModel> univariate_pair;   // size 2 when !bivariate
  std::vector<BivariateModel> bivariate_pair;     // size 2 when bivariate
};

Scenario scenario(int id, double theta);
bool scenario_is_bivariate(int id);
std::string scenario_name(int id);

// The theta grid each scenario is normally swept over.
std::pair<double, double> scenario_theta_range(int id);
std::vector<double> default_theta_grid(int id);

// sup over x of |CDF_X(x) - CDF_Y(x)|, accurate to within tol. Dense grid
// over the pooled quantile range of both models, then golden-section
// refinement around the best bracket.
double true_ks_distance(const UnivariateModel& model_x, const UnivariateModel& model_y,
                        double tol = 1e-6);

}  // namespace wiks

#endif  // WIKS_DISTRIBUTIONS_HPP
