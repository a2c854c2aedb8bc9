#pragma once

#include <string>
#include <vector>

#include "sqv/feynman.hpp"
#include "sqv/forests.hpp"

namespace sqv {

enum class AmplitudeMethod { ClosedForm, Quadrature };

std::string to_string(AmplitudeMethod m);

struct StochasticOptions {
  double t_top = 0.0;          ///< shared external time (value is independent of it)
  double horizon_factor = 40;  ///< quadrature window = factor / lambda_min
  double quad_tol = 1e-9;
  int max_internal = 8;
};

/// Value of one stochastic diagram (map plus spanning forest) at equal
/// external times.
///
/// Closed form: expand every edge in the eigenbasis; per eigen assignment
/// the time integral is a sum over linear extensions of the forest order
/// of gap products, with each tree or noise edge contributing its
/// eigenvalue as a decay rate to the gaps it spans and each noise edge an
/// extra 1/lambda. Exact up to rounding, manifestly independent of t_top.
///
/// Quadrature: truncated nested numerical integration of the defining
/// time integral with matrix-valued edge kernels, for cross-checks.
double stochastic_amplitude(const CombinatorialMap& map, const SpanningForest& forest,
                            const Theory& theory, AmplitudeMethod method,
                            const StochasticOptions& opts = {});

/// Per-map comparison of the two quantization routes.
struct AmplitudeReport {
  CanonicalKey map_key;
  int order = 0;  ///< number of internal vertices
  double feynman_value = 0.0;
  std::vector<std::pair<std::string, double>> forest_values;  ///< forest id -> value
  double forest_sum = 0.0;
  double abs_discrepancy = 0.0;
  double rel_discrepancy = 0.0;
  AmplitudeMethod method = AmplitudeMethod::ClosedForm;
  bool pass = false;
};

/// Relative tolerance the verifier holds a method to.
double method_tolerance(AmplitudeMethod method);

/// Feynman amplitude versus the sum of stochastic amplitudes over all
/// spanning forests of the map. A failing report is a result, not an
/// error. Forests are evaluated and summed in a fixed order.
AmplitudeReport verify_forest_sum(const CombinatorialMap& map, const Theory& theory,
                                  AmplitudeMethod method = AmplitudeMethod::ClosedForm,
                                  const StochasticOptions& opts = {});

struct OrderReport {
  int order = 0;
  std::vector<AmplitudeReport> reports;  ///< sorted by canonical key
  double worst_rel_discrepancy = 0.0;
  bool all_pass = true;
  double map_sum = 0.0;              ///< sum of Feynman values over the maps
  double moment_value = 0.0;         ///< same thing from the moment assembler
  bool moment_consistent = false;
};

/// Runs verify_forest_sum on every map of the given order (vertex degrees
/// drawn from the theory's kernel arities) and cross-checks the order-p
/// moment against the perturbative assembler.
OrderReport verify_order(const Theory& theory, int order,
                         AmplitudeMethod method = AmplitudeMethod::ClosedForm,
                         const StochasticOptions& opts = {}, const EnumerateOptions& enum_opts = {},
                         unsigned jobs = 1);

}  // namespace sqv
