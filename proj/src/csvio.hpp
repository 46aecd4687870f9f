#pragma once

#include <string>
#include <vector>

#include "boolean_model.hpp"
#include "measure.hpp"

namespace sphstat {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
double parse_double(const std::string& s);

void save_realization_csv(const Realization& r, const std::string& path);
Realization load_realization_csv(const std::string& path);

// Atoms as radius,weight rows; optional cdf section evaluated at `knots`.
void save_measure_csv(const WeightedRadiusMeasure& m, const std::string& path,
                      const std::vector<double>& cdf_knots = {});

}  // namespace sphstat
