#pragma once

#include <cstddef>
#include <vector>

namespace oclab {

// Upper regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees of freedom.
double chi2_sf(double x, double df);

// Mean/variance helpers (population variance unless noted).
double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // population
double sample_stddev(const std::vector<double>& v);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// Centered moving average; window is clipped at the ends so output length
// equals input length. window must be odd and >= 1.
std::vector<double> moving_average(const std::vector<double>& v, int window);

}  // namespace oclab
