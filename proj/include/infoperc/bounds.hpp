#pragma once

#include <string>
#include <vector>

namespace infoperc {

/// Error lower bound (1 - p_max) - sqrt(info / 2), clamped to [0, 1]. info in nats;
/// p_max is the largest prior probability of the estimated quantity.
double fano_bound(double info_nats, double p_max);

/// Same with info = perc * h_max.
double fano_bound_perc(double perc, double p_max, double h_max_nats);

// Phase-boundary curves for p = a/n, q = b/n. Each returns the a >= b point of the
// boundary at the given b. Leading order only.

/// (a - b)^2 = 2 (a + b).
double curve_mns(double b);
/// (sqrt a - sqrt b)^2 = 1.
double curve_perc_2sbm(double b);
/// (a - b)^2 / (a + (k - 1) b) = 2k log(k - 1) / (k - 1); needs k >= 3.
double curve_banks(int k, double b);
/// (sqrt a - sqrt b)^2 = k / 2.
double curve_ksbm(int k, double b);
/// (((log k - log(k - 1)) / log k) (k - 1) / k + 1 / k)^(-1).
double f_gupo(double k);
/// (sqrt a - sqrt b)^2 = f_gupo(k).
double curve_gupo(int k, double b);

/// Names of the bounds ("perc2", "mns", "ksbm", "banks", "gupo") that declare
/// correlated recovery impossible at (a, b) with k communities. perc2 and mns are
/// two-community bounds; banks needs k >= 3.
std::vector<std::string> region_classify(double a, double b, int k);

/// True when curve_ksbm(k, .) - curve_banks(k, .) changes sign on the grid
/// b = i * b_max / steps, i = 0..steps.
bool ksbm_banks_cross(int k, double b_max, int steps = 2000);

} // namespace infoperc
