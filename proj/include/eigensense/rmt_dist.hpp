#pragma once

#include <vector>

#include "eigensense/dist_table.hpp"
#include "eigensense/rng.hpp"
#include "eigensense/types.hpp"

namespace eigensense::rmt {

// Joint density of the ordered fluctuation vector (GOE for real, GUE for
// complex), evaluated on the ordered cone beta_1 >= ... >= beta_K.
double joint_density(const std::vector<double>& betas, ValueCase vc);

// Normalization constants of the joint density.
double joint_density_constant(int K, ValueCase vc);

// Ordered eigenvalues of one GOE/GUE draw with the exact entry variances of
// the limit law (real: diag N(0,2), offdiag N(0,1); complex: diag N(0,1),
// offdiag parts N(0,1/2)).
std::vector<double> sample_wigner(int K, ValueCase vc, RandomStream& rng);

inline constexpr int kDefaultGridPoints = 4001;
inline constexpr std::uint64_t kTableSampleSeed = 0x7AB1E5EEDULL;
inline constexpr std::size_t kTableSampleDraws = 1'000'000;

// Marginal law of beta_i for K antennas: quadrature for K <= 3, empirical
// (histogram of sample_wigner draws) for K >= 4.
DistributionTable marginal(int K, int i, ValueCase vc,
                           int grid_points = kDefaultGridPoints);

// S0 condition-number law of lim sqrt(N)(T_c - 1): closed form for K = 2,
// quadrature for K = 3, sampling for K >= 4.
DistributionTable cnd_s0_law(int K, ValueCase vc, int grid_points = kDefaultGridPoints);

// Pointwise quadrature routes, exposed as the independent cross-check of the
// closed forms (K = 2 or 3).
double marginal_pdf_quad(int K, int i, ValueCase vc, double x);
double cnd_pdf_quad(int K, ValueCase vc, double x);

// S1 law of the regulated MED statistic; q1 = 1 reduces to N(0,2) / N(0,1).
DistributionTable s1_med_law(int q1, ValueCase vc, int grid_points = kDefaultGridPoints);

// S1 condition-number law: convolution of the top marginal for q1 with the
// reflected bottom marginal for qr; q1 = qr = 1 reduces to N(0,4) / N(0,2).
DistributionTable s1_cnd_law(int q1, int qr, ValueCase vc,
                             int grid_points = kDefaultGridPoints);

// Process-wide caches (tables are immutable once built).
const DistributionTable& cached_marginal(int K, int i, ValueCase vc);
const DistributionTable& cached_cnd_s0(int K, ValueCase vc);
const DistributionTable& cached_s1_med(int q1, ValueCase vc);
const DistributionTable& cached_s1_cnd(int q1, int qr, ValueCase vc);

}  // namespace eigensense::rmt
