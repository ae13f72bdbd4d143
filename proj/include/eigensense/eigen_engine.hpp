#pragma once

#include <vector>

#include "eigensense/signal_model.hpp"
#include "eigensense/types.hpp"

namespace eigensense {

// K x K Hermitian matrix, column-major complex storage (real case keeps zero
// imaginary parts).
struct CovarianceMatrix {
    ValueCase vc = ValueCase::Real;
    int K = 0;
    std::vector<cplx> a;
};

// Eigenvalues in descending order.
struct EigenSpectrum {
    std::vector<double> values;
};

// Distinct eigenvalues mu_1 > ... > mu_r with multiplicities q_k, sum q_k = K.
struct MultiplicityPartition {
    int r = 0;
    std::vector<double> mus;
    std::vector<int> qs;
};

// (1/N) X X^H, Hermitized exactly by averaging with its conjugate transpose.
CovarianceMatrix sample_covariance(const SampleMatrix& x);

// sigma_s2 H H^H + sigma_u2 I.
CovarianceMatrix population_covariance(const std::vector<cplx>& channel, int K, int t,
                                       double sigma_s2, double sigma_u2, ValueCase vc);

// All K eigenvalues, descending. Closed form for K <= 2, cyclic Jacobi for
// K >= 3; complex input goes through the 2K x 2K real-symmetric embedding.
EigenSpectrum eigenvalues(const CovarianceMatrix& c);

// Eigenvalues of a Hermitian matrix given as raw column-major data; no PSD or
// covariance semantics assumed (used for Wigner draws too).
std::vector<double> hermitian_eigenvalues(const std::vector<cplx>& a, int K, ValueCase vc);

// Cyclic Jacobi on a real symmetric n x n matrix (column-major), eigenvalues
// descending.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n);

// Group consecutive eigenvalues whose relative gap is <= rel_tol.
MultiplicityPartition multiplicity_partition(const EigenSpectrum& spec,
                                             double rel_tol = 1e-9);

}  // namespace eigensense
