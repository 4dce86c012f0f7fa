#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "bnvar/graph.hpp"
#include "bnvar/types.hpp"

namespace bnvar {

/// First and second order moments of the edge indicator vector, estimated
/// from a sample of skeletons.  p_pair_hat is symmetric with its diagonal
/// equal to p_hat; every entry is a count divided by the sample size.
struct EdgeMoments {
    long sample_count = 0;
    Vector p_hat;
    Matrix p_pair_hat;

    int dimension() const { return static_cast<int>(p_hat.size()); }
};

enum class EntropyClass { Minimum, Intermediate, Maximum };

const char* to_string(EntropyClass c);

/// Edge-frequency moments of a skeleton sample.  When `restrict_to` is given
/// it selects the edge indices (under the lexicographic EdgeIndexer for the
/// shared node count) whose joint distribution is of interest; the result is
/// the corresponding sub-vector / sub-matrix of the full moments.
EdgeMoments estimate_moments(const std::vector<Skeleton>& samples,
                             const std::optional<std::vector<int>>& restrict_to = std::nullopt);

/// Plug-in covariance: sigma_ij = p_ij - p_i p_j (divisor m).
Matrix covariance_from_moments(const EdgeMoments& moments);

/// Unbiased sample covariance, the plug-in matrix scaled by m/(m-1).
Matrix unbiased_covariance_from_moments(const EdgeMoments& moments);

/// Entropy regime of a skeleton sample: Minimum when every frequency sits at
/// 0 or 1 (within tol), Maximum when every frequency sits at 1/2 and every
/// off-diagonal covariance at 0 (within tol), Intermediate otherwise.
EntropyClass classify_entropy(const EdgeMoments& moments, double tol = 0.0);

/// Moments of the uniform distribution over all 2^(v(v-1)/2) skeletons,
/// computed by exhaustive enumeration.  Requires v <= 5.
EdgeMoments enumerate_uniform_moments(int v);

/// CSV with header `i,j,p_ij`: upper triangle including the diagonal, where
/// i = j rows carry the marginal frequencies.  17 significant digits.
void write_moments_csv(const EdgeMoments& moments, std::ostream& out);
EdgeMoments read_moments_csv(std::istream& in);

} // namespace bnvar
