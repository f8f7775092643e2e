#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "exceed/correlation.hpp"

namespace exceed {

struct GaussianPath {
  std::vector<double> values;
  std::size_t n = 0;
  CorrelationModel model = CorrelationModel::geometric(0.0);
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

struct EmbeddingInfo {
  std::string method;  ///< "circulant" or "dense"
  std::size_t circulant_size = 0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::size_t clipped_count = 0;
  double clipped_mass = 0.0;  ///< sum of clipped |lambda| over sum of lambda
  std::string warning;
};

/// Largest n for which a non-PSD embedding falls back to dense Cholesky.
inline constexpr std::size_t kDenseFallbackCap = 4096;

/// Sampler for length-n paths with Toeplitz correlation rho(|i-j|).
///
/// The (ρ(0..n-1)) row is embedded in a symmetric circulant of size
/// m = 2^ceil(log2(2(n-1))). Eigenvalues in [-1e-10 max, 0) are clipped to zero;
/// a more negative spectrum falls back to a dense Cholesky factor for
/// n <= kDenseFallbackCap and raises EmbeddingNotPSD beyond that.
///
/// One FFT yields two independent paths (real and imaginary parts), so paths
/// are produced in pairs: stream_id 2j and 2j+1 share pair j.
/// Instances are immutable and may be shared across threads; each thread
/// needs its own Workspace.
class CirculantEmbedding {
 public:
  CirculantEmbedding(const CorrelationModel& model, std::size_t n);

  class Workspace {
   public:
    Workspace(Workspace&&) noexcept;
    Workspace& operator=(Workspace&&) noexcept;
    ~Workspace();

   private:
    friend class CirculantEmbedding;
    explicit Workspace(std::size_t size);
    struct Buffers;
    std::unique_ptr<Buffers> buffers_;
  };

  Workspace make_workspace() const;

  /// Fills `first` and `second` (each of length n) with the two paths of pair
  /// `pair_id` drawn from `seed`.
  void sample_pair(std::uint64_t seed, std::uint64_t pair_id, std::span<double> first,
                   std::span<double> second, Workspace& workspace) const;

  /// Path for one stream id (the matching half of its pair).
  GaussianPath sample(std::uint64_t seed, std::uint64_t stream_id) const;

  std::size_t n() const noexcept;
  const CorrelationModel& model() const noexcept;
  const EmbeddingInfo& info() const noexcept;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Samples X_1..X_n of a standard stationary Gaussian sequence with
/// correlation `model`. Reproducible from (model, n, seed, stream_id).
GaussianPath sample_path(const CorrelationModel& model, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream_id);

/// Independent N(0,1) values from their own stream.
GaussianPath sample_iid_path(std::size_t n, std::uint64_t seed, std::uint64_t stream_id);

/// Dense reference sampler (Cholesky of the Toeplitz matrix). Used by tests and
/// benchmarks to cross-check the circulant path; throws EmbeddingNotPSD if the
/// matrix is not positive definite.
std::vector<double> sample_path_dense(const CorrelationModel& model, std::size_t n,
                                      std::uint64_t seed, std::uint64_t stream_id);

/// CSV with `#` metadata header lines, a "value" column header, one value per line.
void write_path_csv(std::ostream& out, const GaussianPath& path);

}  // namespace exceed
