#include "exceed/gaussian.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cstdio>
#include <cmath>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include "exceed/error.hpp"
#include "exceed/rng.hpp"

namespace exceed {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer allocate(std::size_t size) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

std::size_t circulant_size(std::size_t n) {
  if (n <= 1) return 1;
  return std::bit_ceil(2 * (n - 1));
}

Eigen::MatrixXd dense_factor(const CorrelationModel& model, std::size_t n) {
  const auto row = model.first_row(n);
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cov(i, j) = row[i > j ? i - j : j - i];
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw EmbeddingNotPSD("correlation " + model.describe() + " is not positive definite at n=" +
                          std::to_string(n));
  }
  return llt.matrixL();
}

}  // namespace

struct CirculantEmbedding::Workspace::Buffers {
  FftwBuffer in;
  FftwBuffer out;
};

CirculantEmbedding::Workspace::Workspace(std::size_t size) : buffers_(std::make_unique<Buffers>()) {
  buffers_->in = allocate(size);
  buffers_->out = allocate(size);
}
CirculantEmbedding::Workspace::Workspace(Workspace&&) noexcept = default;
CirculantEmbedding::Workspace& CirculantEmbedding::Workspace::operator=(Workspace&&) noexcept =
    default;
CirculantEmbedding::Workspace::~Workspace() = default;

struct CirculantEmbedding::Impl {
  CorrelationModel model;
  std::size_t n = 0;
  std::size_t m = 0;
  EmbeddingInfo info;
  std::vector<double> amplitude;  // sqrt(lambda_k / m)
  fftw_plan plan = nullptr;
  std::optional<Eigen::MatrixXd> cholesky;

  Impl(const CorrelationModel& mdl, std::size_t len) : model(mdl), n(len), m(circulant_size(len)) {
    if (len == 0) throw ConfigError("path length must be >= 1");
    std::vector<double> lambda = eigenvalues();
    const double max_eig = *std::max_element(lambda.begin(), lambda.end());
    const double min_eig = *std::min_element(lambda.begin(), lambda.end());
    info.circulant_size = m;
    info.min_eigenvalue = min_eig;
    info.max_eigenvalue = max_eig;
    const double tol_eig = 1e-10 * max_eig;
    if (min_eig < -tol_eig) {
      if (n > kDenseFallbackCap) {
        std::ostringstream msg;
        msg << "circulant embedding of " << model.describe() << " at n=" << n
            << " has minimal eigenvalue " << min_eig << " (max " << max_eig << ")";
        throw EmbeddingNotPSD(msg.str());
      }
      cholesky = dense_factor(model, n);
      info.method = "dense";
      info.warning = "circulant embedding not PSD; using dense Cholesky";
      return;
    }
    info.method = "circulant";
    double total = 0.0;
    double clipped = 0.0;
    for (double& l : lambda) {
      if (l < 0.0) {
        clipped += -l;
        l = 0.0;
        ++info.clipped_count;
      }
      total += l;
    }
    if (info.clipped_count > 0) {
      info.clipped_mass = clipped / total;
      std::ostringstream msg;
      msg << "clipped " << info.clipped_count << " negative eigenvalues (relative mass "
          << info.clipped_mass << ")";
      info.warning = msg.str();
    }
    amplitude.resize(m);
    for (std::size_t k = 0; k < m; ++k) amplitude[k] = std::sqrt(lambda[k] / static_cast<double>(m));

    const std::lock_guard lock(planner_mutex());
    auto in = allocate(m);
    auto out = allocate(m);
    plan = fftw_plan_dft_1d(static_cast<int>(m), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    if (plan != nullptr) {
      const std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }

  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;

  std::vector<double> eigenvalues() const {
    const std::lock_guard lock(planner_mutex());
    auto in = allocate(m);
    auto out = allocate(m);
    for (std::size_t j = 0; j < m; ++j) {
      in[j][0] = model.rho(std::min(j, m - j));
      in[j][1] = 0.0;
    }
    fftw_plan p =
        fftw_plan_dft_1d(static_cast<int>(m), in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    // ESTIMATE planning does not touch the arrays, so the input is intact.
    fftw_execute(p);
    fftw_destroy_plan(p);
    std::vector<double> lambda(m);
    for (std::size_t k = 0; k < m; ++k) lambda[k] = out[k][0];
    return lambda;
  }
};

CirculantEmbedding::CirculantEmbedding(const CorrelationModel& model, std::size_t n)
    : impl_(std::make_shared<const Impl>(model, n)) {}

CirculantEmbedding::Workspace CirculantEmbedding::make_workspace() const {
  return Workspace(impl_->m);
}

std::size_t CirculantEmbedding::n() const noexcept { return impl_->n; }
const CorrelationModel& CirculantEmbedding::model() const noexcept { return impl_->model; }
const EmbeddingInfo& CirculantEmbedding::info() const noexcept { return impl_->info; }

void CirculantEmbedding::sample_pair(std::uint64_t seed, std::uint64_t pair_id,
                                     std::span<double> first, std::span<double> second,
                                     Workspace& workspace) const {
  const Impl& im = *impl_;
  if (first.size() != im.n || second.size() != im.n) {
    throw LengthMismatch("sample_pair: output spans must have length n");
  }
  RandomStream stream(seed, StreamPurpose::kGaussianPair, pair_id);
  if (im.cholesky) {
    Eigen::VectorXd z(im.n);
    for (std::size_t i = 0; i < im.n; ++i) z[i] = stream.normal();
    Eigen::Map<Eigen::VectorXd>(first.data(), im.n) = (*im.cholesky) * z;
    for (std::size_t i = 0; i < im.n; ++i) z[i] = stream.normal();
    Eigen::Map<Eigen::VectorXd>(second.data(), im.n) = (*im.cholesky) * z;
    return;
  }
  fftw_complex* in = workspace.buffers_->in.get();
  fftw_complex* out = workspace.buffers_->out.get();
  for (std::size_t k = 0; k < im.m; ++k) {
    const double re = stream.normal();
    const double imag = stream.normal();
    in[k][0] = im.amplitude[k] * re;
    in[k][1] = im.amplitude[k] * imag;
  }
  fftw_execute_dft(im.plan, in, out);
  for (std::size_t j = 0; j < im.n; ++j) {
    first[j] = out[j][0];
    second[j] = out[j][1];
  }
}

GaussianPath CirculantEmbedding::sample(std::uint64_t seed, std::uint64_t stream_id) const {
  GaussianPath path;
  path.n = n();
  path.model = model();
  path.seed = seed;
  path.stream_id = stream_id;
  std::vector<double> first(path.n);
  std::vector<double> second(path.n);
  auto workspace = make_workspace();
  sample_pair(seed, stream_id >> 1, first, second, workspace);
  path.values = (stream_id & 1u) == 0 ? std::move(first) : std::move(second);
  return path;
}

GaussianPath sample_path(const CorrelationModel& model, std::size_t n, std::uint64_t seed,
                         std::uint64_t stream_id) {
  return CirculantEmbedding(model, n).sample(seed, stream_id);
}

GaussianPath sample_iid_path(std::size_t n, std::uint64_t seed, std::uint64_t stream_id) {
  if (n == 0) throw ConfigError("path length must be >= 1");
  GaussianPath path;
  path.n = n;
  path.model = CorrelationModel::geometric(0.0);
  path.seed = seed;
  path.stream_id = stream_id;
  path.values.resize(n);
  RandomStream(seed, StreamPurpose::kIidGaussian, stream_id).fill_normal(path.values);
  return path;
}

std::vector<double> sample_path_dense(const CorrelationModel& model, std::size_t n,
                                      std::uint64_t seed, std::uint64_t stream_id) {
  if (n == 0) throw ConfigError("path length must be >= 1");
  const Eigen::MatrixXd factor = dense_factor(model, n);
  RandomStream stream(seed, StreamPurpose::kAuxiliary, stream_id);
  Eigen::VectorXd z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = stream.normal();
  const Eigen::VectorXd x = factor * z;
  return {x.data(), x.data() + n};
}

void write_path_csv(std::ostream& out, const GaussianPath& path) {
  out << "# model=" << path.model.describe() << "\n";
  out << "# n=" << path.n << "\n";
  out << "# seed=" << path.seed << "\n";
  out << "# stream_id=" << path.stream_id << "\n";
  out << "value\n";
  char buf[32];
  for (const double v : path.values) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

}  // namespace exceed
