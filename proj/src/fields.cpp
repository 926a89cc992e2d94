#include "finsler/fields.hpp"

#include <utility>

namespace finsler {

Mat MatrixField::at(const Vec& x) const {
  const int n = dim();
  std::array<double, kMaxDim * kMaxDim> buf{};
  eval(std::span<const double>(x.data(), n), std::span<double>(buf.data(), n * n));
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = buf[i * n + j];
  return m;
}

Vec VectorField::at(const Vec& x) const {
  const int n = dim();
  Vec v(n);
  eval(std::span<const double>(x.data(), n), std::span<double>(v.data(), n));
  return v;
}

ConstantMatrixField::ConstantMatrixField(Mat value) : value_(std::move(value)) {
  if (value_.rows() != value_.cols()) throw InvalidArgument("constant matrix field must be square");
}

FourierMatrixField::FourierMatrixField(Mat base, std::vector<FourierMode> modes, std::vector<Mat> amplitudes)
    : base_(std::move(base)), modes_(std::move(modes)), amplitudes_(std::move(amplitudes)) {
  if (modes_.size() != amplitudes_.size()) throw InvalidArgument("fourier field: one amplitude per mode");
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    if (modes_[m].wavevector.size() != base_.rows() || amplitudes_[m].rows() != base_.rows() ||
        amplitudes_[m].cols() != base_.cols())
      throw InvalidArgument("fourier field: mode dimension mismatch");
  }
}

FourierVectorField::FourierVectorField(Vec base, std::vector<FourierMode> modes, std::vector<Vec> amplitudes)
    : base_(std::move(base)), modes_(std::move(modes)), amplitudes_(std::move(amplitudes)) {
  if (modes_.size() != amplitudes_.size()) throw InvalidArgument("fourier field: one amplitude per mode");
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    if (modes_[m].wavevector.size() != base_.size() || amplitudes_[m].size() != base_.size())
      throw InvalidArgument("fourier field: mode dimension mismatch");
  }
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int m : shape) s *= static_cast<std::size_t>(m);
  return s;
}

namespace {

void validate_grid(const GridSpec& grid, std::size_t values, std::size_t ncomp) {
  const int n = grid.dim();
  if (n < 1 || n > kMaxDim) throw InvalidArgument("grid field: unsupported dimension");
  if (grid.lo.size() != n || grid.hi.size() != n || static_cast<int>(grid.periodic.size()) != n)
    throw InvalidArgument("grid field: lo/hi/periodic must match the grid dimension");
  for (int a = 0; a < n; ++a) {
    if (grid.shape[a] < 4) throw InvalidArgument("grid field: cubic interpolation needs >= 4 nodes per axis");
    if (!(grid.hi[a] > grid.lo[a])) throw InvalidArgument("grid field: empty axis range");
  }
  if (values != grid.size() * ncomp) throw InvalidArgument("grid field: value table has the wrong size");
}

}  // namespace

GridMatrixField::GridMatrixField(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  const std::size_t n = grid_.shape.size();
  validate_grid(grid_, values_.size(), n * n);
}

GridVectorField::GridVectorField(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  validate_grid(grid_, values_.size(), grid_.shape.size());
}

}  // namespace finsler
