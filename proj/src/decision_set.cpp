#include "col/decision_set.hpp"

#include <cmath>
#include <sstream>

#include "col/errors.hpp"

namespace col {

DecisionSet DecisionSet::box(Vec lower, Vec upper) {
  if (lower.size() < 1 || lower.size() != upper.size())
    throw DomainError("box: lower/upper must be nonempty and of equal dimension");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i])) throw DomainError("box: lower bound exceeds upper bound");
  DecisionSet s;
  s.kind_ = Kind::Box;
  s.dim_ = static_cast<int>(lower.size());
  s.lower_ = std::move(lower);
  s.upper_ = std::move(upper);
  s.diameter_ = (s.upper_ - s.lower_).norm();
  return s;
}

DecisionSet DecisionSet::ball(Vec center, double radius) {
  if (center.size() < 1) throw DomainError("ball: center must be nonempty");
  if (!(radius > 0.0)) throw DomainError("ball: radius must be positive");
  DecisionSet s;
  s.kind_ = Kind::Ball;
  s.dim_ = static_cast<int>(center.size());
  s.center_ = std::move(center);
  s.radius_ = radius;
  s.diameter_ = 2.0 * radius;
  return s;
}

DecisionSet DecisionSet::simplex_product(int num_blocks, int block_size, double floor) {
  if (num_blocks < 1 || block_size < 1)
    throw DomainError("simplex_product: need at least one block of size one");
  if (floor < 0.0) throw DomainError("simplex_product: floor must be nonnegative");
  if (floor * block_size > 1.0)
    throw DomainError("simplex_product: floor * block_size must not exceed 1");
  DecisionSet s;
  s.kind_ = Kind::SimplexProduct;
  s.dim_ = num_blocks * block_size;
  s.num_blocks_ = num_blocks;
  s.block_size_ = block_size;
  s.floor_ = floor;
  s.diameter_ = block_size == 1
                    ? 0.0
                    : std::sqrt(2.0 * num_blocks) * (1.0 - block_size * floor);
  return s;
}

bool DecisionSet::contains(const Vec& x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::Box:
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
      return true;
    case Kind::Ball:
      return (x - center_).norm() <= radius_ + tol;
    case Kind::SimplexProduct:
      for (int b = 0; b < num_blocks_; ++b) {
        const auto seg = x.segment(b * block_size_, block_size_);
        if (seg.minCoeff() < floor_ - tol) return false;
        if (std::abs(seg.sum() - 1.0) > tol) return false;
      }
      return true;
  }
  return false;
}

bool DecisionSet::strictly_inside(const Vec& x, double margin) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case Kind::Box:
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] < lower_[i] + margin || x[i] > upper_[i] - margin) return false;
      return true;
    case Kind::Ball:
      return (x - center_).norm() <= radius_ - margin;
    case Kind::SimplexProduct:
      for (int b = 0; b < num_blocks_; ++b) {
        const auto seg = x.segment(b * block_size_, block_size_);
        if (block_size_ > 1 && seg.minCoeff() < floor_ + margin) return false;
        if (std::abs(seg.sum() - 1.0) > 1e-10) return false;
      }
      return true;
  }
  return false;
}

Vec DecisionSet::sample(RandomStream& rng) const {
  Vec x(dim_);
  switch (kind_) {
    case Kind::Box:
      for (int i = 0; i < dim_; ++i) x[i] = rng.uniform(lower_[i], upper_[i]);
      return x;
    case Kind::Ball: {
      Vec dir = rng.gaussian_vector(dim_);
      double n = dir.norm();
      while (n <= 1e-300) {
        dir = rng.gaussian_vector(dim_);
        n = dir.norm();
      }
      const double r = radius_ * std::pow(rng.uniform01(), 1.0 / dim_);
      return center_ + dir * (r / n);
    }
    case Kind::SimplexProduct: {
      const double scale = 1.0 - block_size_ * floor_;
      for (int b = 0; b < num_blocks_; ++b) {
        Vec e(block_size_);
        for (int i = 0; i < block_size_; ++i) e[i] = rng.exponential();
        e /= e.sum();
        x.segment(b * block_size_, block_size_) = (e * scale).array() + floor_;
      }
      return x;
    }
  }
  throw InternalError("sample: unknown set kind");
}

Vec DecisionSet::center_point() const {
  switch (kind_) {
    case Kind::Box:
      return 0.5 * (lower_ + upper_);
    case Kind::Ball:
      return center_;
    case Kind::SimplexProduct:
      return Vec::Constant(dim_, 1.0 / block_size_);
  }
  throw InternalError("center_point: unknown set kind");
}

std::string DecisionSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Box:
      os << "box(d=" << dim_ << ")";
      break;
    case Kind::Ball:
      os << "ball(d=" << dim_ << ", r=" << radius_ << ")";
      break;
    case Kind::SimplexProduct:
      os << "simplices(" << num_blocks_ << "x" << block_size_ << ", floor=" << floor_ << ")";
      break;
  }
  return os.str();
}

}  // namespace col
