#pragma once

#include <string>

#include "col/random.hpp"
#include "col/types.hpp"

namespace col {

// Compact convex decision set. Three kinds: coordinate box, Euclidean ball, and
// a product of probability simplices with an optional entrywise floor.
class DecisionSet {
 public:
  enum class Kind { Box, Ball, SimplexProduct };

  static constexpr double kMembershipTol = 1e-12;

  // Empty placeholder; real sets come from the named factories below.
  DecisionSet() = default;

  static DecisionSet box(Vec lower, Vec upper);
  static DecisionSet ball(Vec center, double radius);
  static DecisionSet simplex_product(int num_blocks, int block_size, double floor = 0.0);

  Kind kind() const { return kind_; }
  int dimension() const { return dim_; }

  // Closed-form Euclidean diameter; see geometry.hpp for the free-function form.
  double diameter() const { return diameter_; }

  bool contains(const Vec& x, double tol = kMembershipTol) const;

  // Interior (relative interior for simplex products) with an absolute margin.
  bool strictly_inside(const Vec& x, double margin = 1e-9) const;

  // Uniform sample from the set.
  Vec sample(RandomStream& rng) const;

  // Canonical feasible point: box midpoint, ball center, uniform rows.
  Vec center_point() const;

  // Box accessors.
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  // Ball accessors.
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  // Simplex-product accessors.
  int num_blocks() const { return num_blocks_; }
  int block_size() const { return block_size_; }
  double floor_eps() const { return floor_; }

  std::string describe() const;

 private:
  Kind kind_ = Kind::Box;
  int dim_ = 0;
  double diameter_ = 0.0;
  Vec lower_, upper_;
  Vec center_;
  double radius_ = 0.0;
  int num_blocks_ = 0;
  int block_size_ = 0;
  double floor_ = 0.0;
};

}  // namespace col
