#ifndef CONFDIM_SPACES_HPP
#define CONFDIM_SPACES_HPP

#include <iosfwd>
#include <string>

#include "confdim/metric_space.hpp"

namespace confdim {

enum class SpaceKind {
  Carpet,        // square Sierpinski carpet, cell centers at a given level
  ThirdCantor,   // middle-thirds Cantor set on [0,1]
  CantorProduct, // third-Cantor times an interval grid
  Interval,      // uniform grid on [0,1]
  Circle,        // uniform points on the unit circle
  Square,        // uniform grid on [0,1]^2
  File,          // load from disk
};

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Carpet;
  int level = 1;    // recursion depth for fractal kinds (>= 0)
  int grid = 2;     // point count along a grid axis (>= 2)
  std::string path; // for SpaceKind::File
  double file_h = 0.0;  // declared net density for bare input files
  MetricKind metric = MetricKind::Euclidean;

  std::string describe() const;
};

/// Cell-center net of the named space. h is half the cell diameter, so the
/// sample is h-dense in the idealized set. Deterministic for equal specs.
FiniteMetricSpace generate(const SpaceSpec& spec);

/// Versioned text format; load(save(X)) reproduces X bit-exactly.
void save_space(const FiniteMetricSpace& X, const std::string& path);
FiniteMetricSpace load_space(const std::string& path);

void write_space(const FiniteMetricSpace& X, std::ostream& out);
FiniteMetricSpace read_space(std::istream& in);

/// Bare ingestion formats: `id,x,y[,z]` rows, or `n` followed by an n x n
/// distance matrix.
FiniteMetricSpace load_point_rows(const std::string& path, MetricKind kind, double h);
FiniteMetricSpace load_matrix_file(const std::string& path, double h);

}  // namespace confdim

#endif
