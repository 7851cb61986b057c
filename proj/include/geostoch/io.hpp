#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geostoch/process_sim.hpp"

namespace geostoch {

/// Shortest decimal string that round-trips to the same binary64 value.
std::string format_double(double x);

/// Header `t,c1,...,cK`; SO(n) points are written column-major.
void write_path_csv(std::ostream& os, const Path& path);
/// Header `path_id,t,c1,...,cK`, rows ordered by path index then time.
void write_paths_long_csv(std::ostream& os, const std::vector<Path>& paths);

/// Reads a single-path CSV (`t,c1,...`) for the given manifold. Points are
/// not membership-checked here; call Path::validate when that matters.
Path read_path_csv(std::istream& is, const ManifoldSpec& m);

/// Matrix sample sets: header `m11,m21,...,mnn` (column-major), one sample per row.
void write_matrix_samples_csv(std::ostream& os, const std::vector<Eigen::MatrixXd>& samples);
std::vector<Eigen::MatrixXd> read_matrix_samples_csv(std::istream& is);

}  // namespace geostoch
