#pragma once

// CSV writers: trajectories (n,x,u,y,v) and f/g curves (x,f,g).

#include <cstddef>
#include <ostream>

#include "sisi/dynamics.hpp"
#include "sisi/format.hpp"
#include "sisi/model.hpp"

namespace sisi {

inline void write_trajectory_header(std::ostream& os) { os << "n,x,u,y,v\n"; }

inline void write_trajectory_row(std::ostream& os, std::size_t n, const Vec4& c) {
  os << n;
  for (double v : c) os << ',' << format_double(v);
  os << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& t) {
  write_trajectory_header(os);
  for (std::size_t n = 0; n < t.size(); ++n) write_trajectory_row(os, n, t[n].coords());
}

inline void write_curves_csv(std::ostream& os, const FGCurves& c) {
  os << "x,f,g\n";
  for (std::size_t i = 0; i < c.xs.size(); ++i) {
    os << format_double(c.xs[i]) << ',' << format_double(c.f[i]) << ',' << format_double(c.g[i]) << '\n';
  }
}

}  // namespace sisi
