#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace llgss {

/// Measured defect against an envelope along an x grid. A point passes when
/// defect <= factor * envelope + floor; floor is the numerical resolution of
/// the comparison (uncertainty of the extracted constants and of the trace).
struct BoundReport {
  std::string name;
  double factor = 1.0;
  double floor = 0.0;
  std::vector<double> x;
  std::vector<double> defect;
  std::vector<double> envelope;
  double max_ratio = 0.0;  ///< max defect / envelope over points with a positive envelope
  bool pass = true;
  std::string note;

  void add(double xv, double d, double env) { add(xv, d, env, floor); }

  void add(double xv, double d, double env, double local_floor) {
    x.push_back(xv);
    defect.push_back(d);
    envelope.push_back(env);
    if (env > 0.0) {
      max_ratio = std::max(max_ratio, d / env);
    }
    if (!(d <= factor * env + local_floor)) {
      pass = false;
    }
  }
};

}  // namespace llgss
