// Command-line surface: parses flags into a RunConfig, dispatches to the
// library, and emits JSON / CSV / SVG artifacts.
#pragma once

#include <string>
#include <vector>

#include "circlenf/maps.hpp"

namespace circlenf {

struct RunConfig {
  std::string command;

  // map description (inline flags, or a JSON file overriding them)
  std::string family = "A";
  std::string omega = "golden";  // golden | quad:p,q,D,r | cf:a0,a1,... | decimal
  std::string modulus = "1";
  std::string a = "-1";
  int d = 1;
  int order = 16;
  int bits = 256;  // default comes from CIRCLENF_BITS when set
  std::string map_file;

  std::string gauge = "basic";
  std::vector<double> diag;  // custom-diagonal entries

  std::string out;  // artifact path ("tongues": path stem); stdout when empty

  // dynamics knobs
  std::string grid;                  // lo:hi:n
  std::string ladder = "1000:1024000";  // doubling range, or explicit comma list
  std::string z = "0.1";             // re or re,im
  std::string n_deviation;           // k=K or k=K,eps=E
  int n_jet = -1;                    // truncate the fed torsion to this degree
  double t = 0.05;
  int q_max = 6;
  double tol = 1e-6;
  double r0 = 0.1;

  // transform knobs
  std::string gauge_a, gauge_b;  // comma lists of radial coefficients
  bool poly = false;

  // diagnose knobs
  std::string what = "brjuno";  // cf | brjuno | growth | slope | crafted
  int depth = 30;
};

// executes one command; writes artifacts; returns the process exit code
int run(const RunConfig& cfg);

// same dispatch, but returns the primary JSON artifact instead of writing
// (tongues: the plateau report; sternberg: the conjugacy table)
std::string run_json(const RunConfig& cfg);

int cli_main(int argc, char** argv);

// "golden | quad:p,q,D,r | cf:a0,a1,... | decimal" (shared with the bindings)
Multiplier parse_omega(const std::string& spec, int bits);

}  // namespace circlenf
