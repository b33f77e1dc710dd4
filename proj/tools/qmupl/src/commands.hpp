#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qmupl/units.hpp"

namespace qmupl::cli {

struct Common {
  std::string preset = "nucleon";  // electron | nucleon | gram | earth | custom
  double nucleons = 0;             // custom body of this many nucleons
  double mass = 0;                 // custom body mass, kg
  std::uint64_t seed = 7;
  std::string out = "qmupl-out";
  std::string format = "both";     // csv | svg | both
  std::string config_text;         // effective configuration, filled by the parser

  [[nodiscard]] ModelParams params() const;
  [[nodiscard]] bool csv() const { return format != "svg"; }
  [[nodiscard]] bool svg() const { return format != "csv"; }
};

struct ConstantsArgs {
  double separation = 1.0;  // m
  double b = constants::suppression_threshold;
  double t = 1.0;  // s, for alpha and the fluctuation floor
};

struct SingleArgs {
  std::vector<double> sigma0{1e-3};  // m
  double horizon = 0;                // s; 0 means ten time units
  std::size_t points = 400;
  bool log_time = false;
  double threshold = 1e-7;  // m
};

// Dimensionless units from here on.
struct WidthArgs {
  double a0_re = 0;  // 0 selects the stationary width
  double a0_im = 0;
};

struct DoubleArgs {
  WidthArgs width;
  double X0 = 3.0;
  double K0 = 0.0;
  double gamma0 = 0.0;
  double dt = 1e-3;
  double horizon = 10.0;
  std::size_t record_every = 10;
};

struct GridArgs {
  WidthArgs width;
  std::size_t n_points = 1024;
  double extent = 80.0;
  double X0 = 6.0;
  double gamma0 = 0.0;
  double dt = 1e-3;
  double horizon = 5.0;
  std::size_t record_every = 250;
};

struct MasterArgs {
  double a0_re = 1.0;
  double a0_im = 0.0;
  double x0 = 0.0;
  double k0 = 0.0;
  double t = 1.0;
  std::size_t n_points = 512;
  double extent = 32.0;
  double lo = -1.0;
  double hi = 1.0;
};

struct HittingArgs {
  double b = 2.0;
  double b0 = 0.0;
  double eta = 1.0;
  double dt = 1e-3;
  double s_max = 200.0;
  double s_after = 15.0;
  std::size_t n_paths = 10000;
  bool no_bridge = false;
  std::size_t bins = 60;
};

struct EnsembleArgs {
  std::string scenario = "single";
  std::vector<std::string> params;  // key=value
  std::vector<std::string> observables;
  std::size_t n_paths = 1000;
  double dt = 1e-3;
  double horizon = 1.0;
  std::size_t record_every = 100;
  unsigned threads = 0;
};

struct VerifyArgs {
  std::string suite = "all";
  std::size_t n_paths = 10000;
  unsigned threads = 0;
};

int cmd_constants(const Common& c, const ConstantsArgs& a, std::ostream& out);
int cmd_single(const Common& c, const SingleArgs& a, std::ostream& out);
int cmd_double(const Common& c, const DoubleArgs& a, std::ostream& out);
int cmd_grid(const Common& c, const GridArgs& a, std::ostream& out);
int cmd_master(const Common& c, const MasterArgs& a, std::ostream& out);
int cmd_hitting(const Common& c, const HittingArgs& a, std::ostream& out);
int cmd_ensemble(const Common& c, const EnsembleArgs& a, std::ostream& out);
int cmd_verify(const Common& c, const VerifyArgs& a, std::ostream& out);

}  // namespace qmupl::cli
