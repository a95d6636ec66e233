#ifndef BLOCHHOM_CONFIG_HPP
#define BLOCHHOM_CONFIG_HPP

#include <string>
#include <vector>

#include "blochhom/coefficient.hpp"
#include "blochhom/lattice.hpp"
#include "blochhom/symbol.hpp"

namespace blochhom {

struct EpsLadder {
  double start = 0.5;
  double ratio = 2.0;  // eps_j = start / ratio^j
  int count = 5;
  std::vector<double> values() const;
};

struct CauchySpec {
  std::string phi_kind = "gaussian";  // "gaussian" | "power"
  double phi_width = 1.0;
  double band_limit = 3.0;
  std::string source_kind = "zero";  // "zero" | "separable"
  double source_omega = 1.0;         // h(t) = exp(-i omega t)
  std::string source_profile = "gaussian";
  double source_width = 1.0;
  double source_band_limit = 2.0;
  int time_steps = 128;
  double sobolev_order = -1.0;  // < 0: pick 2p+1 or 2p+2 from the detected regime
};

// Everything an experiment run needs, loaded from a JSON config file:
// lattice basis, symbol terms, coefficient Fourier terms, truncation cutoffs,
// sweep parameters and output controls.
class ExperimentConfig {
 public:
  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);

  ExperimentConfig(std::string id, Lattice lat, Symbol sym, PeriodicCoefficient coeff);

  std::string config_id;
  Lattice lattice;
  Symbol symbol;
  PeriodicCoefficient coefficient;

  double cell_cutoff = 0.0;    // defaults to 2 K_g + report_cutoff when unset
  double fiber_cutoff = 0.0;   // defaults to cell_cutoff
  double report_cutoff = 0.0;  // defaults to K_g
  int brillouin_resolution = 128;
  std::vector<double> tau = {1.0};
  EpsLadder ladder;
  double s_exponent = -1.0;  // < 0: 2p+1
  int direction_samples = 64;
  int threshold_rungs = 4;
  double threshold_ratio = 2.0;
  CauchySpec cauchy;
  int threads = 1;
  unsigned seed = 0;
  int validation_grid = 64;
  double cdp_factor = 1.0;
  bool timings = false;  // measured wall times in outputs break byte determinism

  void validate() const;  // throws ConfigInvalid
};

}  // namespace blochhom

#endif
