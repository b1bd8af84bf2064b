#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coex/keyrate.hpp"

namespace coex {

struct ReproCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  /// Informational checks are reported but never fail the run.
  bool gating = true;
};

struct Reproduction {
  std::string target;
  std::string csv;
  std::vector<ReproCheck> checks;

  bool passed() const;
};

struct ReproOptions {
  std::uint64_t seed = 20170815;
  /// Raman model; each target has its own default when unset (physical for
  /// table2, fig2, fig4 and fig5, both models side by side for fig3).
  std::optional<SrsModel> model;
};

const std::vector<std::string>& reproduction_targets();

/// 24-cell filter x loss-class x Aeff x direction matrix at 21 dBm, 66 km,
/// physical Raman model.
Reproduction reproduce_table2(const ReproOptions& opt = {});

/// Launch-power sweeps 8..21 dBm on all six field fibers (-1 co, -2 counter).
Reproduction reproduce_fig2(const ReproOptions& opt = {});

/// Raman-only count rates per fiber, direction and launch power.
Reproduction reproduce_fig3(const ReproOptions& opt = {});

/// Distance sweeps on G654-110-2 at 21 dBm with InGaAs and SNSPD receivers.
Reproduction reproduce_fig4(const ReproOptions& opt = {});

/// Three hours of blocks at 18 dBm co-propagation per fiber, each block's
/// tallies drawn binomially and distilled through the finite-size bound.
Reproduction reproduce_fig5(const ReproOptions& opt = {});

/// Throws InputError for an unknown target.
Reproduction reproduce(const std::string& target, const ReproOptions& opt = {});

/// Printed filter x loss x Aeff matrix: qsnr_db and rate_kbps, rate < 0 for "-" cells.
struct Table2Cell {
  int passband_ghz;
  const char* loss_class;
  int aeff_um2;
  Direction direction;
  double qsnr_db;
  double rate_kbps;
};
const std::vector<Table2Cell>& table2_reference();

}  // namespace coex
