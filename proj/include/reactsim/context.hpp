#pragma once

#include "reactsim/chemdb.hpp"
#include "reactsim/colorimetry.hpp"
#include "reactsim/engine.hpp"
#include "reactsim/observables.hpp"

#include <filesystem>
#include <memory>
#include <optional>

namespace reactsim {

/// Locations of the bundled data files.
struct DataPaths {
  std::filesystem::path species;
  std::filesystem::path reactions;
  std::optional<std::filesystem::path> errata;
  std::filesystem::path dissociation;
  std::filesystem::path kw_table;
  std::filesystem::path cmf_table;

  /// All files under `dir`, errata included.
  static DataPaths in_directory(const std::filesystem::path& dir);
};

/// $REACTSIM_DATA_DIR if set, otherwise the source tree's data/ directory.
std::filesystem::path default_data_dir();

/// Immutable tables shared by worlds, sessions and CLI commands.
struct ChemistryContext {
  ReactionDatabase db;
  DissociationTable dissociation;
  KwTable kw;
  CmfTable cmf;
  SolventParams solvent;
  double default_rate_constant = 1.0;  // 1/s
  double sample_dt = 0.5;              // s, trajectory sampling step for services

  static std::shared_ptr<const ChemistryContext> load(const DataPaths& paths);
  static std::shared_ptr<const ChemistryContext> load_default();
};

}  // namespace reactsim
