#include "reactsim/context.hpp"

#include <cstdlib>

namespace reactsim {

DataPaths DataPaths::in_directory(const std::filesystem::path& dir) {
  DataPaths p;
  p.species = dir / "species.json";
  p.reactions = dir / "reactions.json";
  p.errata = dir / "species_errata.json";
  p.dissociation = dir / "dissociation.json";
  p.kw_table = dir / "kw_table.csv";
  p.cmf_table = dir / "cie1931_cmf_5nm.csv";
  return p;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("REACTSIM_DATA_DIR"); env && *env) return env;
  return REACTSIM_DATA_DIR;
}

std::shared_ptr<const ChemistryContext> ChemistryContext::load(const DataPaths& paths) {
  auto ctx = std::make_shared<ChemistryContext>(ChemistryContext{
      load_database(paths.species, paths.reactions, paths.errata),
      {},
      KwTable::load(paths.kw_table),
      CmfTable::load(paths.cmf_table),
      {},
  });
  ctx->dissociation = DissociationTable::load(paths.dissociation, ctx->db);
  return ctx;
}

std::shared_ptr<const ChemistryContext> ChemistryContext::load_default() {
  return load(DataPaths::in_directory(default_data_dir()));
}

}  // namespace reactsim
