#pragma once

#include <filesystem>
#include <iosfwd>

#include "gustcast/cells.hpp"

namespace gustcast {

inline constexpr const char* kCheckpointMagic = "gustcast-checkpoint";
inline constexpr const char* kCheckpointVersion = "v1";

struct Checkpoint {
  VariantConfig cfg;
  CellParams params;
};

// Text layout:
//   gustcast-checkpoint v1
//   family=mlstm cifg=0 peephole=0 compression=0 input_dim=11 cell_dim=16
//   tensor W_i 16 11
//   <16 lines of 11 decimals, 17 significant digits>
//   ...
void write_checkpoint(std::ostream& os, const VariantConfig& cfg, const CellParams& params);
Checkpoint read_checkpoint(std::istream& is);

void save_checkpoint(const VariantConfig& cfg, const CellParams& params,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gustcast
