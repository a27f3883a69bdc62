#pragma once

#include <filesystem>
#include <span>

#include "solver_config.hpp"
#include "tt_model.hpp"

namespace ttc {

/// TNSR v1 container: magic "TNSRBIN1", u32-LE order, u64-LE extents, then
/// f64-LE values in first-index-fastest order.  Writes go through a temp
/// file renamed into place.
void save_tnsr(const DenseTensor& t, const std::filesystem::path& path);
DenseTensor load_tnsr(const std::filesystem::path& path);

/// Binary PPM (P6) / PGM (P5), 8-bit, maxval 255.  Color images load as
/// H x W x 3 and grayscale as H x W, pixel values rescaled to [0,1].
/// save_image picks P6 for order-3 (H x W x 3) and P5 for order-2 input,
/// rounding and clamping values back to bytes.
DenseTensor load_image(const std::filesystem::path& path);
void save_image(const DenseTensor& t, const std::filesystem::path& path);

/// TT model container: a text manifest listing one TNSR file per core
/// (written as "<name>.core<k>.tnsr" beside the manifest).
void save_tt(const TtCores& g, const std::filesystem::path& manifest);
TtCores load_tt(const std::filesystem::path& manifest);

/// Convergence log: "iter,objective,rse_observed,elapsed_ms" plus one row
/// per entry.  include_timing=false writes 0 in the elapsed column so that
/// identical runs produce byte-identical files.
void write_csv_log(std::span<const SolveLogRow> log,
                   const std::filesystem::path& path, bool include_timing);

}  // namespace ttc
