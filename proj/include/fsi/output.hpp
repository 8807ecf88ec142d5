#pragma once

#include <string>
#include <vector>

#include "fsi/config.hpp"
#include "fsi/driver.hpp"

namespace fsi {

// Creates dir if missing. An existing non-empty directory is rejected unless
// force is set, in which case its contents are removed first so stale
// artifacts from an earlier run cannot survive into this one.
void prepare_output_dir(const std::string& dir, bool force);

// Serializers for the per-run artifacts. Every floating-point value is
// printed through "%.17g", so repeating a run yields byte-identical files.
std::string ledger_csv(const std::vector<EnergyLedger>& rows);
std::string windows_csv(const std::vector<WindowRecord>& rows);
std::string field_csv(const Grid2D& grid, const Field& r);
std::string manifest_json(const RunConfig& cfg, const RunOutput& out);

void write_text_file(const std::string& path, const std::string& content);

// Writes manifest.json, ledger.csv, windows.csv and fields/r_<index>.csv
// under dir, which must already exist (see prepare_output_dir).
void write_run_outputs(const RunConfig& cfg, const RunOutput& out, const std::string& dir);

}  // namespace fsi
