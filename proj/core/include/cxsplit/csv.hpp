#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxsplit/harness.hpp"

namespace cxsplit::csv {

/// "%.16e": 17 significant digits, enough for an exact double round trip.
std::string format_real(double x);

/// Second line of every file: `# meta: cxsplit <version> config=<hash>`.
std::string meta_line(std::uint64_t config_hash);

/// Writes a table to a temporary sibling and renames it into place, so a
/// failed run never leaves a truncated file. Throws Error on I/O failure.
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows, std::uint64_t config_hash);

void write_efficiency(const std::filesystem::path& path, const std::vector<harness::EfficiencyRow>& rows,
                      std::uint64_t config_hash);
void write_unitarity(const std::filesystem::path& path, const std::vector<harness::UnitarityTrace>& traces,
                     std::uint64_t config_hash);
void write_eigensweep(const std::filesystem::path& path, const harness::EigensweepResult& result,
                      std::uint64_t config_hash);
/// One trace per call; the drift subcommand writes one file per scheme.
void write_drift(const std::filesystem::path& path, const harness::DriftTrace& trace, std::uint64_t config_hash);
void write_work_precision(const std::filesystem::path& path, const std::vector<harness::WorkPrecisionRow>& rows,
                          std::uint64_t config_hash);

}  // namespace cxsplit::csv
