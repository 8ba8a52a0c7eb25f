#include "cxsplit/csv.hpp"

#include <cstdio>
#include <fstream>
#include <system_error>

#include "cxsplit/errors.hpp"

namespace cxsplit::csv {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string meta_line(std::uint64_t config_hash) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# meta: cxsplit %s config=%016llx", CXSPLIT_VERSION,
                static_cast<unsigned long long>(config_hash));
  return buf;
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows, std::uint64_t config_hash) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n' << meta_line(config_hash) << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw Error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

void write_efficiency(const std::filesystem::path& path, const std::vector<harness::EfficiencyRow>& rows,
                      std::uint64_t config_hash) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) out.push_back({r.scheme, std::to_string(r.cost), format_real(r.err2norm)});
  write_table(path, {"scheme", "cost", "err2norm"}, out, config_hash);
}

void write_unitarity(const std::filesystem::path& path, const std::vector<harness::UnitarityTrace>& traces,
                     std::uint64_t config_hash) {
  std::vector<std::vector<std::string>> out;
  for (const auto& tr : traces) {
    for (const auto& r : tr.records) out.push_back({tr.scheme, format_real(r.t), format_real(r.norm_error)});
  }
  write_table(path, {"scheme", "t", "unit_err"}, out, config_hash);
}

void write_eigensweep(const std::filesystem::path& path, const harness::EigensweepResult& result,
                      std::uint64_t config_hash) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : result.rows) {
    out.push_back({format_real(r.h), r.scheme, format_real(r.mod1), format_real(r.mod2)});
  }
  write_table(path, {"h", "scheme", "mod1", "mod2"}, out, config_hash);
}

void write_drift(const std::filesystem::path& path, const harness::DriftTrace& trace, std::uint64_t config_hash) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : trace.records) {
    out.push_back({trace.scheme, format_real(r.t), format_real(r.norm_error), format_real(r.energy_error),
                   std::to_string(r.cost)});
  }
  write_table(path, {"scheme", "t", "norm_err", "energy_err", "ffts"}, out, config_hash);
}

void write_work_precision(const std::filesystem::path& path, const std::vector<harness::WorkPrecisionRow>& rows,
                          std::uint64_t config_hash) {
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    out.push_back({r.scheme, format_real(r.dt), std::to_string(r.ffts), format_real(r.max_energy_err),
                   r.diverged ? "1" : "0"});
  }
  write_table(path, {"scheme", "dt", "ffts", "max_energy_err", "diverged"}, out, config_hash);
}

}  // namespace cxsplit::csv
