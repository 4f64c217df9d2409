#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "virial/radial.hpp"
#include "virial/relations.hpp"

namespace virial::cli {

/// One line of a verification report. A non-empty failure marks a row whose
/// relation could not be evaluated; its numbers are NaN.
struct ReportRow {
    RelationReport report;
    std::string failure;

    bool passes(double tol) const;
};

/// Orders rows by relation id, then n, then l, then N.
void sort_rows(std::vector<ReportRow>& rows);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string iso_timestamp();

/// states/<label>.csv (rho,R,Rdot) and states/<label>.json.
void write_state(const std::filesystem::path& out_dir, const Eigenstate& s);

nlohmann::json row_json(const ReportRow& row);
std::string relations_csv(const std::vector<ReportRow>& rows);

void write_text(const std::filesystem::path& file, const std::string& text);
void write_json(const std::filesystem::path& file, const nlohmann::json& j);

} // namespace virial::cli
