#include "virial/cli/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "virial/cli/config.hpp"
#include "virial/expectations.hpp"

namespace virial::cli {

namespace {

nlohmann::json number(double x)
{
    if (!std::isfinite(x)) return nullptr;
    return x;
}

std::string csv_number(double x)
{
    return std::isfinite(x) ? format_double(x) : "nan";
}

} // namespace

bool ReportRow::passes(double tol) const
{
    return failure.empty() && std::fabs(report.relative_residual) <= tol;
}

void sort_rows(std::vector<ReportRow>& rows)
{
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        const auto& x = a.report;
        const auto& y = b.report;
        return std::tie(x.id, x.n, x.l, x.N) < std::tie(y.id, y.n, y.l, y.N);
    });
}

std::string iso_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const std::filesystem::path& file, const std::string& text)
{
    std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
    out << text;
}

void write_json(const std::filesystem::path& file, const nlohmann::json& j)
{
    write_text(file, j.dump(2) + "\n");
}

void write_state(const std::filesystem::path& out_dir, const Eigenstate& s)
{
    const std::string label = state_label(s);
    std::string csv = "rho,R,Rdot\n";
    csv.reserve(csv.size() + s.R.size() * 64);
    for (std::size_t i = 0; i < s.R.size(); ++i) {
        csv += format_double(s.rho(i));
        csv += ',';
        csv += format_double(s.R[i]);
        csv += ',';
        csv += format_double(s.Rdot[i]);
        csv += '\n';
    }
    write_text(out_dir / "states" / (label + ".csv"), csv);

    nlohmann::json j;
    j["N"] = s.dim.N;
    j["l1"] = s.dim.l1;
    j["n"] = s.n;
    j["eps"] = number(s.eps);
    j["C2"] = number(s.C2);
    j["norm_residual"] = number(s.norm_residual);
    j["potential"] = s.potential.description();
    j["h"] = s.grid.h;
    j["rho_max"] = s.grid.rho_max();
    write_json(out_dir / "states" / (label + ".json"), j);
}

nlohmann::json row_json(const ReportRow& row)
{
    const auto& r = row.report;
    nlohmann::json j;
    j["relation_id"] = r.id;
    j["state"] = r.state;
    j["N"] = r.N;
    j["n"] = r.n;
    j["l"] = r.l;
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["residual"] = number(r.residual);
    j["relative_residual"] = number(r.relative_residual);
    j["quadrature_error"] = number(r.error);
    j["boundary_active"] = r.boundary_active;
    j["origin_fit_warning"] = r.flagged;
    if (!row.failure.empty()) j["failure"] = row.failure;
    return j;
}

std::string relations_csv(const std::vector<ReportRow>& rows)
{
    std::string out = "relation_id,n,l,N,lhs,rhs,residual\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out += r.id + ',' + std::to_string(r.n) + ',' + std::to_string(r.l) + ',' + std::to_string(r.N) + ',' +
               csv_number(r.lhs) + ',' + csv_number(r.rhs) + ',' + csv_number(r.residual) + '\n';
    }
    return out;
}

} // namespace virial::cli
