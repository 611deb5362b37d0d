#include "dplab/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dplab/errors.hpp"

namespace dplab {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file '" + path + "'");
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

constexpr const char* kLedgerSchema = "dplab-ledger-1";

// JSON carries no infinities; threshold values that are genuinely infinite
// (empty constraint branches) travel as the string "inf".
nlohmann::json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string ledger_to_json(const ParameterLedger& led) {
  nlohmann::json j;
  j["schema"] = kLedgerSchema;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : led.entries()) {
    nlohmann::json row;
    row["name"] = e.name;
    row["value"] = number_or_inf(e.value);
    row["provenance"] = e.provenance;
    entries.push_back(row);
  }
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

std::string reserialize_ledger_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (!j.contains("schema") || j["schema"] != kLedgerSchema)
    throw config_error("ledger json: unknown schema");
  return j.dump(2) + "\n";
}

CsvTable ledger_to_csv(const ParameterLedger& led) {
  CsvTable t;
  t.header = {"name", "value", "provenance"};
  for (const auto& e : led.entries())
    t.rows.push_back({e.name, format_number(e.value), e.provenance});
  return t;
}

std::string suite_to_json(const SuiteReport& rep) {
  nlohmann::json j;
  j["schema"] = "dplab-suite-1";
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : rep.results) {
    nlohmann::json row;
    row["property"] = r.id;
    row["pass"] = r.pass;
    row["worst_margin"] = number_or_inf(r.worst_margin);
    row["detail"] = r.detail;
    results.push_back(row);
  }
  j["results"] = results;
  j["all_pass"] = rep.all_pass();
  return j.dump(2) + "\n";
}

CsvTable validation_to_csv(const ValidationReport& rep) {
  CsvTable t;
  t.header = {"condition", "worst_node", "worst_value", "margin"};
  for (const auto& v : rep.violations)
    t.rows.push_back({v.condition, std::to_string(v.worst_node),
                      format_number(v.worst_value), format_number(v.margin)});
  return t;
}

CsvTable gridfunction_to_csv(const DomainMesh& mesh, const Vec& values) {
  CsvTable t;
  t.header = mesh.dim == 2 ? std::vector<std::string>{"x1", "x2", "value"}
                           : std::vector<std::string>{"x1", "value"};
  for (Index i = 0; i < mesh.count(); ++i) {
    std::vector<std::string> row{format_number(mesh.coords(i, 0))};
    if (mesh.dim == 2) row.push_back(format_number(mesh.coords(i, 1)));
    row.push_back(format_number(values[i]));
    t.rows.push_back(row);
  }
  return t;
}

Vec gridfunction_from_csv(const DomainMesh& mesh, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw data_error("gridfunction csv: empty file");
  Vec out(mesh.count());
  Index i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= mesh.count()) throw data_error("gridfunction csv: too many rows");
    const auto last_comma = line.rfind(',');
    if (last_comma == std::string::npos) throw data_error("gridfunction csv: malformed row");
    out[i++] = std::stod(line.substr(last_comma + 1));
  }
  if (i != mesh.count()) throw data_error("gridfunction csv: row count does not match mesh");
  return out;
}

CsvTable fields_to_csv(const ExponentField& f) {
  const DomainMesh& mesh = *f.mesh;
  CsvTable t;
  t.header = {"x1"};
  if (mesh.dim == 2) t.header.push_back("x2");
  for (const char* name : {"p", "q", "a", "c1", "c2", "r1", "r2", "p_star", "q_star"})
    t.header.push_back(name);
  const bool with_reaction = f.alpha.size() > 0;
  if (with_reaction) {
    t.header.push_back("alpha");
    t.header.push_back("sigma");
  }
  for (Index i = 0; i < mesh.count(); ++i) {
    std::vector<std::string> row{format_number(mesh.coords(i, 0))};
    if (mesh.dim == 2) row.push_back(format_number(mesh.coords(i, 1)));
    for (const Vec* v : {&f.p, &f.q, &f.a, &f.c1, &f.c2, &f.r1, &f.r2, &f.p_star, &f.q_star})
      row.push_back(format_number((*v)[i]));
    if (with_reaction) {
      row.push_back(format_number(f.alpha[i]));
      row.push_back(format_number(f.sigma[i]));
    }
    t.rows.push_back(row);
  }
  return t;
}

CsvTable trace_to_csv(const SolverReport& rep) {
  CsvTable t;
  t.header = {"iteration", "energy"};
  for (std::size_t i = 0; i < rep.energy_trace.size(); ++i)
    t.rows.push_back({std::to_string(i), format_number(rep.energy_trace[i])});
  return t;
}

CsvTable decay_to_csv(const std::vector<DecayRow>& rows) {
  CsvTable t;
  t.header = {"lambda", "t1",          "t1_pow",   "norm_u",      "a_integral",
              "energy", "grad_norm",   "negative", "containment", "gap"};
  for (const auto& r : rows)
    t.rows.push_back({format_number(r.lambda), format_number(r.t1),
                      format_number(r.t1_pow), format_number(r.norm_u),
                      format_number(r.a_integral), format_number(r.energy),
                      format_number(r.grad_norm),
                      r.reached_negative_level ? "1" : "0",
                      r.containment_ok ? "1" : "0", r.gap ? "1" : "0"});
  return t;
}

CsvTable sl_audit_to_csv(const std::vector<SlAuditRow>& rows) {
  CsvTable t;
  t.header = {"k",        "R",        "level",        "ps_level",
              "c_star",   "positive", "below_ps",     "below_c_star",
              "descent_energy", "descent_grad_norm"};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.k), format_number(r.R),
                      format_number(r.level), format_number(r.ps_level),
                      format_number(r.c_star), r.positive ? "1" : "0",
                      r.below_ps ? "1" : "0", r.below_c_star ? "1" : "0",
                      format_number(r.descent_energy),
                      format_number(r.descent_grad_norm)});
  return t;
}

CsvTable ccp_to_csv(const std::vector<ConcentrationRow>& rows) {
  CsvTable t;
  t.header = {"eps",       "mu_mass",   "nu_mass",  "lhs",       "rhs",
              "margin",    "nu_half",   "local_lhs", "local_rhs", "correction"};
  for (const auto& r : rows)
    t.rows.push_back({format_number(r.eps), format_number(r.mu_mass),
                      format_number(r.nu_mass), format_number(r.lhs),
                      format_number(r.rhs), format_number(r.margin),
                      format_number(r.nu_half_mass), format_number(r.local_lhs),
                      format_number(r.local_rhs), format_number(r.correction)});
  return t;
}

CsvTable suite_to_csv(const SuiteReport& rep) {
  CsvTable t;
  t.header = {"property", "pass", "worst_margin", "detail"};
  for (const auto& r : rep.results)
    t.rows.push_back({r.id, r.pass ? "1" : "0", format_number(r.worst_margin), r.detail});
  return t;
}

}  // namespace dplab
