#pragma once

#include <string>
#include <vector>

#include "dplab/ccp.hpp"
#include "dplab/fields.hpp"
#include "dplab/ledger.hpp"
#include "dplab/mesh.hpp"
#include "dplab/search.hpp"
#include "dplab/verify.hpp"

namespace dplab {

// All emitters format floating point with %.17g so that identical inputs
// reproduce byte-identical files.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_string() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string ledger_to_json(const ParameterLedger& led);
// Round-trips the versioned ledger JSON; reload + re-serialize is
// byte-identical. Throws config_error on schema mismatch.
std::string reserialize_ledger_json(const std::string& json_text);
CsvTable ledger_to_csv(const ParameterLedger& led);
std::string suite_to_json(const SuiteReport& rep);

CsvTable validation_to_csv(const ValidationReport& rep);
CsvTable gridfunction_to_csv(const DomainMesh& mesh, const Vec& values);
Vec gridfunction_from_csv(const DomainMesh& mesh, const std::string& text);
CsvTable fields_to_csv(const ExponentField& fields);
CsvTable trace_to_csv(const SolverReport& rep);
CsvTable decay_to_csv(const std::vector<DecayRow>& rows);
CsvTable sl_audit_to_csv(const std::vector<SlAuditRow>& rows);
CsvTable ccp_to_csv(const std::vector<ConcentrationRow>& rows);
CsvTable suite_to_csv(const SuiteReport& rep);

}  // namespace dplab
