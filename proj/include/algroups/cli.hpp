#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "algroups/nilalg.hpp"

namespace algroups {

struct CatalogEntry {
  std::string name;
  AlgebraRef algebra;
  std::vector<std::string> tags;
};

// One line of machine-readable output.  params and witness are compact JSON
// fragments; an empty witness is omitted from the serialized line.  The
// runtime field is pinned to zero in the stream so identical invocations
// stay byte-identical; wall-clock timings go to the human summary instead.
struct ReportRecord {
  std::string check;
  std::string algebra;
  std::string params;
  bool pass = true;
  std::string witness;
  std::uint64_t runtime_ms = 0;

  std::string to_line() const;
};

std::string entry_to_json(const CatalogEntry& e);
// Throws ParseError on malformed input (message names the offending field)
// and ValidationError when the structure constants fail algebra validation.
CatalogEntry entry_from_json(const std::string& text);

// The generated builtin family: upper triangular n in {3,4} over F2, F3, F4;
// truncated polynomials n in {2,3,4} over F2, F3; pairwise direct sums of
// the small members over F2 and F3.  Sorted by name.
std::vector<CatalogEntry> builtin_catalog();

// "builtin" for the generated grid, otherwise a directory of *.json entry
// files.  Entries come back sorted by name; duplicate names are rejected.
std::vector<CatalogEntry> ingest_catalog(const std::string& path);

// Exit code implied by a record set: 0 when everything passed, 2 when a
// theorem violation was recorded, 3 when a failing record carries an
// internal (non-violation) error.
int exit_code_for(const std::vector<ReportRecord>& records);

// The command driver.  argv excludes the program name.  Reports go to out as
// JSON lines, the human summary to err.  Returns the process exit code:
// 0 all checks passed, 1 usage or input error, 2 at least one theorem
// violation was recorded, 3 internal consistency failure.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace algroups
