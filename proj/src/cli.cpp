#include "algroups/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "algroups/algrp.hpp"
#include "algroups/error.hpp"
#include "algroups/gf.hpp"
#include "algroups/heis.hpp"
#include "algroups/irred.hpp"
#include "algroups/k1norm.hpp"
#include "json.hpp"

namespace algroups {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

ordered_json parse_fragment(const std::string& text) {
  if (text.empty()) return ordered_json::object();
  ordered_json j = ordered_json::parse(text, nullptr, false);
  return j.is_discarded() ? ordered_json(text) : j;
}

bool is_violation_name(const std::string& s) {
  static const std::map<std::string, bool> table = [] {
    std::map<std::string, bool> out;
    for (Errc c : {Errc::NotPrime,
                   Errc::ReducibleModulus,
                   Errc::DegreeMismatch,
                   Errc::DivisionByZero,
                   Errc::FieldMismatch,
                   Errc::NotASubfield,
                   Errc::NoEmbedding,
                   Errc::NotAssociative,
                   Errc::NotNilpotent,
                   Errc::BadParameter,
                   Errc::NotDefinedOverSubfield,
                   Errc::TooLarge,
                   Errc::NotNormal,
                   Errc::NotSubgroup,
                   Errc::GroupMismatch,
                   Errc::StabilizerNotAlgebraSubgroup,
                   Errc::LevelMismatch,
                   Errc::LevelTooSmall,
                   Errc::NotAnInteger,
                   Errc::NotInvertible,
                   Errc::NotAHomomorphism,
                   Errc::NotConstantOnCosets,
                   Errc::NotInvariant,
                   Errc::RadicalNotSubspace,
                   Errc::IsotropicExtensionFailed,
                   Errc::NoExtension,
                   Errc::RadicalMismatch,
                   Errc::NotIrreducible,
                   Errc::NotIrreducibleAfterBaseChange,
                   Errc::NotGaloisInvariant,
                   Errc::ReductionMismatch,
                   Errc::SumOfSquaresMismatch,
                   Errc::InvariantNotLinear,
                   Errc::ParseError,
                   Errc::ValidationError})
      out[errc_name(c)] = errc_is_violation(c);
    return out;
  }();
  auto it = table.find(s);
  return it != table.end() && it->second;
}

// --- entry serialization ------------------------------------------------

ordered_json fel_to_json(const Field& k, Fel a) {
  ordered_json out = ordered_json::array();
  for (int c : k.coeffs(a)) out.push_back(c);
  return out;
}

Fel fel_from_json(const Field& k, const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() > (size_t)k.m())
    throw AlgError(Errc::ParseError, "field element at " + where +
                                         " must be a coefficient array of length at most " +
                                         std::to_string(k.m()));
  std::vector<int> c((size_t)k.m(), 0);
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0 ||
        j[i].get<long long>() >= (long long)k.p())
      throw AlgError(Errc::ParseError,
                     "coefficient at " + where + " must be an integer in [0, p)");
    c[i] = j[i].get<int>();
  }
  return k.from_coeffs(c);
}

}  // namespace

std::string entry_to_json(const CatalogEntry& e) {
  const Algebra& A = *e.algebra;
  const Field& k = *A.field;
  ordered_json out;
  out["name"] = e.name;
  out["field"] = {{"p", k.p()}, {"m", k.m()}, {"modulus", k.modulus()}};
  out["dim"] = A.dim;
  ordered_json sc = ordered_json::array();
  for (int i = 0; i < A.dim; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < A.dim; ++j) {
      ordered_json cell = ordered_json::array();
      for (int l = 0; l < A.dim; ++l) cell.push_back(fel_to_json(k, A.sc_at(i, j, l)));
      row.push_back(std::move(cell));
    }
    sc.push_back(std::move(row));
  }
  out["sc"] = std::move(sc);
  if (A.defined_over) out["defined_over"] = A.defined_over;
  if (!e.tags.empty()) out["tags"] = e.tags;
  return out.dump();
}

CatalogEntry entry_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw AlgError(Errc::ParseError, std::string("bad JSON: ") + e.what());
  }
  if (!j.is_object()) throw AlgError(Errc::ParseError, "entry must be a JSON object");
  if (!j.contains("name") || !j["name"].is_string())
    throw AlgError(Errc::ParseError, "field \"name\" must be a string");
  if (!j.contains("field") || !j["field"].is_object())
    throw AlgError(Errc::ParseError, "field \"field\" must be an object with p, m");
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw AlgError(Errc::ParseError, "field \"dim\" must be an integer");
  if (!j.contains("sc") || !j["sc"].is_array())
    throw AlgError(Errc::ParseError, "field \"sc\" must be an array");

  const auto& fj = j["field"];
  if (!fj.contains("p") || !fj["p"].is_number_integer() || !fj.contains("m") ||
      !fj["m"].is_number_integer())
    throw AlgError(Errc::ParseError, "field \"field\" needs integer p and m");

  FieldRef k;
  try {
    if (fj.contains("modulus")) {
      if (!fj["modulus"].is_array())
        throw AlgError(Errc::ParseError, "field \"field.modulus\" must be an array");
      k = Field::make(fj["p"].get<int>(), fj["m"].get<int>(),
                      fj["modulus"].get<std::vector<int>>());
    } else {
      k = Field::make(fj["p"].get<int>(), fj["m"].get<int>());
    }
  } catch (const AlgError& e) {
    if (e.code == Errc::ParseError) throw;
    throw AlgError(Errc::ValidationError, std::string("bad field: ") + e.what(), e.witness);
  }

  int dim = j["dim"].get<int>();
  if (dim < 1 || dim > 64) throw AlgError(Errc::ParseError, "dim must be in [1, 64]");
  if ((int)j["sc"].size() != dim)
    throw AlgError(Errc::ParseError, "sc must have dim rows");
  std::vector<Fel> sc((size_t)dim * dim * dim, 0);
  for (int i = 0; i < dim; ++i) {
    const auto& row = j["sc"][i];
    if (!row.is_array() || (int)row.size() != dim)
      throw AlgError(Errc::ParseError, "sc row " + std::to_string(i) + " must have dim cells");
    for (int jj = 0; jj < dim; ++jj) {
      const auto& cell = row[jj];
      if (!cell.is_array() || (int)cell.size() != dim)
        throw AlgError(Errc::ParseError, "sc cell (" + std::to_string(i) + "," +
                                             std::to_string(jj) + ") must have dim entries");
      for (int l = 0; l < dim; ++l) {
        std::string where = "sc[" + std::to_string(i) + "][" + std::to_string(jj) + "][" +
                            std::to_string(l) + "]";
        sc[((size_t)i * dim + jj) * dim + l] = fel_from_json(*k, cell[l], where);
      }
    }
  }

  std::uint32_t defined_over = 0;
  if (j.contains("defined_over")) {
    if (!j["defined_over"].is_number_unsigned())
      throw AlgError(Errc::ParseError, "defined_over must be a nonnegative integer");
    defined_over = j["defined_over"].get<std::uint32_t>();
  }

  CatalogEntry out;
  out.name = j["name"].get<std::string>();
  if (out.name.empty()) throw AlgError(Errc::ParseError, "name must be nonempty");
  if (j.contains("tags")) {
    if (!j["tags"].is_array()) throw AlgError(Errc::ParseError, "tags must be an array");
    for (const auto& t : j["tags"]) {
      if (!t.is_string()) throw AlgError(Errc::ParseError, "tags must be strings");
      out.tags.push_back(t.get<std::string>());
    }
  }
  try {
    out.algebra = algebra_from_constants(k, dim, std::move(sc), defined_over);
  } catch (const AlgError& e) {
    throw AlgError(Errc::ValidationError, std::string("bad structure constants: ") + e.what(),
                   e.witness);
  }
  return out;
}

namespace {

bool is_commutative(const Algebra& A) {
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < i; ++j)
      for (int l = 0; l < A.dim; ++l)
        if (A.sc_at(i, j, l) != A.sc_at(j, i, l)) return false;
  return true;
}

std::vector<std::string> tags_for(const AlgebraRef& A) {
  std::vector<std::string> tags;
  if (is_commutative(*A)) tags.push_back("commutative");
  if ((std::uint64_t)(A->nclass - 1) < (std::uint64_t)A->field->p()) tags.push_back("class<p");
  return tags;
}

}  // namespace

std::vector<CatalogEntry> builtin_catalog() {
  std::vector<CatalogEntry> out;
  auto add = [&](std::string name, AlgebraRef A) {
    out.push_back({std::move(name), A, tags_for(A)});
  };

  const std::vector<std::pair<std::string, FieldRef>> ut_fields = {
      {"f2", Field::make(2, 1)}, {"f3", Field::make(3, 1)}, {"f4", Field::make(2, 2)}};
  for (const auto& [fname, k] : ut_fields)
    for (int n : {3, 4}) add("u" + std::to_string(n) + "_" + fname, builtin_upper_triangular(k, n));

  const std::vector<std::pair<std::string, FieldRef>> tp_fields = {
      {"f2", Field::make(2, 1)}, {"f3", Field::make(3, 1)}};
  auto tp_name = [](int n) { return n == 2 ? std::string("x2") : "t" + std::to_string(n); };
  for (const auto& [fname, k] : tp_fields)
    for (int n : {2, 3, 4}) add(tp_name(n) + "_" + fname, builtin_truncated_poly(k, n));

  // pairwise direct sums of the small members, over each prime field
  for (const auto& [fname, k] : tp_fields) {
    const std::vector<std::pair<std::string, AlgebraRef>> smalls = {
        {"u3", builtin_upper_triangular(k, 3)},
        {"t3", builtin_truncated_poly(k, 3)},
        {"x2", builtin_truncated_poly(k, 2)}};
    for (size_t i = 0; i < smalls.size(); ++i)
      for (size_t j = i; j < smalls.size(); ++j)
        add(smalls[i].first + "_" + smalls[j].first + "_" + fname,
            direct_sum(smalls[i].second, smalls[j].second));
  }

  std::sort(out.begin(), out.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  return out;
}

std::vector<CatalogEntry> ingest_catalog(const std::string& path) {
  if (path == "builtin") return builtin_catalog();
  if (!fs::is_directory(path))
    throw AlgError(Errc::ParseError, "catalog path is not a directory: " + path);
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(path))
    if (de.is_regular_file() && de.path().extension() == ".json") files.push_back(de.path());
  std::sort(files.begin(), files.end());

  std::vector<CatalogEntry> out;
  std::set<std::string> names;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw AlgError(Errc::ParseError, "cannot read " + f.string());
    std::stringstream ss;
    ss << in.rdbuf();
    CatalogEntry e;
    try {
      e = entry_from_json(ss.str());
    } catch (const AlgError& err) {
      throw AlgError(err.code, f.filename().string() + ": " + err.what(), err.witness);
    }
    if (!names.insert(e.name).second)
      throw AlgError(Errc::ValidationError, "duplicate entry name: " + e.name,
                     "{\"file\":\"" + f.filename().string() + "\"}");
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
  return out;
}

std::string ReportRecord::to_line() const {
  ordered_json j;
  j["check"] = check;
  j["algebra"] = algebra;
  j["params"] = parse_fragment(params);
  j["pass"] = pass;
  if (!witness.empty()) j["witness"] = parse_fragment(witness);
  j["runtime_ms"] = runtime_ms;
  return j.dump();
}

int exit_code_for(const std::vector<ReportRecord>& records) {
  int code = 0;
  for (const ReportRecord& r : records) {
    if (r.pass) continue;
    ordered_json w = parse_fragment(r.witness);
    bool internal =
        w.is_object() && w.contains("error") && w["error"].is_string() &&
        !is_violation_name(w["error"].get<std::string>());
    if (internal) return 3;
    code = 2;
  }
  return code;
}

namespace {

// --- command implementations --------------------------------------------

ReportRecord make_record(std::string check, const std::string& algebra, std::string params,
                         bool pass, std::string witness) {
  ReportRecord r;
  r.check = std::move(check);
  r.algebra = algebra;
  r.params = std::move(params);
  r.pass = pass;
  r.witness = std::move(witness);
  return r;
}

ReportRecord skipped_record(const std::string& check, const std::string& algebra,
                            std::string params, const std::string& why) {
  ordered_json w;
  w["skipped"] = why;
  return make_record(check, algebra, std::move(params), true, w.dump());
}

ReportRecord error_record(const std::string& check, const std::string& algebra,
                          std::string params, const AlgError& e) {
  ordered_json w;
  w["error"] = errc_name(e.code);
  w["message"] = e.what();
  if (!e.witness.empty()) w["data"] = parse_fragment(e.witness);
  return make_record(check, algebra, std::move(params), false, w.dump());
}

// run fn under the standard size / violation policy: oversized work becomes
// an explicit skip record, reportable failures become failing records, and
// anything else is a real error that propagates
template <class Fn>
void guarded(std::vector<ReportRecord>& records, const std::string& check,
             const std::string& algebra, const std::string& params, Fn&& fn) {
  try {
    fn();
  } catch (const AlgError& e) {
    if (e.code == Errc::TooLarge)
      records.push_back(skipped_record(check, algebra, params, "size"));
    else if (errc_is_violation(e.code))
      records.push_back(error_record(check, algebra, params, e));
    else
      throw;
  }
}

std::vector<ReportRecord> cmd_validate(const CatalogEntry& e) {
  std::vector<ReportRecord> records;
  ordered_json w;
  w["dim"] = e.algebra->dim;
  w["nclass"] = e.algebra->nclass;
  w["order"] = e.algebra->group_size();
  if (!e.tags.empty()) w["tags"] = e.tags;
  CatalogEntry back = entry_from_json(entry_to_json(e));
  bool round_trip =
      back.name == e.name && back.tags == e.tags &&
      back.algebra->fingerprint() == e.algebra->fingerprint();
  w["round_trip"] = round_trip;
  records.push_back(make_record("validate", e.name, "{}", round_trip, w.dump()));
  return records;
}

std::vector<ReportRecord> cmd_irreps(const CatalogEntry& e) {
  std::vector<ReportRecord> records;
  guarded(records, "irrep", e.name, "{}", [&] {
    auto irr = enumerate_irreps(e.algebra);
    for (size_t i = 0; i < irr.size(); ++i) {
      ordered_json params;
      params["index"] = i;
      ordered_json w;
      w["degree"] = irr[i].character.degree().integer_value();
      w["fdim"] = irr[i].fdim;
      w["sh"] = irr[i].sh;
      records.push_back(make_record("irrep", e.name, params.dump(), true, w.dump()));
    }
  });
  return records;
}

std::vector<ReportRecord> cmd_norm(const CatalogEntry& e, int ext, bool tabulate) {
  std::vector<ReportRecord> records;
  ordered_json params;
  params["ext"] = ext;
  const std::string ps = params.dump();
  if (tabulate)
    guarded(records, "norm-table", e.name, ps, [&] {
      NormTable T = norm_map(e.algebra, ext);
      ordered_json w;
      w["entries"] = T.table.size();
      w["dst_ab"] = T.dst->size();
      records.push_back(make_record("norm-table", e.name, ps, true, w.dump()));
    });
  guarded(records, "norm-surjective", e.name, ps, [&] {
    auto img = norm_image(e.algebra, ext);
    std::uint64_t ab = abelianize(e.algebra, Subspace::full(e.algebra->dim))->size();
    ordered_json w;
    w["image_order"] = img.size();
    w["ab_order"] = ab;
    records.push_back(make_record("norm-surjective", e.name, ps, img.size() == ab, w.dump()));
  });
  return records;
}

std::vector<ReportRecord> cmd_base_change(const CatalogEntry& e, int ext) {
  std::vector<ReportRecord> records;
  ordered_json params;
  params["ext"] = ext;
  const std::string ps = params.dump();
  guarded(records, "base-change", e.name, ps, [&] {
    auto irr = enumerate_irreps(e.algebra);
    std::vector<IrrepChain> images;
    bool skipped = false;
    for (size_t i = 0; i < irr.size(); ++i) {
      ordered_json p2;
      p2["ext"] = ext;
      p2["index"] = i;
      try {
        IrrepChain img = base_change(irr[i], ext);
        ordered_json w;
        w["degree"] = img.character.degree().integer_value();
        w["fdim"] = img.fdim;
        w["sh"] = img.sh;
        records.push_back(make_record("base-change", e.name, p2.dump(), true, w.dump()));
        images.push_back(std::move(img));
      } catch (const AlgError& err) {
        if (err.code == Errc::TooLarge) {
          records.push_back(skipped_record("base-change", e.name, ps, "size"));
          skipped = true;
          break;
        }
        if (!errc_is_violation(err.code)) throw;
        records.push_back(error_record("base-change", e.name, p2.dump(), err));
      }
    }
    if (!skipped && images.size() == irr.size()) {
      bool inj = true;
      for (size_t i = 0; i < images.size() && inj; ++i)
        for (size_t j = i + 1; j < images.size(); ++j)
          if (iso_test(images[i].character, images[j].character)) {
            inj = false;
            break;
          }
      ordered_json w;
      w["irreps"] = images.size();
      records.push_back(make_record("base-change-injective", e.name, ps, inj, w.dump()));
    }
  });
  return records;
}

std::vector<ReportRecord> cmd_verify(const CatalogEntry& e, const std::vector<int>& exts,
                                     const std::vector<std::string>& checks) {
  ordered_json params;
  params["ext"] = exts;
  std::vector<ReportRecord> records;
  for (const CheckResult& r : experiments(e.algebra, exts, checks))
    records.push_back(make_record(r.check, e.name, params.dump(), r.pass, r.witness));
  return records;
}

CatalogEntry load_entry(const std::string& spec) {
  if (fs::is_regular_file(spec)) {
    std::ifstream in(spec);
    if (!in) throw AlgError(Errc::ParseError, "cannot read " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    return entry_from_json(ss.str());
  }
  for (CatalogEntry& e : builtin_catalog())
    if (e.name == spec) return std::move(e);
  throw AlgError(Errc::BadParameter,
                 "unknown entry (not a file, not a builtin name): " + spec);
}

std::vector<int> parse_ext_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      int v = std::stoi(item, &pos);
      if (pos != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw AlgError(Errc::BadParameter, "bad extension degree: " + item);
    }
  }
  if (out.empty()) throw AlgError(Errc::BadParameter, "empty extension list");
  return out;
}

std::vector<std::string> parse_check_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SearchTask {
  size_t entry = 0;
  int ext = 2;
};

std::vector<ReportRecord> run_search(const std::vector<CatalogEntry>& entries, int max_ext,
                                     int jobs, std::ostream& err) {
  std::vector<SearchTask> tasks;
  for (size_t i = 0; i < entries.size(); ++i)
    for (int n = 2; n <= max_ext; ++n) tasks.push_back({i, n});

  std::vector<std::vector<ReportRecord>> results(tasks.size());
  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  auto worker = [&] {
    while (true) {
      size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const CatalogEntry& e = entries[tasks[t].entry];
      int n = tasks[t].ext;
      auto t0 = std::chrono::steady_clock::now();
      ordered_json params;
      params["ext"] = n;
      std::vector<ReportRecord> recs;
      for (const CheckResult& r : experiments(e.algebra, {n}, {"orders"}))
        recs.push_back(make_record(r.check, e.name, params.dump(), r.pass, r.witness));
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      bool ok = true;
      for (const ReportRecord& r : recs) ok = ok && r.pass;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        err << "orders " << e.name << " ext " << n << ": "
            << (ok ? "equal" : "INEQUALITY FOUND") << " (" << ms << " ms)\n";
      }
      results[t] = std::move(recs);
    }
  };
  int nworkers = std::max(1, std::min<int>(jobs, (int)tasks.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < nworkers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<ReportRecord> out;
  for (auto& recs : results)
    for (auto& r : recs) out.push_back(std::move(r));
  return out;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact representation theory of finite algebra groups"};
  app.require_subcommand(1);

  std::string entry_arg, catalog_arg, ext_arg, checks_arg;
  int ext_int = 0, max_ext = 0, jobs = 1;
  bool tabulate = false;

  auto* c_validate = app.add_subcommand("validate", "load one entry and confirm it round-trips");
  c_validate->add_option("entry", entry_arg, "builtin name or path to an entry file")->required();

  auto* c_irreps = app.add_subcommand("irreps", "enumerate the irreducible characters");
  c_irreps->add_option("entry", entry_arg, "builtin name or path to an entry file")->required();

  auto* c_norm = app.add_subcommand("norm", "norm map of a field extension");
  c_norm->add_option("entry", entry_arg, "builtin name or path to an entry file")->required();
  c_norm->add_option("--ext", ext_int, "extension degree")->required()->check(CLI::Range(2, 16));
  c_norm->add_flag("--tabulate", tabulate, "tabulate the full norm table");

  auto* c_base = app.add_subcommand("base-change", "base change of every irreducible");
  c_base->add_option("entry", entry_arg, "builtin name or path to an entry file")->required();
  c_base->add_option("--ext", ext_int, "extension degree")->required()->check(CLI::Range(2, 16));

  auto* c_verify = app.add_subcommand("verify", "run the theorem battery");
  c_verify->add_option("entry", entry_arg, "builtin name or path to an entry file")->required();
  c_verify->add_option("--ext", ext_arg, "extension degrees, comma separated")->required();
  c_verify->add_option("--checks", checks_arg, "check ids, comma separated (default: all)");

  auto* c_search = app.add_subcommand("search-surjectivity",
                                      "compare fixed-point abelianization orders over a catalog");
  c_search->add_option("--catalog", catalog_arg, "'builtin' or a directory of entry files")
      ->required();
  c_search->add_option("--max-ext", max_ext, "largest extension degree")
      ->required()
      ->check(CLI::Range(2, 16));
  c_search->add_option("--jobs", jobs, "parallel workers")->check(CLI::Range(1, 256));

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, err, err);
    return code == 0 ? 0 : 1;
  }

  auto t0 = std::chrono::steady_clock::now();
  std::vector<ReportRecord> records;
  try {
    if (c_validate->parsed()) {
      records = cmd_validate(load_entry(entry_arg));
    } else if (c_irreps->parsed()) {
      records = cmd_irreps(load_entry(entry_arg));
    } else if (c_norm->parsed()) {
      records = cmd_norm(load_entry(entry_arg), ext_int, tabulate);
    } else if (c_base->parsed()) {
      records = cmd_base_change(load_entry(entry_arg), ext_int);
    } else if (c_verify->parsed()) {
      records = cmd_verify(load_entry(entry_arg), parse_ext_list(ext_arg),
                           parse_check_list(checks_arg));
    } else if (c_search->parsed()) {
      records = run_search(ingest_catalog(catalog_arg), max_ext, jobs, err);
    }
  } catch (const AlgError& e) {
    err << "error: " << e.what() << "\n";
    if (!e.witness.empty()) err << "witness: " << e.witness << "\n";
    switch (e.code) {
      case Errc::ParseError:
      case Errc::BadParameter:
        return 1;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }

  for (const ReportRecord& r : records) out << r.to_line() << "\n";

  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  size_t failing = 0;
  for (const ReportRecord& r : records)
    if (!r.pass) ++failing;
  err << records.size() << " record" << (records.size() == 1 ? "" : "s") << ", " << failing
      << " failing (" << ms << " ms)\n";
  return exit_code_for(records);
}

}  // namespace algroups
