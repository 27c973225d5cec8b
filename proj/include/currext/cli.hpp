#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "currext/ceoracle.hpp"
#include "currext/extcalc.hpp"

// Batch front end: JSON job in, JSON report out.

namespace currext::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchema = 1;

enum ExitCode : int { Ok = 0, OracleDisagrees = 1, Invalid = 2, Failed = 3, CapExceeded = 4 };

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionCap: return CapExceeded;
    case ErrorKind::ComputationError:
    case ErrorKind::BoundExceeded:
    case ErrorKind::NotACocycle: return Failed;
    default: return Invalid;
  }
}

/// Command line settings that override the job's own "flags" block.
struct Overrides {
  std::optional<bool> assume_connected;
  std::optional<int> truncation;
  std::optional<std::size_t> max_L, max_M;
};

struct Flags {
  bool assume_connected = false;
  int truncation = 2;
  std::size_t max_L = OracleOptions{}.max_L;
  std::size_t max_M = OracleOptions{}.max_M;

  json to_json() const {
    return {{"assume_connected", assume_connected}, {"truncation", truncation}, {"max_L", max_L}, {"max_M", max_M}};
  }
};

struct Outcome {
  json report;
  std::string summary;
  std::string dot;  // quiver jobs only
  int exit_code = Ok;
};

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string job_hash(const json& job) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(job.dump());
  return os.str();
}

namespace detail {

[[noreturn]] inline void invalid(const std::string& what) { fail(ErrorKind::ValidationError, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) invalid(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::string rational_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  invalid("coordinates must be strings \"p/q\" or integers, got " + j.dump());
}

inline PointIdeal parse_point(const json& j) {
  if (!j.is_array()) invalid("a point is an array of coordinates");
  std::vector<Rational> c;
  for (const auto& x : j) {
    try {
      c.push_back(parse_rational(rational_text(x)));
    } catch (const Error& e) {
      invalid(std::string("bad coordinate: ") + e.what());
    }
  }
  return PointIdeal(c);
}

inline Weight parse_weight(const json& j) {
  if (!j.is_array()) invalid("a weight is an array of integers");
  std::vector<std::int64_t> c;
  for (const auto& x : j) {
    if (!x.is_number_integer()) invalid("weight coordinates must be integers, got " + x.dump());
    c.push_back(x.get<std::int64_t>());
  }
  return Weight(c);
}

inline SupportFunction parse_module(const ContextPtr& ctx, const json& j) {
  const json& entries = field(j, "module");
  if (!entries.is_array()) invalid("\"module\" must be an array of {point, weight}");
  std::vector<std::pair<PointIdeal, Weight>> e;
  for (const auto& x : entries) {
    Weight w = parse_weight(field(x, "weight"));
    ctx->root_datum().check_weight(w);
    e.emplace_back(parse_point(field(x, "point")), w);
  }
  return {ctx, e};
}

inline json point_json(const PointIdeal& p) {
  json a = json::array();
  for (const auto& c : p.coords()) a.push_back(to_string(c));
  return a;
}

inline json weight_json(const Weight& w) { return w.coords(); }

inline json module_json(const SupportFunction& pi) {
  json a = json::array();
  for (const auto& [p, w] : pi.entries()) a.push_back({{"point", point_json(p)}, {"weight", weight_json(w)}});
  return {{"module", a}};
}

inline json character_json(const SpectralCharacter& ch) {
  json a = json::array();
  for (const auto& [p, c] : ch) a.push_back({{"point", point_json(p)}, {"class", c.residues}});
  return a;
}

inline AlgebraPresentation parse_algebra(const json& j) {
  const json& gens = field(j, "generators");
  if (!gens.is_array()) invalid("\"generators\" must be an array of names");
  std::vector<std::string> g;
  for (const auto& x : gens) {
    if (!x.is_string()) invalid("generator names must be strings");
    g.push_back(x.get<std::string>());
  }
  std::vector<std::string> rels;
  if (j.contains("relations")) {
    if (!j["relations"].is_array()) invalid("\"relations\" must be an array of strings");
    for (const auto& x : j["relations"]) {
      if (!x.is_string()) invalid("relations must be strings");
      rels.push_back(x.get<std::string>());
    }
  }
  return AlgebraPresentation::parse(g, rels);
}

inline Flags effective_flags(const json& job, const Overrides& o) {
  Flags f;
  if (job.contains("flags")) {
    const json& j = job["flags"];
    if (!j.is_object()) invalid("\"flags\" must be an object");
    for (const auto& [k, v] : j.items()) {
      if (k == "assume_connected" && v.is_boolean()) f.assume_connected = v.get<bool>();
      else if (k == "truncation" && v.is_number_integer()) f.truncation = v.get<int>();
      else if (k == "max_L" && v.is_number_unsigned()) f.max_L = v.get<std::size_t>();
      else if (k == "max_M" && v.is_number_unsigned()) f.max_M = v.get<std::size_t>();
      else invalid("unknown or ill-typed flag \"" + k + "\"");
    }
  }
  if (o.assume_connected) f.assume_connected = *o.assume_connected;
  if (o.truncation) f.truncation = *o.truncation;
  if (o.max_L) f.max_L = *o.max_L;
  if (o.max_M) f.max_M = *o.max_M;
  if (f.truncation < 1) invalid("truncation order must be at least 1");
  return f;
}

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"ext1", "block", "chain", "quiver", "oracle", "tangent", "tensor"};
  return c;
}

// Each command lists the operand fields it accepts besides the common ones.
inline void check_fields(const json& job, const std::string& command) {
  static const std::vector<std::string> common{"schema", "lie_type", "algebra", "command", "flags", "comment"};
  std::vector<std::string> allowed;
  if (command == "ext1" || command == "block" || command == "oracle") allowed = {"source", "target"};
  if (command == "oracle") allowed.push_back("extra_points");
  if (command == "chain") allowed = {"from", "to", "bound"};
  if (command == "quiver") allowed = {"family"};
  if (command == "tangent") allowed = {"point"};
  if (command == "tensor") allowed = {"left", "right"};
  for (const auto& [k, v] : job.items())
    if (std::find(common.begin(), common.end(), k) == common.end() &&
        std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      invalid("unexpected field \"" + k + "\" for command " + command);
}

}  // namespace detail

/// Validates and runs one job. Errors become a report with a nonzero exit code.
inline Outcome run_job(const json& job, const Overrides& overrides = {}) {
  using namespace detail;
  Outcome out;
  json& r = out.report;
  r["tool"] = "currext";
  r["tool_version"] = kToolVersion;
  r["schema"] = kSchema;
  r["job_hash"] = job_hash(job);
  std::ostringstream sum;
  try {
    if (!job.is_object()) invalid("a job is a JSON object");
    const json& schema = field(job, "schema");
    if (!schema.is_number_integer() || schema.get<int>() != kSchema)
      invalid("unsupported schema " + schema.dump() + ", expected 1");
    const json& cmd_j = field(job, "command");
    if (!cmd_j.is_string()) invalid("\"command\" must be a string");
    const std::string command = cmd_j.get<std::string>();
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
      invalid("unknown command \"" + command + "\"");
    r["command"] = command;
    check_fields(job, command);
    const Flags flags = effective_flags(job, overrides);
    r["flags"] = flags.to_json();

    const json& type_j = field(job, "lie_type");
    if (!type_j.is_string()) invalid("\"lie_type\" must be a string such as \"A1xB2\"");
    SemisimpleType type = SemisimpleType::parse(type_j.get<std::string>());
    AlgebraPresentation algebra =
        job.contains("algebra") ? parse_algebra(job["algebra"]) : AlgebraPresentation::parse({}, {});
    ContextPtr ctx = make_context(type, algebra);
    const RootDatum& rd = ctx->root_datum();
    json res;

    if (command == "ext1") {
      auto a = parse_module(ctx, field(job, "source")), b = parse_module(ctx, field(job, "target"));
      Ext1Report e = ext1_dimension(a, b);
      json locus = json::array(), contrib = json::array();
      for (const auto& p : e.difference_locus) locus.push_back(point_json(p));
      for (const auto& c : e.contributions)
        contrib.push_back({{"point", point_json(c.point)},
                           {"source", weight_json(c.source)},
                           {"target", weight_json(c.target)},
                           {"hom", c.hom},
                           {"tangent", c.tangent}});
      res = {{"dimension", e.total_dimension}, {"locus", locus}, {"contributions", contrib}, {"reason", to_string(e.reason)}};
      sum << "dim Ext^1 = " << e.total_dimension << " (" << to_string(e.reason) << ")\n";
      for (const auto& c : e.contributions)
        sum << "  at " << c.point.str() << ": hom " << c.hom << " x tangent " << c.tangent << "\n";
    } else if (command == "block") {
      auto a = parse_module(ctx, field(job, "source")), b = parse_module(ctx, field(job, "target"));
      bool same = same_block(a, b, flags.assume_connected);
      res = {{"same_block", same},
             {"source_character", character_json(spectral_character(a))},
             {"target_character", character_json(spectral_character(b))}};
      sum << (same ? "same block\n" : "different blocks\n");
    } else if (command == "chain") {
      Weight from = parse_weight(field(job, "from")), to = parse_weight(field(job, "to"));
      rd.check_weight(from);
      rd.check_weight(to);
      std::optional<std::int64_t> bound;
      if (job.contains("bound")) {
        if (!job["bound"].is_number_integer()) invalid("\"bound\" must be an integer");
        bound = job["bound"].get<std::int64_t>();
      }
      LinkingChain c = linking_chain(rd, from, to, bound, ctx->cache());
      json a = json::array();
      for (const auto& w : c) a.push_back(weight_json(w));
      res = {{"chain", a}, {"length", c.size() - 1}, {"bound", bound.value_or(default_chain_bound(rd, from, to))}};
      sum << "chain:";
      for (const auto& w : c) sum << " " << w.str();
      sum << "\n";
    } else if (command == "quiver") {
      const json& fam = field(job, "family");
      if (!fam.is_array()) invalid("\"family\" must be an array of modules");
      std::vector<SupportFunction> family;
      for (const auto& m : fam) family.push_back(parse_module(ctx, m));
      ExtQuiver q = ext_quiver(family);
      json nodes = json::array(), edges = json::array();
      for (const auto& n : q.nodes) nodes.push_back(module_json(n));
      for (const auto& e : q.edges) edges.push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight}});
      res = {{"nodes", nodes}, {"edges", edges}, {"character_classes", q.character_classes}};
      out.dot = to_dot(q);
      sum << q.nodes.size() << " nodes, " << q.edges.size() << " edges, " << q.character_classes.size()
          << " character classes\n";
    } else if (command == "oracle") {
      auto a = parse_module(ctx, field(job, "source")), b = parse_module(ctx, field(job, "target"));
      std::vector<PointIdeal> extra;
      if (job.contains("extra_points")) {
        if (!job["extra_points"].is_array()) invalid("\"extra_points\" must be an array of points");
        for (const auto& p : job["extra_points"]) {
          extra.push_back(parse_point(p));
          require_point(algebra, extra.back());
        }
      }
      OracleOptions opts;
      opts.max_L = flags.max_L;
      opts.max_M = flags.max_M;
      OracleContext oc(ctx, opts);
      CrossCheck c = oc.cross_check(a, b, flags.truncation, extra);
      res = {{"formula", c.formula},
             {"oracle", c.oracle},
             {"oracle_next", c.oracle_next},
             {"agree", c.agree},
             {"truncation_insufficient", c.truncation_insufficient},
             {"truncation", c.order},
             {"dim_L", c.dim_L},
             {"dim_L_next", c.dim_L_next},
             {"dim_M", c.dim_M},
             {"jet_points", c.jet_points},
             {"rank_path", to_string(c.path)},
             {"graded", c.graded}};
      sum << "formula " << c.formula << ", H^1 at k=" << c.order << ": " << c.oracle << ", at k=" << c.order + 1
          << ": " << c.oracle_next << (c.agree ? " (agree)\n" : " (DISAGREE)\n");
    } else if (command == "tangent") {
      PointIdeal p = parse_point(field(job, "point"));
      std::size_t t = tangent_dimension(algebra, p);
      res = {{"tangent", t}, {"point", point_json(p)}};
      sum << "dim m/m^2 at " << p.str() << " = " << t << "\n";
    } else if (command == "tensor") {
      Weight a = parse_weight(field(job, "left")), b = parse_weight(field(job, "right"));
      rd.check_dominant(a);
      rd.check_dominant(b);
      TensorDecomposition d = tensor_decomposition(rd, a, b, ctx->cache());
      json parts = json::array();
      std::uint64_t total = 0;
      for (const auto& [w, m] : d) {
        parts.push_back({{"weight", weight_json(w)}, {"multiplicity", m}});
        total += static_cast<std::uint64_t>(m) * irrep_dimension(rd, w);
      }
      res = {{"decomposition", parts}, {"dimension", total}};
      sum << a.str() << " x " << b.str() << " =";
      bool first = true;
      for (const auto& [w, m] : d) {
        sum << (first ? " " : " + ") << (m > 1 ? std::to_string(m) + "*" : "") << w.str();
        first = false;
      }
      sum << "\n";
    }
    r["status"] = "ok";
    r["result"] = res;
    if (command == "oracle" && !res["agree"].get<bool>()) out.exit_code = OracleDisagrees;
  } catch (const Error& e) {
    out.exit_code = exit_code_for(e.kind());
    r["status"] = "error";
    r["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    sum << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    out.exit_code = Invalid;
    r["status"] = "error";
    r["error"] = {{"kind", "ValidationError"}, {"message", e.what()}};
    sum << "error: " << e.what() << "\n";
  }
  r["exit_code"] = out.exit_code;
  out.summary = sum.str();
  return out;
}

/// Parses the file first so malformed JSON reports like any other invalid job.
inline Outcome run_job_file(const std::filesystem::path& path, const Overrides& overrides = {}) {
  std::ifstream in(path);
  if (!in) {
    Outcome o;
    o.exit_code = Invalid;
    o.report = {{"tool", "currext"}, {"tool_version", kToolVersion}, {"schema", kSchema}, {"status", "error"},
                {"error", {{"kind", "ValidationError"}, {"message", "cannot read " + path.string()}}},
                {"exit_code", Invalid}};
    o.summary = "error: cannot read " + path.string() + "\n";
    return o;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  json job;
  try {
    job = json::parse(buf.str());
  } catch (const json::exception& e) {
    Outcome o;
    o.exit_code = Invalid;
    o.report = {{"tool", "currext"}, {"tool_version", kToolVersion}, {"schema", kSchema},
                {"job_hash", job_hash(json(buf.str()))}, {"status", "error"},
                {"error", {{"kind", "ParseError"}, {"message", e.what()}}}, {"exit_code", Invalid}};
    o.summary = std::string("error: malformed JSON: ") + e.what() + "\n";
    return o;
  }
  return run_job(job, overrides);
}

/// All *.json files of a directory in filename order. The aggregate exit code
/// prefers validation failures, then computation failures, then caps, then
/// oracle disagreements.
inline Outcome run_suite(const std::filesystem::path& dir, const Overrides& overrides = {}) {
  Outcome out;
  if (!std::filesystem::is_directory(dir)) {
    out.exit_code = Invalid;
    out.report = {{"tool", "currext"}, {"tool_version", kToolVersion}, {"schema", kSchema}, {"status", "error"},
                  {"error", {{"kind", "ValidationError"}, {"message", dir.string() + " is not a directory"}}},
                  {"exit_code", Invalid}};
    out.summary = "error: " + dir.string() + " is not a directory\n";
    return out;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  json jobs = json::array();
  std::size_t ok = 0, failed = 0, checks = 0, agree = 0;
  bool seen[5] = {false, false, false, false, false};
  std::ostringstream sum;
  for (const auto& f : files) {
    Outcome o = run_job_file(f, overrides);
    seen[o.exit_code] = true;
    const bool is_oracle = o.report.value("command", "") == "oracle" && o.report.value("status", "") == "ok";
    if (is_oracle) {
      ++checks;
      if (o.report["result"]["agree"].get<bool>()) ++agree;
    }
    if (o.report.value("status", "") == "ok") ++ok;
    else ++failed;
    jobs.push_back({{"file", f.filename().string()}, {"report", o.report}});
    sum << f.filename().string() << ": " << o.summary;
  }
  for (int code : {Invalid, Failed, CapExceeded, OracleDisagrees})
    if (seen[code]) {
      out.exit_code = code;
      break;
    }
  out.report = {{"tool", "currext"},
                {"tool_version", kToolVersion},
                {"schema", kSchema},
                {"jobs", jobs},
                {"aggregate",
                 {{"total", files.size()},
                  {"ok", ok},
                  {"failed", failed},
                  {"oracle_checks", checks},
                  {"oracle_agree", agree},
                  {"pass", out.exit_code == Ok}}},
                {"exit_code", out.exit_code}};
  sum << files.size() << " jobs, " << ok << " ok, " << failed << " failed; oracle " << agree << "/" << checks
      << " agree\n";
  out.summary = sum.str();
  return out;
}

}  // namespace currext::cli
