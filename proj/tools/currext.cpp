#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "currext/cli.hpp"

namespace cx = currext::cli;

namespace {

bool write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "currext: cannot write " << path << "\n";
    return false;
  }
  out << text;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ext^1 between simple modules of truncated current algebras"};
  app.set_version_flag("--version", cx::kToolVersion);
  app.require_subcommand(1);

  cx::Overrides ov;
  bool assume_connected = false;
  int truncation = 0;
  std::size_t max_L = 0, max_M = 0;
  std::string json_path, dot_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--assume-connected", assume_connected, "Assert that the algebra is connected (block tests)");
    sub->add_option("--truncation", truncation, "Jet order k for oracle checks (k and k+1 are compared)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-L", max_L, "Cap on the dimension of the truncated Lie algebra");
    sub->add_option("--max-M", max_M, "Cap on the dimension of the coefficient module");
    sub->add_option("--json", json_path, "Write the JSON report here ('-' for standard output)");
  };

  std::string job_path, suite_dir;
  CLI::App* run = app.add_subcommand("run", "Run one job file");
  run->add_option("job", job_path, "Job file")->required();
  run->add_option("--emit-dot", dot_path, "Write the quiver of a quiver job in DOT format");
  add_common(run);
  CLI::App* suite = app.add_subcommand("suite", "Run every *.json job of a directory in filename order");
  suite->add_option("dir", suite_dir, "Directory of job files")->required();
  add_common(suite);

  CLI11_PARSE(app, argc, argv);

  // only flags actually given on the command line override the job
  auto given = [&](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
  CLI::App* active = run->parsed() ? run : suite;
  if (given(active, "--assume-connected")) ov.assume_connected = assume_connected;
  if (given(active, "--truncation")) ov.truncation = truncation;
  if (given(active, "--max-L")) ov.max_L = max_L;
  if (given(active, "--max-M")) ov.max_M = max_M;

  cx::Outcome o = run->parsed() ? cx::run_job_file(job_path, ov) : cx::run_suite(suite_dir, ov);
  const std::string report = o.report.dump(2) + "\n";
  if (json_path == "-") {
    std::cout << report;
  } else {
    std::cout << o.summary;
    if (!json_path.empty() && !write_file(json_path, report)) return cx::Failed;
  }
  if (!dot_path.empty()) {
    if (o.dot.empty()) {
      std::cerr << "currext: --emit-dot only applies to quiver jobs\n";
    } else if (!write_file(dot_path, o.dot)) {
      return cx::Failed;
    }
  }
  return o.exit_code;
}
