#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cosetkit/script.hpp"

namespace {

int check_certificates(const std::vector<std::string>& files) {
  bool all_ok = true;
  for (const std::string& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      std::cout << file << ": cannot open\n";
      all_ok = false;
      continue;
    }
    try {
      cosetkit::Json j = cosetkit::Json::parse(in);
      cosetkit::DecompositionCertificate cert = cosetkit::certificate_from_json(j);
      std::string reason;
      bool ok = cosetkit::check_certificate(cert, &reason);
      std::cout << file << ": " << (ok ? "PASS" : "FAIL " + reason) << "\n";
      all_ok = all_ok && ok;
    } catch (const std::exception& e) {
      std::cout << file << ": FAIL " << e.what() << "\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cosetkit: exact coset-ring set algebra, decomposition certificates, and "
               "piecewise affine graphs"};

  std::string script_path;
  std::string format = "text";
  std::string out_dir = ".";
  long long window_radius = -1;
  std::vector<std::string> check_files;

  app.add_option("script", script_path, "script file to run");
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--window-radius", window_radius,
                 "default window radius (overrides COSETKIT_WINDOW_RADIUS)");
  app.add_option("--out-dir", out_dir, "directory for emitted artifacts");
  app.add_option("--check", check_files, "verify certificate files and exit");

  CLI11_PARSE(app, argc, argv);

  if (!check_files.empty()) return check_certificates(check_files);

  if (script_path.empty()) {
    std::cerr << "error: no script file given (see --help)\n";
    return 2;
  }
  std::ifstream in(script_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << script_path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  cosetkit::RunOptions opt;
  opt.json_format = format == "json";
  opt.out_dir = out_dir;
  if (const char* env = std::getenv("COSETKIT_WINDOW_RADIUS"))
    opt.window_radius = cosetkit::Int(env);
  if (window_radius >= 0) opt.window_radius = window_radius;  // flag wins

  cosetkit::RunResult res = cosetkit::run_script(buf.str(), opt, std::cout);
  return res.exit_code;
}
