// kfibcat: replays the concatenation proof and writes a report.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "kfibcat/pipeline.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified replay of the k-Fibonacci concatenation proof"};

  kfibcat::RunConfig config;
  std::string phases = "A,B,C";
  std::string sample_k = "100,200,300,400";
  std::string out_path;
  std::string format = "json";
  std::string mu_form = "corrected";
  bool strict = false;
  bool long_run = false;

  app.add_option("--phases", phases, "Comma-separated subset of A,B,C")->capture_default_str();
  app.add_option("--k-min", config.k_min, "Smallest k (phase A search, phase B sweep)")->capture_default_str();
  app.add_option("--k-max", config.k_max, "Largest k (phase A search, phase B sweep)")->capture_default_str();
  app.add_option("--m-max", config.m_max, "Largest m in the phase A search")->capture_default_str();
  app.add_option("--l-max", config.l_max, "Largest l in the phase A search")->capture_default_str();
  app.add_option("--precision-digits", config.precision_digits, "Working precision in decimal digits")
      ->capture_default_str();
  app.add_option("--workers", config.workers, "Worker threads")->capture_default_str();
  app.add_option("--sample-k", sample_k, "Extra phase B values of k")->capture_default_str();
  app.add_flag("--strict-constants", strict, "Feed recomputed constants forward instead of the printed ones");
  app.add_flag("--homogeneous-fallback", config.homogeneous_fallback,
               "Bound per-k cells with mu near an integer by the homogeneous approximation of tau");
  app.add_flag("--long-run", long_run, "Phase B over the full range 3 <= k <= 420");
  app.add_option("--mu-form", mu_form, "Per-k mu: corrected or as_printed")
      ->check(CLI::IsMember({"corrected", "as_printed"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "Report path (stdout when omitted)");
  app.add_option("--format", format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--cache-dir", config.cache_dir,
                 std::string("Per-k result cache (overridden by ") + kfibcat::kCacheEnvVar + ")");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  config.phases.clear();
  for (char c : phases) {
    if (c != ',' && c != ' ') config.phases.insert(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  config.sample_k = parse_int_list(sample_k);
  config.chain_mode = strict ? kfibcat::ChainMode::strict : kfibcat::ChainMode::printed;
  config.mu_form = mu_form == "as_printed" ? kfibcat::MuForm::as_printed : kfibcat::MuForm::corrected;
  if (long_run) {
    config.k_min = 3;
    config.k_max = 420;
  }

  const kfibcat::ReportFormat fmt = format == "csv"    ? kfibcat::ReportFormat::csv
                                    : format == "text" ? kfibcat::ReportFormat::text
                                                       : kfibcat::ReportFormat::json;
  try {
    const kfibcat::ProofReport report = kfibcat::run(config);
    if (out_path.empty()) {
      std::cout << kfibcat::render_report(report, fmt);
    } else {
      kfibcat::emit_report(report, fmt, out_path);
      std::cerr << "paper constants reproduced: " << (report.constants_reproduced() ? "yes" : "no") << '\n';
    }
    for (const auto& e : report.errors) std::cerr << "error: " << e << '\n';
    return kfibcat::exit_code(report.status());
  } catch (const kfibcat::DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
