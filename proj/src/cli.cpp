#include "scaling/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scaling/batch.hpp"
#include "scaling/errors.hpp"
#include "scaling/report.hpp"
#include "scaling/synth.hpp"

namespace scaling {

namespace {

struct CommonOptions {
  std::string input = "-";
  std::string out = "-";
  std::string obs_out;
  std::size_t folds = 5;
  std::uint64_t seed = 42;
  double huber_delta = 1.0;
  std::size_t n_starts = 16;
  std::size_t max_iters = 2000;
  double gof_alpha = 0.05;
  double vuong_alpha = 0.005;
  double normality_alpha = 0.05;
  std::string format;
  double ci = 0.95;
  std::size_t grid = 200;
  double high_loss_threshold = 1.0;
  int threads = 0;
};

struct SimulateOptions {
  std::string kind;
  double C = 0.8, beta = -1.2, D = 0.05;
  double A = 0.3, alpha = -0.7, B = 0.02;
  std::string sizes = "pythia";
  double sigma = 0.0;
  std::string family = "synthetic";
  std::string dataset = "synthetic";
  std::string metric = "synthetic";
  std::string decoding = "none";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

FrameworkConfig framework_config(const CommonOptions& o) {
  FrameworkConfig cfg;
  cfg.fit.huber_delta = o.huber_delta;
  cfg.fit.n_starts = o.n_starts;
  cfg.fit.max_iters = o.max_iters;
  cfg.fit.seed = o.seed;
  cfg.folds = o.folds;
  cfg.seed = o.seed;
  cfg.gof_alpha = o.gof_alpha;
  cfg.vuong_alpha = o.vuong_alpha;
  cfg.normality_alpha = o.normality_alpha;
  return cfg;
}

ReportFormat output_format(const CommonOptions& o) {
  if (!o.format.empty()) return parse_report_format(o.format);
  auto ends_with = [&](std::string_view suffix) {
    return o.out.size() >= suffix.size() &&
           o.out.compare(o.out.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with(".json")) return ReportFormat::Json;
  if (ends_with(".csv")) return ReportFormat::Csv;
  return ReportFormat::Markdown;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open output file '" + path + "'");
  f << text;
}

IngestResult read_input(const CommonOptions& o, std::istream& in, std::ostream& err) {
  IngestResult r = o.input == "-" ? load_series(in) : load_series(o.input);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  for (const auto& s : r.skipped) {
    err << "warning: skipped cell " << s.cell_id << " (" << s.distinct_sizes
        << " distinct sizes): " << s.reason << "\n";
  }
  if (r.series.empty()) throw DataError("no analysable cells in input");
  return r;
}

// Bare numbers are read as billions.
double size_arg(const std::string& text) {
  const bool has_unit = !text.empty() && std::isalpha(static_cast<unsigned char>(text.back()));
  return parse_size(has_unit ? text : text + "B");
}

std::vector<double> parse_sizes(const std::string& text) {
  if (text == "pythia") return pythia_sizes();
  if (text == "opt") return opt_sizes();
  if (text == "bloom") return bloom_sizes();
  if (text.rfind("logspace:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(text.substr(9));
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("--sizes logspace:LO:HI:N expects three fields");
    std::size_t count = 0;
    try {
      count = std::stoul(parts[2]);
    } catch (const std::logic_error&) {
      throw UsageError("--sizes logspace:LO:HI:N has a malformed count");
    }
    return log_spaced_sizes(size_arg(parts[0]), size_arg(parts[1]), count);
  }
  std::vector<double> sizes;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) sizes.push_back(size_arg(p));
  return sizes;
}

int run_simulate(const CommonOptions& o, const SimulateOptions& s, std::ostream& out) {
  SynthSpec spec;
  const ModelKind kind = parse_model_kind(s.kind);
  if (kind == ModelKind::Exponential) spec.params = ExpParams{s.C, s.beta, s.D};
  else spec.params = PowerLawParams{s.A, s.alpha, s.B};
  spec.sizes = parse_sizes(s.sizes);
  spec.noise_sigma = s.sigma;
  spec.seed = o.seed;
  spec.family = s.family;
  spec.dataset = s.dataset;
  spec.metric = s.metric;
  spec.decoding = s.decoding;
  std::ostringstream text;
  write_series_csv(text, {generate(spec)});
  write_output(o.out, text.str(), out);
  return 0;
}

int run_validate(const CommonOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const IngestResult data = read_input(o, in, err);
  ReportDocument doc;
  doc.format = output_format(o);
  doc.generated_at = utc_timestamp();
  doc.config.framework = framework_config(o);
  doc.config.high_loss_threshold = o.high_loss_threshold;
  doc.config.ci_level = o.ci;
  doc.config.input = o.input;

  int status = 0;
  for (auto& cell : validate_cells_parallel(data.series, doc.config.framework, o.threads)) {
    if (cell.verdict) {
      doc.verdicts.push_back(std::move(*cell.verdict));
    } else {
      err << "error: " << cell.error << "\n";
      status = 1;
    }
  }
  sort_verdicts(doc.verdicts);
  if (!doc.verdicts.empty()) write_output(o.out, render(doc), out);
  return status;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

int run_fit(const CommonOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const IngestResult data = read_input(o, in, err);
  const FrameworkConfig cfg = framework_config(o);
  const auto fits = fit_cells_parallel(data.series, cfg, o.threads);
  const ReportFormat format = output_format(o);

  std::ostringstream text;
  nlohmann::json cells = nlohmann::json::array();
  if (format == ReportFormat::Csv) text << "cell_id,kind,p0,p1,p2,huber_loss,sigma2,converged,error\n";
  if (format == ReportFormat::Markdown) {
    text << "| cell | model | parameters | Huber loss | converged |\n|---|---|---|---|---|\n";
  }
  int status = 0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& s = data.series[i];
    nlohmann::json cell = {{"family", s.family},
                           {"dataset", s.dataset},
                           {"metric", s.metric},
                           {"decoding", s.decoding}};
    for (ModelKind kind : {ModelKind::Exponential, ModelKind::PowerLaw}) {
      const auto& r = kind == ModelKind::Exponential ? fits[i].exponential : fits[i].power_law;
      const auto& e =
          kind == ModelKind::Exponential ? fits[i].exponential_error : fits[i].power_law_error;
      if (!r) {
        err << "error: " << s.cell_id() << " " << to_string(kind) << ": " << e << "\n";
        status = 1;
      }
      const auto p = r ? to_vector(r->params) : std::array<double, 3>{};
      const char* names = kind == ModelKind::Exponential ? "C beta D" : "A alpha B";
      switch (format) {
        case ReportFormat::Csv:
          text << s.cell_id() << ',' << to_string(kind) << ',';
          if (r) {
            text << fmt(p[0]) << ',' << fmt(p[1]) << ',' << fmt(p[2]) << ',' << fmt(r->huber_loss)
                 << ',' << fmt(r->sigma2) << ',' << (r->converged ? "true" : "false") << ",\n";
          } else {
            text << ",,,,,false,\"" << e << "\"\n";
          }
          break;
        case ReportFormat::Markdown:
          text << "| " << s.cell_id() << " | " << to_string(kind) << " | ";
          if (r) {
            text << names << " = " << fmt(p[0]) << ", " << fmt(p[1]) << ", " << fmt(p[2]) << " | "
                 << format_loss(r->huber_loss) << " | " << (r->converged ? "yes" : "no") << " |\n";
          } else {
            text << "fit failed | — | no |\n";
          }
          break;
        case ReportFormat::Json: {
          nlohmann::json m;
          if (r) {
            const auto k = kind == ModelKind::Exponential
                               ? std::array<const char*, 3>{"C", "beta", "D"}
                               : std::array<const char*, 3>{"A", "alpha", "B"};
            m["params"] = {{k[0], p[0]}, {k[1], p[1]}, {k[2], p[2]}};
            m["huber_loss"] = r->huber_loss;
            m["sigma2"] = r->sigma2;
            m["converged"] = r->converged;
          } else {
            m["error"] = e;
          }
          cell[std::string(to_string(kind))] = m;
          break;
        }
      }
    }
    cells.push_back(cell);
  }
  if (format == ReportFormat::Json) text << nlohmann::json{{"cells", cells}}.dump(2) << "\n";
  write_output(o.out, text.str(), out);
  return status;
}

std::string companion_path(const CommonOptions& o) {
  if (!o.obs_out.empty()) return o.obs_out;
  const auto dot = o.out.rfind('.');
  const auto slash = o.out.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return o.out.substr(0, dot) + "_obs" + o.out.substr(dot);
  }
  return o.out + "_obs.csv";
}

int run_plot_data(const CommonOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  if (!(o.ci > 0.0 && o.ci < 1.0)) throw UsageError("--ci must lie in (0, 1)");
  if (o.grid < 2) throw UsageError("--grid must be at least 2");
  const IngestResult data = read_input(o, in, err);
  const FrameworkConfig cfg = framework_config(o);
  const auto fits = fit_cells_parallel(data.series, cfg, o.threads);
  std::vector<PlotSeries> plots;
  int status = 0;
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& s = data.series[i];
    const double lo = s.points.front().size_b;
    const double hi = s.points.back().size_b;
    for (const auto* r : {&fits[i].exponential, &fits[i].power_law}) {
      if (!*r) {
        err << "error: " << s.cell_id() << ": fit failed\n";
        status = 1;
        continue;
      }
      plots.push_back(moe_band(s, **r, o.ci, o.grid, lo, hi));
      if (!plots.back().moe_available) {
        err << "warning: " << s.cell_id() << " " << to_string((*r)->kind)
            << ": margin of error unavailable with " << s.points.size() << " points\n";
      }
    }
  }
  const std::string curves = render_plot_csv(plots);
  const std::string obs = render_observations_csv(data.series);
  if (o.out == "-" && o.obs_out.empty()) {
    out << curves << "\n" << obs;
  } else {
    write_output(o.out, curves, out);
    write_output(companion_path(o), obs, out);
  }
  return status;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Fit and validate power-law and exponential scaling laws", "scaling-lab"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  CommonOptions o;
  SimulateOptions s;
  app.add_option("--input", o.input, "Score CSV path, - for stdin");
  app.add_option("--out", o.out, "Output path, - for stdout");
  app.add_option("--obs-out", o.obs_out, "plot-data: observations CSV path");
  app.add_option("--folds", o.folds, "Cross-validation folds")->check(CLI::Range(2, 1000000));
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--huber-delta", o.huber_delta, "Huber loss threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--starts", o.n_starts, "Optimizer start points per fit")
      ->check(CLI::Range(1, 1000000));
  app.add_option("--max-iters", o.max_iters, "Simplex iterations per start")
      ->check(CLI::Range(1, 100000000));
  app.add_option("--gof-alpha", o.gof_alpha, "Stage II significance level");
  app.add_option("--vuong-alpha", o.vuong_alpha, "Stage III significance level");
  app.add_option("--normality-alpha", o.normality_alpha, "Shapiro-Wilk significance level");
  app.add_option("--format", o.format, "md, csv or json")
      ->check(CLI::IsMember({"md", "markdown", "csv", "json"}));
  app.add_option("--ci", o.ci, "Confidence level of the margin-of-error band");
  app.add_option("--grid", o.grid, "Plot grid points");
  app.add_option("--high-loss-threshold", o.high_loss_threshold,
                 "Stage I loss above which a cell is highlighted");
  app.add_option("--threads", o.threads, "Worker threads (0 = OpenMP default)");

  auto* fit_cmd = app.add_subcommand("fit", "Fit both models per cell");
  auto* validate_cmd = app.add_subcommand("validate", "Run the three-stage validation");
  auto* plot_cmd = app.add_subcommand("plot-data", "Emit fitted curves with MOE bands");
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic score CSV");
  sim_cmd->add_option("--kind", s.kind, "exp or power")->required()
      ->check(CLI::IsMember({"exp", "exponential", "power", "power_law", "pow"}));
  sim_cmd->add_option("--C", s.C);
  sim_cmd->add_option("--beta", s.beta);
  sim_cmd->add_option("--D", s.D);
  sim_cmd->add_option("--A", s.A);
  sim_cmd->add_option("--alpha", s.alpha);
  sim_cmd->add_option("--B", s.B);
  sim_cmd->add_option("--sizes", s.sizes,
                      "pythia, opt, bloom, logspace:LO:HI:N or a comma list (billions)");
  sim_cmd->add_option("--sigma", s.sigma, "Gaussian noise sd")->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--family", s.family);
  sim_cmd->add_option("--dataset", s.dataset);
  sim_cmd->add_option("--metric", s.metric);
  sim_cmd->add_option("--decoding", s.decoding);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*sim_cmd) return run_simulate(o, s, out);
    if (*validate_cmd) return run_validate(o, in, out, err);
    if (*fit_cmd) return run_fit(o, in, out, err);
    if (*plot_cmd) return run_plot_data(o, in, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace scaling
