#include "scaling/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "scaling/errors.hpp"
#include "scaling/stat_core.hpp"

namespace scaling {

using nlohmann::json;

namespace {

constexpr std::string_view kMoeMethod =
    "t quantile (df = n - 3) x residual standard error sqrt(SSR / (n - 3)), constant width";

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError("not a boolean: '" + std::string(s) + "'");
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

json params_json(const ModelParams& p) {
  if (const auto* q = std::get_if<PowerLawParams>(&p)) {
    return {{"A", num(q->A)}, {"alpha", num(q->alpha)}, {"B", num(q->B)}};
  }
  const auto& e = std::get<ExpParams>(p);
  return {{"C", num(e.C)}, {"beta", num(e.beta)}, {"D", num(e.D)}};
}

ModelParams params_from(ModelKind kind, const json& j) {
  if (kind == ModelKind::PowerLaw) {
    return PowerLawParams{num_from(j.at("A")), num_from(j.at("alpha")), num_from(j.at("B"))};
  }
  return ExpParams{num_from(j.at("C")), num_from(j.at("beta")), num_from(j.at("D"))};
}

json model_json(const ModelOutcome& m, double threshold) {
  json j;
  j["fitted"] = m.fitted;
  j["params"] = params_json(m.params);
  j["huber_loss"] = num(m.huber_loss);
  j["sigma2"] = num(m.sigma2);
  j["converged"] = m.converged;
  j["error"] = m.error;
  if (m.stage1) {
    json losses = json::array();
    for (double l : m.stage1->fold_losses) losses.push_back(num(l));
    j["stage1"] = {{"fold_losses", losses},
                   {"mean_loss", num(m.stage1->mean_loss)},
                   {"k", m.stage1->k},
                   {"seed", m.stage1->seed},
                   {"high_loss", m.stage1->mean_loss > threshold}};
  } else {
    j["stage1"] = nullptr;
  }
  j["gof"] = {{"f_stat", num(m.gof.f_stat)},
              {"df", {m.gof.df_reduced, m.gof.df_exact}},
              {"p", num(m.gof.p_value)},
              {"pass", m.gof.pass},
              {"applicable", m.gof.applicable},
              {"ssr_reduced", num(m.gof.ssr_reduced)},
              {"ssr_exact", num(m.gof.ssr_exact)},
              {"dropped_points", m.gof.dropped_points},
              {"note", m.gof.note}};
  if (m.normality) {
    j["normality"] = {{"w", num(m.normality->w_stat)},
                      {"p", num(m.normality->p_value)},
                      {"n", m.normality->n},
                      {"pass", m.normality->pass}};
  } else {
    j["normality"] = nullptr;
  }
  j["normality_note"] = m.normality_note;
  return j;
}

ModelOutcome model_from(ModelKind kind, const json& j) {
  ModelOutcome m;
  m.kind = kind;
  m.fitted = j.at("fitted").get<bool>();
  m.params = params_from(kind, j.at("params"));
  m.huber_loss = num_from(j.at("huber_loss"));
  m.sigma2 = num_from(j.at("sigma2"));
  m.converged = j.at("converged").get<bool>();
  m.error = j.at("error").get<std::string>();
  if (const auto& s = j.at("stage1"); !s.is_null()) {
    CvReport cv;
    cv.kind = kind;
    for (const auto& l : s.at("fold_losses")) cv.fold_losses.push_back(num_from(l));
    cv.mean_loss = num_from(s.at("mean_loss"));
    cv.k = s.at("k").get<std::size_t>();
    cv.seed = s.at("seed").get<std::uint64_t>();
    m.stage1 = std::move(cv);
  }
  const auto& g = j.at("gof");
  m.gof.kind = kind;
  m.gof.f_stat = num_from(g.at("f_stat"));
  m.gof.df_reduced = g.at("df").at(0).get<int>();
  m.gof.df_exact = g.at("df").at(1).get<int>();
  m.gof.p_value = num_from(g.at("p"));
  m.gof.pass = g.at("pass").get<bool>();
  m.gof.applicable = g.at("applicable").get<bool>();
  m.gof.ssr_reduced = num_from(g.at("ssr_reduced"));
  m.gof.ssr_exact = num_from(g.at("ssr_exact"));
  m.gof.dropped_points = g.at("dropped_points").get<std::size_t>();
  m.gof.note = g.at("note").get<std::string>();
  if (const auto& n = j.at("normality"); !n.is_null()) {
    m.normality = NormalityReport{num_from(n.at("w")), num_from(n.at("p")),
                                  n.at("n").get<std::size_t>(), n.at("pass").get<bool>()};
  }
  m.normality_note = j.at("normality_note").get<std::string>();
  return m;
}

std::string gof_symbol(const ValidationVerdict& v, ModelKind kind) {
  const auto& m = v.model(kind);
  if (!m.fitted) return "—";
  std::string s;
  if (!m.gof.applicable) {
    s = "✗ (n/a)";
  } else {
    s = m.gof.pass ? "✓" : "✗";
  }
  if (v.effective_law && *v.effective_law == kind) s += " (★)";
  return s;
}

// Stage I text for one model, bold when highlighted.
std::string stage1_text(const ModelOutcome& m, double threshold) {
  if (!m.stage1) return m.fitted ? "err" : "—";
  const LossCell c = loss_cell(m.stage1->mean_loss, threshold);
  return c.high ? "**" + c.text + "**" : c.text;
}

// CSV layout: one row per (cell, model).
constexpr std::array<std::string_view, 42> kCsvColumns = {
    "family", "dataset", "metric", "decoding", "kind", "fitted", "p0", "p1", "p2",
    "huber_loss", "sigma2", "converged", "model_error", "stage1_mean_loss",
    "stage1_fold_losses", "stage1_k", "stage1_seed", "high_loss", "gof_applicable",
    "gof_f_stat", "gof_df_reduced", "gof_df_exact", "gof_ssr_reduced", "gof_ssr_exact",
    "gof_p", "gof_pass", "gof_dropped", "gof_note", "normality_w", "normality_p",
    "normality_n", "normality_pass", "normality_note", "stage3_run", "vuong_v", "vuong_p",
    "vuong_n", "vuong_preferred", "vuong_significant", "vuong_note", "effective_law",
    "cell_error"};

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "md" || text == "markdown") return ReportFormat::Markdown;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw ParseError("unknown report format '" + std::string(text) + "'");
}

std::string format_loss(double loss) {
  if (!std::isfinite(loss)) return shortest(loss);
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2e", loss);
  return buf.data();
}

LossCell loss_cell(double loss, double threshold) { return {format_loss(loss), loss > threshold}; }

void sort_verdicts(std::vector<ValidationVerdict>& verdicts) {
  std::stable_sort(verdicts.begin(), verdicts.end(),
                   [](const ValidationVerdict& a, const ValidationVerdict& b) {
                     return std::tie(a.family, a.dataset, a.metric, a.decoding) <
                            std::tie(b.family, b.dataset, b.metric, b.decoding);
                   });
}

json to_json(const ValidationVerdict& v, double threshold) {
  json cell;
  cell["family"] = v.family;
  cell["dataset"] = v.dataset;
  cell["metric"] = v.metric;
  cell["decoding"] = v.decoding;
  cell["models"] = {{"exponential", model_json(v.exponential, threshold)},
                    {"power_law", model_json(v.power_law, threshold)}};
  json vj = {{"ran", v.stage3_run}, {"note", v.vuong_note}};
  if (v.vuong) {
    vj["v"] = num(v.vuong->v_stat);
    vj["p"] = num(v.vuong->p_value);
    vj["n"] = v.vuong->n;
    vj["preferred"] = std::string(to_string(v.vuong->preferred));
    vj["significant"] = v.vuong->significant;
  } else {
    vj["v"] = nullptr;
    vj["p"] = nullptr;
    vj["n"] = 0;
    vj["preferred"] = "neither";
    vj["significant"] = false;
  }
  cell["vuong"] = vj;
  cell["stage3_run"] = v.stage3_run;
  cell["effective_law"] =
      v.effective_law ? json(std::string(to_string(*v.effective_law))) : json(nullptr);
  cell["error"] = v.error;
  return cell;
}

ValidationVerdict verdict_from_json(const json& cell) {
  ValidationVerdict v;
  v.family = cell.at("family").get<std::string>();
  v.dataset = cell.at("dataset").get<std::string>();
  v.metric = cell.at("metric").get<std::string>();
  v.decoding = cell.at("decoding").get<std::string>();
  v.exponential = model_from(ModelKind::Exponential, cell.at("models").at("exponential"));
  v.power_law = model_from(ModelKind::PowerLaw, cell.at("models").at("power_law"));
  v.stage3_run = cell.at("stage3_run").get<bool>();
  const auto& vj = cell.at("vuong");
  v.vuong_note = vj.at("note").get<std::string>();
  if (vj.at("ran").get<bool>()) {
    v.vuong = VuongReport{num_from(vj.at("v")), num_from(vj.at("p")),
                          vj.at("n").get<std::size_t>(),
                          parse_preference(vj.at("preferred").get<std::string>()),
                          vj.at("significant").get<bool>()};
  }
  if (const auto& e = cell.at("effective_law"); !e.is_null()) {
    v.effective_law = parse_model_kind(e.get<std::string>());
  }
  v.error = cell.at("error").get<std::string>();
  return v;
}

json to_json(const ReportDocument& doc) {
  const auto& f = doc.config.framework;
  json j;
  j["config"] = {{"folds", f.folds},
                 {"seed", f.seed},
                 {"huber_delta", f.fit.huber_delta},
                 {"n_starts", f.fit.n_starts},
                 {"max_iters", f.fit.max_iters},
                 {"tol", f.fit.tol},
                 {"gof_alpha", f.gof_alpha},
                 {"vuong_alpha", f.vuong_alpha},
                 {"normality_alpha", f.normality_alpha},
                 {"normality_gating", "advisory"},
                 {"high_loss_threshold", doc.config.high_loss_threshold},
                 {"ci_level", doc.config.ci_level},
                 {"moe_method", std::string(kMoeMethod)},
                 {"input", doc.config.input}};
  j["generated_at"] = doc.generated_at;
  json cells = json::array();
  for (const auto& v : doc.verdicts) cells.push_back(to_json(v, doc.config.high_loss_threshold));
  j["cells"] = std::move(cells);
  return j;
}

ReportDocument report_from_json(const json& j) {
  ReportDocument doc;
  doc.format = ReportFormat::Json;
  const auto& c = j.at("config");
  auto& f = doc.config.framework;
  f.folds = c.at("folds").get<std::size_t>();
  f.seed = c.at("seed").get<std::uint64_t>();
  f.fit.huber_delta = c.at("huber_delta").get<double>();
  f.fit.n_starts = c.at("n_starts").get<std::size_t>();
  f.fit.max_iters = c.at("max_iters").get<std::size_t>();
  f.fit.tol = c.at("tol").get<double>();
  f.fit.seed = f.seed;
  f.gof_alpha = c.at("gof_alpha").get<double>();
  f.vuong_alpha = c.at("vuong_alpha").get<double>();
  f.normality_alpha = c.at("normality_alpha").get<double>();
  doc.config.high_loss_threshold = c.at("high_loss_threshold").get<double>();
  doc.config.ci_level = c.at("ci_level").get<double>();
  doc.config.input = c.at("input").get<std::string>();
  doc.generated_at = j.at("generated_at").get<std::string>();
  for (const auto& cell : j.at("cells")) doc.verdicts.push_back(verdict_from_json(cell));
  return doc;
}

std::string render_markdown(const ReportDocument& doc) {
  const auto& f = doc.config.framework;
  std::ostringstream out;
  out << "# Scaling-law validation report\n\n";
  out << "- generated_at: " << doc.generated_at << "\n";
  out << "- input: " << doc.config.input << "\n";
  out << "- folds: " << f.folds << ", seed: " << f.seed << ", huber_delta: "
      << shortest(f.fit.huber_delta) << ", starts: " << f.fit.n_starts << "\n";
  out << "- gof_alpha: " << shortest(f.gof_alpha) << ", vuong_alpha: " << shortest(f.vuong_alpha)
      << ", normality_alpha: " << shortest(f.normality_alpha) << " (advisory)\n";
  out << "- high_loss_threshold: " << shortest(doc.config.high_loss_threshold)
      << ", ci_level: " << shortest(doc.config.ci_level) << "\n";
  out << "- moe: " << kMoeMethod << "\n\n";
  out << "Stage I: mean held-out Huber loss over folds (bold = above threshold). "
         "Stage II/III: ✓/✗ goodness-of-fit pass/fail, (★) effective scaling law.\n";

  // One table per (metric, decoding), rows per family and law, columns per dataset.
  std::map<std::pair<std::string, std::string>, std::vector<const ValidationVerdict*>> groups;
  for (const auto& v : doc.verdicts) groups[{v.metric, v.decoding}].push_back(&v);

  for (const auto& [key, cells] : groups) {
    std::set<std::string> datasets;
    std::set<std::string> families;
    std::map<std::pair<std::string, std::string>, const ValidationVerdict*> index;
    for (const auto* v : cells) {
      datasets.insert(v->dataset);
      families.insert(v->family);
      index[{v->family, v->dataset}] = v;
    }
    out << "\n## " << key.first << " / " << key.second << "\n\n";
    out << "| LLM family | Scaling law |";
    for (const auto& d : datasets) out << " Stage I: " << d << " |";
    for (const auto& d : datasets) out << " Stage II/III: " << d << " |";
    out << "\n|---|---|";
    for (std::size_t i = 0; i < 2 * datasets.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& fam : families) {
      for (ModelKind kind : {ModelKind::Exponential, ModelKind::PowerLaw}) {
        out << "| " << fam << " | " << (kind == ModelKind::Exponential ? "Exponential" : "Power law")
            << " |";
        for (const auto& d : datasets) {
          auto it = index.find({fam, d});
          out << ' '
              << (it == index.end() ? std::string("—")
                                    : stage1_text(it->second->model(kind),
                                                  doc.config.high_loss_threshold))
              << " |";
        }
        for (const auto& d : datasets) {
          auto it = index.find({fam, d});
          out << ' ' << (it == index.end() ? std::string("—") : gof_symbol(*it->second, kind))
              << " |";
        }
        out << "\n";
      }
    }
  }

  out << "\n## Details\n\n";
  for (const auto& v : doc.verdicts) {
    out << "- " << v.cell_id() << ":";
    if (!v.error.empty()) {
      out << " error: " << v.error << "\n";
      continue;
    }
    if (v.stage3_run && v.vuong) {
      out << " Vuong V=" << shortest(v.vuong->v_stat) << " p=" << shortest(v.vuong->p_value)
          << " preferred=" << to_string(v.vuong->preferred);
      if (!v.vuong_note.empty()) out << " (" << v.vuong_note << ")";
    } else if (auto sole = v.sole_qualifier()) {
      out << " Stage III skipped, sole qualifier " << to_string(*sole);
    } else {
      out << " Stage III skipped";
    }
    out << ";";
    for (const ModelOutcome* m : {&v.exponential, &v.power_law}) {
      out << " " << to_string(m->kind);
      if (m->normality) {
        out << " SW W=" << shortest(m->normality->w_stat) << " p="
            << shortest(m->normality->p_value) << (m->normality->pass ? "" : " (non-normal)");
      } else if (!m->normality_note.empty()) {
        out << " SW n/a";
      }
      if (!m->error.empty()) out << " [" << m->error << "]";
      out << ";";
    }
    out << "\n";
  }
  return out.str();
}

std::string render_csv(const std::vector<ValidationVerdict>& verdicts, double threshold) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    out << (i ? "," : "") << kCsvColumns[i];
  }
  out << "\n";
  for (const auto& v : verdicts) {
    for (const ModelOutcome* m : {&v.exponential, &v.power_law}) {
      const auto p = to_vector(m->params);
      std::vector<std::string> row = {csv_field(v.family), csv_field(v.dataset),
                                      csv_field(v.metric), csv_field(v.decoding),
                                      std::string(to_string(m->kind)), bool_text(m->fitted),
                                      shortest(p[0]), shortest(p[1]), shortest(p[2]),
                                      shortest(m->huber_loss), shortest(m->sigma2),
                                      bool_text(m->converged), csv_field(m->error)};
      if (m->stage1) {
        std::string folds;
        for (std::size_t i = 0; i < m->stage1->fold_losses.size(); ++i) {
          folds += (i ? ";" : "") + shortest(m->stage1->fold_losses[i]);
        }
        row.insert(row.end(), {shortest(m->stage1->mean_loss), folds,
                               std::to_string(m->stage1->k), std::to_string(m->stage1->seed),
                               bool_text(m->stage1->mean_loss > threshold)});
      } else {
        row.insert(row.end(), {"", "", "", "", ""});
      }
      row.insert(row.end(),
                 {bool_text(m->gof.applicable), shortest(m->gof.f_stat),
                  std::to_string(m->gof.df_reduced), std::to_string(m->gof.df_exact),
                  shortest(m->gof.ssr_reduced), shortest(m->gof.ssr_exact),
                  shortest(m->gof.p_value), bool_text(m->gof.pass),
                  std::to_string(m->gof.dropped_points), csv_field(m->gof.note)});
      if (m->normality) {
        row.insert(row.end(), {shortest(m->normality->w_stat), shortest(m->normality->p_value),
                               std::to_string(m->normality->n), bool_text(m->normality->pass)});
      } else {
        row.insert(row.end(), {"", "", "", ""});
      }
      row.push_back(csv_field(m->normality_note));
      row.push_back(bool_text(v.stage3_run));
      if (v.vuong) {
        row.insert(row.end(), {shortest(v.vuong->v_stat), shortest(v.vuong->p_value),
                               std::to_string(v.vuong->n),
                               std::string(to_string(v.vuong->preferred)),
                               bool_text(v.vuong->significant)});
      } else {
        row.insert(row.end(), {"", "", "", "", ""});
      }
      row.push_back(csv_field(v.vuong_note));
      row.push_back(v.effective_law ? std::string(to_string(*v.effective_law)) : "");
      row.push_back(csv_field(v.error));
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
  }
  return out.str();
}

std::vector<ValidationVerdict> verdicts_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("report CSV is empty");
  const auto header = split_csv_line(line);
  if (header.size() != kCsvColumns.size() ||
      !std::equal(header.begin(), header.end(), kCsvColumns.begin())) {
    throw ParseError("report CSV header does not match the expected columns");
  }
  std::vector<ValidationVerdict> out;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != kCsvColumns.size()) {
      throw ParseError("report CSV row " + std::to_string(row_no) + " has " +
                       std::to_string(f.size()) + " fields");
    }
    const ModelKind kind = parse_model_kind(f[4]);
    if (kind == ModelKind::Exponential) {
      ValidationVerdict v;
      v.family = f[0];
      v.dataset = f[1];
      v.metric = f[2];
      v.decoding = f[3];
      v.stage3_run = parse_bool(f[33]);
      if (!f[34].empty()) {
        v.vuong = VuongReport{parse_double(f[34]), parse_double(f[35]),
                              parse_int<std::size_t>(f[36]), parse_preference(f[37]),
                              parse_bool(f[38])};
      }
      v.vuong_note = f[39];
      if (!f[40].empty()) v.effective_law = parse_model_kind(f[40]);
      v.error = f[41];
      out.push_back(std::move(v));
    } else if (out.empty() || out.back().cell_id() != f[0] + "/" + f[1] + "/" + f[2] + "/" + f[3]) {
      throw ParseError("report CSV row " + std::to_string(row_no) +
                       ": power_law row without a preceding exponential row");
    }
    ModelOutcome m;
    m.kind = kind;
    m.fitted = parse_bool(f[5]);
    m.params = from_vector(kind, {parse_double(f[6]), parse_double(f[7]), parse_double(f[8])});
    m.huber_loss = parse_double(f[9]);
    m.sigma2 = parse_double(f[10]);
    m.converged = parse_bool(f[11]);
    m.error = f[12];
    if (!f[13].empty()) {
      CvReport cv;
      cv.kind = kind;
      cv.mean_loss = parse_double(f[13]);
      std::string_view folds = f[14];
      while (!folds.empty()) {
        const auto cut = folds.find(';');
        cv.fold_losses.push_back(parse_double(folds.substr(0, cut)));
        folds = cut == std::string_view::npos ? std::string_view{} : folds.substr(cut + 1);
      }
      cv.k = parse_int<std::size_t>(f[15]);
      cv.seed = parse_int<std::uint64_t>(f[16]);
      m.stage1 = std::move(cv);
    }
    m.gof.kind = kind;
    m.gof.applicable = parse_bool(f[18]);
    m.gof.f_stat = parse_double(f[19]);
    m.gof.df_reduced = parse_int<int>(f[20]);
    m.gof.df_exact = parse_int<int>(f[21]);
    m.gof.ssr_reduced = parse_double(f[22]);
    m.gof.ssr_exact = parse_double(f[23]);
    m.gof.p_value = parse_double(f[24]);
    m.gof.pass = parse_bool(f[25]);
    m.gof.dropped_points = parse_int<std::size_t>(f[26]);
    m.gof.note = f[27];
    if (!f[28].empty()) {
      m.normality = NormalityReport{parse_double(f[28]), parse_double(f[29]),
                                    parse_int<std::size_t>(f[30]), parse_bool(f[31])};
    }
    m.normality_note = f[32];
    (kind == ModelKind::Exponential ? out.back().exponential : out.back().power_law) = std::move(m);
  }
  return out;
}

std::string render(const ReportDocument& doc) {
  switch (doc.format) {
    case ReportFormat::Csv: return render_csv(doc.verdicts, doc.config.high_loss_threshold);
    case ReportFormat::Json: return to_json(doc).dump(2) + "\n";
    case ReportFormat::Markdown: break;
  }
  return render_markdown(doc);
}

PlotSeries moe_band(const ScoreSeries& series, const FitResult& fit, double level,
                    std::size_t grid_n, double lo, double hi) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("moe_band: level must lie in (0, 1)");
  if (grid_n < 2) throw DomainError("moe_band: grid needs at least 2 points");
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("moe_band: need 0 < lo < hi");

  PlotSeries plot;
  plot.cell_id = series.cell_id();
  plot.kind = fit.kind;
  plot.points = series.points;
  plot.level = level;

  const std::size_t n = fit.residuals.size();
  if (n > 3) {
    double ssr = 0.0;
    for (double r : fit.residuals) ssr += r * r;
    const int df = static_cast<int>(n) - 3;
    plot.moe = t_quantile(0.5 * (1.0 + level), df) * std::sqrt(ssr / df);
    plot.moe_available = true;
  } else {
    plot.moe = std::numeric_limits<double>::quiet_NaN();
  }

  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < grid_n; ++i) {
    double x = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(grid_n - 1));
    if (i == 0) x = lo;
    if (i + 1 == grid_n) x = hi;
    const double y = evaluate(fit.params, x);
    plot.grid.push_back(x);
    plot.curve.push_back(y);
    plot.band_lo.push_back(plot.moe_available ? y - plot.moe : y);
    plot.band_hi.push_back(plot.moe_available ? y + plot.moe : y);
  }
  return plot;
}

std::string render_plot_csv(const std::vector<PlotSeries>& plots) {
  std::ostringstream out;
  out << "cell_id,kind,x,y_fit,y_lo,y_hi\n";
  for (const auto& p : plots) {
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      out << csv_field(p.cell_id) << ',' << to_string(p.kind) << ',' << shortest(p.grid[i]) << ','
          << shortest(p.curve[i]) << ',';
      if (p.moe_available) out << shortest(p.band_lo[i]) << ',' << shortest(p.band_hi[i]);
      else out << ',';
      out << "\n";
    }
  }
  return out.str();
}

std::string render_observations_csv(const std::vector<ScoreSeries>& series) {
  std::ostringstream out;
  out << "cell_id,x,y_obs\n";
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      out << csv_field(s.cell_id()) << ',' << shortest(p.size_b) << ','
          << shortest(p.inconsistency) << "\n";
    }
  }
  return out.str();
}

}  // namespace scaling
