#include <cstdio>
#include <map>
#include <sstream>

#include "synsym/evaluator.hpp"

namespace synsym::eval {

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Display width in code points, so "±" counts once.
std::size_t width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > width(s) ? w - width(s) : 0, ' '); }

std::string render(const std::vector<std::vector<std::string>>& table) {
  std::vector<std::size_t> widths;
  for (const auto& row : table) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], width(row[c]));
  }
  std::size_t total = 0;
  for (auto w : widths) total += w;
  total += widths.empty() ? 0 : 2 * (widths.size() - 1);
  std::ostringstream out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      line += c + 1 == table[r].size() ? table[r][c] : pad(table[r][c], widths[c]) + "  ";
    }
    out << line << '\n';
    if (r == 0) out << std::string(total, '-') << '\n';
  }
  return out.str();
}

Json to_json(const Summary& s) { return Json{{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

std::string format_mean_std(const Summary& s) { return fixed3(s.mean) + " ± " + fixed3(s.std); }

Json to_json(const Metrics& m) {
  Json per_class = Json::array();
  for (const auto& c : m.per_class) {
    per_class.push_back(Json{{"class", c.cls},
                             {"precision", c.precision},
                             {"recall", c.recall},
                             {"f1", c.f1},
                             {"support", c.support},
                             {"predicted", c.predicted},
                             {"evaluated", c.evaluated}});
  }
  return Json{{"macro_precision", m.macro_precision},
              {"macro_recall", m.macro_recall},
              {"macro_f1", m.macro_f1},
              {"evaluated_classes", m.evaluated},
              {"excluded_classes", m.excluded},
              {"per_class", per_class}};
}

Json to_json(const AggregateResult& r) {
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    Json j{{"seed", run.seed}, {"n_train", run.n_train}, {"n_test", run.n_test}, {"metrics", to_json(run.metrics)}};
    j["fold"] = run.fold >= 0 ? Json(run.fold) : Json(nullptr);
    runs.push_back(std::move(j));
  }
  return Json{{"schema_version", kReportSchemaVersion},
              {"run_count", r.runs.size()},
              {"macro_precision", to_json(r.macro_precision)},
              {"macro_recall", to_json(r.macro_recall)},
              {"macro_f1", to_json(r.macro_f1)},
              {"runs", runs}};
}

Json to_json(const CrossEvalResult& r) {
  Json cells = Json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    for (std::size_t j = 0; j < r.cols.size(); ++j) {
      cells.push_back(Json{{"train", r.rows[i]},
                           {"test", r.cols[j]},
                           {"in_domain", r.in_domain(i, j)},
                           {"metrics", to_json(r.cells[i][j])}});
    }
  }
  return Json{{"schema_version", kReportSchemaVersion}, {"rows", r.rows}, {"cols", r.cols}, {"cells", cells}};
}

Json to_json(const std::vector<AblationRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    const auto& f = row.variant.flags;
    Json j{{"variant", row.variant.name},
           {"flags", Json{{"EV", f.use_ev}, {"CK", f.use_ck}, {"DU", f.use_du}, {"SE", f.use_se}}},
           {"corpus_size", row.corpus_size},
           {"evaluation_calls", row.evaluation_calls},
           {"total_calls", row.total_calls}};
    j["result"] = row.result ? to_json(*row.result) : Json(nullptr);
    j["error"] = row.error ? Json(*row.error) : Json(nullptr);
    out.push_back(std::move(j));
  }
  return Json{{"schema_version", kReportSchemaVersion}, {"variants", out}};
}

std::string format_aggregate_table(const std::string& model_name, const AggregateResult& r) {
  return render({{"Model", "Runs", "Macro-Prec", "Macro-Rec", "Macro-F1"},
                 {model_name, std::to_string(r.runs.size()), format_mean_std(r.macro_precision),
                  format_mean_std(r.macro_recall), format_mean_std(r.macro_f1)}});
}

std::string format_cross_eval_table(const CrossEvalResult& r) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"Train \\ Test"};
  for (const auto& c : r.cols) {
    header.push_back(c + " Rec");
    header.push_back(c + " F1");
  }
  table.push_back(header);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    std::vector<std::string> line{r.rows[i]};
    for (std::size_t j = 0; j < r.cols.size(); ++j) {
      const std::string mark = r.in_domain(i, j) ? "*" : "";
      line.push_back(fixed3(r.cells[i][j].macro_recall) + mark);
      line.push_back(fixed3(r.cells[i][j].macro_f1) + mark);
    }
    table.push_back(line);
  }
  return render(table) + "* in-domain\n";
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::vector<std::vector<std::string>> table{{"Variant", "Samples", "Eval calls", "Macro-Rec", "Macro-F1"}};
  for (const auto& row : rows) {
    std::vector<std::string> line{row.variant.name, std::to_string(row.corpus_size),
                                  std::to_string(row.evaluation_calls)};
    if (row.result) {
      line.push_back(format_mean_std(row.result->macro_recall));
      line.push_back(format_mean_std(row.result->macro_f1));
    } else {
      line.push_back("failed");
      line.push_back(row.error.value_or(""));
    }
    table.push_back(line);
  }
  return render(table);
}

std::string per_class_csv(const AggregateResult& r) {
  struct Acc {
    double p = 0, rec = 0, f1 = 0;
    std::uint64_t support = 0;
    int runs = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (const auto& run : r.runs) {
    for (const auto& c : run.metrics.per_class) {
      if (!acc.count(c.cls)) order.push_back(c.cls);
      Acc& a = acc[c.cls];
      a.support += c.support;
      if (!c.evaluated) continue;
      a.p += c.precision;
      a.rec += c.recall;
      a.f1 += c.f1;
      ++a.runs;
    }
  }
  std::ostringstream out;
  out << "class,precision,recall,f1,support,runs_evaluated\n";
  for (const auto& cls : order) {
    const Acc& a = acc[cls];
    const double n = a.runs > 0 ? a.runs : 1;
    out << '"' << cls << "\"," << fixed3(a.p / n) << ',' << fixed3(a.rec / n) << ',' << fixed3(a.f1 / n) << ','
        << a.support << ',' << a.runs << '\n';
  }
  return out.str();
}

}  // namespace synsym::eval
