#include "mlgw/metrics.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "mlgw/errors.hpp"

namespace mlgw::metrics {

using nlohmann::json;

double precision_of(const LabelCounts& c) {
  const std::int64_t denom = c.tp + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double recall_of(const LabelCounts& c) {
  const std::int64_t denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

double f1_of(const LabelCounts& c) {
  const double p = precision_of(c);
  const double r = recall_of(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

MetricsReport compute_metrics(const std::vector<std::vector<bool>>& y_true,
                              const std::vector<std::vector<bool>>& y_pred,
                              const std::vector<std::string>& label_names) {
  if (y_true.size() != y_pred.size())
    throw InputError("metrics: y_true and y_pred row counts differ");
  const std::size_t n_labels = label_names.size();
  if (n_labels == 0) throw InputError("metrics: no labels");

  MetricsReport rep;
  rep.num_examples = static_cast<std::int64_t>(y_true.size());
  rep.per_label.resize(n_labels);
  for (std::size_t l = 0; l < n_labels; ++l) rep.per_label[l].label = label_names[l];

  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i].size() != n_labels || y_pred[i].size() != n_labels)
      throw InputError("metrics: row " + std::to_string(i) +
                       " does not match the label count");
    for (std::size_t l = 0; l < n_labels; ++l) {
      LabelCounts& c = rep.per_label[l].counts;
      const bool t = y_true[i][l], p = y_pred[i][l];
      if (t && p)
        ++c.tp;
      else if (!t && p)
        ++c.fp;
      else if (t && !p)
        ++c.fn;
      else
        ++c.tn;
    }
  }

  LabelCounts pooled;
  for (LabelMetrics& lm : rep.per_label) {
    lm.precision = precision_of(lm.counts);
    lm.recall = recall_of(lm.counts);
    lm.f1 = f1_of(lm.counts);
    pooled.tp += lm.counts.tp;
    pooled.fp += lm.counts.fp;
    pooled.fn += lm.counts.fn;
    pooled.tn += lm.counts.tn;
    rep.macro_precision += lm.precision;
    rep.macro_recall += lm.recall;
    rep.macro_f1 += lm.f1;
  }
  rep.micro_precision = precision_of(pooled);
  rep.micro_recall = recall_of(pooled);
  rep.micro_f1 = f1_of(pooled);
  rep.macro_precision /= static_cast<double>(n_labels);
  rep.macro_recall /= static_cast<double>(n_labels);
  rep.macro_f1 /= static_cast<double>(n_labels);
  return rep;
}

std::string metrics_to_json(const MetricsReport& r) {
  json per_label = json::object();
  for (const LabelMetrics& lm : r.per_label) {
    per_label[lm.label] = {{"tp", lm.counts.tp},       {"fp", lm.counts.fp},
                           {"fn", lm.counts.fn},       {"tn", lm.counts.tn},
                           {"precision", lm.precision}, {"recall", lm.recall},
                           {"f1", lm.f1}};
  }
  const json doc = {{"num_examples", r.num_examples},
                    {"micro", {{"precision", r.micro_precision},
                               {"recall", r.micro_recall},
                               {"f1", r.micro_f1}}},
                    {"macro", {{"precision", r.macro_precision},
                               {"recall", r.macro_recall},
                               {"f1", r.macro_f1}}},
                    {"per_label", per_label}};
  return doc.dump(1, '\t') + "\n";
}

void write_metrics_json(const std::string& path, const MetricsReport& r) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << metrics_to_json(r);
  if (!out) throw InputError("failed while writing '" + path + "'");
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_metrics_csv(const std::string& path, const MetricsReport& r) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "label,tp,fp,fn,tn,precision,recall,f1\n";
  for (const LabelMetrics& lm : r.per_label)
    out << csv_escape(lm.label) << ',' << lm.counts.tp << ',' << lm.counts.fp << ','
        << lm.counts.fn << ',' << lm.counts.tn << ',' << lm.precision << ',' << lm.recall
        << ',' << lm.f1 << '\n';
  out << "(micro),,,,," << r.micro_precision << ',' << r.micro_recall << ','
      << r.micro_f1 << '\n';
  out << "(macro),,,,," << r.macro_precision << ',' << r.macro_recall << ','
      << r.macro_f1 << '\n';
  if (!out) throw InputError("failed while writing '" + path + "'");
}

}  // namespace mlgw::metrics
