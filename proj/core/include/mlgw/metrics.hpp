#pragma once

#include <cstdint>
#include <string>
#include <vector>

/* Multi-label classification metrics over binary indicator matrices.

   Zero-denominator conventions: precision is 0 when nothing was predicted
   positive, recall is 0 when nothing is truly positive, and F1 is 0 when
   precision + recall is 0. Micro scores pool the counts over all labels
   first; macro scores average the per-label values unweighted, counting
   every label (including ones with no positive example). */

namespace mlgw::metrics {

struct LabelCounts {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

struct LabelMetrics {
  std::string label;
  LabelCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::vector<LabelMetrics> per_label;
  double micro_precision = 0.0, micro_recall = 0.0, micro_f1 = 0.0;
  double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
  std::int64_t num_examples = 0;
};

double precision_of(const LabelCounts& c);
double recall_of(const LabelCounts& c);
double f1_of(const LabelCounts& c);

// One row per example, one column per label (same order as label_names).
// Throws InputError on ragged or mismatched shapes.
MetricsReport compute_metrics(const std::vector<std::vector<bool>>& y_true,
                              const std::vector<std::vector<bool>>& y_pred,
                              const std::vector<std::string>& label_names);

std::string metrics_to_json(const MetricsReport& r);
void write_metrics_json(const std::string& path, const MetricsReport& r);

// CSV rows per label plus summary rows labeled "(micro)" and "(macro)".
void write_metrics_csv(const std::string& path, const MetricsReport& r);

}  // namespace mlgw::metrics
