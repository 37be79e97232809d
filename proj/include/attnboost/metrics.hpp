#pragma once

#include "attnboost/tabular.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace attnboost {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    bool operator==(const ConfusionMatrix&) const = default;
};

struct DegenerateFlags {
    bool precision_zero_denominator = false;
    bool recall_zero_denominator = false;
    bool auc_single_class = false;

    bool any() const { return precision_zero_denominator || recall_zero_denominator || auc_single_class; }
    bool operator==(const DegenerateFlags&) const = default;
};

struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double auc = 0.5;
    ConfusionMatrix counts;
    DegenerateFlags flags;

    bool operator==(const MetricsReport&) const = default;
};

inline constexpr double kDecisionThreshold = 0.5;

/// Label 1 iff score >= 0.5.
std::vector<int> threshold_labels(std::span<const double> scores,
                                  double threshold = kDecisionThreshold);

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);

/// Precision/recall/accuracy/F1 from counts; zero denominators yield 0 with a flag.
MetricsReport metrics_from_counts(const ConfusionMatrix& cm);

MetricsReport compute_metrics(const ConfusionMatrix& cm, std::span<const double> scores,
                              std::span<const int> y_true);

/// Thresholds scores at 0.5 and computes the full report.
MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> y_true);

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

/// Rank-based (Mann-Whitney) ROC AUC with midranks for ties; 0.5 for single-class input.
double auc(std::span<const double> scores, std::span<const int> y_true);

bool is_single_class(std::span<const int> y_true);

// Reports --------------------------------------------------------------------

struct NamedReport {
    std::string condition;
    MetricsReport report;
};

/// Header `condition,precision,recall,accuracy,f1,auc,tp,tn,fp,fn`; floats in shortest
/// round-trip form so the file parses back bit-exactly.
void write_metrics_csv(std::ostream& out, std::span<const NamedReport> rows);

std::vector<NamedReport> read_metrics_csv(std::istream& in);

/// Aligned columns, four decimals.
std::string format_metrics_table(std::span<const NamedReport> rows);

std::string format_double(double v);

}  // namespace attnboost
