#include "attnboost/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace attnboost {

std::vector<int> threshold_labels(std::span<const double> scores, double threshold) {
    std::vector<int> labels(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        labels[i] = scores[i] >= threshold ? 1 : 0;
    }
    return labels;
}

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.empty()) {
        throw std::invalid_argument("confusion matrix of an empty label set");
    }
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument("confusion matrix: " + std::to_string(y_true.size()) +
                                    " labels vs " + std::to_string(y_pred.size()) + " predictions");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
            throw std::invalid_argument("confusion matrix entries must be 0 or 1");
        }
        if (t == 1) {
            (p == 1 ? cm.tp : cm.fn) += 1;
        } else {
            (p == 1 ? cm.fp : cm.tn) += 1;
        }
    }
    return cm;
}

double f1_score(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

MetricsReport metrics_from_counts(const ConfusionMatrix& cm) {
    MetricsReport r;
    r.counts = cm;
    const auto tp = static_cast<double>(cm.tp);
    if (cm.tp + cm.fp == 0) {
        r.flags.precision_zero_denominator = true;
    } else {
        r.precision = tp / static_cast<double>(cm.tp + cm.fp);
    }
    if (cm.tp + cm.fn == 0) {
        r.flags.recall_zero_denominator = true;
    } else {
        r.recall = tp / static_cast<double>(cm.tp + cm.fn);
    }
    if (cm.total() > 0) {
        r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    }
    r.f1 = f1_score(r.precision, r.recall);
    return r;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm, std::span<const double> scores,
                              std::span<const int> y_true) {
    MetricsReport r = metrics_from_counts(cm);
    if (!scores.empty()) {
        r.auc = auc(scores, y_true);
        r.flags.auc_single_class = is_single_class(y_true);
    }
    return r;
}

MetricsReport evaluate_scores(std::span<const double> scores, std::span<const int> y_true) {
    const auto labels = threshold_labels(scores);
    return compute_metrics(confusion_matrix(y_true, labels), scores, y_true);
}

bool is_single_class(std::span<const int> y_true) {
    const auto positives = std::count(y_true.begin(), y_true.end(), 1);
    return positives == 0 || static_cast<std::size_t>(positives) == y_true.size();
}

double auc(std::span<const double> scores, std::span<const int> y_true) {
    if (scores.size() != y_true.size()) {
        throw std::invalid_argument("auc: scores and labels differ in length");
    }
    if (scores.empty() || is_single_class(y_true)) {
        return 0.5;
    }
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of 1-based midranks of positives.
    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            if (y_true[order[t]] == 1) {
                positive_rank_sum += midrank;
            }
        }
        i = j + 1;
    }
    const auto pos = static_cast<double>(std::count(y_true.begin(), y_true.end(), 1));
    const double neg = static_cast<double>(n) - pos;
    const double u = positive_rank_sum - pos * (pos + 1.0) / 2.0;
    return u / (pos * neg);
}

// Reports --------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

constexpr const char* kMetricsHeader = "condition,precision,recall,accuracy,f1,auc,tp,tn,fp,fn";

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError("metrics CSV: cannot parse number '" + s + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError("metrics CSV: cannot parse count '" + s + "'");
    }
    return v;
}

}  // namespace

void write_metrics_csv(std::ostream& out, std::span<const NamedReport> rows) {
    out << kMetricsHeader << '\n';
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << quote_if_needed(row.condition) << ',' << format_double(r.precision) << ','
            << format_double(r.recall) << ',' << format_double(r.accuracy) << ','
            << format_double(r.f1) << ',' << format_double(r.auc) << ',' << r.counts.tp << ','
            << r.counts.tn << ',' << r.counts.fp << ',' << r.counts.fn << '\n';
    }
}

std::vector<NamedReport> read_metrics_csv(std::istream& in) {
    std::stringstream body;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            continue;
        }
        body << line << '\n';
    }
    const auto records = read_csv_records(body);
    if (records.empty()) {
        throw DataError("metrics CSV has no header");
    }
    std::string header;
    for (std::size_t i = 0; i < records[0].size(); ++i) {
        header += (i ? "," : "") + records[0][i];
    }
    if (header != kMetricsHeader) {
        throw DataError("metrics CSV header mismatch: '" + header + "'");
    }
    std::vector<NamedReport> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i];
        if (f.size() != 10) {
            throw DataError("metrics CSV row " + std::to_string(i) + " has " +
                            std::to_string(f.size()) + " fields");
        }
        NamedReport row;
        row.condition = f[0];
        auto& r = row.report;
        r.precision = parse_double(f[1]);
        r.recall = parse_double(f[2]);
        r.accuracy = parse_double(f[3]);
        r.f1 = parse_double(f[4]);
        r.auc = parse_double(f[5]);
        r.counts = {parse_count(f[6]), parse_count(f[7]), parse_count(f[8]), parse_count(f[9])};
        r.flags.precision_zero_denominator = r.counts.tp + r.counts.fp == 0;
        r.flags.recall_zero_denominator = r.counts.tp + r.counts.fn == 0;
        r.flags.auc_single_class = r.counts.tp + r.counts.fn == 0 || r.counts.tn + r.counts.fp == 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_metrics_table(std::span<const NamedReport> rows) {
    std::size_t width = std::string("condition").size();
    for (const auto& row : rows) {
        width = std::max(width, row.condition.size());
    }
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s  %9s  %9s  %9s  %9s  %9s  %6s  %6s  %6s  %6s\n",
                  static_cast<int>(width), "condition", "precision", "recall", "accuracy", "f1",
                  "auc", "tp", "tn", "fp", "fn");
    out << buf;
    for (const auto& row : rows) {
        const auto& r = row.report;
        std::snprintf(buf, sizeof buf,
                      "%-*s  %9.4f  %9.4f  %9.4f  %9.4f  %9.4f  %6zu  %6zu  %6zu  %6zu\n",
                      static_cast<int>(width), row.condition.c_str(), r.precision, r.recall,
                      r.accuracy, r.f1, r.auc, r.counts.tp, r.counts.tn, r.counts.fp, r.counts.fn);
        out << buf;
    }
    return out.str();
}

}  // namespace attnboost
