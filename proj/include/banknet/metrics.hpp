#ifndef BANKNET_METRICS_HPP
#define BANKNET_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "banknet/errors.hpp"

namespace banknet {

// counts[i][j] = number of times true class i was predicted as j.
class ConfusionMatrix {
  public:
    explicit ConfusionMatrix(int class_count) : k_(class_count) {
        if (class_count < 1) throw ValueError("confusion matrix needs at least one class");
        counts_.assign(static_cast<std::size_t>(k_) * k_, 0);
    }

    int class_count() const { return k_; }

    std::int64_t at(int t, int p) const {
        check(t, p);
        return counts_[static_cast<std::size_t>(t) * k_ + p];
    }

    void accumulate(int true_label, int predicted_label, std::int64_t count = 1) {
        check(true_label, predicted_label);
        if (count < 0) throw ValueError("confusion matrix: negative count");
        counts_[static_cast<std::size_t>(true_label) * k_ + predicted_label] += count;
    }

    void merge(const ConfusionMatrix& other) {
        if (other.k_ != k_) throw ShapeError("confusion matrix merge: class counts differ");
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    }

    std::int64_t row_sum(int t) const {
        check(t, 0);
        std::int64_t s = 0;
        for (int j = 0; j < k_; ++j) s += counts_[static_cast<std::size_t>(t) * k_ + j];
        return s;
    }

    std::int64_t col_sum(int p) const {
        check(0, p);
        std::int64_t s = 0;
        for (int i = 0; i < k_; ++i) s += counts_[static_cast<std::size_t>(i) * k_ + p];
        return s;
    }

    std::int64_t trace() const {
        std::int64_t s = 0;
        for (int i = 0; i < k_; ++i) s += counts_[static_cast<std::size_t>(i) * k_ + i];
        return s;
    }

    std::int64_t total() const {
        std::int64_t s = 0;
        for (auto v : counts_) s += v;
        return s;
    }

  private:
    void check(int t, int p) const {
        if (t < 0 || t >= k_ || p < 0 || p >= k_) {
            throw ValueError("confusion matrix: label out of range (" + std::to_string(t) + "," +
                             std::to_string(p) + ") for " + std::to_string(k_) + " classes");
        }
    }

    int k_;
    std::vector<std::int64_t> counts_;
};

// Zero denominators yield 0; callers that care consult the degenerate flags in
// the report instead of handling exceptions.
inline double precision(const ConfusionMatrix& cm, int i) {
    const std::int64_t denom = cm.col_sum(i);
    return denom == 0 ? 0.0 : static_cast<double>(cm.at(i, i)) / static_cast<double>(denom);
}

inline double recall(const ConfusionMatrix& cm, int i) {
    const std::int64_t denom = cm.row_sum(i);
    return denom == 0 ? 0.0 : static_cast<double>(cm.at(i, i)) / static_cast<double>(denom);
}

inline double f1(const ConfusionMatrix& cm, int i) {
    const double p = precision(cm, i);
    const double r = recall(cm, i);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

inline double accuracy(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total == 0) throw ValueError("accuracy undefined for an empty confusion matrix");
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

enum class Average { Micro, Macro, Weighted };

struct Aggregate {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline Aggregate aggregate(const ConfusionMatrix& cm, Average mode) {
    const std::int64_t total = cm.total();
    if (total == 0) throw ValueError("aggregate undefined for an empty confusion matrix");
    Aggregate out;
    switch (mode) {
        case Average::Micro: {
            // Pooled counts: every false positive is some class's false
            // negative, so precision, recall and f1 all equal accuracy.
            const double acc = static_cast<double>(cm.trace()) / static_cast<double>(total);
            out.precision = out.recall = out.f1 = acc;
            break;
        }
        case Average::Macro: {
            const int k = cm.class_count();
            for (int c = 0; c < k; ++c) {
                out.precision += precision(cm, c);
                out.recall += recall(cm, c);
                out.f1 += f1(cm, c);
            }
            out.precision /= k;
            out.recall /= k;
            out.f1 /= k;
            break;
        }
        case Average::Weighted: {
            const int k = cm.class_count();
            for (int c = 0; c < k; ++c) {
                const double w = static_cast<double>(cm.row_sum(c)) / static_cast<double>(total);
                out.precision += w * precision(cm, c);
                out.recall += w * recall(cm, c);
                out.f1 += w * f1(cm, c);
            }
            break;
        }
    }
    return out;
}

struct MetricsReport {
    int class_count = 0;
    std::vector<std::int64_t> support;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    std::vector<bool> degenerate;
    Aggregate micro;
    Aggregate macro;
    Aggregate weighted;
    double accuracy = 0.0;
};

inline MetricsReport compute_report(const ConfusionMatrix& cm) {
    MetricsReport rep;
    rep.class_count = cm.class_count();
    for (int c = 0; c < rep.class_count; ++c) {
        rep.support.push_back(cm.row_sum(c));
        const double p = banknet::precision(cm, c);
        const double r = banknet::recall(cm, c);
        rep.precision.push_back(p);
        rep.recall.push_back(r);
        rep.f1.push_back(banknet::f1(cm, c));
        rep.degenerate.push_back(cm.col_sum(c) == 0 || cm.row_sum(c) == 0 || p + r == 0.0);
    }
    rep.micro = aggregate(cm, Average::Micro);
    rep.macro = aggregate(cm, Average::Macro);
    rep.weighted = aggregate(cm, Average::Weighted);
    rep.accuracy = banknet::accuracy(cm);
    return rep;
}

// Display rounding: half-up at three decimals. Stored values stay full
// precision; only rendering rounds.
inline double round3(double v) { return static_cast<double>(std::llround(v * 1000.0)) / 1000.0; }

inline std::string format3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", round3(v));
    return buf;
}

inline std::string render_text(const ConfusionMatrix& cm, const MetricsReport& rep) {
    std::ostringstream os;
    const int k = cm.class_count();
    int width = 5;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            width = std::max(width, static_cast<int>(std::to_string(cm.at(i, j)).size()) + 2);
        }
    }
    os << "confusion matrix (rows: true, cols: predicted)\n";
    os << std::setw(8) << "";
    for (int j = 0; j < k; ++j) os << std::setw(width) << j;
    os << '\n';
    for (int i = 0; i < k; ++i) {
        os << std::setw(8) << i;
        for (int j = 0; j < k; ++j) os << std::setw(width) << cm.at(i, j);
        os << '\n';
    }
    os << '\n';
    os << std::left << std::setw(12) << "class" << std::right << std::setw(9) << "support" << std::setw(11)
       << "precision" << std::setw(9) << "recall" << std::setw(9) << "f1" << '\n';
    auto row = [&os](const std::string& name, std::int64_t support, double p, double r, double f) {
        os << std::left << std::setw(12) << name << std::right << std::setw(9) << support << std::setw(11)
           << format3(p) << std::setw(9) << format3(r) << std::setw(9) << format3(f) << '\n';
    };
    for (int c = 0; c < k; ++c) {
        row(std::to_string(c), rep.support[c], rep.precision[c], rep.recall[c], rep.f1[c]);
    }
    const std::int64_t total = cm.total();
    row("micro avg", total, rep.micro.precision, rep.micro.recall, rep.micro.f1);
    row("macro avg", total, rep.macro.precision, rep.macro.recall, rep.macro.f1);
    row("weighted avg", total, rep.weighted.precision, rep.weighted.recall, rep.weighted.f1);
    os << '\n' << "accuracy " << format3(rep.accuracy) << '\n';
    return os.str();
}

namespace detail {

inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline std::string render_tsv(const MetricsReport& rep) {
    std::ostringstream os;
    os << "class\tsupport\tprecision\trecall\tf1\n";
    std::int64_t total = 0;
    for (int c = 0; c < rep.class_count; ++c) total += rep.support[c];
    for (int c = 0; c < rep.class_count; ++c) {
        os << c << '\t' << rep.support[c] << '\t' << detail::format_full(rep.precision[c]) << '\t'
           << detail::format_full(rep.recall[c]) << '\t' << detail::format_full(rep.f1[c]) << '\n';
    }
    auto agg_row = [&os, total](const char* name, const Aggregate& a) {
        os << name << '\t' << total << '\t' << detail::format_full(a.precision) << '\t'
           << detail::format_full(a.recall) << '\t' << detail::format_full(a.f1) << '\n';
    };
    agg_row("__micro__", rep.micro);
    agg_row("__macro__", rep.macro);
    agg_row("__weighted__", rep.weighted);
    os << "__accuracy__\t" << total << '\t' << detail::format_full(rep.accuracy) << '\t'
       << detail::format_full(rep.accuracy) << '\t' << detail::format_full(rep.accuracy) << '\n';
    return os.str();
}

inline MetricsReport parse_report_tsv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "class\tsupport\tprecision\trecall\tf1") {
        throw IoError("report tsv: bad header");
    }
    MetricsReport rep;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string name, support, p, r, f;
        if (!std::getline(row, name, '\t') || !std::getline(row, support, '\t') ||
            !std::getline(row, p, '\t') || !std::getline(row, r, '\t') || !std::getline(row, f, '\t')) {
            throw IoError("report tsv: malformed row '" + line + "'");
        }
        const Aggregate a{std::stod(p), std::stod(r), std::stod(f)};
        if (name == "__micro__") {
            rep.micro = a;
        } else if (name == "__macro__") {
            rep.macro = a;
        } else if (name == "__weighted__") {
            rep.weighted = a;
        } else if (name == "__accuracy__") {
            rep.accuracy = a.precision;
        } else {
            const int cls = std::stoi(name);
            if (cls != rep.class_count) throw IoError("report tsv: class rows out of order");
            ++rep.class_count;
            rep.support.push_back(std::stoll(support));
            rep.precision.push_back(a.precision);
            rep.recall.push_back(a.recall);
            rep.f1.push_back(a.f1);
            rep.degenerate.push_back(a.precision + a.recall == 0.0);
        }
    }
    if (rep.class_count == 0) throw IoError("report tsv: no class rows");
    return rep;
}

enum class ReportFormat { Text, Tsv };

inline std::string render(const ConfusionMatrix& cm, const MetricsReport& rep, ReportFormat fmt) {
    return fmt == ReportFormat::Text ? render_text(cm, rep) : render_tsv(rep);
}

} // namespace banknet

#endif
