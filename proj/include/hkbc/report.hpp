#pragma once

// Human-readable tables and machine-readable JSON for stats and evaluations.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "eval.hpp"

namespace hkbc {

using Json = nlohmann::json;

inline double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

inline Json to_json(const ConfusionMatrix& cm) {
    return Json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}, {"total", cm.total()}};
}

inline Json to_json(const ClassMetrics& c) {
    return Json{{"precision", round4(c.precision)}, {"recall", round4(c.recall)}, {"f1", round4(c.f1)},
                {"support", round4(c.support)}};
}

inline Json to_json(const AveragedMetrics& a) {
    return Json{{"precision", round4(a.precision)}, {"recall", round4(a.recall)}, {"f1", round4(a.f1)}};
}

inline Json to_json(const Metrics& m) {
    return Json{{"accuracy", round4(m.accuracy)},
                {"NOT", to_json(m.not_offensive)},
                {"OFF", to_json(m.offensive)},
                {"macro", to_json(m.macro)},
                {"weighted", to_json(m.weighted)}};
}

inline Json to_json(const HoldoutReport& r) {
    return Json{{"train_size", r.train_size},
                {"test_size", r.test_size},
                {"confusion", to_json(r.confusion)},
                {"metrics", to_json(r.metrics)}};
}

inline Json to_json(const CvReport& r) {
    Json folds = Json::array();
    for (std::size_t f = 0; f < r.folds.size(); ++f) {
        folds.push_back(Json{{"fold", f + 1}, {"confusion", to_json(r.fold_confusions[f])}, {"metrics", to_json(r.folds[f])}});
    }
    return Json{{"folds", folds},
                {"mean", to_json(r.mean)},
                {"std", to_json(r.stddev)},
                {"pooled_confusion", to_json(r.pooled)}};
}

inline Json to_json(const StatsReport& s) {
    return Json{{"name", s.name},
                {"total", s.total},
                {"NOT", Json{{"count", s.not_offensive.count}, {"percent", s.not_offensive.percent}}},
                {"OFF", Json{{"count", s.offensive.count}, {"percent", s.offensive.percent}}}};
}

namespace report_detail {
inline std::string fixed(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}
}  // namespace report_detail

inline void print_stats(std::ostream& out, const StatsReport& s) {
    out << s.name << "  (total " << s.total << ")\n";
    out << "  Not Offensive  " << s.not_offensive.count << " (" << report_detail::fixed(s.not_offensive.percent, 2)
        << "%)\n";
    out << "  Offensive      " << s.offensive.count << " (" << report_detail::fixed(s.offensive.percent, 2) << "%)\n";
}

/// One row of a results table: accuracy, then macro precision/recall/F1.
struct ResultRow {
    std::string classifier;
    std::string features;
    Metrics metrics;
};

inline void print_results(std::ostream& out, const std::string& title, const std::vector<ResultRow>& rows) {
    out << title << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "  %-10s %-30s %8s %9s %7s %5s   %6s %6s\n", "Classifier", "Features", "Accuracy",
                  "Precision", "Recall", "F1", "F1-NOT", "F1-OFF");
    out << line;
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        std::snprintf(line, sizeof line, "  %-10s %-30s %8s %9s %7s %5s   %6s %6s\n", r.classifier.c_str(),
                      r.features.c_str(), report_detail::fixed(m.accuracy, 4).c_str(),
                      report_detail::fixed(m.macro.precision, 2).c_str(), report_detail::fixed(m.macro.recall, 2).c_str(),
                      report_detail::fixed(m.macro.f1, 2).c_str(), report_detail::fixed(m.not_offensive.f1, 2).c_str(),
                      report_detail::fixed(m.offensive.f1, 2).c_str());
        out << line;
    }
}

inline void print_confusion(std::ostream& out, const ConfusionMatrix& cm) {
    out << "  confusion (rows gold, cols predicted)    NOT    OFF\n";
    char line[128];
    std::snprintf(line, sizeof line, "    NOT %38llu %6llu\n", static_cast<unsigned long long>(cm.tn),
                  static_cast<unsigned long long>(cm.fp));
    out << line;
    std::snprintf(line, sizeof line, "    OFF %38llu %6llu\n", static_cast<unsigned long long>(cm.fn),
                  static_cast<unsigned long long>(cm.tp));
    out << line;
}

}  // namespace hkbc
