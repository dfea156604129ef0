#pragma once

// Holdout and stratified k-fold evaluation with confusion-matrix metrics.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "corpus.hpp"
#include "errors.hpp"
#include "label.hpp"
#include "random.hpp"

namespace hkbc {

struct EvalConfig {
    std::size_t folds = 5;
    double test_fraction = 0.30;
    std::uint64_t seed = 42;
    bool stratified = true;

    void validate() const {
        if (folds < 2) throw UsageError("need at least 2 folds");
        if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw UsageError("test fraction must lie in (0, 1)");
    }
};

/// Positive class is OFF.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double support = 0.0;
};

struct AveragedMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct Metrics {
    double accuracy = 0.0;
    ClassMetrics not_offensive;
    ClassMetrics offensive;
    AveragedMetrics macro;
    AveragedMetrics weighted;

    static constexpr std::size_t kFields = 15;

    std::array<double, kFields> flatten() const {
        return {accuracy,
                not_offensive.precision, not_offensive.recall, not_offensive.f1, not_offensive.support,
                offensive.precision, offensive.recall, offensive.f1, offensive.support,
                macro.precision, macro.recall, macro.f1,
                weighted.precision, weighted.recall, weighted.f1};
    }

    static Metrics unflatten(const std::array<double, kFields>& v) {
        Metrics m;
        m.accuracy = v[0];
        m.not_offensive = {v[1], v[2], v[3], v[4]};
        m.offensive = {v[5], v[6], v[7], v[8]};
        m.macro = {v[9], v[10], v[11]};
        m.weighted = {v[12], v[13], v[14]};
        return m;
    }
};

struct Split {
    Dataset train;
    Dataset test;  // validation part for k-fold
};

namespace detail {

inline double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

inline double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

inline void require_labeled(const Dataset& ds) {
    if (!ds.labeled) throw UsageError("evaluation needs a labeled dataset ('" + ds.name + "' is unlabeled)");
}

// Record positions of each class, in order.
inline std::array<std::vector<std::size_t>, 2> positions_by_class(const Dataset& ds) {
    std::array<std::vector<std::size_t>, 2> pos;
    for (std::size_t i = 0; i < ds.size(); ++i) pos[label_index(*ds.records[i].label)].push_back(i);
    return pos;
}

inline Dataset subset(const Dataset& ds, std::span<const char> mask, bool keep, std::string name) {
    Dataset out;
    out.name = std::move(name);
    out.labeled = ds.labeled;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (static_cast<bool>(mask[i]) == keep) out.records.push_back(ds.records[i]);
    }
    return out;
}

}  // namespace detail

/// Seed-shuffled split with round(test_fraction * N) test records. With
/// stratification, per-class test counts are the proportional shares
/// rounded by largest remainder (ties to NOT), so each is within one record
/// of its exact share.
inline Split holdout_split(const Dataset& ds, const EvalConfig& cfg) {
    cfg.validate();
    detail::require_labeled(ds);
    if (ds.size() < cfg.folds * 2) {
        throw UsageError("dataset too small for evaluation: " + std::to_string(ds.size()) + " records");
    }
    const Dataset shuffled = shuffle(ds, cfg.seed);
    const std::size_t n = shuffled.size();
    const auto n_test = static_cast<std::size_t>(std::floor(cfg.test_fraction * static_cast<double>(n) + 0.5));
    if (n_test == 0 || n_test == n) throw UsageError("test fraction leaves an empty train or test part");

    std::vector<char> in_test(n, 0);
    if (cfg.stratified) {
        const auto pos = detail::positions_by_class(shuffled);
        std::array<std::size_t, 2> quota{};
        std::array<double, 2> remainder{};
        std::size_t assigned = 0;
        for (std::size_t c = 0; c < 2; ++c) {
            const double exact = cfg.test_fraction * static_cast<double>(pos[c].size());
            quota[c] = static_cast<std::size_t>(std::floor(exact));
            remainder[c] = exact - std::floor(exact);
            assigned += quota[c];
        }
        while (assigned < n_test) {
            const std::size_t c = remainder[1] > remainder[0] ? 1 : 0;
            const std::size_t pick = quota[c] < pos[c].size() ? c : 1 - c;
            ++quota[pick];
            remainder[pick] = -1.0;
            ++assigned;
        }
        while (assigned > n_test) {  // only reachable through floating-point rounding
            const std::size_t c = quota[1] > quota[0] ? 1 : 0;
            --quota[c];
            --assigned;
        }
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t k = 0; k < quota[c]; ++k) in_test[pos[c][k]] = 1;
        }
    } else {
        for (std::size_t k = 0; k < n_test; ++k) in_test[k] = 1;
    }
    return Split{detail::subset(shuffled, in_test, false, ds.name + ":train"),
                 detail::subset(shuffled, in_test, true, ds.name + ":test")};
}

/// Seed-shuffled folds. Each class is dealt round-robin over the folds,
/// the deal continuing across classes, so per-class fold counts differ by
/// at most one and fold sizes stay balanced.
inline std::vector<Split> stratified_kfold(const Dataset& ds, const EvalConfig& cfg) {
    cfg.validate();
    detail::require_labeled(ds);
    if (cfg.folds > ds.size()) {
        throw UsageError(std::to_string(cfg.folds) + " folds requested for " + std::to_string(ds.size()) + " records");
    }
    const Dataset shuffled = shuffle(ds, cfg.seed);
    std::vector<std::size_t> fold_of(shuffled.size());
    std::size_t deal = 0;
    if (cfg.stratified) {
        for (const auto& cls : detail::positions_by_class(shuffled)) {
            for (const auto i : cls) fold_of[i] = deal++ % cfg.folds;
        }
    } else {
        for (std::size_t i = 0; i < shuffled.size(); ++i) fold_of[i] = deal++ % cfg.folds;
    }
    std::vector<Split> out;
    for (std::size_t f = 0; f < cfg.folds; ++f) {
        std::vector<char> mask(shuffled.size());
        for (std::size_t i = 0; i < shuffled.size(); ++i) mask[i] = fold_of[i] == f;
        const std::string tag = ds.name + ":fold" + std::to_string(f + 1);
        out.push_back(Split{detail::subset(shuffled, mask, false, tag + ":train"),
                            detail::subset(shuffled, mask, true, tag + ":validation")});
    }
    return out;
}

inline ConfusionMatrix confusion(std::span<const Label> preds, std::span<const Label> golds) {
    if (preds.size() != golds.size()) throw UsageError("prediction and gold label counts differ");
    if (preds.empty()) throw UsageError("confusion matrix over zero examples");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool p = preds[i] == Label::OFF, g = golds[i] == Label::OFF;
        if (p && g) ++cm.tp;
        else if (p) ++cm.fp;
        else if (g) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

/// Undefined ratios (0/0) are reported as 0.
inline Metrics metrics(const ConfusionMatrix& cm) {
    const auto tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp);
    const auto fn = static_cast<double>(cm.fn), tn = static_cast<double>(cm.tn);
    const double total = tp + fp + fn + tn;
    Metrics m;
    m.accuracy = detail::ratio(tp + tn, total);
    m.offensive.precision = detail::ratio(tp, tp + fp);
    m.offensive.recall = detail::ratio(tp, tp + fn);
    m.offensive.f1 = detail::harmonic(m.offensive.precision, m.offensive.recall);
    m.offensive.support = tp + fn;
    m.not_offensive.precision = detail::ratio(tn, tn + fn);
    m.not_offensive.recall = detail::ratio(tn, tn + fp);
    m.not_offensive.f1 = detail::harmonic(m.not_offensive.precision, m.not_offensive.recall);
    m.not_offensive.support = tn + fp;
    m.macro = {(m.offensive.precision + m.not_offensive.precision) / 2.0,
               (m.offensive.recall + m.not_offensive.recall) / 2.0,
               (m.offensive.f1 + m.not_offensive.f1) / 2.0};
    const double w_off = detail::ratio(m.offensive.support, total), w_not = detail::ratio(m.not_offensive.support, total);
    m.weighted = {w_off * m.offensive.precision + w_not * m.not_offensive.precision,
                  w_off * m.offensive.recall + w_not * m.not_offensive.recall,
                  w_off * m.offensive.f1 + w_not * m.not_offensive.f1};
    return m;
}

/// Field-wise mean and population standard deviation.
inline std::pair<Metrics, Metrics> mean_and_std(std::span<const Metrics> ms) {
    std::array<double, Metrics::kFields> mean{}, var{};
    if (ms.empty()) return {};
    for (const auto& m : ms) {
        const auto f = m.flatten();
        for (std::size_t k = 0; k < f.size(); ++k) mean[k] += f[k];
    }
    for (auto& v : mean) v /= static_cast<double>(ms.size());
    for (const auto& m : ms) {
        const auto f = m.flatten();
        for (std::size_t k = 0; k < f.size(); ++k) var[k] += (f[k] - mean[k]) * (f[k] - mean[k]);
    }
    for (auto& v : var) v = std::sqrt(v / static_cast<double>(ms.size()));
    return {Metrics::unflatten(mean), Metrics::unflatten(var)};
}

struct HoldoutReport {
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    ConfusionMatrix confusion;
    Metrics metrics;
};

struct CvReport {
    std::vector<ConfusionMatrix> fold_confusions;
    std::vector<Metrics> folds;
    Metrics mean;
    Metrics stddev;
    ConfusionMatrix pooled;
};

namespace detail {

template <class Predictor>
ConfusionMatrix score(const Predictor& predict, const Dataset& test) {
    std::vector<Label> preds, golds;
    preds.reserve(test.size());
    golds.reserve(test.size());
    for (const auto& r : test.records) {
        preds.push_back(predict(r.text));
        golds.push_back(*r.label);
    }
    return confusion(preds, golds);
}

inline void require_both_classes(const Dataset& train, const std::string& where) {
    std::array<std::size_t, 2> counts{};
    for (const auto& r : train.records) ++counts[label_index(*r.label)];
    if (counts[0] == 0 || counts[1] == 0) throw TrainingError(where + ": training part contains a single class");
}

}  // namespace detail

/// `fit(train)` must return a callable mapping a text to a Label; it is
/// handed only the training part.
template <class Fit>
HoldoutReport holdout_evaluate(const Dataset& ds, const EvalConfig& cfg, Fit&& fit) {
    const Split split = holdout_split(ds, cfg);
    detail::require_both_classes(split.train, "holdout");
    const auto predictor = fit(split.train);
    HoldoutReport rep;
    rep.train_size = split.train.size();
    rep.test_size = split.test.size();
    rep.confusion = detail::score(predictor, split.test);
    rep.metrics = metrics(rep.confusion);
    return rep;
}

/// Refits the whole pipeline on each fold's training part and scores it on
/// the held-out fold.
template <class Fit>
CvReport cross_validate(const Dataset& ds, const EvalConfig& cfg, Fit&& fit) {
    const auto splits = stratified_kfold(ds, cfg);
    CvReport rep;
    for (std::size_t f = 0; f < splits.size(); ++f) {
        const std::string where = "fold " + std::to_string(f + 1);
        detail::require_both_classes(splits[f].train, where);
        const auto predictor = [&] {
            try {
                return fit(splits[f].train);
            } catch (const TrainingError& e) {
                throw TrainingError(where + ": " + e.what());
            }
        }();
        const ConfusionMatrix cm = detail::score(predictor, splits[f].test);
        rep.fold_confusions.push_back(cm);
        rep.folds.push_back(metrics(cm));
        rep.pooled += cm;
    }
    std::tie(rep.mean, rep.stddev) = mean_and_std(rep.folds);
    return rep;
}

}  // namespace hkbc
