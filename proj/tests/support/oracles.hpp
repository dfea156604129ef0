#pragma once

// Reference implementations used only by tests. They are written
// independently of the library: dense storage, naive loops, std::map.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <hkbc/label.hpp>

namespace testsupport {

/// Dense TF-IDF rows for one character n-gram range, computed the slow way.
/// Columns follow the lexicographic order of the returned vocabulary.
struct DenseTfidf {
    std::vector<std::string> vocabulary;
    std::vector<std::vector<double>> rows;
};

inline std::vector<std::string> naive_char_grams(const std::string& s, int lo, int hi) {
    std::vector<std::string> out;
    for (int n = lo; n <= hi; ++n) {
        for (int i = 0; i + n <= static_cast<int>(s.size()); ++i) out.push_back(s.substr(i, n));
    }
    return out;
}

inline std::vector<std::string> naive_word_grams(const std::string& s, int lo, int hi) {
    std::vector<std::string> toks;
    std::string cur;
    const auto flush = [&] {
        if (cur.size() >= 2) toks.push_back(cur);
        cur.clear();
    };
    for (const char c : s) {
        if (std::isalpha(static_cast<unsigned char>(c)) && static_cast<unsigned char>(c) < 128) cur += c;
        else flush();
    }
    flush();
    std::vector<std::string> out;
    for (int n = lo; n <= hi; ++n) {
        for (int i = 0; i + n <= static_cast<int>(toks.size()); ++i) {
            std::string g = toks[i];
            for (int k = 1; k < n; ++k) g += " " + toks[i + k];
            out.push_back(g);
        }
    }
    return out;
}

inline DenseTfidf dense_tfidf(const std::vector<std::string>& docs,
                              const std::function<std::vector<std::string>(const std::string&)>& grams) {
    std::map<std::string, int> df;
    std::vector<std::map<std::string, int>> tf(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& g : grams(docs[d])) ++tf[d][g];
        for (const auto& [g, c] : tf[d]) ++df[g];
    }
    DenseTfidf out;
    for (const auto& [g, c] : df) out.vocabulary.push_back(g);
    const double n = static_cast<double>(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::vector<double> row;
        double sq = 0.0;
        for (const auto& g : out.vocabulary) {
            const auto it = tf[d].find(g);
            const double v = it == tf[d].end() ? 0.0 : it->second * (std::log((1.0 + n) / (1.0 + df[g])) + 1.0);
            row.push_back(v);
            sq += v * v;
        }
        if (sq > 0) {
            for (auto& v : row) v /= std::sqrt(sq);
        }
        out.rows.push_back(row);
    }
    return out;
}

/// Multinomial naive Bayes by the textbook formula on dense rows.
struct BayesOracle {
    double log_prior[2];
    std::vector<double> log_theta[2];

    BayesOracle(const std::vector<std::vector<double>>& X, const std::vector<hkbc::Label>& y, double alpha) {
        const std::size_t dim = X.front().size();
        for (int c = 0; c < 2; ++c) {
            double docs = 0, total = 0;
            std::vector<double> sums(dim, 0.0);
            for (std::size_t i = 0; i < X.size(); ++i) {
                if (static_cast<int>(y[i]) != c) continue;
                docs += 1;
                for (std::size_t t = 0; t < dim; ++t) sums[t] += X[i][t];
            }
            for (const double s : sums) total += s;
            log_prior[c] = std::log(docs / static_cast<double>(X.size()));
            for (std::size_t t = 0; t < dim; ++t) {
                log_theta[c].push_back(std::log((sums[t] + alpha) / (total + alpha * static_cast<double>(dim))));
            }
        }
    }

    double joint(int c, const std::vector<double>& x) const {
        double s = log_prior[c];
        for (std::size_t t = 0; t < x.size(); ++t) s += x[t] * log_theta[c][t];
        return s;
    }

    /// log P(c | x), normalised over both classes.
    double log_posterior(int c, const std::vector<double>& x) const {
        const double a = joint(0, x), b = joint(1, x);
        const double m = std::max(a, b);
        return joint(c, x) - (m + std::log(std::exp(a - m) + std::exp(b - m)));
    }

    hkbc::Label predict(const std::vector<double>& x) const {
        return joint(1, x) > joint(0, x) ? hkbc::Label::OFF : hkbc::Label::NOT;
    }
};

/// Majority by counting; ties go to NOT.
inline hkbc::Label majority_oracle(const std::vector<hkbc::Label>& votes) {
    int off = 0;
    for (const auto v : votes) off += v == hkbc::Label::OFF;
    return 2 * off > static_cast<int>(votes.size()) ? hkbc::Label::OFF : hkbc::Label::NOT;
}

/// Central difference of f along coordinate k of x.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t k, double h) {
    const double x0 = x[k];
    x[k] = x0 + h;
    const double fp = f(x);
    x[k] = x0 - h;
    const double fm = f(x);
    return (fp - fm) / (2.0 * h);
}

inline double relative_error(double a, double b, double floor = 1e-8) {
    return std::abs(a - b) / std::max({floor, std::abs(a), std::abs(b)});
}

/// Per-example tally: {tp, fp, fn, tn} with OFF positive.
inline std::array<int, 4> count_outcomes(const std::vector<hkbc::Label>& preds, const std::vector<hkbc::Label>& golds) {
    std::array<int, 4> c{};
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i] == hkbc::Label::OFF, g = golds[i] == hkbc::Label::OFF;
        c[p == 1 && g == 1 ? 0 : p == 1 ? 1 : g == 1 ? 2 : 3] += 1;
    }
    return c;
}

}  // namespace testsupport
