#pragma once

// Text model files. Layout, one item per line:
//
//   HKBC1
//   kind <svc|mnb|lr|rfc|ensemble|nn>
//   preprocess <lowercase> <strip_social_markers> <remove_stopwords> <n>
//   <n stopwords>
//   ...body (vectorizer + classifier, or word index + network)...
//   end
//
// Vectorizer idf values carry 12 significant digits; model parameters are
// written with round-trip precision. Saving a loaded model reproduces the
// file byte for byte.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "pipeline.hpp"

namespace hkbc {

inline constexpr std::string_view kModelMagic = "HKBC1";

namespace io_detail {

inline std::string format_double(double v, int digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

inline std::string exact(double v) { return format_double(v, 17); }

inline std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) throw FormatError("dangling escape in model file");
        switch (s[i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            default: throw FormatError("unknown escape in model file");
        }
    }
    return out;
}

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <class... Parts>
    void line(const Parts&... parts) {
        bool first = true;
        ((out_ << (first ? "" : " ") << parts, first = false), ...);
        out_ << '\n';
    }

    void values(std::span<const double> v) {
        for (const double x : v) out_ << exact(x) << '\n';
    }

    std::ostream& raw() { return out_; }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string next_line() {
        std::string l;
        if (!std::getline(in_, l)) throw FormatError("model file is truncated");
        ++line_no_;
        return l;
    }

    /// Next line split on single spaces; its first field must equal `keyword`.
    std::vector<std::string> expect(std::string_view keyword, std::size_t n_fields) {
        const std::string l = next_line();
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const auto sp = l.find(' ', pos);
            fields.push_back(l.substr(pos, sp == std::string::npos ? std::string::npos : sp - pos));
            if (sp == std::string::npos) break;
            pos = sp + 1;
        }
        if (fields.front() != keyword || fields.size() != n_fields + 1) {
            fail("expected '" + std::string(keyword) + "' with " + std::to_string(n_fields) + " fields");
        }
        fields.erase(fields.begin());
        return fields;
    }

    double to_double(std::string_view s) const {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("bad number '" + std::string(s) + "'");
        return v;
    }

    template <class Int>
    Int to_int(std::string_view s) const {
        Int v{};
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("bad integer '" + std::string(s) + "'");
        return v;
    }

    std::vector<double> values(std::size_t n) {
        std::vector<double> v(n);
        for (auto& x : v) x = to_double(next_line());
        return v;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("model file line " + std::to_string(line_no_) + ": " + what);
    }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
};

inline void write_linear(Writer& w, const LinearModel& m) {
    const auto& c = m.config;
    w.line("linear", to_string(c.loss), m.dim(), exact(c.C), c.max_iter, exact(c.tol), c.seed);
    w.line("bias", exact(m.bias));
    w.line("objective", exact(m.objective), m.iterations);
    w.values(m.weights);
}

inline LinearModel read_linear(Reader& r) {
    const auto f = r.expect("linear", 6);
    LinearModel m;
    if (f[0] == "logistic") m.config.loss = LinearLoss::logistic;
    else if (f[0] == "squared_hinge") m.config.loss = LinearLoss::squared_hinge;
    else r.fail("unknown loss '" + f[0] + "'");
    const auto dim = r.to_int<std::size_t>(f[1]);
    m.config.C = r.to_double(f[2]);
    m.config.max_iter = r.to_int<int>(f[3]);
    m.config.tol = r.to_double(f[4]);
    m.config.seed = r.to_int<std::uint64_t>(f[5]);
    m.bias = r.to_double(r.expect("bias", 1)[0]);
    const auto obj = r.expect("objective", 2);
    m.objective = r.to_double(obj[0]);
    m.iterations = r.to_int<int>(obj[1]);
    m.weights = r.values(dim);
    return m;
}

inline void write_mnb(Writer& w, const MnbModel& m) {
    w.line("mnb", m.dim, exact(m.config.alpha));
    w.line("prior", exact(m.log_prior[0]), exact(m.log_prior[1]));
    for (const auto l : kLabels) {
        w.line("loglik", to_string(l));
        w.values(m.log_likelihood[label_index(l)]);
    }
}

inline MnbModel read_mnb(Reader& r) {
    const auto f = r.expect("mnb", 2);
    MnbModel m;
    m.dim = r.to_int<std::size_t>(f[0]);
    m.config.alpha = r.to_double(f[1]);
    const auto p = r.expect("prior", 2);
    m.log_prior = {r.to_double(p[0]), r.to_double(p[1])};
    for (const auto l : kLabels) {
        if (r.expect("loglik", 1)[0] != to_string(l)) r.fail("unexpected class block");
        m.log_likelihood[label_index(l)] = r.values(m.dim);
    }
    return m;
}

inline void write_forest(Writer& w, const ForestModel& m) {
    w.line("forest", m.dim, m.config.n_estimators, m.config.max_depth, m.config.seed, m.trees.size());
    for (const auto& t : m.trees) {
        w.line("tree", t.nodes.size());
        for (const auto& n : t.nodes) {
            w.line(n.feature, exact(n.threshold), n.left, n.right, n.counts[0], n.counts[1]);
        }
    }
}

inline ForestModel read_forest(Reader& r) {
    const auto f = r.expect("forest", 5);
    ForestModel m;
    m.dim = r.to_int<std::size_t>(f[0]);
    m.config.n_estimators = r.to_int<int>(f[1]);
    m.config.max_depth = r.to_int<int>(f[2]);
    m.config.seed = r.to_int<std::uint64_t>(f[3]);
    const auto n_trees = r.to_int<std::size_t>(f[4]);
    for (std::size_t t = 0; t < n_trees; ++t) {
        const auto n_nodes = r.to_int<std::size_t>(r.expect("tree", 1)[0]);
        DecisionTree tree;
        tree.nodes.resize(n_nodes);
        for (auto& n : tree.nodes) {
            const std::string l = r.next_line();
            std::istringstream ls(l);
            std::string feature, threshold, left, right, c0, c1, extra;
            if (!(ls >> feature >> threshold >> left >> right >> c0 >> c1) || (ls >> extra)) r.fail("bad tree node");
            n.feature = r.to_int<std::int64_t>(feature);
            n.threshold = r.to_double(threshold);
            n.left = r.to_int<std::int32_t>(left);
            n.right = r.to_int<std::int32_t>(right);
            n.counts = {r.to_int<std::uint32_t>(c0), r.to_int<std::uint32_t>(c1)};
            if (!n.is_leaf()) {
                const auto limit = static_cast<std::int32_t>(n_nodes);
                if (static_cast<std::size_t>(n.feature) >= m.dim || n.left <= 0 || n.right <= 0 || n.left >= limit ||
                    n.right >= limit) {
                    r.fail("tree node out of range");
                }
            }
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

inline void write_member(Writer& w, const MemberModel& m) {
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, LinearModel>) write_linear(w, model);
            else if constexpr (std::is_same_v<T, MnbModel>) write_mnb(w, model);
            else write_forest(w, model);
        },
        m);
}

inline void write_classifier(Writer& w, const Classifier& c) {
    std::visit(
        [&](const auto& model) {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, EnsembleModel>) {
                w.line("ensemble", model.members.size());
                for (const auto& m : model.members) {
                    w.line("member", std::visit([](const auto& mm) -> std::string_view {
                               using M = std::decay_t<decltype(mm)>;
                               if constexpr (std::is_same_v<M, LinearModel>) return "linear";
                               else if constexpr (std::is_same_v<M, MnbModel>) return "mnb";
                               else return "forest";
                           }, m));
                    write_member(w, m);
                }
            } else if constexpr (std::is_same_v<T, LinearModel>) {
                write_linear(w, model);
            } else if constexpr (std::is_same_v<T, MnbModel>) {
                write_mnb(w, model);
            } else {
                write_forest(w, model);
            }
        },
        c);
}

inline MemberModel read_member(Reader& r, std::string_view tag) {
    if (tag == "linear") return read_linear(r);
    if (tag == "mnb") return read_mnb(r);
    if (tag == "forest") return read_forest(r);
    r.fail("unknown ensemble member '" + std::string(tag) + "'");
}

inline Classifier read_classifier(Reader& r, ModelKind kind) {
    switch (kind) {
        case ModelKind::mnb: return read_mnb(r);
        case ModelKind::svc:
        case ModelKind::lr: return read_linear(r);
        case ModelKind::rfc: return read_forest(r);
        case ModelKind::ensemble: {
            const auto n = r.to_int<std::size_t>(r.expect("ensemble", 1)[0]);
            std::vector<MemberModel> members;
            for (std::size_t i = 0; i < n; ++i) members.push_back(read_member(r, r.expect("member", 1)[0]));
            try {
                return make_ensemble(std::move(members));
            } catch (const UsageError& e) {
                r.fail(e.what());
            }
        }
        case ModelKind::nn: break;
    }
    r.fail("not a vector-space model kind");
}

inline void write_vectorizer(Writer& w, const TfidfModel& v) {
    w.line("vectorizer", v.n_docs, v.specs.size(), v.norm == BlockNorm::joint ? "joint" : "per_block");
    for (std::size_t s = 0; s < v.specs.size(); ++s) {
        w.line("spec", to_string(v.specs[s].mode), v.specs[s].lo, v.specs[s].hi, v.vocabularies[s].size());
        const auto& terms = v.vocabularies[s].terms();
        for (std::size_t i = 0; i < terms.size(); ++i) {
            w.raw() << format_double(v.idf[s][i], 12) << '\t' << escape(terms[i]) << '\n';
        }
    }
}

inline TfidfModel read_vectorizer(Reader& r) {
    const auto f = r.expect("vectorizer", 3);
    TfidfModel v;
    v.n_docs = r.to_int<std::size_t>(f[0]);
    const auto n_specs = r.to_int<std::size_t>(f[1]);
    if (f[2] == "joint") v.norm = BlockNorm::joint;
    else if (f[2] != "per_block") r.fail("unknown normalisation '" + f[2] + "'");
    for (std::size_t s = 0; s < n_specs; ++s) {
        const auto sf = r.expect("spec", 4);
        NgramSpec spec;
        if (sf[0] == "word") spec.mode = NgramMode::word;
        else if (sf[0] == "char") spec.mode = NgramMode::character;
        else r.fail("unknown n-gram mode '" + sf[0] + "'");
        spec.lo = r.to_int<int>(sf[1]);
        spec.hi = r.to_int<int>(sf[2]);
        try {
            spec.validate();
        } catch (const UsageError& e) {
            r.fail(e.what());
        }
        const auto size = r.to_int<std::size_t>(sf[3]);
        std::vector<std::string> terms(size);
        std::vector<double> idf(size);
        for (std::size_t i = 0; i < size; ++i) {
            const std::string l = r.next_line();
            const auto tab = l.find('\t');
            if (tab == std::string::npos) r.fail("vocabulary line without tab");
            idf[i] = r.to_double(std::string_view(l).substr(0, tab));
            terms[i] = unescape(std::string_view(l).substr(tab + 1));
            if (i > 0 && !(terms[i - 1] < terms[i])) r.fail("vocabulary out of order");
        }
        v.specs.push_back(spec);
        v.vocabularies.emplace_back(std::move(terms));
        v.idf.push_back(std::move(idf));
    }
    return v;
}

inline void write_neural(Writer& w, const NeuralClassifier& nn) {
    w.line("wordindex", nn.index.size());
    for (const auto& word : nn.index.words()) w.raw() << escape(word) << '\n';
    const auto& c = nn.net.config;
    w.line("net", c.vocab_capacity, c.embed_dim, c.max_len, exact(c.learning_rate), c.epochs, c.batch_size, c.seed,
           exact(c.beta1), exact(c.beta2), exact(c.epsilon));
    w.line("bias", exact(nn.net.bias));
    w.line("dense");
    w.values(nn.net.dense);
    w.line("embedding");
    for (std::size_t r = 0; r < c.vocab_capacity; ++r) {
        const auto row = nn.net.row(r);
        for (std::size_t k = 0; k < row.size(); ++k) w.raw() << (k ? " " : "") << exact(row[k]);
        w.raw() << '\n';
    }
}

inline NeuralClassifier read_neural(Reader& r) {
    NeuralClassifier nn;
    const auto size = r.to_int<std::size_t>(r.expect("wordindex", 1)[0]);
    std::vector<std::string> words(size);
    for (auto& word : words) word = unescape(r.next_line());
    nn.index = WordIndex(words);
    if (nn.index.size() != size) r.fail("duplicate words in word index");

    const auto f = r.expect("net", 10);
    NnConfig c;
    c.vocab_capacity = r.to_int<std::size_t>(f[0]);
    c.embed_dim = r.to_int<std::size_t>(f[1]);
    c.max_len = r.to_int<std::size_t>(f[2]);
    c.learning_rate = r.to_double(f[3]);
    c.epochs = r.to_int<int>(f[4]);
    c.batch_size = r.to_int<std::size_t>(f[5]);
    c.seed = r.to_int<std::uint64_t>(f[6]);
    c.beta1 = r.to_double(f[7]);
    c.beta2 = r.to_double(f[8]);
    c.epsilon = r.to_double(f[9]);
    if (c.vocab_capacity <= size) r.fail("embedding table smaller than the word index");
    try {
        nn.net = make_net(c);
    } catch (const UsageError& e) {
        r.fail(e.what());
    }
    nn.net.bias = r.to_double(r.expect("bias", 1)[0]);
    r.expect("dense", 0);
    nn.net.dense = r.values(c.max_len * c.embed_dim);
    r.expect("embedding", 0);
    for (std::size_t row = 0; row < c.vocab_capacity; ++row) {
        std::istringstream ls(r.next_line());
        std::string tok;
        for (std::size_t k = 0; k < c.embed_dim; ++k) {
            if (!(ls >> tok)) r.fail("short embedding row");
            nn.net.embedding[row * c.embed_dim + k] = r.to_double(tok);
        }
        if (ls >> tok) r.fail("long embedding row");
    }
    return nn;
}

}  // namespace io_detail

inline void write_model(const Pipeline& p, std::ostream& out) {
    io_detail::Writer w(out);
    w.line(kModelMagic);
    w.line("kind", to_string(p.kind));
    const auto& pp = p.preprocess;
    w.line("preprocess", int(pp.lowercase), int(pp.strip_social_markers), int(pp.remove_stopwords),
           pp.stopwords.size());
    for (const auto& s : pp.stopwords) w.line(s);
    if (const auto* t = std::get_if<TfidfClassifier>(&p.body)) {
        io_detail::write_vectorizer(w, t->vectorizer);
        io_detail::write_classifier(w, t->model);
    } else {
        io_detail::write_neural(w, std::get<NeuralClassifier>(p.body));
    }
    w.line("end");
}

inline Pipeline read_model(std::istream& in) {
    io_detail::Reader r(in);
    std::string magic;
    try {
        magic = r.next_line();
    } catch (const FormatError&) {
        throw FormatError("empty model file");
    }
    if (magic != kModelMagic) {
        if (magic.rfind("HKBC", 0) == 0) throw FormatError("unsupported model file version '" + magic + "'");
        throw FormatError("not a model file (bad magic)");
    }
    Pipeline p;
    const auto kind_tag = r.expect("kind", 1)[0];
    const auto kind = parse_model_kind(kind_tag);
    if (!kind) r.fail("unknown model kind '" + kind_tag + "'");
    p.kind = *kind;

    const auto pf = r.expect("preprocess", 4);
    p.preprocess.lowercase = pf[0] == "1";
    p.preprocess.strip_social_markers = pf[1] == "1";
    p.preprocess.remove_stopwords = pf[2] == "1";
    const auto n_stop = r.to_int<std::size_t>(pf[3]);
    p.preprocess.stopwords.clear();
    for (std::size_t i = 0; i < n_stop; ++i) p.preprocess.stopwords.insert(r.next_line());
    try {
        p.preprocess.validate();
    } catch (const UsageError& e) {
        r.fail(e.what());
    }

    if (p.kind == ModelKind::nn) {
        p.body = io_detail::read_neural(r);
    } else {
        TfidfClassifier t;
        t.vectorizer = io_detail::read_vectorizer(r);
        t.model = io_detail::read_classifier(r, p.kind);
        const std::size_t dim = std::visit(
            [](const auto& m) -> std::size_t {
                if constexpr (requires { m.dim(); }) return m.dim();
                else return m.dim;
            },
            t.model);
        if (dim != t.vectorizer.dimension()) r.fail("model dimension does not match the vectorizer");
        p.body = std::move(t);
    }
    r.expect("end", 0);
    return p;
}

inline void save_model(const Pipeline& p, const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) throw IoError("'" + path.string() + "' is a directory");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    write_model(p, out);
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline Pipeline load_model(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) throw IoError("'" + path.string() + "' is a directory");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_model(in);
}

}  // namespace hkbc
