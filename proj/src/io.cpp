#include "qkm/io.hpp"

#include "qkm/error.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qkm {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) {
        out.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

bool is_number(const std::string& s)
{
    if (s.empty()) {
        return false;
    }
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

const std::string& meta_value(const Metadata& meta, const std::string& key)
{
    for (const auto& [k, v] : meta) {
        if (k == key) {
            return v;
        }
    }
    throw ConfigError("missing metadata key '" + key + "'");
}

std::vector<double> to_vector(const Eigen::VectorXd& v)
{
    return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd from_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json points_to_json(const std::vector<DataPoint>& points)
{
    auto arr = nlohmann::json::array();
    for (const auto& p : points) {
        arr.push_back(p.coords);
    }
    return arr;
}

std::vector<DataPoint> points_from_json(const nlohmann::json& j)
{
    std::vector<DataPoint> out;
    for (const auto& p : j) {
        out.emplace_back(p.get<std::vector<double>>());
    }
    return out;
}

} // namespace

std::string format_float(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_float(const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) {
        throw ConfigError("not a number: '" + text + "'");
    }
    return v;
}

void write_metadata(std::ostream& os, const Metadata& meta)
{
    for (const auto& [k, v] : meta) {
        os << "# " << k << '=' << v << '\n';
    }
}

const std::string& CsvTable::get(const std::string& key) const
{
    return meta_value(meta, key);
}

CsvTable read_csv(std::istream& is)
{
    CsvTable table;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        if (line.front() == '#') {
            const std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                table.meta.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
            }
            continue;
        }
        auto cells = split(line, ',');
        if (table.rows.empty() && table.header.empty() && !cells.empty() && !is_number(cells.front())) {
            table.header = std::move(cells);
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            row.push_back(parse_float(c));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

CsvTable read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    return read_csv(in);
}

void write_text_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << contents;
    if (!out) {
        throw std::runtime_error("write to '" + path + "' failed");
    }
}

// ---------------------------------------------------------------------------

Metadata gram_metadata(const GramMeta& meta)
{
    return {
        {"spins", std::to_string(meta.spins)},
        {"tau", format_float(meta.tau)},
        {"substeps", std::to_string(meta.substeps)},
        {"feature_dim", std::to_string(meta.feature_dim)},
        {"seed", std::to_string(meta.seed)},
        {"kernel", to_string(meta.kind)},
    };
}

void write_gram_csv(std::ostream& os, const GramMatrix& gram, const Metadata& extra)
{
    Metadata meta = gram_metadata(gram.meta);
    meta.emplace_back("size", std::to_string(gram.size()));
    meta.insert(meta.end(), extra.begin(), extra.end());
    write_metadata(os, meta);
    for (Eigen::Index i = 0; i < gram.size(); ++i) {
        for (Eigen::Index j = 0; j < gram.size(); ++j) {
            if (j > 0) {
                os << ',';
            }
            os << format_float(gram(i, j));
        }
        os << '\n';
    }
}

GramMatrix read_gram_csv(std::istream& is)
{
    const CsvTable t = read_csv(is);
    GramMatrix g;
    g.meta.spins = std::stoi(t.get("spins"));
    g.meta.tau = parse_float(t.get("tau"));
    g.meta.substeps = std::stoi(t.get("substeps"));
    g.meta.feature_dim = std::stoi(t.get("feature_dim"));
    g.meta.seed = std::stoull(t.get("seed"));
    g.meta.kind = parse_kernel_kind(t.get("kernel"));
    const auto n = static_cast<Eigen::Index>(t.rows.size());
    g.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(t.rows[static_cast<std::size_t>(i)].size()) != n) {
            throw ConfigError("Gram CSV is not square");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            g.entries(i, j) = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return g;
}

nlohmann::json gram_to_json(const GramMatrix& gram, const Metadata& extra)
{
    nlohmann::json meta = nlohmann::json::object();
    meta["spins"] = gram.meta.spins;
    meta["tau"] = gram.meta.tau;
    meta["substeps"] = gram.meta.substeps;
    meta["feature_dim"] = gram.meta.feature_dim;
    meta["seed"] = gram.meta.seed;
    meta["kernel"] = to_string(gram.meta.kind);
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : extra) {
        config[k] = v;
    }
    auto entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < gram.size(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(gram.size()));
        for (Eigen::Index j = 0; j < gram.size(); ++j) {
            row[static_cast<std::size_t>(j)] = gram(i, j);
        }
        entries.push_back(std::move(row));
    }
    return {{"format", "qkm.gram"}, {"meta", meta},     {"config", config},
            {"size", gram.size()},  {"entries", entries}, {"points", points_to_json(gram.points)}};
}

GramMatrix gram_from_json(const nlohmann::json& j)
{
    if (j.value("format", "") != "qkm.gram") {
        throw ConfigError("not a Gram JSON document");
    }
    GramMatrix g;
    const auto& m = j.at("meta");
    g.meta.spins = m.at("spins").get<int>();
    g.meta.tau = m.at("tau").get<double>();
    g.meta.substeps = m.at("substeps").get<int>();
    g.meta.feature_dim = m.at("feature_dim").get<int>();
    g.meta.seed = m.at("seed").get<std::uint64_t>();
    g.meta.kind = parse_kernel_kind(m.at("kernel").get<std::string>());
    const auto n = j.at("size").get<Eigen::Index>();
    g.entries.resize(n, n);
    const auto& rows = j.at("entries");
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            g.entries(i, k) = rows.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
        }
    }
    g.points = points_from_json(j.at("points"));
    return g;
}

// ---------------------------------------------------------------------------

void write_dataset_csv(std::ostream& os, const LabeledSet& set, const Metadata& extra)
{
    Metadata meta{{"generator", set.generator}, {"seed", std::to_string(set.seed)}};
    for (const auto& [k, v] : set.params) {
        meta.emplace_back("param." + k, v);
    }
    meta.insert(meta.end(), extra.begin(), extra.end());
    write_metadata(os, meta);
    const std::size_t dim = set.dim();
    for (std::size_t c = 0; c < dim; ++c) {
        os << 'x' << (c + 1) << ',';
    }
    os << "y\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t c = 0; c < dim; ++c) {
            os << format_float(set.points[i][c]) << ',';
        }
        os << format_float(set.targets[i]) << '\n';
    }
}

LabeledSet read_dataset_csv(std::istream& is)
{
    const CsvTable t = read_csv(is);
    LabeledSet set;
    for (const auto& [k, v] : t.meta) {
        if (k == "generator") {
            set.generator = v;
        } else if (k == "seed") {
            set.seed = std::stoull(v);
        } else if (k.rfind("param.", 0) == 0) {
            set.params[k.substr(6)] = v;
        }
    }
    for (const auto& row : t.rows) {
        if (row.size() < 2) {
            throw ConfigError("dataset rows need at least one coordinate and a target");
        }
        set.points.emplace_back(std::vector<double>(row.begin(), row.end() - 1));
        set.targets.push_back(row.back());
        if (set.points.back().dim() != set.points.front().dim()) {
            throw ConfigError("dataset rows have inconsistent widths");
        }
    }
    return set;
}

// ---------------------------------------------------------------------------

nlohmann::json model_to_json(const RegressionModel& model)
{
    return {{"format", "qkm.krr"},
            {"lambda", model.lambda},
            {"alphas", to_vector(model.alphas)},
            {"targets", to_vector(model.targets)},
            {"residual", model.residual},
            {"train_points", points_to_json(model.train_points)}};
}

RegressionModel regression_model_from_json(const nlohmann::json& j)
{
    if (j.value("format", "") != "qkm.krr") {
        throw ConfigError("not a ridge regression model document");
    }
    RegressionModel m;
    m.lambda = j.at("lambda").get<double>();
    m.alphas = from_vector(j.at("alphas").get<std::vector<double>>());
    m.targets = from_vector(j.at("targets").get<std::vector<double>>());
    m.residual = j.at("residual").get<double>();
    m.train_points = points_from_json(j.at("train_points"));
    return m;
}

nlohmann::json model_to_json(const SvmModel& model)
{
    nlohmann::json j = {{"format", "qkm.svm"},
                        {"alphas", to_vector(model.alphas)},
                        {"bias", model.bias},
                        {"labels", to_vector(model.labels)},
                        {"support_indices", model.support_indices},
                        {"c_cap", model.c_cap},
                        {"max_violation", model.max_violation},
                        {"iterations", model.iterations},
                        {"min_eigenvalue", model.min_eigenvalue},
                        {"max_eigenvalue", model.max_eigenvalue}};
    j["warning"] = model.warning ? nlohmann::json(*model.warning) : nlohmann::json(nullptr);
    return j;
}

SvmModel svm_model_from_json(const nlohmann::json& j)
{
    if (j.value("format", "") != "qkm.svm") {
        throw ConfigError("not an SVM model document");
    }
    SvmModel m;
    m.alphas = from_vector(j.at("alphas").get<std::vector<double>>());
    m.bias = j.at("bias").get<double>();
    m.labels = from_vector(j.at("labels").get<std::vector<double>>());
    m.support_indices = j.at("support_indices").get<std::vector<Eigen::Index>>();
    m.c_cap = j.at("c_cap").get<double>();
    m.max_violation = j.at("max_violation").get<double>();
    m.iterations = j.at("iterations").get<long>();
    m.min_eigenvalue = j.at("min_eigenvalue").get<double>();
    m.max_eigenvalue = j.at("max_eigenvalue").get<double>();
    if (!j.at("warning").is_null()) {
        m.warning = j.at("warning").get<std::string>();
    }
    return m;
}

} // namespace qkm
