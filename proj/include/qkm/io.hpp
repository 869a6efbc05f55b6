// io.hpp
// Text formats shared by the CLI and tests.
//
// CSV: comma separated, LF line endings, floats at 17 significant digits,
// metadata as leading "# key=value" lines.

#pragma once

#include "qkm/datasets.hpp"
#include "qkm/learners.hpp"
#include "qkm/qkernel.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qkm {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// %.17g
std::string format_float(double v);

// Parses a float written by format_float (or any strtod-compatible text).
double parse_float(const std::string& text);

void write_metadata(std::ostream& os, const Metadata& meta);

struct CsvTable {
    Metadata meta;
    std::vector<std::string> header;  // empty when the file has no header row
    std::vector<std::vector<double>> rows;

    // Value of a metadata key; throws ConfigError when missing.
    const std::string& get(const std::string& key) const;
};

// Reads '#' metadata lines, an optional non-numeric header row, numeric rows.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& contents);

// --- Gram matrices ---------------------------------------------------------

Metadata gram_metadata(const GramMeta& meta);

// Row-major entries, no header row; `extra` is appended after the Gram keys.
void write_gram_csv(std::ostream& os, const GramMatrix& gram, const Metadata& extra = {});
GramMatrix read_gram_csv(std::istream& is);

nlohmann::json gram_to_json(const GramMatrix& gram, const Metadata& extra = {});
GramMatrix gram_from_json(const nlohmann::json& j);

// --- Datasets --------------------------------------------------------------

// Columns x1[,x2,...],y.
void write_dataset_csv(std::ostream& os, const LabeledSet& set, const Metadata& extra = {});
LabeledSet read_dataset_csv(std::istream& is);

// --- Models ----------------------------------------------------------------

nlohmann::json model_to_json(const RegressionModel& model);
RegressionModel regression_model_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const SvmModel& model);
SvmModel svm_model_from_json(const nlohmann::json& j);

} // namespace qkm
