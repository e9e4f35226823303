#pragma once

#include <istream>
#include <string>

#include "otrimle/core_model.hpp"
#include "otrimle/dgp.hpp"
#include "otrimle/methods.hpp"
#include "otrimle/truth_eval.hpp"

namespace otrimle {

/// Version written into, and required from, every structured result file.
inline constexpr int kSchemaVersion = 1;

/// Delimiter-separated numeric table, one observation per row. The delimiter
/// (comma, semicolon, tab or blanks) is detected from the first row; a first
/// row that is not numeric is a header. Blank lines and lines starting with
/// '#' are skipped. Errors name the offending line.
Dataset parse_table(std::istream& in, const std::string& source = "input");
Dataset read_table(const std::string& path);
void write_table(const std::string& path, const Dataset& data);

/// One integer label per line under a "label" header.
Labeling parse_labels(std::istream& in, const std::string& source = "input");
Labeling read_labels(const std::string& path);
void write_labels(const std::string& path, const Labeling& labels);

std::string fit_result_to_text(const FitResult& result);
FitResult fit_result_from_text(const std::string& text);

std::string truth_to_text(const TruthParams& truth);
TruthParams truth_from_text(const std::string& text);

std::string spec_to_text(const DgpSpec& spec);
DgpSpec spec_from_text(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace otrimle
