#pragma once

// File formats and JSON encodings of every report type.

#include "cz.hpp"
#include "domination.hpp"
#include "hardy.hpp"

#include <json.hpp>

namespace sparsedom {

using Json = nlohmann::ordered_json;

/// One real per line, or comma separated; the count must be a power of two.
Signal parse_signal(const std::string& text);
Signal read_signal(const std::string& path);
std::string format_signal(const Signal& f);

/// Rows "depth,index,eps"; blank lines, '#' comments and a header row are skipped.
HaarMultiplier parse_multiplier(const std::string& text, int J);
HaarMultiplier read_multiplier(const std::string& path, int J);

/// Rows "depth,index". With J < 0 the grid depth is the deepest row.
SparseCollection parse_collection(const std::string& text, int J = -1);
SparseCollection read_collection(const std::string& path, int J = -1);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

Json to_json(const Interval& I);
Interval interval_from_json(const Json& j);

Json to_json(const DominationCertificate& c);
DominationCertificate certificate_from_json(const Json& j);

Json to_json(const SparseReport& r);
Json to_json(const AtomicDecomposition& d, bool with_values = true);
Json to_json(const Weak11Report& r);
Json to_json(const CZDecomposition& d, const CZCheck& check);
Json to_json(const LernerDecomposition& d);
Json haar_json(const HaarCoefficients& a);

/// JSON number or null for non-finite values.
Json number(double x);

} // namespace sparsedom
