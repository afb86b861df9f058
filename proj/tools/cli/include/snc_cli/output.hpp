#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace snc::cli {

using Json = nlohmann::ordered_json;

// Serializes with every floating-point number printed as %.17g, so values
// round-trip exactly. Non-finite numbers become null.
std::string dump_json(const Json& value, int indent = 2);

std::string format_double(double x);

// RFC 4180: fields quoted when they contain a comma, quote, CR or LF; rows end
// in CRLF.
std::string csv_field(const std::string& text);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace snc::cli
