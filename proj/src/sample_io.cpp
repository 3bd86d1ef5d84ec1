#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "hcmean/censoring.hpp"

namespace hcmean {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
bool parse_number(std::string_view text, T& value) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    return ec == std::errc() && ptr == end && !text.empty();
}

}  // namespace

std::vector<ObservationRow> parse_rows_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(0, "missing header");
    std::string_view header = line;
    if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
    const auto comma = header.find(',');
    if (comma == std::string_view::npos || trim(header.substr(0, comma)) != "z" ||
        trim(header.substr(comma + 1)) != "delta")
        throw ParseError(0, "header must be 'z,delta'");

    std::vector<ObservationRow> rows;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const std::string_view text = line;
        const auto sep = text.find(',');
        if (sep == std::string_view::npos) throw ParseError(row, "expected two columns");
        ObservationRow parsed{};
        if (!parse_number(text.substr(0, sep), parsed.z)) throw ParseError(row, "z is not a number");
        if (!parse_number(text.substr(sep + 1), parsed.delta) || (parsed.delta != 0 && parsed.delta != 1))
            throw ParseError(row, "delta must be 0 or 1");
        if (!(parsed.z > 0)) throw ParseError(row, "z must be positive");
        rows.push_back(parsed);
    }
    return rows;
}

CensoredSample<double> read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_sample<double>(parse_rows_csv(in));
}

}  // namespace hcmean
