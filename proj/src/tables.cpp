#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "hcmean/error.hpp"
#include "hcmean/harness.hpp"

namespace hcmean {

namespace {

constexpr const char* kCsvHeader =
    "family,gamma1,gamma2,p,n,mu_true,mu_hat,abs_bias,mse,ci_lower,ci_upper,cov_prob,length,failures,k_star_mean";

// Shortest text that parses back to the same double.
std::string exact(double value) {
    if (std::isnan(value)) return "nan";
    char buffer[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) break;
    }
    return buffer;
}

std::string fixed(double value, int decimals) {
    if (std::isnan(value)) return "-";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

double parse_double(const std::string& field, std::size_t row) {
    if (field == "nan") return std::nan("");
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ParseError(row, "not a number: '" + field + "'");
    }
    if (used != field.size()) throw ParseError(row, "not a number: '" + field + "'");
    return value;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<CellSummary>& summaries) {
    out << kCsvHeader << '\n';
    for (const auto& s : summaries) {
        out << to_string(s.family) << ',' << exact(s.gamma1) << ',' << exact(s.gamma2) << ',' << exact(s.p) << ','
            << s.n << ',' << exact(s.mu_true) << ',' << exact(s.mu_hat_mean) << ',' << exact(s.abs_bias) << ','
            << exact(s.mse) << ',' << exact(s.ci_mean_lower) << ',' << exact(s.ci_mean_upper) << ','
            << exact(s.cov_prob) << ',' << exact(s.ci_length_mean) << ',' << s.failures << ','
            << exact(s.k_star_mean) << '\n';
    }
}

std::vector<CellSummary> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ParseError(0, "unexpected summary header");
    std::vector<CellSummary> summaries;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string field; std::getline(ss, field, ',');) fields.push_back(field);
        if (fields.size() != 15) throw ParseError(row, "expected 15 columns");
        CellSummary s;
        s.family = parse_family(fields[0]);
        s.gamma1 = parse_double(fields[1], row);
        s.gamma2 = parse_double(fields[2], row);
        s.p = parse_double(fields[3], row);
        s.n = static_cast<std::size_t>(std::stoull(fields[4]));
        s.mu_true = parse_double(fields[5], row);
        s.mu_hat_mean = parse_double(fields[6], row);
        s.abs_bias = parse_double(fields[7], row);
        s.mse = parse_double(fields[8], row);
        s.ci_mean_lower = parse_double(fields[9], row);
        s.ci_mean_upper = parse_double(fields[10], row);
        s.cov_prob = parse_double(fields[11], row);
        s.ci_length_mean = parse_double(fields[12], row);
        s.failures = static_cast<std::size_t>(std::stoull(fields[13]));
        s.k_star_mean = parse_double(fields[14], row);
        summaries.push_back(s);
    }
    return summaries;
}

void write_markdown(std::ostream& out, const std::vector<CellSummary>& summaries) {
    // One block per (family, gamma1, p), rows in n order of appearance.
    std::vector<std::vector<const CellSummary*>> blocks;
    std::map<std::tuple<int, double, double>, std::size_t> index;
    for (const auto& s : summaries) {
        const auto key = std::make_tuple(static_cast<int>(s.family), s.gamma1, s.p);
        auto [it, inserted] = index.try_emplace(key, blocks.size());
        if (inserted) blocks.emplace_back();
        blocks[it->second].push_back(&s);
    }
    const CellSummary* previous = nullptr;
    for (const auto& block : blocks) {
        const CellSummary& head = *block.front();
        if (!previous || previous->family != head.family || previous->gamma1 != head.gamma1) {
            out << "## " << to_string(head.family) << ": gamma1 = " << fixed(head.gamma1, 1)
                << " -> mu = " << fixed(head.mu_true, 3) << "\n\n";
        }
        previous = &head;
        out << "### p = " << fixed(head.p, 2) << "\n\n";
        out << "| n | mu_hat | abs bias | mse | conf int | cov prob | length | failures |\n";
        out << "|---:|---:|---:|---:|:---:|---:|---:|---:|\n";
        for (const auto* s : block) {
            out << "| " << s->n << " | " << fixed(s->mu_hat_mean, 3) << " | " << fixed(s->abs_bias, 3) << " | "
                << fixed(s->mse, 3) << " | " << fixed(s->ci_mean_lower, 3) << "-" << fixed(s->ci_mean_upper, 3)
                << " | " << fixed(s->cov_prob, 2) << " | " << fixed(s->ci_length_mean, 3) << " | " << s->failures
                << " |\n";
        }
        out << '\n';
    }
}

void write_tables(const std::vector<CellSummary>& summaries, TableFormat format, const std::string& path) {
    if (summaries.empty()) throw std::invalid_argument("write_tables: no summaries");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    if (format == TableFormat::Csv)
        write_csv(out, summaries);
    else
        write_markdown(out, summaries);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace hcmean
