#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nhm {

/// Renders a double with 17 significant digits ("%.17g"), which round-trips
/// exactly. Negative zero is printed as "0" so that outputs do not depend on
/// the sign of cancelled terms.
std::string format_double(double x);

/// Minimal CSV emitter: header row, comma separators, '\n' line ends.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);

    void row(const std::vector<double>& values);
    /// Mixed row; strings are written verbatim and must not contain commas.
    void row(const std::vector<std::string>& cells);

    [[nodiscard]] std::size_t columns() const noexcept { return header_.size(); }

private:
    std::ostream& out_;
    std::vector<std::string> header_;
};

}  // namespace nhm
