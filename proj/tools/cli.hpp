#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tweedie::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Malformed CSV input. line() is 1-based.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, long line) : std::runtime_error(what), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

/// Reads a single numeric column. A non-numeric first line is taken as a
/// header; blank lines are skipped.
std::vector<double> read_column(std::istream& in);

/// Runs one subcommand. args excludes the program name. Results go to out,
/// errors to err as a JSON object; "-" as an input path reads from in.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace tweedie::cli
