#ifndef IMPUTEKIT_ERRORS_HPP
#define IMPUTEKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace imputekit {

// Error categories map 1:1 onto CLI exit codes:
//   ConfigError -> 2, IoError -> 3, ComputeError -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration, schema violations, precondition failures the caller
// can fix by changing inputs or flags.
class ConfigError : public Error {
public:
    using Error::Error;
};

// File system and parse failures.
class IoError : public Error {
public:
    using Error::Error;
};

// Numerical or data-state failures discovered mid-computation.
class ComputeError : public Error {
public:
    using Error::Error;
};

class EmptyColumnError : public ComputeError {
public:
    explicit EmptyColumnError(const std::string& column)
        : ComputeError("column '" + column + "' has no observed values"),
          column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class DegenerateColumnError : public ComputeError {
public:
    explicit DegenerateColumnError(const std::string& column)
        : ComputeError("column '" + column +
                       "' has zero variance over observed cells"),
          column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

class IsolatedRowError : public ComputeError {
public:
    IsolatedRowError(std::size_t row, const std::string& column)
        : ComputeError("no qualifying donor for cell (row " +
                       std::to_string(row) + ", column '" + column + "')"),
          row_(row), column_(column) {}
    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class RankDeficiencyError : public ComputeError {
public:
    explicit RankDeficiencyError(const std::string& column)
        : ComputeError("design matrix is rank deficient: column '" + column +
                       "' is linearly dependent on the others"),
          column_(column) {}
    const std::string& column() const { return column_; }

private:
    std::string column_;
};

}  // namespace imputekit

#endif  // IMPUTEKIT_ERRORS_HPP
