#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace wulff {

/// Line-oriented `key value...` report. Checks render as
/// `check <name> <lhs> <rhs> <tol> <pass|fail>`; float formatting is fixed so
/// identical runs produce byte-identical files.
class Report {
public:
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, long value);
    void check(const std::string& name, double lhs, double rhs, double tol, bool pass);

    bool all_pass() const { return failures_ == 0; }
    int failures() const { return failures_; }
    const std::string& text() const { return text_; }

    /// Atomic write: temp file in the target directory, then rename.
    void write(const std::filesystem::path& path) const;
    void print() const;

private:
    std::string text_;
    int failures_ = 0;
};

std::string format_double(double v);

} // namespace wulff
