#include "wulff/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "wulff/error.hpp"

namespace wulff {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void Report::kv(const std::string& key, const std::string& value) {
    text_ += key + " " + value + "\n";
}

void Report::kv(const std::string& key, double value) { kv(key, format_double(value)); }

void Report::kv(const std::string& key, long value) { kv(key, std::to_string(value)); }

void Report::check(const std::string& name, double lhs, double rhs, double tol, bool pass) {
    text_ += "check " + name + " " + format_double(lhs) + " " + format_double(rhs) + " " +
             format_double(tol) + (pass ? " pass\n" : " fail\n");
    if (!pass) ++failures_;
}

void Report::write(const std::filesystem::path& path) const {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f || !(f << text_))
            throw_error("io:write-failed", "cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw_error("io:write-failed", "cannot rename '" + tmp.string() + "' to '" +
                                           path.string() + "': " + ec.message());
}

void Report::print() const { std::cout << text_; }

} // namespace wulff
