#include "vibsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace vibsim {

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path)
    : path_(path), out_(path, std::ios::binary) {
    if (!out_)
        throw std::runtime_error("cannot open output file: " + path);
}

void CsvWriter::header(const std::string& line) {
    out_ << line << '\n';
}

void CsvWriter::field(const std::string& s) {
    if (row_started_)
        out_ << ',';
    out_ << s;
    row_started_ = true;
}

void CsvWriter::field(double v) {
    field(format_double(v));
}

void CsvWriter::field(long v) {
    field(std::to_string(v));
}

void CsvWriter::end_row() {
    out_ << '\n';
    row_started_ = false;
    if (!out_)
        throw std::runtime_error("write failure on: " + path_);
}

} // namespace vibsim
