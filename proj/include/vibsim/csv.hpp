#ifndef VIBSIM_CSV_HPP
#define VIBSIM_CSV_HPP

#include <fstream>
#include <string>

namespace vibsim {

// Shortest decimal string that round-trips the exact double value.
std::string format_double(double v);

// CSV output with LF line endings regardless of platform.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);

    void header(const std::string& line);
    void field(const std::string& s);
    void field(double v);
    void field(long v);
    void end_row();

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    bool row_started_ = false;
};

} // namespace vibsim

#endif
