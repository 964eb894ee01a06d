#include "sbloc/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace sbloc {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_cmat(std::ostream& os, const ComplexMatrix& m) {
  os << "cmat " << m.rows() << ' ' << m.cols() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      auto r = std::to_chars(buf, buf + sizeof(buf), m(i, j).real());
      *r.ptr++ = ' ';
      r = std::to_chars(r.ptr, buf + sizeof(buf), m(i, j).imag());
      *r.ptr++ = '\n';
      os.write(buf, r.ptr - buf);
    }
  }
}

std::string format_cmat(const ComplexMatrix& m) {
  std::ostringstream os;
  write_cmat(os, m);
  return os.str();
}

namespace {

class LineReader {
public:
  LineReader(std::string_view text, std::string_view name) : text_(text), name_(name) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size())
      return false;
    const auto end = text_.find('\n', pos_);
    const auto stop = end == std::string_view::npos ? text_.size() : end;
    line = text_.substr(pos_, stop - pos_);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    pos_ = stop + 1;
    ++line_no_;
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(std::string(name_) + ":" + std::to_string(line_no_) + ": " + msg);
  }

private:
  std::string_view text_;
  std::string_view name_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::string_view skip_spaces(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  return s;
}

template <typename T>
bool take_number(std::string_view& s, T& out) {
  s = skip_spaces(s);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc{} || res.ptr == s.data())
    return false;
  s.remove_prefix(static_cast<std::size_t>(res.ptr - s.data()));
  return true;
}

} // namespace

ComplexMatrix parse_cmat(std::string_view text, std::string_view source_name) {
  LineReader reader(text, source_name);
  std::string_view line;
  if (!reader.next(line))
    reader.fail("empty matrix file");
  line = skip_spaces(line);
  if (line.substr(0, 4) != "cmat")
    reader.fail("expected header 'cmat <rows> <cols>'");
  line.remove_prefix(4);
  long long rows = -1;
  long long cols = -1;
  if (!take_number(line, rows) || !take_number(line, cols) || rows < 0 || cols < 0 ||
      !skip_spaces(line).empty())
    reader.fail("malformed header, expected 'cmat <rows> <cols>'");

  ComplexMatrix m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      if (!reader.next(line))
        reader.fail("unexpected end of file, expected " + std::to_string(rows * cols) + " entries");
      double re = 0.0;
      double im = 0.0;
      if (!take_number(line, re) || !take_number(line, im) || !skip_spaces(line).empty())
        reader.fail("malformed entry, expected '<re> <im>'");
      if (!std::isfinite(re) || !std::isfinite(im))
        reader.fail("non-finite entry");
      m(i, j) = Complex(re, im);
    }
  }
  while (reader.next(line))
    if (!skip_spaces(line).empty())
      reader.fail("trailing data after " + std::to_string(rows * cols) + " entries");
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ComplexMatrix read_cmat(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_cmat(text, path.string());
}

void save_cmat(const std::filesystem::path& path, const ComplexMatrix& m) {
  write_file_atomic(path, format_cmat(m));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

} // namespace sbloc
