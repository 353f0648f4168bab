#include "grid.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace spherehit::cli {

namespace {

double parse_real(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw std::invalid_argument("not a finite real: '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_real(part));
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty grid");
  std::vector<double> out;
  if (text.find(':') == std::string::npos) {
    out = parse_vector(text);
  } else {
    const bool geometric = text.front() == 'g';
    const std::vector<std::string> parts = split(geometric ? text.substr(1) : text, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:count");
    const double a = parse_real(parts[0]);
    const double b = parse_real(parts[1]);
    int n = 0;
    auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || n < 1) {
      throw std::invalid_argument("grid count must be a positive integer");
    }
    if (geometric && !(a > 0.0 && b > 0.0)) {
      throw std::invalid_argument("geometric grid needs positive end points");
    }
    if (n == 1) {
      out.push_back(a);
    } else {
      for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / (n - 1);
        out.push_back(geometric ? a * std::pow(b / a, f) : a + (b - a) * f);
      }
      out.back() = b;
    }
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
  return out;
}

}  // namespace spherehit::cli
