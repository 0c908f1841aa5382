#include <array>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "bitbandit/harness.hpp"

namespace bitbandit {
namespace {

constexpr std::size_t kFlushBytes = 1 << 20;

template <typename Int>
void append_int(std::string& out, Int v) {
  std::array<char, 24> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void append_double(std::string& out, double v) {
  std::array<char, 32> buf;
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 10);
  out.append(buf.data(), res.ptr);
}

template <typename T>
T parse_field(std::string_view s, const std::string& path, std::size_t line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(path + ":" + std::to_string(line) + ": bad field '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  std::string s;
  append_double(s, v);
  return s;
}

TraceWriter::TraceWriter(const std::string& path) : path_(path) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw Error("cannot open " + path + " for writing: " + std::strerror(errno));
  buf_.reserve(kFlushBytes + 256);
  buf_ += kTraceHeader;
  buf_ += '\n';
}

TraceWriter::~TraceWriter() {
  try {
    close();
  } catch (...) {
  }
}

void TraceWriter::write(const TraceRow& r) {
  append_int(buf_, r.run_id);
  buf_ += ',';
  append_int(buf_, r.seed);
  buf_ += ',';
  append_int(buf_, r.t);
  buf_ += ',';
  append_int(buf_, r.action_index);
  buf_ += ',';
  append_double(buf_, r.reward);
  buf_ += ',';
  append_double(buf_, r.inst_regret);
  buf_ += ',';
  append_double(buf_, r.cum_regret);
  buf_ += ',';
  append_int(buf_, r.bits_cum);
  buf_ += ',';
  append_int(buf_, r.overflow_flag);
  buf_ += ',';
  append_int(buf_, r.coverage_flag);
  buf_ += ',';
  append_int(buf_, r.phase);
  buf_ += '\n';
  if (buf_.size() >= kFlushBytes) flush_buffer();
}

void TraceWriter::flush_buffer() {
  if (buf_.empty()) return;
  if (std::fwrite(buf_.data(), 1, buf_.size(), file_) != buf_.size()) {
    throw Error("write failed for " + path_);
  }
  buf_.clear();
}

void TraceWriter::close() {
  if (!file_) return;
  flush_buffer();
  const int rc = std::fclose(file_);
  file_ = nullptr;
  if (rc != 0) throw Error("close failed for " + path_);
}

void write_csv(const std::vector<TraceRow>& rows, const std::string& path) {
  TraceWriter w(path);
  for (const auto& r : rows) w.write(r);
  w.close();
}

std::vector<TraceRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw Error(path + ": missing or unexpected header");
  }
  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  std::array<std::string_view, 11> f;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t start = 0, n = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (n == f.size()) throw Error(path + ":" + std::to_string(lineno) + ": too many fields");
        f[n++] = std::string_view(line).substr(start, i - start);
        start = i + 1;
      }
    }
    if (n != f.size()) throw Error(path + ":" + std::to_string(lineno) + ": expected 11 fields");
    TraceRow r;
    r.run_id = parse_field<std::int64_t>(f[0], path, lineno);
    r.seed = parse_field<std::uint64_t>(f[1], path, lineno);
    r.t = parse_field<std::int64_t>(f[2], path, lineno);
    r.action_index = parse_field<std::int64_t>(f[3], path, lineno);
    r.reward = parse_field<double>(f[4], path, lineno);
    r.inst_regret = parse_field<double>(f[5], path, lineno);
    r.cum_regret = parse_field<double>(f[6], path, lineno);
    r.bits_cum = parse_field<std::int64_t>(f[7], path, lineno);
    r.overflow_flag = parse_field<int>(f[8], path, lineno);
    r.coverage_flag = parse_field<int>(f[9], path, lineno);
    r.phase = parse_field<int>(f[10], path, lineno);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace bitbandit
