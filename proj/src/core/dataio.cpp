#include "core/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/rng.hpp"

namespace mlrank {

namespace {

[[noreturn]] void parse_fail(const std::string& path, long line_no,
                             const std::string& message) {
  fail(ErrorCode::kParse,
       path + ":" + std::to_string(line_no) + ": " + message);
}

bool parse_int(std::string_view text, int& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

void format_double(std::string& line, double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  line.append(buf, ptr);
}

// A header line whose tokens are all `m=<int>`/`d=<int>` assignments
// (optionally '#'-prefixed) declares dimensions; both may share one line or
// arrive on separate lines. Returns false for ordinary comments.
bool parse_dimension_line(std::string_view body, int& m, int& d) {
  std::istringstream tokens{std::string(body)};
  std::string token;
  bool any = false;
  int new_m = 0, new_d = 0;
  while (tokens >> token) {
    std::string_view t = token;
    if (!t.empty() && t.front() == '#') t.remove_prefix(1);
    int value = 0;
    if (t.size() > 2 && t[1] == '=' && parse_int(t.substr(2), value) &&
        value > 0) {
      if (t[0] == 'm')
        new_m = value;
      else if (t[0] == 'd')
        new_d = value;
      else
        return false;
      any = true;
      continue;
    }
    return false;
  }
  if (!any) return false;
  m = new_m;
  d = new_d;
  return true;
}

}  // namespace

void MultilabelDataset::add_instance(std::span<const double> x,
                                     const LabelVector& y) {
  require(static_cast<int>(x.size()) == d, ErrorCode::kDimensionMismatch,
          "feature length does not match dataset dimension");
  require(static_cast<int>(y.size()) == m, ErrorCode::kDimensionMismatch,
          "label length does not match dataset label count");
  features.insert(features.end(), x.begin(), x.end());
  labels.insert(labels.end(), y.bits.begin(), y.bits.end());
}

void MultilabelDataset::validate() const {
  require(m >= 2, ErrorCode::kInvalidArgument, "dataset needs m >= 2 labels");
  require(d >= 1, ErrorCode::kInvalidArgument, "dataset needs d >= 1 features");
  require(features.size() % static_cast<std::size_t>(d) == 0 &&
              labels.size() % static_cast<std::size_t>(m) == 0 &&
              features.size() / static_cast<std::size_t>(d) ==
                  labels.size() / static_cast<std::size_t>(m),
          ErrorCode::kInvalidArgument, "feature/label storage out of sync");
  for (double v : features)
    require(std::isfinite(v), ErrorCode::kInvalidArgument,
            "non-finite feature value");
  for (std::uint8_t b : labels)
    require(b == 0 || b == 1, ErrorCode::kInvalidArgument,
            "label bits must be 0 or 1");
}

MultilabelDataset read_sparse(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);

  MultilabelDataset data;
  bool have_dims = false;
  std::string line;
  long line_no = 0;
  std::vector<double> x;
  std::vector<std::uint8_t> bits;
  std::vector<bool> seen_feature;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (line.front() == '#') {
      int m = 0, d = 0;
      if (parse_dimension_line(line, m, d)) {
        if ((m > 0 && data.m > 0) || (d > 0 && data.d > 0))
          parse_fail(path, line_no, "duplicate dimension header");
        if (m > 0) data.m = m;
        if (d > 0) data.d = d;
        have_dims = data.m > 0 && data.d > 0;
      } else {
        data.comments.push_back(line.substr(1));
      }
      continue;
    }

    if (!have_dims)
      parse_fail(path, line_no, "instance before '#m=<int> #d=<int>' header");

    x.assign(data.d, 0.0);
    bits.assign(data.m, 0);
    seen_feature.assign(data.d, false);

    const std::size_t sp = line.find(' ');
    const std::string_view label_field =
        std::string_view(line).substr(0, sp == std::string::npos ? line.size() : sp);

    std::size_t start = 0;
    while (start < label_field.size()) {
      std::size_t comma = label_field.find(',', start);
      if (comma == std::string_view::npos) comma = label_field.size();
      int idx = 0;
      if (!parse_int(label_field.substr(start, comma - start), idx))
        parse_fail(path, line_no, "bad label index");
      if (idx < 0 || idx >= data.m)
        parse_fail(path, line_no,
                   "label index " + std::to_string(idx) + " out of range [0, " +
                       std::to_string(data.m) + ")");
      if (bits[idx]) parse_fail(path, line_no, "duplicate label index");
      bits[idx] = 1;
      start = comma + 1;
    }

    if (sp != std::string::npos) {
      std::size_t pos = sp + 1;
      while (pos < line.size()) {
        std::size_t next = line.find(' ', pos);
        if (next == std::string::npos) next = line.size();
        const std::string_view token = std::string_view(line).substr(pos, next - pos);
        pos = next + 1;
        if (token.empty()) continue;
        const std::size_t colon = token.find(':');
        if (colon == std::string_view::npos)
          parse_fail(path, line_no, "feature token missing ':'");
        int idx = 0;
        double value = 0.0;
        if (!parse_int(token.substr(0, colon), idx))
          parse_fail(path, line_no, "bad feature index");
        if (idx < 0 || idx >= data.d)
          parse_fail(path, line_no,
                     "feature index " + std::to_string(idx) +
                         " out of range [0, " + std::to_string(data.d) + ")");
        if (!parse_double(token.substr(colon + 1), value))
          parse_fail(path, line_no, "bad feature value");
        if (!std::isfinite(value))
          parse_fail(path, line_no, "non-finite feature value");
        if (seen_feature[idx])
          parse_fail(path, line_no, "duplicate feature index");
        seen_feature[idx] = true;
        x[idx] = value;
      }
    }

    data.features.insert(data.features.end(), x.begin(), x.end());
    data.labels.insert(data.labels.end(), bits.begin(), bits.end());
  }

  if (!have_dims) fail(ErrorCode::kParse, path + ": missing dimension header");
  data.validate();
  return data;
}

void write_sparse(const MultilabelDataset& data, const std::string& path) {
  data.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);

  out << "#m=" << data.m << " #d=" << data.d << '\n';
  for (const std::string& comment : data.comments) out << '#' << comment << '\n';

  std::string line;
  for (std::size_t n = 0; n < data.size(); ++n) {
    line.clear();
    bool first = true;
    for (int i = 0; i < data.m; ++i) {
      if (!data.label_bit(n, i)) continue;
      if (!first) line += ',';
      line += std::to_string(i);
      first = false;
    }
    const std::span<const double> x = data.features_of(n);
    bool any_feature = false;
    for (int j = 0; j < data.d; ++j) {
      if (x[j] == 0.0 && !std::signbit(x[j])) continue;
      line += ' ';
      line += std::to_string(j);
      line += ':';
      format_double(line, x[j]);
      any_feature = true;
    }
    if (first && !any_feature) line = " ";
    out << line << '\n';
  }
  if (!out) fail(ErrorCode::kIo, "write failed: " + path);
}

std::pair<MultilabelDataset, MultilabelDataset> split(
    const MultilabelDataset& data, double fraction, std::uint64_t seed) {
  require(fraction > 0.0 && fraction < 1.0, ErrorCode::kInvalidArgument,
          "split fraction must be in (0, 1)");
  const std::size_t n = data.size();
  const std::size_t n_train =
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  require(n_train >= 1 && n_train < n, ErrorCode::kInvalidArgument,
          "split leaves an empty side");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(i + 1)]);

  MultilabelDataset train, holdout;
  train.m = holdout.m = data.m;
  train.d = holdout.d = data.d;
  train.comments = holdout.comments = data.comments;
  for (std::size_t k = 0; k < n; ++k) {
    MultilabelDataset& side = k < n_train ? train : holdout;
    side.add_instance(data.features_of(order[k]), data.labels_of(order[k]));
  }
  return {std::move(train), std::move(holdout)};
}

}  // namespace mlrank
