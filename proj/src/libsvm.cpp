#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include "taufpl/data.hpp"
#include "taufpl/error.hpp"

namespace taufpl {

namespace {

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_index(std::string_view s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view next_token(std::string_view& rest) {
  std::size_t b = 0;
  while (b < rest.size() && (rest[b] == ' ' || rest[b] == '\t' || rest[b] == '\r')) ++b;
  std::size_t e = b;
  while (e < rest.size() && rest[e] != ' ' && rest[e] != '\t' && rest[e] != '\r') ++e;
  const std::string_view tok = rest.substr(b, e - b);
  rest.remove_prefix(e);
  return tok;
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const ParseOptions& opts) {
  using Entry = FeatureMatrix::Entry;
  std::vector<std::vector<Entry>> pos, neg;
  std::size_t dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    const std::string_view label_tok = next_token(rest);
    if (label_tok.empty()) continue;

    double label_value = 0.0;
    if (!parse_double(label_tok, label_value) || !std::isfinite(label_value) ||
        label_value != std::trunc(label_value)) {
      throw ParseError(lineno, "malformed label '" + std::string(label_tok) + "'");
    }
    std::vector<Entry> row;
    std::size_t last = 0;
    for (std::string_view tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, "malformed token '" + std::string(tok) + "'");
      }
      std::size_t idx = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), idx) || idx == 0) {
        throw ParseError(lineno, "malformed index in '" + std::string(tok) + "'");
      }
      if (!parse_double(tok.substr(colon + 1), value)) {
        throw ParseError(lineno, "malformed value in '" + std::string(tok) + "'");
      }
      if (!std::isfinite(value)) throw ParseError(lineno, "non-finite value in '" + std::string(tok) + "'");
      if (idx <= last) throw ParseError(lineno, "indices not strictly increasing at '" + std::string(tok) + "'");
      last = idx;
      row.push_back({idx - 1, value});
    }
    dim = std::max(dim, last);
    (static_cast<long long>(label_value) == opts.positive_label ? pos : neg).push_back(std::move(row));
  }
  if (pos.empty() && neg.empty() && !opts.allow_empty) throw DataError("no instances");
  dim = std::max({dim, opts.min_dim, std::size_t{1}});
  Dataset ds{FeatureMatrix::sparse(dim, std::move(pos)), FeatureMatrix::sparse(dim, std::move(neg))};
  return ds.with_storage(opts.dense_max_dim);
}

Dataset read_libsvm_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return parse_libsvm(in, opts);
}

void write_libsvm(std::ostream& out, const Dataset& ds) {
  std::string line;
  auto emit = [&](const FeatureMatrix& x, const char* label) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      line = label;
      for (const auto& e : x.row_entries(i)) {
        line += ' ';
        line += std::to_string(e.col + 1);
        line += ':';
        append_double(line, e.value);
      }
      line += '\n';
      out << line;
    }
  };
  emit(ds.positives, "+1");
  emit(ds.negatives, "-1");
}

}  // namespace taufpl
