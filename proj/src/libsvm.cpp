#include "asprox/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace asprox {

namespace {

bool parse_double(std::string_view s, double &out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

int map_label(double raw, label_mapping mapping, std::size_t line) {
  switch (mapping) {
    case label_mapping::signed_unit:
      if (raw == 1.0) return 1;
      if (raw == -1.0) return -1;
      break;
    case label_mapping::zero_one:
      if (raw == 1.0) return 1;
      if (raw == 0.0) return -1;
      break;
    case label_mapping::one_two:
      if (raw == 2.0) return 1;
      if (raw == 1.0) return -1;
      break;
  }
  throw data_error("label " + std::to_string(raw) +
                       " not valid for the configured label mapping",
                   line);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

label_mapping parse_label_mapping(std::string_view name) {
  if (name == "pm1" || name == "signed" || name == "-1,1") return label_mapping::signed_unit;
  if (name == "01" || name == "0,1") return label_mapping::zero_one;
  if (name == "12" || name == "1,2") return label_mapping::one_two;
  throw std::invalid_argument("unknown label mapping '" + std::string(name) + "'");
}

dataset parse_libsvm(std::istream &in, const libsvm_options &opts) {
  std::vector<sparse_row> rows;
  std::vector<int> labels;
  std::size_t max_index = 0;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest(line);
    if (auto hash = rest.find('#'); hash != std::string_view::npos)
      rest = rest.substr(0, hash);

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < rest.size()) {
      while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t' || rest[pos] == '\r'))
        ++pos;
      const std::size_t start = pos;
      while (pos < rest.size() && rest[pos] != ' ' && rest[pos] != '\t' && rest[pos] != '\r')
        ++pos;
      if (pos > start) tokens.push_back(rest.substr(start, pos - start));
    }
    if (tokens.empty()) continue;

    double raw_label = 0.0;
    if (!parse_double(tokens[0], raw_label))
      throw data_error("cannot parse label '" + std::string(tokens[0]) + "'", lineno);
    labels.push_back(map_label(raw_label, opts.labels, lineno));

    sparse_row row;
    row.reserve(tokens.size() - 1);
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw data_error("feature '" + std::string(tok) + "' lacks ':'", lineno);
      const auto idx_str = tok.substr(0, colon);
      unsigned long long idx = 0;
      auto [ptr, ec] = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), idx);
      if (ec != std::errc() || ptr != idx_str.data() + idx_str.size() || idx == 0 ||
          idx > 0xffffffffULL)
        throw data_error("bad feature index '" + std::string(idx_str) + "'", lineno);
      double value = 0.0;
      if (!parse_double(tok.substr(colon + 1), value))
        throw data_error("bad feature value in '" + std::string(tok) + "'", lineno);
      row.push_back({static_cast<std::uint32_t>(idx - 1), value});
      max_index = std::max<std::size_t>(max_index, idx);
    }
    std::sort(row.begin(), row.end(),
              [](const sparse_entry &a, const sparse_entry &b) { return a.index < b.index; });
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k].index == row[k - 1].index)
        throw data_error("duplicate feature index " + std::to_string(row[k].index + 1),
                         lineno);
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw data_error("no examples in input");
  std::size_t dim = std::max<std::size_t>(max_index, 1);
  if (opts.dim) {
    if (*opts.dim < max_index)
      throw data_error("feature index " + std::to_string(max_index) +
                       " exceeds configured dimension " + std::to_string(*opts.dim));
    dim = *opts.dim;
  }
  return dataset(std::move(rows), std::move(labels), dim);
}

dataset parse_libsvm(const std::filesystem::path &path, const libsvm_options &opts) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open " + path.string());
  return parse_libsvm(in, opts);
}

void write_libsvm(const dataset &data, std::ostream &out) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << (data.label(i) > 0 ? "+1" : "-1");
    for (const auto &e : data.row(i))
      out << ' ' << (e.index + 1) << ':' << format_double(e.value);
    out << '\n';
  }
}

void write_libsvm(const dataset &data, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write " + path.string());
  write_libsvm(data, out);
}

}  // namespace asprox
