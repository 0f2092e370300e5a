#include "sparsewarn/dataset.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

constexpr char kBinaryMagic[5] = {'F', 'V', 'E', 'C', '1'};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw DataError(path + ": " + what);
}

double parse_real(std::string_view tok, const std::string& path, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    fail(path, "line " + std::to_string(line_no) + ": malformed real '" + std::string(tok) + "'");
  return v;
}

std::uint32_t read_u32(std::istream& in, const std::string& path, std::streamoff offset) {
  unsigned char buf[4];
  if (!in.read(reinterpret_cast<char*>(buf), 4))
    fail(path, "truncated file at byte offset " + std::to_string(offset));
  return static_cast<std::uint32_t>(buf[0]) | (static_cast<std::uint32_t>(buf[1]) << 8) |
         (static_cast<std::uint32_t>(buf[2]) << 16) | (static_cast<std::uint32_t>(buf[3]) << 24);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

float read_f32(std::istream& in, const std::string& path, std::streamoff offset) {
  std::uint32_t bits = read_u32(in, path, offset);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

void write_f32(std::ostream& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  write_u32(out, bits);
}

std::vector<std::string> default_class_names(int c) {
  std::vector<std::string> names(static_cast<std::size_t>(c));
  for (int i = 0; i < c; ++i) names[static_cast<std::size_t>(i)] = "class" + std::to_string(i);
  return names;
}

FeatureDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");

  std::string header;
  if (!std::getline(in, header)) fail(path, "line 1: empty file, expected header");

  long long n = -1, d = -1, c = -1;
  {
    std::istringstream hs(header);
    std::string hash, tag, ver, kv;
    hs >> hash >> tag >> ver;
    if (hash != "#" || tag != "fvec" || ver != "v1")
      fail(path, "line 1: malformed header, expected '# fvec v1 n=<N> d=<D> c=<C>'");
    while (hs >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) fail(path, "line 1: malformed header field '" + kv + "'");
      const std::string key = kv.substr(0, eq);
      long long val = 0;
      auto sv = std::string_view(kv).substr(eq + 1);
      auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), val);
      if (ec != std::errc{} || ptr != sv.data() + sv.size() || val < 0)
        fail(path, "line 1: malformed header value '" + kv + "'");
      if (key == "n") n = val;
      else if (key == "d") d = val;
      else if (key == "c") c = val;
      else fail(path, "line 1: unknown header key '" + key + "'");
    }
    if (n <= 0 || d <= 0 || c <= 0)
      fail(path, "line 1: header must define positive n, d and c");
  }

  FeatureDataset ds;
  ds.samples.resize(n, d);
  ds.labels.resize(static_cast<std::size_t>(n));
  ds.class_names = default_class_names(static_cast<int>(c));

  std::string line;
  for (long long row = 0; row < n; ++row) {
    const std::size_t line_no = static_cast<std::size_t>(row) + 2;
    if (!std::getline(in, line))
      fail(path, "line " + std::to_string(line_no) + ": unexpected end of file, header declared n=" +
                     std::to_string(n));
    std::size_t pos = 0;
    long long field = 0;
    long long label = -1;
    while (true) {
      std::size_t comma = line.find(',', pos);
      std::string_view tok(line.data() + pos,
                           (comma == std::string::npos ? line.size() : comma) - pos);
      if (field == 0) {
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), label);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
          fail(path, "line " + std::to_string(line_no) + ": malformed label '" + std::string(tok) + "'");
        if (label < 0 || label >= c)
          fail(path, "line " + std::to_string(line_no) + ": unknown label index " +
                         std::to_string(label) + ", header declared c=" + std::to_string(c));
        ds.labels[static_cast<std::size_t>(row)] = static_cast<int>(label);
      } else {
        if (field > d)
          fail(path, "line " + std::to_string(line_no) + ": row has more than d=" +
                         std::to_string(d) + " features");
        const double v = parse_real(tok, path, line_no);
        if (!std::isfinite(v))
          fail(path, "line " + std::to_string(line_no) + ": non-finite value in column " +
                         std::to_string(field));
        ds.samples(row, field - 1) = v;
      }
      ++field;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (field - 1 != d)
      fail(path, "line " + std::to_string(line_no) + ": row length " + std::to_string(field - 1) +
                     " does not match d=" + std::to_string(d));
  }
  return ds;
}

FeatureDataset load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");

  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kBinaryMagic, 5) != 0)
    fail(path, "byte offset 0: bad magic, expected FVEC1");

  const std::uint32_t n = read_u32(in, path, 5);
  const std::uint32_t d = read_u32(in, path, 9);
  const std::uint32_t c = read_u32(in, path, 13);
  if (n == 0 || d == 0 || c == 0) fail(path, "byte offset 5: zero n, d or c in header");

  FeatureDataset ds;
  ds.samples.resize(n, d);
  ds.labels.resize(n);
  ds.class_names = default_class_names(static_cast<int>(c));

  std::streamoff offset = 17;
  for (std::uint32_t row = 0; row < n; ++row) {
    const std::uint32_t label = read_u32(in, path, offset);
    if (label >= c)
      fail(path, "byte offset " + std::to_string(offset) + ": unknown label index " +
                     std::to_string(label) + ", header declared c=" + std::to_string(c));
    ds.labels[row] = static_cast<int>(label);
    offset += 4;
    for (std::uint32_t j = 0; j < d; ++j) {
      const float v = read_f32(in, path, offset);
      if (!std::isfinite(v))
        fail(path, "byte offset " + std::to_string(offset) + ": non-finite value");
      ds.samples(row, j) = static_cast<double>(v);
      offset += 4;
    }
  }
  return ds;
}

}  // namespace

std::vector<int> FeatureDataset::class_counts() const {
  std::vector<int> counts(class_names.size(), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

FeatureDataset FeatureDataset::subset(const std::vector<int>& indices) const {
  FeatureDataset out;
  out.samples.resize(static_cast<Eigen::Index>(indices.size()), samples.cols());
  out.labels.resize(indices.size());
  out.class_names = class_names;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    out.samples.row(static_cast<Eigen::Index>(i)) = samples.row(indices[i]);
    out.labels[i] = labels[static_cast<std::size_t>(indices[i])];
  }
  return out;
}

void FeatureDataset::validate() const {
  if (num_samples() <= 0) throw DataError("dataset: empty sample matrix");
  if (labels.size() != static_cast<std::size_t>(num_samples()))
    throw DataError("dataset: label count does not match sample count");
  const int c = num_classes();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= c)
      throw DataError("dataset: label out of range at row " + std::to_string(i));
  }
  if (!samples.allFinite()) throw DataError("dataset: non-finite value in sample matrix");
}

FeatureDataset load_features(const std::string& path, FileFormat format) {
  FeatureDataset ds = format == FileFormat::kCsv ? load_csv(path) : load_binary(path);
  ds.validate();
  return ds;
}

void save_features(const FeatureDataset& ds, const std::string& path, FileFormat format) {
  if (format == FileFormat::kCsv) {
    std::ofstream out(path);
    if (!out) fail(path, "cannot open file for writing");
    out << "# fvec v1 n=" << ds.num_samples() << " d=" << ds.dim() << " c=" << ds.num_classes()
        << "\n";
    char buf[64];
    for (int i = 0; i < ds.num_samples(); ++i) {
      out << ds.labels[static_cast<std::size_t>(i)];
      for (int j = 0; j < ds.dim(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", ds.samples(i, j));
        out << ',' << buf;
      }
      out << '\n';
    }
    if (!out) fail(path, "write failure");
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    out.write(kBinaryMagic, 5);
    write_u32(out, static_cast<std::uint32_t>(ds.num_samples()));
    write_u32(out, static_cast<std::uint32_t>(ds.dim()));
    write_u32(out, static_cast<std::uint32_t>(ds.num_classes()));
    for (int i = 0; i < ds.num_samples(); ++i) {
      write_u32(out, static_cast<std::uint32_t>(ds.labels[static_cast<std::size_t>(i)]));
      for (int j = 0; j < ds.dim(); ++j) write_f32(out, static_cast<float>(ds.samples(i, j)));
    }
    if (!out) fail(path, "write failure");
  }
}

}  // namespace sparsewarn
