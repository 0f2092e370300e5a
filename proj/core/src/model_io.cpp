#include "sparsewarn/model_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "sparsewarn/errors.hpp"

namespace sparsewarn {

namespace {

constexpr char kMagic[5] = {'S', 'W', 'R', 'N', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& in, const std::string& path) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw DataError(path + ": truncated container");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_blob(std::ostream& out, const std::vector<double>& blob) {
  write_u64(out, blob.size() * sizeof(double));
  for (double d : blob) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, 8);
    write_u64(out, bits);
  }
}

std::vector<double> read_blob(std::istream& in, const std::string& path) {
  const std::uint64_t bytes = read_u64(in, path);
  if (bytes % 8 != 0) throw DataError(path + ": blob length not a multiple of 8");
  std::vector<double> blob(bytes / 8);
  for (double& d : blob) {
    const std::uint64_t bits = read_u64(in, path);
    std::memcpy(&d, &bits, 8);
  }
  return blob;
}

std::vector<double> matrix_blob(const Eigen::MatrixXd& m) {
  std::vector<double> blob;
  blob.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) blob.push_back(m(r, c));
  return blob;
}

Eigen::MatrixXd blob_matrix(const std::vector<double>& blob, std::size_t& offset,
                            Eigen::Index rows, Eigen::Index cols, const std::string& path) {
  if (offset + static_cast<std::size_t>(rows * cols) > blob.size())
    throw DataError(path + ": blob shorter than the declared shape");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = blob[offset++];
  return m;
}

PlaneLayout plane_from_fields(int height, int width, int block_rows, int block_cols,
                              int classes) {
  PlaneLayout layout;
  layout.height = height;
  layout.width = width;
  layout.block_rows = block_rows;
  layout.block_cols = block_cols;
  layout.num_classes = classes;
  const int per_class = block_rows * block_cols;
  layout.atom_to_cell.resize(static_cast<std::size_t>(height) * width);
  layout.cell_to_atom.assign(static_cast<std::size_t>(height) * width, -1);
  for (int cls = 0; cls < classes; ++cls) {
    const int base_col = cls * block_cols;
    const int atom_base = cls * per_class;
    for (int j = 0; j < per_class; ++j) {
      const int r = j % block_rows;
      const int col = base_col + j / block_rows;
      const int cell = r * width + col;
      layout.atom_to_cell[static_cast<std::size_t>(atom_base + j)] = cell;
      layout.cell_to_atom[static_cast<std::size_t>(cell)] = atom_base + j;
    }
  }
  return layout;
}

}  // namespace

void save_model_bundle(const std::string& path, const ModelBundle& bundle) {
  std::ostringstream manifest;
  manifest << "sparsewarn-model v1\n";
  for (const auto& [k, v] : bundle.info) manifest << "info " << k << " = " << v << "\n";

  std::vector<std::vector<double>> blobs;
  if (bundle.projector) {
    manifest << "component projector rows=" << bundle.projector->out_dim()
             << " cols=" << bundle.projector->in_dim() << "\n";
    std::vector<double> blob = matrix_blob(bundle.projector->basis);
    for (Eigen::Index i = 0; i < bundle.projector->mean.size(); ++i)
      blob.push_back(bundle.projector->mean(i));
    for (Eigen::Index i = 0; i < bundle.projector->explained_var.size(); ++i)
      blob.push_back(bundle.projector->explained_var(i));
    blobs.push_back(std::move(blob));
  }
  if (bundle.norm) {
    manifest << "component normstats mode="
             << (bundle.norm->mode == NormMode::kZscore ? "zscore" : "unitnorm")
             << " dim=" << bundle.norm->mean.size() << "\n";
    std::vector<double> blob;
    for (Eigen::Index i = 0; i < bundle.norm->mean.size(); ++i) blob.push_back(bundle.norm->mean(i));
    for (Eigen::Index i = 0; i < bundle.norm->scale.size(); ++i)
      blob.push_back(bundle.norm->scale(i));
    blobs.push_back(std::move(blob));
  }
  if (bundle.dict) {
    manifest << "component dictionary rows=" << bundle.dict->measurement_dim()
             << " cols=" << bundle.dict->num_atoms() << " ranges=";
    for (std::size_t i = 0; i < bundle.dict->class_ranges.size(); ++i) {
      const auto& [b, e] = bundle.dict->class_ranges[i];
      manifest << (i ? "," : "") << b << ":" << e;
    }
    manifest << "\n";
    blobs.push_back(matrix_blob(bundle.dict->atoms));
  }
  if (bundle.denoiser) {
    manifest << "component denoiser rows=" << bundle.denoiser->op.rows()
             << " cols=" << bundle.denoiser->op.cols() << " lambda=" << bundle.denoiser->lambda
             << "\n";
    blobs.push_back(matrix_blob(bundle.denoiser->op));
  }
  if (bundle.plane) {
    manifest << "plane height=" << bundle.plane->height << " width=" << bundle.plane->width
             << " block_rows=" << bundle.plane->block_rows
             << " block_cols=" << bundle.plane->block_cols
             << " classes=" << bundle.plane->num_classes << "\n";
  }
  if (bundle.network_manifest) {
    manifest << "component network params=" << bundle.network_params.size() << "\n";
    manifest << "network-manifest-begin\n" << *bundle.network_manifest
             << "network-manifest-end\n";
    blobs.push_back(bundle.network_params);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path + ": cannot open file for writing");
  out.write(kMagic, 5);
  const std::string text = manifest.str();
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& blob : blobs) write_blob(out, blob);
  if (!out) throw DataError(path + ": write failure");
}

ModelBundle load_model_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0)
    throw DataError(path + ": bad magic, expected SWRN1");
  const std::uint64_t manifest_len = read_u64(in, path);
  std::string manifest(manifest_len, '\0');
  if (!in.read(manifest.data(), static_cast<std::streamsize>(manifest_len)))
    throw DataError(path + ": truncated manifest");

  ModelBundle bundle;
  std::istringstream ms(manifest);
  std::string line;
  if (!std::getline(ms, line) || line != "sparsewarn-model v1")
    throw DataError(path + ": unknown container version");

  bool in_net_manifest = false;
  std::string net_manifest;
  std::vector<std::string> components;
  std::vector<std::map<std::string, std::string>> component_attrs;
  while (std::getline(ms, line)) {
    if (in_net_manifest) {
      if (line == "network-manifest-end") {
        in_net_manifest = false;
        bundle.network_manifest = net_manifest;
      } else {
        net_manifest += line + "\n";
      }
      continue;
    }
    if (line == "network-manifest-begin") {
      in_net_manifest = true;
      continue;
    }
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "info") {
      std::string key, eq;
      ls >> key >> eq;
      std::string value;
      std::getline(ls, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      bundle.info[key] = value;
    } else if (tag == "component") {
      std::string name;
      ls >> name;
      components.push_back(name);
      component_attrs.emplace_back();
      auto& attrs = component_attrs.back();
      std::string kv;
      while (ls >> kv) {
        const auto eq = kv.find('=');
        if (eq != std::string::npos) attrs[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    } else if (tag == "plane") {
      std::map<std::string, std::string> attrs;
      std::string kv;
      while (ls >> kv) {
        const auto eq = kv.find('=');
        if (eq != std::string::npos) attrs[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      bundle.plane = plane_from_fields(std::stoi(attrs.at("height")), std::stoi(attrs.at("width")),
                                       std::stoi(attrs.at("block_rows")),
                                       std::stoi(attrs.at("block_cols")),
                                       std::stoi(attrs.at("classes")));
    }
  }

  for (std::size_t ci = 0; ci < components.size(); ++ci) {
    const std::vector<double> blob = read_blob(in, path);
    const auto& attrs = component_attrs[ci];
    std::size_t offset = 0;
    if (components[ci] == "projector") {
      const int rows = std::stoi(attrs.at("rows"));
      const int cols = std::stoi(attrs.at("cols"));
      Projector p;
      p.basis = blob_matrix(blob, offset, rows, cols, path);
      p.mean = blob_matrix(blob, offset, cols, 1, path);
      p.explained_var = blob_matrix(blob, offset, rows, 1, path);
      bundle.projector = std::move(p);
    } else if (components[ci] == "normstats") {
      const int dim = std::stoi(attrs.at("dim"));
      NormStats s;
      s.mode = attrs.at("mode") == "zscore" ? NormMode::kZscore : NormMode::kUnitNorm;
      s.mean = blob_matrix(blob, offset, dim, 1, path);
      s.scale = blob_matrix(blob, offset, dim, 1, path);
      bundle.norm = std::move(s);
    } else if (components[ci] == "dictionary") {
      const int rows = std::stoi(attrs.at("rows"));
      const int cols = std::stoi(attrs.at("cols"));
      Dictionary d;
      d.atoms = blob_matrix(blob, offset, rows, cols, path);
      std::stringstream rs(attrs.at("ranges"));
      std::string item;
      while (std::getline(rs, item, ',')) {
        const auto colon = item.find(':');
        d.class_ranges.emplace_back(std::stoi(item.substr(0, colon)),
                                    std::stoi(item.substr(colon + 1)));
      }
      bundle.dict = std::move(d);
    } else if (components[ci] == "denoiser") {
      const int rows = std::stoi(attrs.at("rows"));
      const int cols = std::stoi(attrs.at("cols"));
      RidgeDenoiser den;
      den.op = blob_matrix(blob, offset, rows, cols, path);
      den.lambda = std::stod(attrs.at("lambda"));
      bundle.denoiser = std::move(den);
    } else if (components[ci] == "network") {
      bundle.network_params = blob;
    } else {
      throw DataError(path + ": unknown component '" + components[ci] + "'");
    }
  }
  return bundle;
}

std::string inspect_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  char magic[5];
  if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0)
    throw DataError(path + ": bad magic, expected SWRN1");
  const std::uint64_t manifest_len = read_u64(in, path);
  std::string manifest(manifest_len, '\0');
  if (!in.read(manifest.data(), static_cast<std::streamsize>(manifest_len)))
    throw DataError(path + ": truncated manifest");

  std::ostringstream os;
  os << manifest;
  int blob_index = 0;
  while (in.peek() != EOF) {
    const std::uint64_t bytes = read_u64(in, path);
    in.seekg(static_cast<std::streamoff>(bytes), std::ios::cur);
    if (!in) throw DataError(path + ": truncated blob " + std::to_string(blob_index));
    os << "blob " << blob_index++ << ": " << bytes << " bytes\n";
  }
  return os.str();
}

}  // namespace sparsewarn
